"""Exact maximum no-three-in-line subsets of one parity class.

Depth-first branch and bound over rows (0, 1 or 2 points per row).  Point
sets are Python ints used as bitsets over the class points in row-major
order.  The bound is the minimum over the four line families of
sum_L min(2, |L cap (chosen | still-available)|).
"""

from __future__ import annotations

import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .grid import GridPoint, ParityClass, class_points, collinear, colour_preserving_symmetries, line_through


@dataclass
class NtilWitness:
    n: int
    eps: int
    points: list[GridPoint]
    exact: bool = True
    nodes: int = 0
    seconds: float = 0.0

    @property
    def size(self) -> int:
        return len(self.points)


def verify_ntil(w: NtilWitness) -> bool:
    """Direct O(|S|^3) check: class membership and no collinear triple of any slope."""
    pc = ParityClass(w.n, w.eps)
    pts = [tuple(p) for p in w.points]
    if len(set(pts)) != len(pts):
        return False
    if any(p not in pc for p in pts):
        return False
    return not any(collinear(a, b, c) for a, b, c in combinations(pts, 3))


class _Problem:
    """Precomputed bitmask tables for one (n, eps)."""

    def __init__(self, n: int, eps: int, symmetry_breaking: bool = False):
        self.n, self.eps = n, eps
        self.pts = class_points(ParityClass(n, eps))
        index = {p: i for i, p in enumerate(self.pts)}
        N = len(self.pts)

        lines: dict[tuple[int, int, int], int] = {}
        for i in range(N):
            for j in range(i + 1, N):
                key = line_through(self.pts[i], self.pts[j])
                lines[key] = lines.get(key, 0) | (1 << i) | (1 << j)
        # pair_block[i][j]: other points on the line through i and j
        self.pair_block = [[0] * N for _ in range(N)]
        for i in range(N):
            for j in range(i + 1, N):
                m = lines[line_through(self.pts[i], self.pts[j])] & ~((1 << i) | (1 << j))
                self.pair_block[i][j] = self.pair_block[j][i] = m

        def masks(keyf):
            groups: dict[int, int] = {}
            for i, p in enumerate(self.pts):
                k = keyf(p)
                groups[k] = groups.get(k, 0) | (1 << i)
            return [groups[k] for k in sorted(groups)]

        self.row_masks = [0] * n
        for i, (x, y) in enumerate(self.pts):
            self.row_masks[y] |= 1 << i
        self.families = [
            masks(lambda p: p.x),
            masks(lambda p: p.x - p.y),
            masks(lambda p: p.x + p.y),
        ]
        # suffix[r]: all points in rows >= r
        self.suffix = [0] * (n + 1)
        for r in range(n - 1, -1, -1):
            self.suffix[r] = self.suffix[r + 1] | self.row_masks[r]

        # allowed[i]: points admissible once i is the first chosen point
        self.allowed = None
        if symmetry_breaking:
            group = colour_preserving_symmetries(n, eps)
            rank = [min(index[GridPoint(*g(*p))] for g in group) for p in self.pts]
            self.allowed = [sum(1 << j for j in range(N) if rank[j] >= i) for i in range(N)]

    def bits(self, mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out


class _Timeout(Exception):
    pass


def _dfs(prob: _Problem, start_row: int, chosen: list[int], forbidden: int, best_ref, deadline):
    """Exhaust the subtree below (start_row, chosen, forbidden).

    ``best_ref`` is a mutable object with ``get()``/``offer(size, pts)``."""
    n = prob.n
    row_masks, suffix, families = prob.row_masks, prob.suffix, prob.families
    pair_block = prob.pair_block
    allowed = prob.allowed
    nodes = 0

    def add_point(k, chosen, forbidden):
        for c in chosen:
            forbidden |= pair_block[k][c]
        return forbidden

    def rec(r, chosen, cmask, forbidden):
        nonlocal nodes
        nodes += 1
        if deadline is not None and (nodes & 1023) == 0 and time.monotonic() > deadline:
            raise _Timeout
        size = len(chosen)
        best = best_ref.get()
        if r == n:
            if size > best:
                best_ref.offer(size, list(chosen))
            return
        avail = suffix[r] & ~forbidden
        if allowed is not None and chosen:
            avail &= allowed[chosen[0]]
        # row bound first (cheap), then the other families
        bound = size
        for rr in range(r, n):
            k = (avail & row_masks[rr]).bit_count()
            bound += 2 if k >= 2 else k
        if bound <= best:
            return
        s = cmask | avail
        for fam in families:
            b = 0
            for L in fam:
                k = (s & L).bit_count()
                b += 2 if k >= 2 else k
            if b <= best:
                return
        row = avail & row_masks[r]
        cand = prob.bits(row)
        # two points, then one, then none
        for ai, a in enumerate(cand):
            fa = add_point(a, chosen, forbidden)
            ca = chosen + [a]
            ma = cmask | (1 << a)
            rest = row & ~fa
            if allowed is not None:
                rest &= allowed[ca[0]]
            for b in cand[ai + 1:]:
                if rest >> b & 1:
                    fb = add_point(b, ca, fa)
                    rec(r + 1, ca + [b], ma | (1 << b), fb)
        for a in cand:
            rec(r + 1, chosen + [a], cmask | (1 << a), add_point(a, chosen, forbidden))
        rec(r + 1, chosen, cmask, forbidden)

    cmask = 0
    for c in chosen:
        cmask |= 1 << c
    try:
        rec(start_row, list(chosen), cmask, forbidden)
    finally:
        best_ref.nodes += nodes


class _LocalBest:
    def __init__(self, size=-1, pts=None):
        self.size = size
        self.pts = pts
        self.nodes = 0

    def get(self):
        return self.size

    def offer(self, size, pts):
        if size > self.size:
            self.size, self.pts = size, pts


# --- multiprocessing support: the shared best size is a monotone maximum ---
_shared = None


def _init_worker(shared_value):
    global _shared
    _shared = shared_value


class _SharedBest(_LocalBest):
    def get(self):
        return max(self.size, _shared.value)

    def offer(self, size, pts):
        super().offer(size, pts)
        with _shared.get_lock():
            if size > _shared.value:
                _shared.value = size


def _worker(args):
    n, eps, symmetry_breaking, chosen, forbidden, deadline_left = args
    prob = _Problem(n, eps, symmetry_breaking)
    ref = _SharedBest()
    deadline = None if deadline_left is None else time.monotonic() + deadline_left
    timed_out = False
    try:
        _dfs(prob, 1, chosen, forbidden, ref, deadline)
    except _Timeout:
        timed_out = True
    return ref.size, ref.pts, timed_out, ref.nodes


def max_ntil(
    n: int,
    eps: int,
    time_budget: float | None = None,
    symmetry_breaking: bool = False,
    workers: int = 1,
) -> NtilWitness:
    """Maximum NTIL subset of the parity class C_eps of the n x n grid.

    If ``time_budget`` (seconds) runs out, the best set found so far is
    returned with ``exact=False``: its size is then only a lower bound."""
    if n < 2:
        raise ValueError("max_ntil needs n >= 2")
    t0 = time.monotonic()
    deadline = None if time_budget is None else t0 + time_budget
    prob = _Problem(n, eps, symmetry_breaking)
    exact = True

    if workers <= 1:
        ref = _LocalBest()
        try:
            _dfs(prob, 0, [], 0, ref, deadline)
        except _Timeout:
            exact = False
        best_pts, nodes = ref.pts or [], ref.nodes
    else:
        best_pts, nodes, exact = _parallel(prob, n, eps, symmetry_breaking, workers, deadline)

    pts = sorted((prob.pts[i] for i in best_pts), key=lambda p: (p.y, p.x))
    return NtilWitness(n, eps, pts, exact=exact, nodes=nodes, seconds=time.monotonic() - t0)


def _first_row_tasks(prob: _Problem):
    row = prob.bits(prob.row_masks[0])
    tasks = [[a, b] for a, b in combinations(row, 2)]
    tasks += [[a] for a in row] + [[]]
    out = []
    for chosen in tasks:
        f = 0
        for i, a in enumerate(chosen):
            for c in chosen[:i]:
                f |= prob.pair_block[a][c]
        if prob.allowed is not None and chosen and any(not (prob.allowed[chosen[0]] >> c & 1) for c in chosen):
            continue
        out.append((chosen, f))
    return out


def _parallel(prob, n, eps, symmetry_breaking, workers, deadline):
    shared = mp.Value("i", -1)
    tasks = _first_row_tasks(prob)
    best_size, best_pts, exact, nodes = -1, [], True, 0
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(shared,)) as ex:
        args = [
            (n, eps, symmetry_breaking, chosen, f,
             None if deadline is None else max(0.0, deadline - time.monotonic()))
            for chosen, f in tasks
        ]
        for size, pts, timed_out, k in ex.map(_worker, args):
            nodes += k
            exact &= not timed_out
            if pts is not None and size > best_size:
                best_size, best_pts = size, pts
    return best_pts, nodes, exact
