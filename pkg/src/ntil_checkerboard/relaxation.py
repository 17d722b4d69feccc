"""Four-direction LP relaxation, its three symmetry-reduced duals, and the
second-difference diagnostics on reduced optimal profiles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .grid import (
    COLUMN, DIAG_MINUS, DIAG_PLUS, FAMILIES, ROW, LineId, ParityClass, class_points, family_lines, lines_through,
)
from .lp import GE, LE, MAXIMIZE, MINIMIZE, OPTIMAL, LpModel, LpSolution, solve

ODD_FAT, ODD_THIN, EVEN = "oddFat", "oddThin", "even"
CASE_ALIASES = {"fat": ODD_FAT, "thin": ODD_THIN, "even": EVEN, ODD_FAT: ODD_FAT, ODD_THIN: ODD_THIN}


# ---------------------------------------------------------------------------
# full four-direction model
# ---------------------------------------------------------------------------


def four_direction_lines(n: int, eps: int) -> list[LineId]:
    """Lines meeting C_eps, in model row order: rows, columns, diag+, diag-."""
    pts = set(class_points(ParityClass(n, eps)))
    out = []
    for fam in FAMILIES:
        for line in family_lines(fam, n):
            if any(line.contains(p) for p in pts):
                out.append(line)
    return out


def build_four_direction(n: int, eps: int) -> LpModel:
    if n < 2:
        raise ValueError("n must be at least 2")
    pts = class_points(ParityClass(n, eps))
    model = LpModel(MAXIMIZE, [1] * len(pts))
    for line in four_direction_lines(n, eps):
        model.add_row([1 if line.contains(p) else 0 for p in pts], LE, 2)
    return model


def solve_four_direction(n: int, eps: int) -> tuple[LpSolution, dict[LineId, Fraction]]:
    """Optimum of the four-direction LP and the optimal dual line weights."""
    sol = solve(build_four_direction(n, eps))
    weights = dict(zip(four_direction_lines(n, eps), sol.dual)) if sol.status == OPTIMAL else {}
    return sol, weights


def dual_cover_check(n: int, eps: int, weights: Mapping[LineId, Fraction]) -> bool:
    """Nonnegative weights covering every point of C_eps with total >= 1."""
    if any(w < 0 for w in weights.values()):
        return False
    for p in class_points(ParityClass(n, eps)):
        if sum(weights.get(line, 0) for line in lines_through(p)) < 1:
            return False
    return True


def cover_value(weights: Mapping[LineId, Fraction]) -> Fraction:
    """Upper bound 2 * (sum of weights) certified by a dual cover."""
    return 2 * sum(weights.values(), Fraction(0))


def trivial_cover(n: int) -> dict[LineId, Fraction]:
    half = Fraction(1, 2)
    return {line: half for fam in (ROW, COLUMN) for line in family_lines(fam, n)}


# ---------------------------------------------------------------------------
# symmetry-reduced duals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducedDualCase:
    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in (ODD_FAT, ODD_THIN, EVEN):
            raise ValueError(f"unknown case {self.kind!r}")
        if self.m < 1:
            raise ValueError("m must be positive")

    @property
    def n(self) -> int:
        return 2 * self.m if self.kind == EVEN else 2 * self.m + 1

    @property
    def eps(self) -> int:
        return 1 if self.kind == ODD_THIN else 0

    @property
    def lengths(self) -> tuple[int, int, int]:
        m = self.m
        return {ODD_FAT: (m + 1, m + 1, 0), ODD_THIN: (m, m + 1, 0), EVEN: (m, m, m)}[self.kind]

    def objective(self) -> list[int]:
        la, lb, lc = self.lengths
        m = self.m
        if self.kind == ODD_FAT:
            return [8] * m + [4] + [8] * m + [4]
        if self.kind == ODD_THIN:
            return [8] * m + [8] * m + [4]
        return [8] * m + [4] * m + [2] + [4] * (m - 1)

    def pairs(self) -> list[tuple[int, int]]:
        m = self.m
        if self.kind == ODD_FAT:
            return [(u, v) for u in range(m + 1) for v in range(u + 1) if u + v <= m]
        if self.kind == ODD_THIN:
            return [(u, v) for u in range(m) for v in range(u + 1) if u + v <= m - 1]
        return [(u, v) for u in range(m) for v in range(u + 1)]

    def cover_indices(self, u: int, v: int) -> list[int]:
        """Variable indices whose sum must be >= 1 at the lattice pair (u, v)."""
        m = self.m
        la, lb, _ = self.lengths
        if self.kind == ODD_FAT:
            return [u, m - v, la + u + v, la + u - v]
        if self.kind == ODD_THIN:
            return [u, m - v - 1, la + u + v + 1, la + u - v]
        return [u - v, min(u + v, 2 * m - 1 - u - v), la + u, la + lb + v]


@dataclass
class ProfileSolution:
    case: ReducedDualCase
    a: list[Fraction]
    b: list[Fraction]
    c: list[Fraction]
    value: Fraction
    lp: LpSolution | None = field(default=None, repr=False)


def build_reduced(case: ReducedDualCase) -> LpModel:
    obj = case.objective()
    model = LpModel(MINIMIZE, obj)
    for u, v in case.pairs():
        row = [0] * len(obj)
        for k in case.cover_indices(u, v):
            row[k] += 1
        model.add_row(row, GE, 1)
    return model


def reduced_objective(case: ReducedDualCase, a, b, c=()) -> Fraction:
    return sum((w * x for w, x in zip(case.objective(), list(a) + list(b) + list(c))), Fraction(0))


def solve_reduced(case: ReducedDualCase) -> ProfileSolution:
    sol = solve(build_reduced(case))
    if sol.status != OPTIMAL:
        raise RuntimeError(f"reduced LP {case} is {sol.status}")
    la, lb, lc = case.lengths
    x = sol.primal
    return ProfileSolution(case, x[:la], x[la:la + lb], x[la + lb:], sol.value, sol)


def _reflect(line: LineId, n: int) -> LineId:
    """Image of a line under x -> n-1-x."""
    fam, k = line.family, line.offset
    if fam == ROW:
        return line
    if fam == COLUMN:
        return LineId(COLUMN, n - 1 - k)
    if fam == DIAG_PLUS:
        return LineId(DIAG_MINUS, n - 1 - k)
    return LineId(DIAG_PLUS, n - 1 - k)


def unfold(sol: ProfileSolution, eps: int | None = None) -> dict[LineId, Fraction]:
    """Line weights for the full dual: every line gets its orbit's profile value.

    For even n both classes share one reduced case; ``eps=1`` pulls the
    eps=0 weights back through the reflection x -> n-1-x, which swaps the
    two classes."""
    case = sol.case
    n, m = case.n, case.m
    if eps is None or eps == case.eps:
        eps = case.eps
    elif case.kind == EVEN:
        w0 = unfold(sol)
        return {line: w0[_reflect(line, n)] for line in four_direction_lines(n, eps)}
    else:
        raise ValueError(f"{case.kind} case only covers eps={case.eps}")
    w: dict[LineId, Fraction] = {}
    for line in four_direction_lines(n, eps):
        fam, k = line.family, line.offset
        if case.kind == EVEN:
            if fam in (ROW, COLUMN):
                val = sol.a[min(k, n - 1 - k)]
            elif fam == DIAG_MINUS:
                u = k // 2
                val = sol.b[min(u, 2 * m - 1 - u)]
            else:
                val = sol.c[abs(k) // 2]
        else:
            if fam in (ROW, COLUMN):
                val = sol.b[min(k, n - 1 - k)]
            elif case.kind == ODD_FAT:
                val = sol.a[min(k, 4 * m - k) // 2] if fam == DIAG_MINUS else sol.a[m - abs(k) // 2]
            else:
                val = sol.a[(min(k, 4 * m - k) - 1) // 2] if fam == DIAG_MINUS else sol.a[m - 1 - (abs(k) - 1) // 2]
        w[line] = val
    return w


def case_for(n: int, eps: int) -> ReducedDualCase:
    """Reduced case whose optimum equals the full LP optimum at (n, eps)."""
    if n % 2:
        return ReducedDualCase(ODD_FAT if eps == 0 else ODD_THIN, n // 2)
    return ReducedDualCase(EVEN, n // 2)


def ratio_report(case: ReducedDualCase) -> Fraction:
    """Reduced optimum divided by the side length n."""
    return solve_reduced(case).value / case.n


# ---------------------------------------------------------------------------
# curvature diagnostics
# ---------------------------------------------------------------------------


def second_differences(xs, lo: int, hi: int) -> list[Fraction]:
    """x[i+1] - 2 x[i] + x[i-1] for the interior indices lo < i < hi."""
    return [xs[i + 1] - 2 * xs[i] + xs[i - 1] for i in range(lo + 1, hi)]


@dataclass
class CurvatureReport:
    a_scaled: Fraction
    b_scaled: Fraction
    ratio: Fraction | None  # None when the b average vanishes


def curvature_diagnostic(sol: ProfileSolution, a_window: tuple[int, int], b_window: tuple[int, int]) -> CurvatureReport:
    """m^2-scaled average second differences over the two index windows.

    A window (lo, hi) covers the profile points lo..hi inclusive; the
    second differences are taken at its interior points."""
    m = sol.case.m
    out = []
    for xs, (lo, hi) in ((sol.a, a_window), (sol.b, b_window)):
        if hi - lo < 2:
            raise ValueError(f"window {lo}..{hi} has fewer than 3 points")
        if lo < 0 or hi >= len(xs):
            raise ValueError(f"window {lo}..{hi} outside profile range 0..{len(xs) - 1}")
        d2 = second_differences(xs, lo, hi)
        out.append(m * m * sum(d2, Fraction(0)) / len(d2))
    ratio = None if out[1] == 0 else out[0] / out[1]
    return CurvatureReport(out[0], out[1], ratio)
