"""Independent reference implementations used by several test modules."""

from fractions import Fraction
from itertools import combinations

from ntil_checkerboard.grid import ParityClass, class_points, collinear
from ntil_checkerboard.lp import EQ, GE, INFEASIBLE, LE, MAXIMIZE, OPTIMAL, UNBOUNDED, LpModel


def naive_max_ntil(n, eps):
    """Plain backtracking over class points with an all-pairs triple check."""
    pts = class_points(ParityClass(n, eps))
    best = 0

    def rec(i, chosen):
        nonlocal best
        best = max(best, len(chosen))
        if len(chosen) + len(pts) - i <= best:
            return
        for j in range(i, len(pts)):
            q = pts[j]
            if all(not collinear(a, b, q) for a, b in combinations(chosen, 2)):
                rec(j + 1, chosen + [q])

    rec(0, [])
    return best


def _solve_square(M, r):
    """Gauss-Jordan over Fractions; None when singular."""
    n = len(M)
    A = [list(row) + [v] for row, v in zip(M, r)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col] / A[col][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def _vertex_opt(model, box):
    n = model.num_vars
    cons = [(list(co), rel, rhs) for co, rel, rhs in model.rows]
    for j, l in enumerate(model.lower_bounds()):
        e = [Fraction(int(k == j)) for k in range(n)]
        cons.append((e, GE, l))
        cons.append((e, LE, Fraction(box)))
    sign = 1 if model.sense == MAXIMIZE else -1
    best = None
    for idx in combinations(range(len(cons)), n):
        x = _solve_square([cons[i][0] for i in idx], [cons[i][2] for i in idx])
        if x is None:
            continue
        ok = True
        for co, rel, rhs in cons:
            lhs = sum(a * v for a, v in zip(co, x))
            if (rel == LE and lhs > rhs) or (rel == GE and lhs < rhs) or (rel == EQ and lhs != rhs):
                ok = False
                break
        if ok:
            val = sum(c * v for c, v in zip(model.objective, x))
            if best is None or sign * val > sign * best:
                best = val
    return best


def vertex_oracle(model):
    """(status, value) by brute-force vertex enumeration inside a box.

    The box is far outside every vertex of the small test models, so the
    optimum moves with the box exactly when the true LP is unbounded."""
    v1, v2 = _vertex_opt(model, 10**4), _vertex_opt(model, 2 * 10**4)
    if v1 is None:
        return INFEASIBLE, None
    if v1 != v2:
        return UNBOUNDED, None
    return OPTIMAL, v1


def random_lp(rng):
    n = rng.randint(1, 3)
    rows = [([rng.randint(-4, 5) for _ in range(n)], rng.choice([LE, LE, GE, EQ]), rng.randint(-3, 10))
            for _ in range(rng.randint(1, 4))]
    lower = None if rng.random() < 0.5 else [rng.randint(-2, 2) for _ in range(n)]
    return LpModel(rng.choice(["max", "min"]), [rng.randint(-4, 5) for _ in range(n)], rows, lower)
