"""Exact rational linear programming.

Dense two-phase tableau simplex; pivoting is Dantzig's rule with a Bland
fallback on degenerate steps, or pure Bland on request.  Arithmetic inside the
tableau uses ``gmpy2.mpq``; everything crossing the module boundary is a
``fractions.Fraction``.

Dual sign convention (row duals ``y``):

* maximize: ``<=`` rows have y >= 0, ``>=`` rows y <= 0, ``=`` rows free,
  and c - A^T y <= 0;
* minimize: ``>=`` rows have y >= 0, ``<=`` rows y <= 0, ``=`` rows free,
  and c - A^T y >= 0;

with c.x = b.y + lb.(c - A^T y) at an optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .algebra import Q, format_rational, parse_rational

LE, GE, EQ = "<=", ">=", "="
MAXIMIZE, MINIMIZE = "max", "min"
OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


class MalformedModel(ValueError):
    pass


@dataclass
class LpModel:
    sense: str
    objective: list[Fraction]
    rows: list[tuple[list[Fraction], str, Fraction]] = field(default_factory=list)
    lower: list[Fraction] | None = None

    def __post_init__(self):
        self.objective = [Q(c) for c in self.objective]
        self.rows = [([Q(a) for a in coeffs], rel, Q(rhs)) for coeffs, rel, rhs in self.rows]
        if self.lower is not None:
            self.lower = [Q(v) for v in self.lower]

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def add_row(self, coeffs, rel: str, rhs) -> None:
        self.rows.append(([Q(a) for a in coeffs], rel, Q(rhs)))

    def lower_bounds(self) -> list[Fraction]:
        return self.lower if self.lower is not None else [Fraction(0)] * self.num_vars

    def validate(self) -> None:
        if self.sense not in (MAXIMIZE, MINIMIZE):
            raise MalformedModel(f"unknown sense {self.sense!r}")
        n = self.num_vars
        for i, (coeffs, rel, _) in enumerate(self.rows):
            if len(coeffs) != n:
                raise MalformedModel(f"row {i} has width {len(coeffs)}, expected {n}")
            if rel not in (LE, GE, EQ):
                raise MalformedModel(f"row {i} has unknown relation {rel!r}")
        if self.lower is not None and len(self.lower) != n:
            raise MalformedModel("lower bounds have the wrong length")


@dataclass
class LpSolution:
    status: str
    value: Fraction | None = None
    primal: list[Fraction] = field(default_factory=list)
    dual: list[Fraction] = field(default_factory=list)
    pivots: int = 0
    transposed: bool = False


# ---------------------------------------------------------------------------
# tableau core: maximize c.x subject to rows, x >= 0
# ---------------------------------------------------------------------------


def _standard(A, rels, b, c, rule="dantzig"):
    """Returns (status, value, x, y, pivots) as mpq values.

    ``rule="bland"`` pivots by Bland's rule throughout.  ``rule="dantzig"``
    picks the most negative reduced cost (lowest index on ties) but falls
    back to Bland's rule after a degenerate pivot, until the objective
    strictly improves again; that keeps the anti-cycling guarantee."""
    m, n = len(A), len(c)
    flip = [False] * m
    rows, rr = [], []
    for i in range(m):
        a, rel, rhs = [mpq(v) for v in A[i]], rels[i], mpq(b[i])
        if rhs < 0:
            a, rhs, flip[i] = [-v for v in a], -rhs, True
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append(a)
        rr.append((rel, rhs))

    n_slack = sum(1 for rel, _ in rr if rel != EQ)
    n_art = sum(1 for rel, _ in rr if rel != LE)
    width = n + n_slack + n_art
    art_start = n + n_slack
    T = []
    basis = []
    idcol = []
    s, a_ = n, art_start
    for i in range(m):
        rel, rhs = rr[i]
        row = rows[i] + [mpq(0)] * (n_slack + n_art) + [rhs]
        if rel == LE:
            row[s] = mpq(1)
            basis.append(s)
            idcol.append(s)
            s += 1
        else:
            if rel == GE:
                row[s] = mpq(-1)
                s += 1
            row[a_] = mpq(1)
            basis.append(a_)
            idcol.append(a_)
            a_ += 1
        T.append(row)

    pivots = 0

    def objective_row(cost):
        # z_j - c_j for all columns, with the basic cost vector
        z = [-cost[j] for j in range(width)] + [mpq(0)]
        for k in range(len(T)):
            cb = cost[basis[k]]
            if cb:
                row = T[k]
                z = [zj + cb * t for zj, t in zip(z, row)]
        return z

    def pivot(r, col, z):
        nonlocal pivots
        pivots += 1
        prow = T[r]
        pv = prow[col]
        if pv != 1:
            prow = [v / pv for v in prow]
            T[r] = prow
        for k in range(len(T)):
            if k != r:
                f = T[k][col]
                if f:
                    T[k] = [u - f * v for u, v in zip(T[k], prow)]
        f = z[col]
        if f:
            z[:] = [u - f * v for u, v in zip(z, prow)]
        basis[r] = col

    def run(z, allowed):
        bland = rule == "bland"
        while True:
            if bland:
                col = next((j for j in range(width) if allowed[j] and z[j] < 0), None)
            else:
                col, zmin = None, 0
                for j in range(width):
                    if allowed[j] and z[j] < zmin:
                        col, zmin = j, z[j]
            if col is None:
                return OPTIMAL
            best = None
            for k in range(len(T)):
                t = T[k][col]
                if t > 0:
                    ratio = T[k][-1] / t
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[k] < basis[best[1]]):
                        best = (ratio, k)
            if best is None:
                return UNBOUNDED
            pivot(best[1], col, z)
            if rule != "bland":
                bland = best[0] == 0

    if n_art:
        cost1 = [mpq(0)] * art_start + [mpq(-1)] * n_art
        z = objective_row(cost1)
        run(z, [True] * width)
        if z[-1] < 0:
            return INFEASIBLE, None, None, None, pivots
        # drive zero-level artificials out of the basis; drop redundant rows
        k = 0
        while k < len(T):
            if basis[k] >= art_start:
                col = next((j for j in range(art_start) if T[k][j] != 0), None)
                if col is None:
                    del T[k]
                    del basis[k]
                    continue
                pivot(k, col, z)
            k += 1

    cost = [mpq(v) for v in c] + [mpq(0)] * (n_slack + n_art)
    z = objective_row(cost)
    allowed = [j < art_start for j in range(width)]
    status = run(z, allowed)
    if status != OPTIMAL:
        return status, None, None, None, pivots

    x = [mpq(0)] * n
    for k, j in enumerate(basis):
        if j < n:
            x[j] = T[k][-1]
    y = [z[idcol[i]] for i in range(m)]
    y = [-v if flip[i] else v for i, v in enumerate(y)]
    return OPTIMAL, z[-1], x, y, pivots


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def solve(model: LpModel, transpose: str | bool = "auto", rule: str = "dantzig") -> LpSolution:
    """Exact optimum with primal and row duals.

    ``transpose="auto"`` solves the dual program internally when the model
    has many more rows than columns and no equality rows."""
    model.validate()
    n = model.num_vars
    lb = model.lower_bounds()
    sign = 1 if model.sense == MAXIMIZE else -1
    c = [sign * v for v in model.objective]
    A = [coeffs for coeffs, _, _ in model.rows]
    rels = [rel for _, rel, _ in model.rows]
    b = [rhs - sum(a * l for a, l in zip(coeffs, lb) if l) for coeffs, _, rhs in model.rows]

    use_t = transpose
    if transpose == "auto":
        use_t = len(A) > 2 * n and EQ not in rels
    if use_t and EQ in rels:
        raise MalformedModel("transposed solve needs inequality rows only")

    if use_t:
        status, val, x, y, piv = _transposed(A, rels, b, c, rule)
    else:
        status, val, x, y, piv = _standard(A, rels, b, c, rule)
    if status != OPTIMAL:
        return LpSolution(status, pivots=piv, transposed=bool(use_t))

    primal = [_frac(v) + l for v, l in zip(x, lb)]
    dual = [sign * _frac(v) for v in y]
    value = sum((cj * xj for cj, xj in zip(model.objective, primal)), Fraction(0))
    return LpSolution(OPTIMAL, value, primal, dual, pivots=piv, transposed=bool(use_t))


def _transposed(A, rels, b, c, rule):
    # max c.x, rows (all <= after negating >= rows), x >= 0.
    # Its dual  min b.y, A^T y >= c, y >= 0  is solved as  max -b.y.
    m, n = len(A), len(c)
    neg = [rel == GE for rel in rels]
    An = [[-v for v in row] if neg[i] else list(row) for i, row in enumerate(A)]
    bn = [-v if neg[i] else v for i, v in enumerate(b)]
    At = [[An[i][j] for i in range(m)] for j in range(n)]
    status, val, y, w, piv = _standard(At, [GE] * n, c, [-v for v in bn], rule)
    if status == UNBOUNDED:
        return INFEASIBLE, None, None, None, piv
    if status == INFEASIBLE:
        # primal is unbounded or infeasible; settle it with a phase-1 solve
        st, *_ = _standard(A, rels, b, [0] * n, rule)
        return (UNBOUNDED if st == OPTIMAL else INFEASIBLE), None, None, None, piv
    x = [-v for v in w]
    yy = [-v if neg[i] else v for i, v in enumerate(y)]
    return OPTIMAL, -val, x, yy, piv


# ---------------------------------------------------------------------------
# certificate check, independent of the tableau
# ---------------------------------------------------------------------------


def check_certificate(model: LpModel, sol: LpSolution) -> bool:
    """Re-verify primal feasibility, dual feasibility and c.x = b.y + lb.r exactly."""
    if sol.status != OPTIMAL:
        return False
    n, m = model.num_vars, len(model.rows)
    x, y = sol.primal, sol.dual
    if len(x) != n or len(y) != m:
        return False
    lb = model.lower_bounds()
    if any(xi < li for xi, li in zip(x, lb)):
        return False
    for coeffs, rel, rhs in model.rows:
        lhs = sum(a * v for a, v in zip(coeffs, x) if a)
        if (rel == LE and lhs > rhs) or (rel == GE and lhs < rhs) or (rel == EQ and lhs != rhs):
            return False
    mx = model.sense == MAXIMIZE
    for (coeffs, rel, _), yi in zip(model.rows, y):
        if rel == LE and (yi < 0 if mx else yi > 0):
            return False
        if rel == GE and (yi > 0 if mx else yi < 0):
            return False
    red = list(model.objective)
    for (coeffs, _, _), yi in zip(model.rows, y):
        if yi:
            for j, a in enumerate(coeffs):
                if a:
                    red[j] -= a * yi
    if any((r > 0) if mx else (r < 0) for r in red):
        return False
    primal_val = sum((cj * xj for cj, xj in zip(model.objective, x)), Fraction(0))
    dual_val = sum((rhs * yi for (_, _, rhs), yi in zip(model.rows, y)), Fraction(0))
    dual_val += sum((l * r for l, r in zip(lb, red)), Fraction(0))
    return primal_val == dual_val and (sol.value is None or sol.value == primal_val)


# ---------------------------------------------------------------------------
# TSV import/export
# ---------------------------------------------------------------------------


def model_to_tsv(model: LpModel) -> str:
    n = model.num_vars
    lines = ["\t".join(["kind", "rel", "rhs"] + [f"x{j}" for j in range(n)])]
    lines.append("\t".join(["objective", model.sense, "0"] + [format_rational(v) for v in model.objective]))
    lines.append("\t".join(["lower", "", ""] + [format_rational(v) for v in model.lower_bounds()]))
    for coeffs, rel, rhs in model.rows:
        lines.append("\t".join(["row", rel, format_rational(rhs)] + [format_rational(v) for v in coeffs]))
    return "\n".join(lines) + "\n"


def model_from_tsv(text: str) -> LpModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split("\t")
    if header[:3] != ["kind", "rel", "rhs"]:
        raise MalformedModel("bad model header")
    sense, objective, lower, rows = None, None, None, []
    for ln in lines[1:]:
        parts = ln.split("\t")
        kind, rel, rhs, vals = parts[0], parts[1], parts[2], [parse_rational(v) for v in parts[3:]]
        if kind == "objective":
            sense, objective = rel, vals
        elif kind == "lower":
            lower = vals
        elif kind == "row":
            rows.append((vals, rel, parse_rational(rhs)))
        else:
            raise MalformedModel(f"unknown line kind {kind!r}")
    if objective is None:
        raise MalformedModel("missing objective line")
    model = LpModel(sense, objective, rows, lower)
    model.validate()
    return model


def solution_to_tsv(sol: LpSolution) -> str:
    lines = ["kind\tindex\tvalue", f"status\t\t{sol.status}"]
    if sol.value is not None:
        lines.append(f"value\t\t{format_rational(sol.value)}")
    lines += [f"primal\t{j}\t{format_rational(v)}" for j, v in enumerate(sol.primal)]
    lines += [f"dual\t{i}\t{format_rational(v)}" for i, v in enumerate(sol.dual)]
    return "\n".join(lines) + "\n"


def solution_from_tsv(text: str) -> LpSolution:
    sol = LpSolution(status="")
    for ln in text.splitlines()[1:]:
        if not ln.strip():
            continue
        kind, idx, val = ln.split("\t")
        if kind == "status":
            sol.status = val
        elif kind == "value":
            sol.value = parse_rational(val)
        elif kind == "primal":
            sol.primal.append(parse_rational(val))
        elif kind == "dual":
            sol.dual.append(parse_rational(val))
    return sol
