"""The odd-fat continuum dual certificate over Q(p).

Pipeline: constants -> piecewise functions A, B -> endpoint/shape sign
checks -> exact subdivision of 0 <= v <= u <= 1 -> fan triangulation ->
degree-2 Bernstein coefficients of the obstacle slack on every triangle ->
objective value alpha (two independent routes) -> derivation audit.

Coordinates: u = x + y, v = x - y, so the slack reads
G(u, v) = A((u+v)/2) + A((2-u+v)/2) + B(u) + B(v) - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import (
    NEGATIVE, POSITIVE, ZERO, CubicField, FieldElem, RatPoly, RootInterval, char_poly, field_sign,
    isolate_real_roots, make_p_field, root_bound, sturm_count,
)

SIGN_CHAR = {POSITIVE: "+", NEGATIVE: "-", ZERO: "0"}
IJK = ("200", "020", "002", "110", "101", "011")
ALPHA_POLY = RatPoly.from_high([401, -1744, 2240, -768])


class CertificateError(RuntimeError):
    """A fatal stage failure; ``stage`` names the pipeline step."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


CONSTANT_NAMES = (
    "p", "c", "d", "e", "f", "g", "K", "r", "s", "ell", "q", "n1", "nu", "n2", "calC", "calD", "calE", "calH",
)


@dataclass
class CertificateConstants:
    field: CubicField
    p_interval: RootInterval
    p: FieldElem
    c: FieldElem
    d: FieldElem
    e: FieldElem
    f: FieldElem
    g: FieldElem
    K: FieldElem
    r: FieldElem
    s: FieldElem
    ell: FieldElem
    q: FieldElem
    n1: FieldElem
    nu: FieldElem
    n2: FieldElem
    calC: FieldElem
    calD: FieldElem
    calE: FieldElem
    calH: FieldElem

    def items(self):
        return [(name, getattr(self, name)) for name in CONSTANT_NAMES]


def derived_coefficients(K, r, p, c, d, e, f, g) -> dict[str, FieldElem]:
    """s, ell, q, n1, nu, n2 from K and r."""
    return dict(
        s=-K / 2 * g * g - r * g,
        ell=-(K / 2 * (e + f) + r),
        q=-K / 2 * e * f - K / 2 * g * g - r * g,
        n1=K * p * p + 2 * r * p,
        nu=(-2 * K * c * c + K * c * e + K * c * f + 2 * K * p * p - 2 * c * r + 4 * p * r) / 2,
        n2=(
            -2 * K * c * c + K * c * e + K * c * f + 2 * K * d * d - K * d * e - K * d * f - 4 * K * d
            + 2 * K * p * p - 2 * c * r - 2 * d * r + 4 * p * r
        ) / 2,
    )


def compute_constants(field: CubicField | None = None, flip_r: bool = False) -> CertificateConstants:
    """All certificate constants as exact elements of Q(p).

    ``flip_r`` negates r before the dependent coefficients are formed (fault
    injection for mutation tests)."""
    F = field or make_p_field()
    p = F.gen
    c = (187 * p**3 - 211 * p**2 + 61 * p - 5) / (2 * (71 * p**2 - 66 * p + 11))
    d = 1 + p - c
    e = (2 * c + 3 * p - 1) / 4
    f = (-2 * c + 5 * p + 1) / 4
    g = (1 - 3 * p + 2 * c) / 2

    calC = -c * c + c * e / 2 + c * f / 2 + d * d - d * e / 2 - d * f / 2 - 2 * d - g * g + 2 * p * p + 1
    calD = -c - d - 2 * g + 4 * p
    calE = -2 * c * c + c * e + c * f - e * f / 2 - e / 2 - f / 2 - g * g / 2 + 2 * p * p
    calH = -2 * c - g + 4 * p - 1

    det = calC * calH - calD * calE
    if det.is_zero():
        raise CertificateError("constants", "singular 2x2 system for K, r")
    K = (calH - calD) / det
    r = (calC - calE) / det
    if flip_r:
        r = -r
    coeffs = derived_coefficients(K, r, p, c, d, e, f, g)
    return CertificateConstants(F, F.interval, p, c, d, e, f, g, K, r, calC=calC, calD=calD, calE=calE, calH=calH, **coeffs)


# ---------------------------------------------------------------------------
# piecewise functions
# ---------------------------------------------------------------------------


@dataclass
class Piece:
    """k0 + k1 t + k2 t^2."""

    name: str
    k0: FieldElem
    k1: FieldElem
    k2: FieldElem

    def __call__(self, t):
        return self.k0 + self.k1 * t + self.k2 * t * t

    def integral(self, lo, hi):
        return self.k0 * (hi - lo) + self.k1 * (hi * hi - lo * lo) / 2 + self.k2 * (hi**3 - lo**3) / 3


@dataclass
class PiecewiseFunc:
    name: str
    breakpoints: list[FieldElem]  # t_0 = 0 < t_1 < ... < t_k = 1
    pieces: list[Piece]

    def piece_index(self, t) -> int:
        """Index of the piece whose open interval contains t."""
        for i in range(len(self.pieces)):
            if self.breakpoints[i] < t < self.breakpoints[i + 1]:
                return i
        raise ValueError(f"{self.name}: {t!r} is a breakpoint or outside [0, 1]")

    def __call__(self, t):
        for i, piece in enumerate(self.pieces):
            if self.breakpoints[i] <= t <= self.breakpoints[i + 1]:
                return piece(t)
        raise ValueError(f"{self.name}: argument outside [0, 1]")

    def integral(self):
        bp = self.breakpoints
        return sum((pc.integral(bp[i], bp[i + 1]) for i, pc in enumerate(self.pieces)), bp[0] * 0)

    def continuity_defects(self) -> list[tuple[FieldElem, FieldElem]]:
        """(breakpoint, jump) for every interior breakpoint with nonzero jump."""
        out = []
        for i in range(1, len(self.pieces)):
            t = self.breakpoints[i]
            jump = self.pieces[i](t) - self.pieces[i - 1](t)
            if not jump.is_zero():
                out.append((t, jump))
        return out


def build_functions(k: CertificateConstants, strict: bool = True) -> tuple[PiecewiseFunc, PiecewiseFunc]:
    F = k.field
    zero = F.zero
    K, r = k.K, k.r
    Z = Piece("0", zero, zero, zero)
    A1 = Piece("A1", k.n1, -2 * r, -K)
    AL = Piece("AL", k.nu, k.ell, zero)
    A2 = Piece("A2", k.n2, 2 * K, -K)
    BQ = Piece("BQ", k.s, r, K / 2)
    BL = Piece("BL", k.q, -k.ell, zero)
    A = PiecewiseFunc("A", [zero, k.p, k.c, k.d, F.one], [Z, A1, AL, A2])
    B = PiecewiseFunc("B", [zero, k.e, k.f, k.g, F.one], [BQ, BL, BQ, Z])
    if strict:
        for fn in (A, B):
            bad = fn.continuity_defects()
            if bad:
                raise CertificateError("functions", f"{fn.name} is discontinuous at {len(bad)} breakpoint(s)")
    return A, B


def piece(fn: PiecewiseFunc, name: str) -> Piece:
    return next(pc for pc in fn.pieces if pc.name == name)


@dataclass
class SignCheck:
    name: str
    expected: int
    computed: int

    @property
    def passed(self) -> bool:
        return self.expected == self.computed


def nonnegativity_checks(k: CertificateConstants, A: PiecewiseFunc, B: PiecewiseFunc) -> list[SignCheck]:
    """Every sign condition used by the endpoint/convexity argument for A, B >= 0."""
    A1, AL, A2 = piece(A, "A1"), piece(A, "AL"), piece(A, "A2")
    BQ, BL = piece(B, "BQ"), piece(B, "BL")
    p, c, d, e, f, g, K, r = k.p, k.c, k.d, k.e, k.f, k.g, k.K, k.r
    one = k.field.one
    checks = [
        ("p > 0", p, POSITIVE),
        ("c - p > 0", c - p, POSITIVE),
        ("d - c > 0", d - c, POSITIVE),
        ("1 - d > 0", one - d, POSITIVE),
        ("e > 0", e, POSITIVE),
        ("f - e > 0", f - e, POSITIVE),
        ("g - f > 0", g - f, POSITIVE),
        ("1 - g > 0", one - g, POSITIVE),
        ("K > 0", K, POSITIVE),
        ("r < 0", r, NEGATIVE),
        ("A1(p) = 0", A1(p), ZERO),
        ("A1(c) > 0", A1(c), POSITIVE),
        ("A1(c) - AL(c) = 0", A1(c) - AL(c), ZERO),
        ("AL(d) > 0", AL(d), POSITIVE),
        ("AL(d) - A2(d) = 0", AL(d) - A2(d), ZERO),
        ("A2(1) > 0", A2(one), POSITIVE),
        ("BQ(0) > 0", BQ(k.field.zero), POSITIVE),
        ("BQ(e) > 0", BQ(e), POSITIVE),
        ("BQ(e) - BL(e) = 0", BQ(e) - BL(e), ZERO),
        ("BL(f) > 0", BL(f), POSITIVE),
        ("BL(f) - BQ(f) = 0", BL(f) - BQ(f), ZERO),
        ("BQ(g) = 0", BQ(g), ZERO),
        ("lead(A1) = -K < 0", A1.k2, NEGATIVE),
        ("lead(A2) = -K < 0", A2.k2, NEGATIVE),
        ("lead(BQ) = K/2 > 0", BQ.k2, POSITIVE),
        ("second zero of BQ: -2r/K - g - g > 0", -2 * r / K - g - g, POSITIVE),
    ]
    return [SignCheck(name, expected, field_sign(val)) for name, val, expected in checks]


# ---------------------------------------------------------------------------
# bivariate quadratics in (u, v)
# ---------------------------------------------------------------------------


class BiQuad:
    """Polynomial sum coeffs[(i, j)] u^i v^j of total degree <= 2 over Q(p)."""

    def __init__(self, field: CubicField, coeffs: dict | None = None):
        self.field = field
        self.coeffs: dict[tuple[int, int], FieldElem] = {}
        for key, val in (coeffs or {}).items():
            self._acc(key, val)

    def _acc(self, key, val):
        cur = self.coeffs.get(key)
        new = val if cur is None else cur + val
        if new == 0:
            self.coeffs.pop(key, None)
        else:
            self.coeffs[key] = new if isinstance(new, FieldElem) else self.field(new)

    def __add__(self, other: "BiQuad") -> "BiQuad":
        out = BiQuad(self.field, self.coeffs)
        for key, val in other.coeffs.items():
            out._acc(key, val)
        return out

    def __call__(self, u, v):
        acc = self.field.zero
        for (i, j), cf in self.coeffs.items():
            acc = acc + cf * (u**i if i else 1) * (v**j if j else 1)
        return acc

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max((i + j for i, j in self.coeffs), default=-1)

    @classmethod
    def compose(cls, field: CubicField, pc: Piece, l0, lu, lv) -> "BiQuad":
        """pc(l0 + lu u + lv v)."""
        out = cls(field)
        lin = {(0, 0): l0, (1, 0): lu, (0, 1): lv}
        for key, val in lin.items():
            out._acc(key, pc.k1 * val)
        out._acc((0, 0), pc.k0)
        for k1, a in lin.items():
            for k2, b in lin.items():
                out._acc((k1[0] + k2[0], k1[1] + k2[1]), pc.k2 * a * b)
        return out


# the four arguments of the slack as affine forms (l0, lu, lv)
_HALF = Fraction(1, 2)
ARGUMENTS = (
    ("A", (0, _HALF, _HALF)),         # x = (u+v)/2
    ("A", (1, -_HALF, _HALF)),        # 1 - y = (2-u+v)/2
    ("B", (0, 1, 0)),                 # x + y = u
    ("B", (0, 0, 1)),                 # x - y = v
)


def slack_direct(A: PiecewiseFunc, B: PiecewiseFunc, u, v):
    """G(u, v) evaluated straight from the piecewise definitions."""
    out = -1
    for which, (l0, lu, lv) in ARGUMENTS:
        fn = A if which == "A" else B
        out = fn(l0 + lu * u + lv * v) + out
    return out


# ---------------------------------------------------------------------------
# subdivision and triangulation
# ---------------------------------------------------------------------------


Point = tuple[FieldElem, FieldElem]


@dataclass
class CutLine:
    """a u + b v = rhs."""

    name: str
    a: Fraction
    b: Fraction
    rhs: FieldElem

    def value(self, pt: Point) -> FieldElem:
        return self.a * pt[0] + self.b * pt[1] - self.rhs


@dataclass
class Cell:
    id: int
    vertices: list[Point]  # counterclockwise
    pieces: tuple[int, int, int, int] = ()

    def centroid(self) -> Point:
        k = len(self.vertices)
        return (sum((v[0] for v in self.vertices[1:]), self.vertices[0][0]) / k,
                sum((v[1] for v in self.vertices[1:]), self.vertices[0][1]) / k)


@dataclass
class Triangle:
    id: int
    cell_id: int
    vertices: tuple[Point, Point, Point]


def signed_area2(poly: Sequence[Point]) -> FieldElem:
    """Twice the signed (shoelace) area."""
    acc = poly[0][0] * 0
    for i in range(len(poly)):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % len(poly)]
        acc = acc + x0 * y1 - x1 * y0
    return acc


def cut_lines(k: CertificateConstants) -> list[CutLine]:
    one = k.field.one
    lines = [CutLine(f"u={n}", 1, 0, getattr(k, n)) for n in "efg"]
    lines += [CutLine(f"v={n}", 0, 1, getattr(k, n)) for n in "efg"]
    lines += [CutLine(f"u+v=2{n}", 1, 1, 2 * getattr(k, n)) for n in "pcd"]
    lines += [CutLine(f"u-v=2(1-{n})", 1, -1, 2 * (one - getattr(k, n))) for n in "dcp"]
    return lines


def _split(poly: list[Point], line: CutLine) -> list[list[Point]]:
    vals = [field_sign(line.value(pt)) for pt in poly]
    if all(s >= 0 for s in vals) or all(s <= 0 for s in vals):
        return [poly]
    sides: dict[int, list[Point]] = {1: [], -1: []}
    n = len(poly)
    for i in range(n):
        P, Q = poly[i], poly[(i + 1) % n]
        sp, sq = vals[i], vals[(i + 1) % n]
        if sp >= 0:
            sides[1].append(P)
        if sp <= 0:
            sides[-1].append(P)
        if sp * sq < 0:
            fp, fq = line.value(P), line.value(Q)
            t = fp / (fp - fq)
            X = (P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1]))
            sides[1].append(X)
            sides[-1].append(X)
    return [_dedup(sides[1]), _dedup(sides[-1])]


def _dedup(poly: list[Point]) -> list[Point]:
    out: list[Point] = []
    for pt in poly:
        if not out or out[-1] != pt:
            out.append(pt)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def subdivide(k: CertificateConstants, A: PiecewiseFunc | None = None, B: PiecewiseFunc | None = None,
              expected: int | None = 24) -> list[Cell]:
    """Exact half-plane splitting of the triangle 0 <= v <= u <= 1 by every cut line."""
    F = k.field
    polys = [[(F.zero, F.zero), (F.one, F.zero), (F.one, F.one)]]
    for line in cut_lines(k):
        nxt = []
        for poly in polys:
            for part in _split(poly, line):
                if len(part) >= 3 and field_sign(signed_area2(part)) != ZERO:
                    nxt.append(part)
        polys = nxt
    cells = [Cell(i, poly) for i, poly in enumerate(polys)]
    if A is not None and B is not None:
        for cell in cells:
            cell.pieces = active_pieces(cell, A, B)
    if expected is not None and len(cells) != expected:
        raise CertificateError("subdivision", f"{len(cells)} cells, expected {expected}")
    return cells


def active_pieces(cell: Cell, A: PiecewiseFunc, B: PiecewiseFunc) -> tuple[int, int, int, int]:
    u, v = cell.centroid()
    out = []
    for which, (l0, lu, lv) in ARGUMENTS:
        fn = A if which == "A" else B
        out.append(fn.piece_index(l0 + lu * u + lv * v))
    return tuple(out)


def _lex_less(P: Point, Q: Point) -> bool:
    return P[0] < Q[0] or (P[0] == Q[0] and P[1] < Q[1])


def triangulate(cells: Sequence[Cell], expected: int | None = 40, apex: str = "max") -> list[Triangle]:
    """Fan each cell from its lexicographically largest (``apex="max"``) or
    smallest (``"min"``) vertex, ordering by u then v.

    A k-gon always gives k - 2 triangles; the split of Bernstein coefficients
    into zero and positive does depend on the apex (102/138 for "max",
    103/137 for "min")."""
    if apex not in ("max", "min"):
        raise ValueError("apex must be 'max' or 'min'")
    tris = []
    for cell in cells:
        vs = cell.vertices
        start = 0
        for i in range(1, len(vs)):
            better = _lex_less(vs[start], vs[i]) if apex == "max" else _lex_less(vs[i], vs[start])
            if better:
                start = i
        vs = vs[start:] + vs[:start]
        for i in range(1, len(vs) - 1):
            tris.append(Triangle(len(tris), cell.id, (vs[0], vs[i], vs[i + 1])))
    if expected is not None and len(tris) != expected:
        raise CertificateError("triangulation", f"{len(tris)} triangles, expected {expected}")
    return tris


# ---------------------------------------------------------------------------
# slack polynomial and Bernstein coefficients
# ---------------------------------------------------------------------------


def slack_on_cell(cell: Cell, A: PiecewiseFunc, B: PiecewiseFunc) -> BiQuad:
    """The single quadratic equal to G on ``cell``, constant -1 included."""
    if not cell.pieces:
        raise CertificateError("slack", f"cell {cell.id} has no active pieces")
    if active_pieces(cell, A, B) != tuple(cell.pieces):
        raise CertificateError("slack", f"cell {cell.id}: inconsistent active pieces")
    F = A.breakpoints[0].field
    G = BiQuad(F, {(0, 0): F(-1)})
    for (which, (l0, lu, lv)), idx in zip(ARGUMENTS, cell.pieces):
        fn = A if which == "A" else B
        G = G + BiQuad.compose(F, fn.pieces[idx], F(l0), F(lu), F(lv))
    return G


@dataclass
class BernsteinRecord:
    triangle_id: int
    coefficients: dict[str, FieldElem]
    signs: dict[str, int]


def _mid(P: Point, Q: Point) -> Point:
    return ((P[0] + Q[0]) / 2, (P[1] + Q[1]) / 2)


def bernstein(tri: Triangle, G: Callable[[FieldElem, FieldElem], FieldElem]) -> BernsteinRecord:
    """Degree-2 Bernstein coefficients from vertex and edge-midpoint values."""
    V0, V1, V2 = tri.vertices
    g0, g1, g2 = G(*V0), G(*V1), G(*V2)
    coeffs = {
        "200": g0,
        "020": g1,
        "002": g2,
        "110": 2 * G(*_mid(V0, V1)) - (g0 + g1) / 2,
        "101": 2 * G(*_mid(V0, V2)) - (g0 + g2) / 2,
        "011": 2 * G(*_mid(V1, V2)) - (g1 + g2) / 2,
    }
    return BernsteinRecord(tri.id, coeffs, {k: field_sign(v) for k, v in coeffs.items()})


def bernstein_eval(rec: BernsteinRecord, l0, l1, l2):
    """Evaluate sum b_ijk * 2!/(i!j!k!) l0^i l1^j l2^k."""
    b = rec.coefficients
    return (b["200"] * l0 * l0 + b["020"] * l1 * l1 + b["002"] * l2 * l2
            + 2 * b["110"] * l0 * l1 + 2 * b["101"] * l0 * l2 + 2 * b["011"] * l1 * l2)


# ---------------------------------------------------------------------------
# objective value
# ---------------------------------------------------------------------------


def objective_integral(A: PiecewiseFunc, B: PiecewiseFunc) -> FieldElem:
    return 4 * (A.integral() + B.integral())


def objective_closed_form(k: CertificateConstants) -> FieldElem:
    p, c, d, e, f, g = k.p, k.c, k.d, k.e, k.f, k.g
    calA = (
        Fraction(8, 3) * c**3 - c * c * e - c * c * f - 4 * c * c + 2 * c * e + 2 * c * f
        - Fraction(8, 3) * d**3 + d * d * e + d * d * f + 8 * d * d
        - 2 * d * e - 2 * d * f - 8 * d - e**3 / 3 + e * e * f - e * f * f + f**3 / 3
        - Fraction(4, 3) * g**3 - Fraction(8, 3) * p**3 + 4 * p * p + Fraction(8, 3)
    )
    calB = 2 * c * c - 4 * c + 2 * d * d - 4 * d - 2 * g * g - 4 * p * p + 8 * p
    return k.K * calA + k.r * calB


def objective_alpha(k: CertificateConstants, A: PiecewiseFunc, B: PiecewiseFunc) -> FieldElem:
    """4 * integral of (A + B), cross-checked against the closed form K*calA + r*calB."""
    direct = objective_integral(A, B)
    closed = objective_closed_form(k)
    if direct != closed:
        raise CertificateError("objective", "direct integration disagrees with the closed form")
    return direct


def alpha_minpoly(alpha: FieldElem) -> RatPoly:
    """Primitive integer minimal polynomial of alpha (its characteristic
    polynomial, which is irreducible when alpha is not rational)."""
    return char_poly(alpha).primitive()


def root_position(poly: RatPoly, x: FieldElem) -> tuple[int, int]:
    """(index of the real root equal to x in increasing order, number of real roots).

    ``x`` must be a root of ``poly``."""
    if not poly(x).is_zero():
        raise ValueError("x is not a root of poly")
    b = root_bound(poly)
    total = sturm_count(poly, -b, b)
    width = Fraction(1, 10**6)
    while True:
        lo, hi = x.enclosure(x.field.refine(width))
        if poly(lo) != 0 and poly(hi) != 0 and sturm_count(poly, lo, hi) == 1:
            return sturm_count(poly, -b, lo), total
        width /= 1000


# ---------------------------------------------------------------------------
# derivation audit
# ---------------------------------------------------------------------------


def _resultant_sylvester(f: list[RatPoly], g: list[RatPoly]) -> RatPoly:
    """Res_c(f, g) where f, g are lists of RatPoly coefficients in c (lowest first)."""
    df, dg = len(f) - 1, len(g) - 1
    size = df + dg
    zero = RatPoly()
    rows = []
    for i in range(dg):
        rows.append([zero] * i + list(reversed(f)) + [zero] * (size - df - 1 - i))
    for i in range(df):
        rows.append([zero] * i + list(reversed(g)) + [zero] * (size - dg - 1 - i))
    return _det(rows)


def _det(M: list[list[RatPoly]]) -> RatPoly:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = RatPoly()
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def derivation_audit(k: CertificateConstants) -> list[tuple[str, bool]]:
    """Every stationarity and elimination relation, checked exactly."""
    p, c, d, e, f, g, K, r = k.p, k.c, k.d, k.e, k.f, k.g, k.K, k.r
    s, ell, q, n1, nu, n2 = k.s, k.ell, k.q, k.n1, k.nu, k.n2
    calC, calD, calE, calH = k.calC, k.calD, k.calE, k.calH
    lam = 4 * (p - c)
    mu = 4 * c - 2 * p - 2
    A1c = -K * c * c - 2 * r * c + n1
    ALd = ell * d + nu
    Q_ = n1 + n2 + K + 2 * s - 1
    R_ = ell + 2 * nu + q - 1
    phi = objective_closed_form(k)
    calA, calB = _calA_calB(k)
    # partial derivatives of Phi + lam Q + mu R in e and f, divided by -K/2
    stat_core = 2 * c * c - c * lam - 2 * c * mu - 4 * c - 2 * d * d + d * lam + 4 * d
    stat_e = stat_core + 2 * e * e - 4 * e * f + 2 * f * f + f * mu + mu
    stat_f = stat_core - 2 * e * e + 4 * e * f + e * mu - 2 * f * f + mu

    residuals = [
        ("Q = n1 + n2 + K + 2s - 1", Q_),
        ("R = ell + 2nu + q - 1", R_),
        ("Q - (K calC + r calD - 1)", Q_ - (K * calC + r * calD - 1)),
        ("R - (K calE + r calH - 1)", R_ - (K * calE + r * calH - 1)),
        ("nu - (A1(c) - ell c)", nu - (A1c - ell * c)),
        ("n2 - (AL(d) + K d^2 - 2 K d)", n2 - (ALd + K * d * d - 2 * K * d)),
        ("Phi - 4 int(A + B)", phi - objective_integral(*build_functions(k, strict=False))),
        ("calA + lam calC + mu calE", calA + lam * calC + mu * calE),
        ("calB + lam calD + mu calH", calB + lam * calD + mu * calH),
        ("(Kp + r)(2p - 2 - lam - mu)", (K * p + r) * (2 * p - 2 - lam - mu)),
        ("(4c - lam - 2mu - 4)(4Kc - Ke - Kf + 2r)", (4 * c - lam - 2 * mu - 4) * (4 * K * c - K * e - K * f + 2 * r)),
        ("(4d - lam - 4)(-4Kd + Ke + Kf + 4K + 2r)", (4 * d - lam - 4) * (-4 * K * d + K * e + K * f + 4 * K + 2 * r)),
        ("stationarity in e", stat_e),
        ("stationarity in f", stat_f),
        # the variant of the f-equation carrying an extra "- e" term misses by exactly -e
        ("(stationarity in f - e) + e", (stat_f - e) + e),
        ("(Kg + r)(4g + 2lam + mu)", (K * g + r) * (4 * g + 2 * lam + mu)),
        ("lam + mu - (2p - 2)", lam + mu - (2 * p - 2)),
        ("lam + 2mu - (4c - 4)", lam + 2 * mu - (4 * c - 4)),
        ("lam - (4d - 4)", lam - (4 * d - 4)),
        ("2lam + mu + 4g", 2 * lam + mu + 4 * g),
        ("d - (1 + p - c)", d - (1 + p - c)),
        ("g - (1 - 3p + 2c)/2", g - (1 - 3 * p + 2 * c) / 2),
        ("(2p - e - f)(-2c + p + 1)", (2 * p - e - f) * (-2 * c + p + 1)),
        ("(e - f)(-2c + 2e - 2f + p + 1)", (e - f) * (-2 * c + 2 * e - 2 * f + p + 1)),
        ("e + f - 2p", e + f - 2 * p),
        ("f - e - (1 + p - 2c)/2", f - e - (1 + p - 2 * c) / 2),
        ("-4c^2 - 4cp + 4c + 13p^2 - 10p + 1", -4 * c * c - 4 * c * p + 4 * c + 13 * p * p - 10 * p + 1),
        ("88c^3 - 36c^2p - ... - 3", 88 * c**3 - 36 * c * c * p - 36 * c * c - 126 * c * p * p + 132 * c * p - 30 * c
         + 29 * p**3 - 57 * p * p + 39 * p - 3),
    ]
    out = [(name, val.is_zero()) for name, val in residuals]
    out.append(("Res_c = const * (p-1)^2 (5p-1) (401p^3 - 331p^2 + 19p + 7)", elimination_identity()))
    return out


def _calA_calB(k: CertificateConstants) -> tuple[FieldElem, FieldElem]:
    # calA and calB separately: evaluate the closed form at (K, r) = (1, 0) and (0, 1)
    one, zero = k.field.one, k.field.zero
    kk = CertificateConstants(**{**k.__dict__, "K": one, "r": zero})
    a = objective_closed_form(kk)
    kk = CertificateConstants(**{**k.__dict__, "K": zero, "r": one})
    b = objective_closed_form(kk)
    return a, b


def elimination_identity() -> bool:
    """Resultant in c of the two (p, c) relations versus the displayed factorization."""
    P = lambda *cs: RatPoly(cs)  # noqa: E731 - lowest degree first, in p
    f1 = [P(1, -10, 13), P(4, -4), P(-4)]
    f2 = [P(-3, 39, -57, 29), P(-30, 132, -126), P(-36, -36), P(88)]
    res = _resultant_sylvester(f1, f2)
    x = RatPoly([0, 1])
    target = (x - RatPoly([1])) ** 2 * (5 * x - RatPoly([1])) * RatPoly.from_high([401, -331, 19, 7])
    if res.is_zero() or res.degree != target.degree:
        return False
    kappa = res.lead / target.lead
    return res == target * kappa


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------


@dataclass
class CertificateReport:
    constants: CertificateConstants | None = None
    sign_checks: list[SignCheck] = field(default_factory=list)
    cells: list[Cell] = field(default_factory=list)
    triangles: list[Triangle] = field(default_factory=list)
    bernstein: list[BernsteinRecord] = field(default_factory=list)
    alpha: FieldElem | None = None
    alpha_minpoly: RatPoly | None = None
    alpha_root_index: int | None = None
    alpha_real_roots: int | None = None
    audit: list[tuple[str, bool]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def coefficient_counts(self) -> dict[str, int]:
        counts = {"total": 0, "zero": 0, "positive": 0, "negative": 0}
        for rec in self.bernstein:
            for sg in rec.signs.values():
                counts["total"] += 1
                counts[{ZERO: "zero", POSITIVE: "positive", NEGATIVE: "negative"}[sg]] += 1
        return counts

    @property
    def verdict(self) -> bool:
        return not self.failures and self.alpha is not None


def verify_all(flip_r: bool = False, negate_coefficient: tuple[int, str] | None = None) -> CertificateReport:
    """Run the whole certificate pipeline; the verdict is true iff every check passed.

    The two keyword arguments inject faults for mutation testing."""
    rep = CertificateReport()
    try:
        k = compute_constants(flip_r=flip_r)
        rep.constants = k
        A, B = build_functions(k)

        rep.sign_checks = nonnegativity_checks(k, A, B)
        for chk in rep.sign_checks:
            if not chk.passed:
                rep.failures.append(f"nonnegativity: {chk.name} (expected {SIGN_CHAR[chk.expected]}, got {SIGN_CHAR[chk.computed]})")

        rep.cells = subdivide(k, A, B)
        area = sum((signed_area2(cell.vertices) for cell in rep.cells), k.field.zero)
        if area != 1:
            rep.failures.append("subdivision: cell areas do not sum to 1/2")
        rep.triangles = triangulate(rep.cells)
        slack = {cell.id: slack_on_cell(cell, A, B) for cell in rep.cells}
        for tri in rep.triangles:
            rec = bernstein(tri, slack[tri.cell_id])
            if negate_coefficient is not None and negate_coefficient[0] == tri.id:
                key = negate_coefficient[1]
                rec.coefficients[key] = -rec.coefficients[key]
                rec.signs[key] = field_sign(rec.coefficients[key])
            rep.bernstein.append(rec)
            for key in IJK:
                if rec.signs[key] == NEGATIVE:
                    rep.failures.append(f"bernstein: triangle {tri.id} coefficient b{key} is negative")

        rep.alpha = objective_alpha(k, A, B)
        rep.alpha_minpoly = alpha_minpoly(rep.alpha)
        if not ALPHA_POLY(rep.alpha).is_zero():
            rep.failures.append("objective: alpha is not a root of 401a^3 - 1744a^2 + 2240a - 768")
        else:
            rep.alpha_root_index, rep.alpha_real_roots = root_position(ALPHA_POLY, rep.alpha)
            if (rep.alpha_root_index, rep.alpha_real_roots) != (1, 3):
                rep.failures.append("objective: alpha is not the middle of three real roots")

        rep.audit = derivation_audit(k)
        for name, ok in rep.audit:
            if not ok:
                rep.failures.append(f"audit: {name} does not vanish")
    except CertificateError as exc:
        rep.failures.append(str(exc))
    return rep
