"""Exact scalar kernel: rationals, rational polynomials, Sturm chains and the
cubic field Q(p) with a decidable sign oracle.

Rationals are plain :class:`fractions.Fraction` values.  Polynomials are
stored lowest degree first.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

NEGATIVE, ZERO, POSITIVE = -1, 0, 1


def Q(x) -> Fraction:
    """Coerce ints, strings ("a/b") and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    x = Q(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def sgn(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Univariate polynomials over Q
# ---------------------------------------------------------------------------


class RatPoly:
    """Univariate polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_high(cls, coeffs: Sequence) -> "RatPoly":
        """Build from coefficients listed highest degree first."""
        return cls(list(coeffs)[::-1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({[format_rational(c) for c in self.coeffs]})"

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RatPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other) -> "RatPoly":
        if not isinstance(other, RatPoly):
            return RatPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        out = RatPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "RatPoly":
        return RatPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quo = [Fraction(0)] * max(0, len(rem) - dq)
        lead = other.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            f = rem[k] / lead
            if f:
                quo[k - dq] = f
                for j, c in enumerate(other.coeffs):
                    rem[k - dq + j] -= f * c
        return RatPoly(quo), RatPoly(rem[:dq])

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def primitive(self) -> "RatPoly":
        """Positive rational multiple with coprime integer coefficients."""
        if self.is_zero():
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return RatPoly(Fraction(v, g) for v in ints)


def poly_x() -> RatPoly:
    return RatPoly([0, 1])


# ---------------------------------------------------------------------------
# Sturm chains and root isolation
# ---------------------------------------------------------------------------


def sturm_chain(poly: RatPoly) -> list[RatPoly]:
    """Sturm sequence of ``poly``; every member is scaled by a positive
    constant to primitive integer form, which leaves sign variations intact."""
    if poly.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [poly.primitive(), poly.derivative().primitive()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append((-r).primitive())
    return [p for p in chain if not p.is_zero()]


def _variations(values) -> int:
    signs = [sgn(v) for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sign_variations(chain: Sequence[RatPoly], x) -> int:
    return _variations(p(x) for p in chain)


def sturm_count(poly: RatPoly, lo, hi, chain: Sequence[RatPoly] | None = None) -> int:
    """Number of distinct real roots of ``poly`` in the open interval (lo, hi)."""
    lo, hi = Q(lo), Q(hi)
    if poly.is_zero():
        raise ValueError("poly is identically zero")
    if lo > hi:
        raise ValueError("lo > hi")
    for name, x in (("lo", lo), ("hi", hi)):
        if poly(x) == 0:
            raise ValueError(f"endpoint {name}={format_rational(x)} is a root")
    if chain is None:
        chain = sturm_chain(poly)
    return sign_variations(chain, lo) - sign_variations(chain, hi)


def root_bound(poly: RatPoly) -> Fraction:
    """Cauchy bound: every real root lies strictly inside (-B, B)."""
    lead = abs(poly.lead)
    return 1 + max((abs(c) / lead for c in poly.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RootInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("RootInterval requires lo < hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


def refine_root(poly: RatPoly, iv: RootInterval, width) -> RootInterval:
    """Bisect ``iv`` until its width is at most ``width``.

    ``iv`` must isolate a single root at which ``poly`` changes sign (every
    root of a square-free polynomial does)."""
    width = Q(width)
    if width <= 0:
        raise ValueError("width must be positive")
    lo, hi = iv.lo, iv.hi
    slo = sgn(poly(lo))
    if slo == 0 or slo == sgn(poly(hi)):
        raise ValueError("poly does not change sign across the interval")
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = sgn(poly(mid))
        if sm == 0:
            # exact rational root: shrink symmetrically around it
            half = min(width, hi - lo) / 4
            return RootInterval(mid - half, mid + half)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)


def isolate_real_roots(poly: RatPoly) -> list[RootInterval]:
    """Disjoint isolating intervals for all distinct real roots, increasing."""
    chain = sturm_chain(poly)
    b = root_bound(poly)
    out: list[RootInterval] = []

    def rec(lo, hi, k):
        if k == 0:
            return
        if k == 1:
            out.append(RootInterval(lo, hi))
            return
        mid = (lo + hi) / 2
        if poly(mid) == 0:
            # nudge off the root; an exact rational root is isolated separately
            eps = (hi - lo) / 1024
            while sturm_count(poly, mid - eps, mid + eps, chain) != 1 or poly(mid - eps) == 0 or poly(mid + eps) == 0:
                eps /= 2
            out_l = sturm_count(poly, lo, mid - eps, chain)
            rec(lo, mid - eps, out_l)
            out.append(RootInterval(mid - eps, mid + eps))
            rec(mid + eps, hi, sturm_count(poly, mid + eps, hi, chain))
            return
        rec(lo, mid, sturm_count(poly, lo, mid, chain))
        rec(mid, hi, sturm_count(poly, mid, hi, chain))

    rec(-b, b, sturm_count(poly, -b, b, chain))
    return out


def rational_roots(poly: RatPoly) -> list[Fraction]:
    """All rational roots, by the rational-root test on the primitive form."""
    prim = poly.primitive()
    cs = [int(c) for c in prim.coeffs]
    # strip zero roots
    roots = []
    while cs and cs[0] == 0:
        cs.pop(0)
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(cs) <= 1:
        return roots
    a0, an = abs(cs[0]), abs(cs[-1])
    for num in _divisors(a0):
        for den in _divisors(an):
            for s in (1, -1):
                x = Fraction(s * num, den)
                if x not in roots and prim(x) == 0:
                    roots.append(x)
    return sorted(roots)


def _divisors(k: int) -> list[int]:
    out = []
    i = 1
    while i * i <= k:
        if k % i == 0:
            out.append(i)
            if i * i != k:
                out.append(k // i)
        i += 1
    return out


# ---------------------------------------------------------------------------
# The cubic field Q(p)
# ---------------------------------------------------------------------------


class CubicField:
    """Q(p) for a real root p of an irreducible rational cubic.

    The isolating interval is the only mutable state; it only ever shrinks
    and refinement is serialized by a lock."""

    def __init__(self, minpoly: RatPoly, interval: RootInterval):
        if minpoly.degree != 3:
            raise ValueError("minimal polynomial must be cubic")
        if rational_roots(minpoly):
            raise ValueError("cubic has a rational root, hence is reducible")
        if sturm_count(minpoly, interval.lo, interval.hi) != 1:
            raise ValueError("interval does not isolate exactly one root")
        lead = minpoly.lead
        self.minpoly = RatPoly(c / lead for c in minpoly.coeffs)  # monic
        # p^3 = -(m0 + m1 p + m2 p^2)
        m0, m1, m2, _ = self.minpoly.coeffs
        self._red = (-m0, -m1, -m2)
        self._interval = interval
        self._lock = threading.Lock()

    @property
    def interval(self) -> RootInterval:
        return self._interval

    def refine(self, width=None) -> RootInterval:
        with self._lock:
            iv = self._interval
            target = iv.width / 2 if width is None else Q(width)
            if iv.width > target:
                self._interval = refine_root(self.minpoly, iv, target)
            return self._interval

    # constructors
    def __call__(self, c0=0, c1=0, c2=0) -> "FieldElem":
        return FieldElem(self, Q(c0), Q(c1), Q(c2))

    @property
    def gen(self) -> "FieldElem":
        return self(0, 1, 0)

    @property
    def one(self) -> "FieldElem":
        return self(1)

    @property
    def zero(self) -> "FieldElem":
        return self(0)

    def reduce(self, coeffs: Sequence[Fraction]) -> tuple[Fraction, Fraction, Fraction]:
        cs = [Q(c) for c in coeffs]
        r0, r1, r2 = self._red
        for k in range(len(cs) - 1, 2, -1):
            t = cs[k]
            if t:
                cs[k - 3] += t * r0
                cs[k - 2] += t * r1
                cs[k - 1] += t * r2
        cs = (cs + [Fraction(0)] * 3)[:3]
        return cs[0], cs[1], cs[2]


def _coerce(field: CubicField, x) -> "FieldElem":
    if isinstance(x, FieldElem):
        if x.field is not field:
            raise ValueError("elements of different fields")
        return x
    return FieldElem(field, Q(x), Fraction(0), Fraction(0))


class FieldElem:
    """c0 + c1 p + c2 p^2 in Q(p); immutable."""

    __slots__ = ("field", "c0", "c1", "c2")

    def __init__(self, field: CubicField, c0: Fraction, c1: Fraction, c2: Fraction):
        self.field = field
        self.c0, self.c1, self.c2 = c0, c1, c2

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.c0, self.c1, self.c2

    def is_zero(self) -> bool:
        return not (self.c0 or self.c1 or self.c2)

    def is_rational(self) -> bool:
        return not (self.c1 or self.c2)

    def __repr__(self):
        return "FieldElem({}, {}, {})".format(*(format_rational(c) for c in self.coeffs))

    def __eq__(self, other):
        try:
            o = _coerce(self.field, other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        o = _coerce(self.field, other)
        return FieldElem(self.field, self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, -self.c0, -self.c1, -self.c2)

    def __sub__(self, other):
        return self + (-_coerce(self.field, other))

    def __rsub__(self, other):
        return _coerce(self.field, other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElem):
            k = Q(other)
            return FieldElem(self.field, self.c0 * k, self.c1 * k, self.c2 * k)
        return field_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, FieldElem):
            k = Q(other)
            if k == 0:
                raise ZeroDivisionError("division by zero in Q(p)")
            return FieldElem(self.field, self.c0 / k, self.c1 / k, self.c2 / k)
        return field_mul(self, field_inverse(other))

    def __rtruediv__(self, other):
        return _coerce(self.field, other) / self

    def __pow__(self, k: int):
        if k < 0:
            return field_inverse(self) ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ordering via the sign oracle
    def sign(self) -> int:
        return field_sign(self)

    def __lt__(self, other):
        return field_sign(self - other) < 0

    def __le__(self, other):
        return field_sign(self - other) <= 0

    def __gt__(self, other):
        return field_sign(self - other) > 0

    def __ge__(self, other):
        return field_sign(self - other) >= 0

    def enclosure(self, iv: RootInterval | None = None) -> tuple[Fraction, Fraction]:
        """Exact rational interval containing the value, from the root interval."""
        iv = iv or self.field.interval
        return _eval_interval(self.coeffs, iv.lo, iv.hi)

    def decimal(self, digits: int = 15) -> str:
        return field_decimal(self, digits)

    def __float__(self):
        lo, hi = self.enclosure(self.field.refine(Fraction(1, 10**20)))
        return float((lo + hi) / 2)


def field_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    """Product reduced modulo the minimal polynomial."""
    if a.field is not b.field:
        raise ValueError("elements of different fields")
    a0, a1, a2 = a.coeffs
    b0, b1, b2 = b.coeffs
    prod = (
        a0 * b0,
        a0 * b1 + a1 * b0,
        a0 * b2 + a1 * b1 + a2 * b0,
        a1 * b2 + a2 * b1,
        a2 * b2,
    )
    return FieldElem(a.field, *a.field.reduce(prod))


def field_inverse(x: FieldElem) -> FieldElem:
    """Inverse by the extended Euclidean algorithm against the minimal polynomial."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(p)")
    f = x.field
    # invariant: s_i * x == r_i  (mod minpoly)
    r0, r1 = f.minpoly, RatPoly(x.coeffs)
    s0, s1 = RatPoly(), RatPoly([1])
    while r1.degree > 0:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r1.is_zero():
        raise ArithmeticError("element shares a factor with the minimal polynomial")
    inv = s1 * (1 / r1.coeffs[0])
    return FieldElem(f, *f.reduce(inv.coeffs))


def _eval_interval(coeffs, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    # exact interval evaluation of c0 + c1 t + c2 t^2 for t in [lo, hi]
    c0, c1, c2 = coeffs
    if lo >= 0 or hi <= 0:
        sq = (min(lo * lo, hi * hi), max(lo * lo, hi * hi))
    else:
        sq = (Fraction(0), max(lo * lo, hi * hi))
    lin = sorted((c1 * lo, c1 * hi))
    quad = sorted((c2 * sq[0], c2 * sq[1]))
    return c0 + lin[0] + quad[0], c0 + lin[1] + quad[1]


def field_sign(x: FieldElem) -> int:
    """Exact sign of a field element: -1, 0 or +1."""
    if x.is_zero():
        return ZERO
    if x.is_rational():
        return sgn(x.c0)
    iv = x.field.interval
    while True:
        lo, hi = _eval_interval(x.coeffs, iv.lo, iv.hi)
        if lo > 0:
            return POSITIVE
        if hi < 0:
            return NEGATIVE
        iv = x.field.refine()


def field_decimal(x: FieldElem, digits: int = 15) -> str:
    """Decimal string rounded half-even to ``digits`` places, certified by
    refining until both ends of the enclosure round to the same string."""
    if x.is_rational():
        return round_decimal(x.c0, digits)
    width = Fraction(1, 10 ** (digits + 2))
    while True:
        lo, hi = x.enclosure(x.field.refine(width))
        a, b = round_decimal(lo, digits), round_decimal(hi, digits)
        if a == b:
            return a
        width /= 16


def round_decimal(x, digits: int) -> str:
    """Round a rational half-to-even at ``digits`` decimal places."""
    x = Q(x)
    scaled = x * 10**digits
    q = round(scaled)  # Fraction.__round__ is half-to-even
    neg = q < 0
    s = str(abs(q)).rjust(digits + 1, "0")
    body = s[: len(s) - digits] + ("." + s[len(s) - digits:] if digits else "")
    return "-" + body if neg else body


def format_field_elem(x: FieldElem) -> str:
    return "\t".join(format_rational(c) for c in x.coeffs)


def parse_field_elem(field: CubicField, text: str, sep: str = "\t") -> FieldElem:
    parts = text.strip().split(sep)
    if len(parts) != 3:
        raise ValueError(f"expected 3 coefficients, got {len(parts)}")
    return field(*(parse_rational(p) for p in parts))


def char_poly(x: FieldElem) -> RatPoly:
    """Characteristic polynomial of multiplication by x on the basis 1, p, p^2."""
    f = x.field
    cols = [field_mul(x, b).coeffs for b in (f(1), f(0, 1), f(0, 0, 1))]
    m = [[cols[j][i] for j in range(3)] for i in range(3)]
    # det(tI - M) for a 3x3 matrix
    tr = m[0][0] + m[1][1] + m[2][2]
    minors = (
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1]
    )
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return RatPoly([-det, minors, -tr, 1])


# The field used by the certificate.
P_MINPOLY = RatPoly.from_high([401, -331, 19, 7])
P_INTERVAL = RootInterval(Fraction(2115883, 10**7), Fraction(2115884, 10**7))


def make_p_field() -> CubicField:
    return CubicField(P_MINPOLY, P_INTERVAL)
