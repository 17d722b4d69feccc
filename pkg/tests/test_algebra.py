from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntil_checkerboard.algebra import (
    P_INTERVAL, P_MINPOLY, CubicField, RatPoly, RootInterval, char_poly, field_decimal, field_inverse, field_sign,
    format_rational, isolate_real_roots, make_p_field, parse_field_elem, format_field_elem, parse_rational,
    rational_roots, refine_root, round_decimal, sturm_chain, sturm_count,
)

F = make_p_field()

# p to 60 digits from mpmath, independent of the field's own interval code
mpmath.mp.dps = 60
P_REF = [r for r in mpmath.polyroots([401, -331, 19, 7], maxsteps=200, extraprec=200)
         if abs(mpmath.im(r)) < mpmath.mpf(10) ** -40 and 0.2 < mpmath.re(r) < 0.3][0].real


def ref_value(x):
    return mpmath.mpf(x.c0.numerator) / x.c0.denominator + (
        mpmath.mpf(x.c1.numerator) / x.c1.denominator) * P_REF + (
        mpmath.mpf(x.c2.numerator) / x.c2.denominator) * P_REF ** 2


small = st.fractions(min_value=-50, max_value=50, max_denominator=60)
elems = st.builds(F, small, small, small)
nonzero = elems.filter(lambda x: not x.is_zero())


def test_p_interval_isolates_middle_root():
    roots = isolate_real_roots(P_MINPOLY)
    assert len(roots) == 3
    assert sturm_count(P_MINPOLY, P_INTERVAL.lo, P_INTERVAL.hi) == 1
    assert roots[1].lo < P_INTERVAL.hi and P_INTERVAL.lo < roots[1].hi


def test_minpoly_irreducible_and_reducible_rejected():
    assert rational_roots(P_MINPOLY) == []
    with pytest.raises(ValueError):
        CubicField(RatPoly.from_high([1, 0, 0, -1]), RootInterval(Fraction(1, 2), Fraction(2)))


def test_interval_must_isolate():
    with pytest.raises(ValueError):
        CubicField(P_MINPOLY, RootInterval(Fraction(-10), Fraction(10)))


def test_generator_satisfies_minpoly():
    p = F.gen
    assert (401 * p**3 - 331 * p**2 + 19 * p + 7).is_zero()


@settings(max_examples=100)
@given(nonzero, nonzero)
def test_sign_multiplicative(x, y):
    assert field_sign(x * y) == field_sign(x) * field_sign(y)


@settings(max_examples=100)
@given(elems)
def test_sign_matches_mpmath(x):
    v = ref_value(x)
    expect = 0 if x.is_zero() else (1 if v > 0 else -1)
    assert field_sign(x) == expect


@settings(max_examples=100)
@given(nonzero)
def test_inverse(x):
    assert x * field_inverse(x) == F.one


@settings(max_examples=50)
@given(elems, elems, elems)
def test_ring_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inverse(F.zero)


def test_sign_of_tiny_element_refines():
    # p - lo is positive but below the initial interval width
    x = F.gen - Fraction(2115883, 10**7)
    assert field_sign(x) == 1
    assert field_sign(-x) == -1


@settings(max_examples=30)
@given(elems)
def test_char_poly_annihilates(x):
    cp = char_poly(x)
    assert cp.degree == 3
    assert cp(x).is_zero()


def test_decimal_is_certified():
    d = field_decimal(F.gen, 30)
    assert abs(mpmath.mpf(d) - P_REF) <= mpmath.mpf(10) ** -30 / 2
    assert d.startswith("0.2115883")


def test_round_half_even():
    assert round_decimal(Fraction(1, 8), 2) == "0.12"
    assert round_decimal(Fraction(3, 8), 2) == "0.38"
    assert round_decimal(Fraction(-5, 2), 0) == "-2"
    assert round_decimal(Fraction(36, 5), 3) == "7.200"
    assert round_decimal(Fraction(-1, 3000), 3) == "0.000"


@given(st.fractions(max_denominator=10**6))
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@settings(max_examples=50)
@given(elems)
def test_field_elem_round_trip(x):
    assert parse_field_elem(F, format_field_elem(x)) == x


# --- Sturm machinery against polynomials with known rational roots ---

roots_st = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=8), min_size=1, max_size=6)


def poly_from_roots(rs):
    p = RatPoly([1])
    for r in rs:
        p = p * RatPoly([-r, 1])
    return p


@settings(max_examples=60)
@given(roots_st, st.fractions(min_value=-30, max_value=30, max_denominator=7),
       st.fractions(min_value=-30, max_value=30, max_denominator=7))
def test_sturm_counts_distinct_roots(rs, a, b):
    lo, hi = min(a, b), max(a, b)
    poly = poly_from_roots(rs)
    if poly(lo) == 0 or poly(hi) == 0:
        with pytest.raises(ValueError):
            sturm_count(poly, lo, hi)
        return
    assert sturm_count(poly, lo, hi) == len({r for r in rs if lo < r < hi})


@settings(max_examples=60)
@given(roots_st, st.fractions(min_value=-30, max_value=30, max_denominator=11))
def test_sturm_partition_additive(rs, mid):
    poly = poly_from_roots(rs)
    lo, hi = Fraction(-41), Fraction(41)
    if poly(mid) == 0:
        return
    chain = sturm_chain(poly)
    assert sturm_count(poly, lo, mid, chain) + sturm_count(poly, mid, hi, chain) == sturm_count(poly, lo, hi, chain)


@settings(max_examples=40)
@given(roots_st)
def test_isolation_finds_every_root(rs):
    poly = poly_from_roots(rs)
    ivs = isolate_real_roots(poly)
    distinct = sorted(set(rs))
    assert len(ivs) == len(distinct)
    for iv, r in zip(ivs, distinct):
        assert iv.lo < r < iv.hi


@settings(max_examples=40)
@given(st.integers(min_value=1, max_value=40))
def test_refine_keeps_sign_change(k):
    poly = P_MINPOLY
    iv = refine_root(poly, P_INTERVAL, Fraction(1, 2**k) * P_INTERVAL.width)
    assert iv.width <= Fraction(1, 2**k) * P_INTERVAL.width
    assert P_INTERVAL.lo <= iv.lo < iv.hi <= P_INTERVAL.hi
    assert (poly(iv.lo) > 0) != (poly(iv.hi) > 0)


def test_field_refinement_is_monotone():
    G = make_p_field()
    w0 = G.interval.width
    G.refine(w0 / 1000)
    w1 = G.interval.width
    G.refine(w0)  # asking for a coarser width never widens
    assert G.interval.width == w1 <= w0 / 1000
