import random
from fractions import Fraction

import mpmath
import pytest

from ntil_checkerboard.algebra import field_sign
from ntil_checkerboard.certificate import (
    ALPHA_POLY, IJK, CertificateError, alpha_minpoly, bernstein, bernstein_eval, build_functions, compute_constants,
    derivation_audit, elimination_identity, nonnegativity_checks, objective_closed_form, objective_integral,
    root_position, signed_area2, slack_direct, slack_on_cell, subdivide, triangulate, verify_all,
)
from ntil_checkerboard.relaxation import ODD_FAT, ReducedDualCase, ratio_report

mpmath.mp.dps = 50


@pytest.fixture(scope="module")
def rep():
    return verify_all()


@pytest.fixture(scope="module")
def consts(rep):
    return rep.constants


def test_verdict_and_counts(rep):
    assert rep.verdict, rep.failures
    assert (rep.cell_count, rep.triangle_count) == (24, 40)
    assert rep.coefficient_counts() == {"total": 240, "zero": 102, "positive": 138, "negative": 0}


def test_constants_lie_in_expected_order(consts):
    k = consts
    assert 0 < k.p < k.c < k.d < 1
    assert 0 < k.e < k.f < k.g < 1
    assert k.K > 0 and k.r < 0
    assert k.d == 1 + k.p - k.c


def test_sign_checks_all_pass(rep):
    assert len(rep.sign_checks) == 26
    assert all(c.passed for c in rep.sign_checks)


def test_functions_continuous(consts):
    A, B = build_functions(consts)
    assert A.continuity_defects() == [] and B.continuity_defects() == []
    assert A(consts.field.zero) == 0 and B(consts.field.one) == 0


def test_discontinuity_detected(consts):
    from dataclasses import replace

    bad = replace(consts, nu=consts.nu + 1)
    with pytest.raises(CertificateError):
        build_functions(bad)


def test_tiling_area_and_orientation(rep):
    F = rep.constants.field
    total = F.zero
    for tri in rep.triangles:
        a2 = signed_area2(tri.vertices)
        assert a2 > 0
        total = total + a2
    assert total == 1  # twice the area 1/2
    cell_total = sum((signed_area2(c.vertices) for c in rep.cells), F.zero)
    assert cell_total == 1


def _separated(P, Q):
    """Some edge line of P or Q weakly separates the two convex polygons."""
    for poly, other in ((P, Q), (Q, P)):
        for i in range(len(poly)):
            (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % len(poly)]
            # poly is counterclockwise: its interior is on the left
            if all(field_sign((x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)) <= 0 for x, y in other):
                return True
    return False


def test_triangles_pairwise_interior_disjoint(rep):
    tris = [t.vertices for t in rep.triangles]
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            assert _separated(tris[i], tris[j]), (i, j)


def test_triangles_inside_domain(rep):
    for tri in rep.triangles:
        for u, v in tri.vertices:
            assert 0 <= v <= u <= 1


def test_fan_counts_depend_on_apex_only_through_zero_split(rep, consts):
    A, B = build_functions(consts)
    tris = triangulate(rep.cells, apex="min")
    assert len(tris) == 40
    slack = {c.id: slack_on_cell(c, A, B) for c in rep.cells}
    signs = [s for t in tris for s in bernstein(t, slack[t.cell_id]).signs.values()]
    assert signs.count(-1) == 0
    assert (signs.count(0), signs.count(1)) == (103, 137)
    with pytest.raises(ValueError):
        triangulate(rep.cells, apex="middle")


def test_cell_polynomial_matches_piecewise_definition(rep, consts):
    A, B = build_functions(consts)
    for cell in rep.cells:
        G = slack_on_cell(cell, A, B)
        assert G.degree() <= 2
        vs = cell.vertices
        cu, cv = cell.centroid()
        samples = [(cu, cv)]
        for w in (Fraction(1, 3), Fraction(2, 3)):
            samples.append((cu + w * (vs[0][0] - cu), cv + w * (vs[0][1] - cv)))
        for u, v in samples:
            assert G(u, v) == slack_direct(A, B, u, v)


def test_bernstein_reproduces_polynomial(rep, consts):
    A, B = build_functions(consts)
    slack = {c.id: slack_on_cell(c, A, B) for c in rep.cells}
    third = Fraction(1, 3)
    for tri, rec in zip(rep.triangles, rep.bernstein):
        (u0, v0), (u1, v1), (u2, v2) = tri.vertices
        for l0, l1, l2 in [(third, third, third), (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))]:
            u = l0 * u0 + l1 * u1 + l2 * u2
            v = l0 * v0 + l1 * v1 + l2 * v2
            assert bernstein_eval(rec, l0, l1, l2) == slack[tri.cell_id](u, v)


def _mp(x, pv):
    return sum(mpmath.mpf(c.numerator) / c.denominator * pv**i for i, c in enumerate(x.coeffs))


def test_high_precision_spot_check(rep, consts):
    """Slack evaluated in 50-digit floating point from the piecewise
    definitions, at random points of 10 triangles, is nonnegative."""
    p_ref = mpmath.findroot(lambda t: 401 * t**3 - 331 * t**2 + 19 * t + 7, mpmath.mpf("0.2115883"))
    k = {name: _mp(val, p_ref) for name, val in consts.items()}
    A, B = build_functions(consts)

    def pw(fn, t):
        bps = [_mp(b, p_ref) for b in fn.breakpoints]
        for i, pc in enumerate(fn.pieces):
            if bps[i] <= t <= bps[i + 1]:
                return _mp(pc.k0, p_ref) + _mp(pc.k1, p_ref) * t + _mp(pc.k2, p_ref) * t * t
        raise AssertionError("argument outside [0, 1]")

    assert abs(k["p"] - p_ref) < mpmath.mpf(10) ** -45
    rng = random.Random(20261016)
    for tri in rng.sample(rep.triangles, 10):
        V = [(_mp(u, p_ref), _mp(v, p_ref)) for u, v in tri.vertices]
        for _ in range(20):
            a, b = sorted((mpmath.mpf(rng.random()), mpmath.mpf(rng.random())))
            l = (a, b - a, 1 - b)
            u = sum(li * P[0] for li, P in zip(l, V))
            v = sum(li * P[1] for li, P in zip(l, V))
            G = pw(A, (u + v) / 2) + pw(A, (2 - u + v) / 2) + pw(B, u) + pw(B, v) - 1
            assert G > -mpmath.mpf(10) ** -40


def test_alpha(rep):
    alpha = rep.alpha
    assert ALPHA_POLY(alpha).is_zero()
    assert alpha_minpoly(alpha).coeffs == ALPHA_POLY.coeffs
    assert root_position(ALPHA_POLY, alpha) == (1, 3)
    assert abs(Fraction(alpha.decimal(15)) - Fraction("1.576823396873808")) <= Fraction(1, 10**14)


def test_alpha_two_routes(consts):
    A, B = build_functions(consts)
    assert objective_integral(A, B) == objective_closed_form(consts)


@pytest.mark.parametrize("m", [10, 20])
def test_reduced_ratio_below_alpha(rep, m):
    assert ratio_report(ReducedDualCase(ODD_FAT, m)) < rep.alpha


def test_reduced_ratio_below_alpha_m40(rep, fat40):
    assert fat40.value / fat40.case.n < rep.alpha


def test_audit(consts):
    entries = derivation_audit(consts)
    assert entries and all(ok for _, ok in entries), [n for n, ok in entries if not ok]
    assert elimination_identity()


def test_f_stationarity_variant_is_off_by_e(consts):
    # with an extra "- e" term the f-equation leaves exactly -e behind
    k = consts
    lam, mu = 4 * (k.p - k.c), 4 * k.c - 2 * k.p - 2
    core = 2 * k.c**2 - k.c * lam - 2 * k.c * mu - 4 * k.c - 2 * k.d**2 + k.d * lam + 4 * k.d
    variant = core - 2 * k.e**2 + 4 * k.e * k.f + k.e * mu - k.e - 2 * k.f**2 + mu
    assert variant == -k.e and not variant.is_zero()


def test_constants_are_deterministic(consts):
    again = compute_constants()
    assert [v.coeffs for _, v in again.items()] == [v.coeffs for _, v in consts.items()]


def test_mutation_flip_r():
    bad = verify_all(flip_r=True)
    assert not bad.verdict and bad.failures


def test_mutation_negated_coefficient(rep):
    tri_id, key = next((rec.triangle_id, k) for rec in rep.bernstein for k in IJK if rec.signs[k] == 1)
    bad = verify_all(negate_coefficient=(tri_id, key))
    assert not bad.verdict
    assert any("negative" in f for f in bad.failures)
    assert bad.coefficient_counts()["negative"] == 1


def test_subdivision_count_guard(consts):
    with pytest.raises(CertificateError):
        subdivide(consts, expected=23)


def test_nonnegativity_checks_flag_wrong_sign(consts):
    from dataclasses import replace

    A, B = build_functions(consts)
    checks = nonnegativity_checks(replace(consts, K=-consts.K), A, B)
    assert not all(c.passed for c in checks)
