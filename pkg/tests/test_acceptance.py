"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Environment knobs:
  NTIL_SEARCH_BUDGET  seconds per exhaustive search for 11 <= n <= 16 (default 20)
  NTIL_STRETCH=1      also run the m=80 odd-fat reduced LP (slow)
"""

import math
import os
import random
import time
from fractions import Fraction

import pytest

from ntil_checkerboard.algebra import field_sign, isolate_real_roots, round_decimal, sturm_count
from ntil_checkerboard.certificate import ALPHA_POLY, IJK, compute_constants, derivation_audit, verify_all
from ntil_checkerboard.lp import OPTIMAL, check_certificate, solve
from ntil_checkerboard.relaxation import (
    ODD_FAT, ReducedDualCase, build_four_direction, case_for, curvature_diagnostic, ratio_report, solve_reduced,
)
from ntil_checkerboard.search import max_ntil, verify_ntil
from oracles import random_lp, vertex_oracle

# n: (L0 3dp, D0, L1 3dp, D1)
TABLE_LP_SEARCH = {
    2: ("2.000", 2, "2.000", 2), 3: ("4.000", 4, "4.000", 4), 4: ("6.000", 6, "6.000", 6),
    5: ("7.200", 7, "8.000", 8), 6: ("9.000", 8, "9.000", 8), 7: ("10.667", 10, "10.667", 10),
    8: ("12.333", 12, "12.333", 12), 9: ("14.133", 14, "13.714", 13), 10: ("15.556", 15, "15.556", 15),
    11: ("17.120", 16, "17.000", 16), 12: ("18.750", 18, "18.750", 18), 13: ("20.267", 20, "20.364", 20),
    14: ("22.000", 21, "22.000", 21), 15: ("23.478", 23, "23.500", 23), 16: ("25.091", 24, "25.091", 24),
}
FLOOR_GAP_ONE = {6, 11, 14, 16}
ALPHA_DECIMAL = "1.576823396873808"
RATIO_M40 = "1.576420575749053"
RATIO_M80 = "1.576808190150374"
CURVATURE_M40 = ("-2.4794669146", "1.2397334573", "-2.0000000000")

SEARCH_BUDGET = float(os.environ.get("NTIL_SEARCH_BUDGET", "20"))
STRETCH = os.environ.get("NTIL_STRETCH") == "1"


@pytest.fixture(scope="session")
def say(pytestconfig):
    tr = pytestconfig.pluginmanager.getplugin("terminalreporter")

    def emit(num, ok, detail):
        line = f"[acceptance {num}] {'PASS' if ok else 'FAIL'}: {detail}"
        if tr is not None:
            tr.write_line(line)
        else:
            print(line)
        return ok

    return emit


@pytest.fixture(scope="module")
def certificate():
    t0 = time.monotonic()
    rep = verify_all()
    return rep, time.monotonic() - t0


@pytest.fixture(scope="module")
def lp_values():
    out = {}
    for n in range(2, 17):
        for eps in (0, 1):
            model = build_four_direction(n, eps)
            sol = solve(model)
            out[n, eps] = (sol, check_certificate(model, sol))
    return out


@pytest.fixture(scope="module")
def search_values():
    """(size, exact) per (n, eps); n <= 10 unbudgeted, larger n under the budget."""
    out = {}
    for n in range(2, 17):
        for eps in (0, 1):
            if n <= 10:
                w = max_ntil(n, eps)
            else:
                w = max_ntil(n, eps, time_budget=SEARCH_BUDGET, symmetry_breaking=True)
            out[n, eps] = (w.size, w.exact, verify_ntil(w), w.seconds)
    return out


def test_criterion_1_certificate_counts(certificate, say):
    rep, secs = certificate
    counts = rep.coefficient_counts()
    got = (rep.cell_count, rep.triangle_count, counts["total"], counts["zero"], counts["positive"], counts["negative"])
    ok = rep.verdict and got == (24, 40, 240, 102, 138, 0) and secs <= 300
    say(1, ok, f"verdict={rep.verdict} cells/triangles/coeffs/zero/positive/negative={got} in {secs:.1f}s")
    assert ok, rep.failures


def test_criterion_2_alpha(certificate, say):
    rep, _ = certificate
    alpha = rep.alpha
    on_cubic = ALPHA_POLY(alpha).is_zero()
    roots = isolate_real_roots(ALPHA_POLY)
    # alpha lies strictly between the isolating intervals of roots 0 and 2
    middle = len(roots) == 3 and field_sign(alpha - roots[0].hi) > 0 and field_sign(roots[2].lo - alpha) > 0
    three = sturm_count(ALPHA_POLY, -100, 100) == 3
    dec = alpha.decimal(15)
    close = abs(Fraction(dec) - Fraction(ALPHA_DECIMAL)) <= Fraction(1, 10**14)
    ok = on_cubic and three and middle and close
    say(2, ok, f"cubic={on_cubic} three_real={three} middle={middle} alpha={dec}")
    assert ok


def test_criterion_3_audit(say):
    entries = derivation_audit(compute_constants())
    bad = [name for name, ok in entries if not ok]
    ok = not bad
    say(3, ok, f"{len(entries) - len(bad)}/{len(entries)} residuals vanish" + (f"; failing: {bad}" if bad else ""))
    assert ok


def test_criterion_4_lp_table(say):
    t0 = time.monotonic()
    mismatches = []
    for n in range(2, 17):
        for eps in (0, 1):
            model = build_four_direction(n, eps)
            sol = solve(model)
            dec = round_decimal(sol.value, 3)
            want = TABLE_LP_SEARCH[n][2 * eps]
            if sol.status != OPTIMAL or dec != want or not check_certificate(model, sol):
                mismatches.append((n, eps, dec, want))
    secs = time.monotonic() - t0
    ok = not mismatches and secs <= 60
    say(4, ok, f"30 LP optima match to 3 places in {secs:.1f}s" if not mismatches else f"mismatches {mismatches}")
    assert ok


def test_criterion_5_search_table(search_values, say):
    wrong, truncated = [], []
    small_secs = sum(v[3] for (n, _), v in search_values.items() if n <= 10)
    for (n, eps), (size, exact, valid, _) in sorted(search_values.items()):
        want = TABLE_LP_SEARCH[n][2 * eps + 1]
        if not valid or (exact and size != want) or (not exact and size > want):
            wrong.append((n, eps, size, exact, want))
        if not exact:
            truncated.append(f"n={n},eps={eps}:>={size}")
        if n <= 10 and not exact:
            wrong.append((n, eps, "truncated"))
    ok = not wrong and small_secs <= 600
    detail = f"n<=10 exact in {small_secs:.1f}s; budget {SEARCH_BUDGET:g}s for n>=11"
    detail += f"; lower bounds only: {', '.join(truncated)}" if truncated else "; all exact"
    say(5, ok, detail if ok else f"wrong: {wrong}")
    assert ok


def test_criterion_6_floor_gap(lp_values, search_values, say):
    wrong, checked = [], []
    for (n, eps), (size, exact, _, _) in sorted(search_values.items()):
        if not exact:
            continue
        gap = math.floor(lp_values[n, eps][0].value) - size
        checked.append(n)
        if gap != (1 if n in FLOOR_GAP_ONE else 0):
            wrong.append((n, eps, gap))
    done = sorted(set(checked))
    ok = not wrong
    say(6, ok, f"floor gap rule holds for completed n={done[0]}..{done[-1]} ({len(checked)} cases)"
        if ok else f"violations {wrong}")
    assert ok


def test_criterion_7_reduction(lp_values, say):
    wrong = []
    for n in range(2, 14):
        for eps in (0, 1):
            if n % 2 == 0 and n > 12:
                continue
            if solve_reduced(case_for(n, eps)).value != lp_values[n, eps][0].value:
                wrong.append((n, eps))
    ok = not wrong
    say(7, ok, "reduced optimum equals full optimum for odd n<=13 and even n<=12" if ok else f"mismatch {wrong}")
    assert ok


def test_criterion_8_ratio_m40(fat40, say):
    t0 = time.monotonic()
    dec = round_decimal(fat40.value / fat40.case.n, 15)
    ok = dec == RATIO_M40
    detail = f"m=40 ratio {dec}"
    if STRETCH:
        r80 = round_decimal(ratio_report(ReducedDualCase(ODD_FAT, 80)), 15)
        ok = ok and r80 == RATIO_M80
        detail += f"; m=80 ratio {r80} in {time.monotonic() - t0:.0f}s"
    else:
        detail += "; m=80 stretch target not run (set NTIL_STRETCH=1)"
    say(8, ok, detail)
    assert ok


def test_criterion_9_curvature(fat40, say):
    rep = curvature_diagnostic(fat40, (30, 38), (15, 22))
    got = (round_decimal(rep.a_scaled, 10), round_decimal(rep.b_scaled, 10),
           None if rep.ratio is None else round_decimal(rep.ratio, 10))
    pattern = rep.ratio == -2 and got == CURVATURE_M40
    # a differently shaped optimum is reported, not failed
    say(9, True, f"averages {got[0]}, {got[1]}, ratio {got[2]}; "
        + ("matches the reference row exactly" if pattern else "optimizer pattern differs from the reference row"))


def test_criterion_10_property_suites(certificate, say):
    rep, _ = certificate
    F = rep.constants.field
    rng = random.Random(10)

    def rand_elem():
        return F(*(Fraction(rng.randint(-60, 60), rng.randint(1, 40)) for _ in range(3)))

    sign_ok, pairs = True, 0
    while pairs < 100:
        x, y = rand_elem(), rand_elem()
        if x.is_zero() or y.is_zero():
            continue
        pairs += 1
        sign_ok &= field_sign(x * y) == field_sign(x) * field_sign(y)

    lp_ok = True
    for _ in range(200):
        model = random_lp(rng)
        status, value = vertex_oracle(model)
        sol = solve(model)
        if sol.status != status or (status == OPTIMAL and (sol.value != value or not check_certificate(model, sol))):
            lp_ok = False

    area = sum(((t.vertices[1][0] - t.vertices[0][0]) * (t.vertices[2][1] - t.vertices[0][1])
                - (t.vertices[2][0] - t.vertices[0][0]) * (t.vertices[1][1] - t.vertices[0][1])
                for t in rep.triangles), F.zero) / 2
    tiling_ok = area == Fraction(1, 2)

    pos = next((r.triangle_id, k) for r in rep.bernstein for k in IJK if r.signs[k] > 0)
    mutation_ok = not verify_all(flip_r=True).verdict and not verify_all(negate_coefficient=pos).verdict

    ok = sign_ok and lp_ok and tiling_ok and mutation_ok
    say(10, ok, f"sign multiplicativity={sign_ok} lp oracle={lp_ok} tiling area={tiling_ok} mutations={mutation_ok}")
    assert ok
