"""Odd-fat reduced LP ratios L_m/n and their distance to the certified alpha,
plus the second-difference diagnostic where default windows exist.

    python scripts/odd_fat_convergence.py 10 20 40
"""

import argparse
import time
from fractions import Fraction

from ntil_checkerboard.algebra import round_decimal
from ntil_checkerboard.certificate import build_functions, compute_constants, objective_integral
from ntil_checkerboard.cli import DEFAULT_WINDOWS
from ntil_checkerboard.relaxation import ODD_FAT, ReducedDualCase, curvature_diagnostic, solve_reduced


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("m", type=int, nargs="*", default=[10, 20, 40])
    args = ap.parse_args()

    k = compute_constants()
    alpha = objective_integral(*build_functions(k))
    alpha_q = Fraction(alpha.decimal(30))
    print(f"alpha = {alpha.decimal(15)}")
    for m in args.m:
        t0 = time.monotonic()
        sol = solve_reduced(ReducedDualCase(ODD_FAT, m))
        ratio = sol.value / sol.case.n
        line = (f"m={m:4d} n={sol.case.n:4d} ratio={round_decimal(ratio, 15)} "
                f"diff={round_decimal(ratio - alpha_q, 15)} pivots={sol.lp.pivots} {time.monotonic() - t0:.1f}s")
        if m in DEFAULT_WINDOWS:
            rep = curvature_diagnostic(sol, *DEFAULT_WINDOWS[m])
            ratio_s = "undefined" if rep.ratio is None else round_decimal(rep.ratio, 10)
            line += (f"  m2*avg d2a={round_decimal(rep.a_scaled, 10)} m2*avg d2b={round_decimal(rep.b_scaled, 10)}"
                     f" ratio={ratio_s}")
        print(line, flush=True)


if __name__ == "__main__":
    main()
