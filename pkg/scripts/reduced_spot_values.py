"""Exact optima of the three reduced duals for a few m, with the unfolded
full-grid cover re-checked.

    python scripts/reduced_spot_values.py 4 8
"""

import argparse

from ntil_checkerboard.algebra import round_decimal
from ntil_checkerboard.relaxation import (
    EVEN, ODD_FAT, ODD_THIN, ReducedDualCase, cover_value, dual_cover_check, solve_reduced, unfold,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("m", type=int, nargs="*", default=[4, 8, 12])
    args = ap.parse_args()
    for m in args.m:
        for kind in (ODD_FAT, ODD_THIN, EVEN):
            sol = solve_reduced(ReducedDualCase(kind, m))
            n = sol.case.n
            w = unfold(sol)
            ok = dual_cover_check(n, sol.case.eps, w) and cover_value(w) == sol.value
            print(f"{kind:8s} m={m:3d} n={n:3d} L={sol.value} ({round_decimal(sol.value, 6)}) "
                  f"L/n={round_decimal(sol.value / n, 9)} cover_ok={ok}")


if __name__ == "__main__":
    main()
