"""Four-direction LP bound against the exact maximum, 2 <= n <= max_n.

    python scripts/table_lp_vs_search.py --max-n 13 --budget 60
"""

import argparse
import math
import time

from ntil_checkerboard.export import table_row, table_tsv

FLOOR_GAP_ONE = {6, 11, 14, 16}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--budget", type=float, default=None, help="seconds per search (needed beyond n=12)")
    ap.add_argument("--out", default=None, help="also write the TSV here")
    args = ap.parse_args()

    rows = []
    for n in range(2, args.max_n + 1):
        t0 = time.monotonic()
        row = table_row(n, args.budget if n > 12 else None)
        rows.append(row)
        gaps = [row.floor_gap(e) if row.exact[e] else None for e in (0, 1)]
        expect = 1 if n in FLOOR_GAP_ONE else 0
        flag = "" if all(g in (None, expect) for g in gaps) else "  <-- floor gap differs"
        print(f"n={n:2d}  L=({float(row.lp[0]):.3f}, {float(row.lp[1]):.3f})  D={row.d}  exact={row.exact}  "
              f"floor gap={gaps}  {time.monotonic() - t0:.1f}s{flag}", flush=True)
        assert all(math.floor(l) >= d for l, d in zip(row.lp, row.d))
    text = table_tsv(rows)
    print(text, end="")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
