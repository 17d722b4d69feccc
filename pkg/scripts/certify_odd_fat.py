"""Run the continuum certificate pipeline and write the TSV package.

    python scripts/certify_odd_fat.py --out odd_fat_certificate
"""

import argparse
import sys
import time
from pathlib import Path

from ntil_checkerboard.certificate import verify_all
from ntil_checkerboard.export import report_text, write_certificate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("out/odd_fat_certificate"))
    args = ap.parse_args()

    t0 = time.monotonic()
    rep = verify_all()
    write_certificate(rep, args.out)
    print(report_text(rep), end="")
    print(f"wrote {args.out} in {time.monotonic() - t0:.1f}s")
    return 0 if rep.verdict else 1


if __name__ == "__main__":
    sys.exit(main())
