"""Command-line front end.

Exit status: 0 on success, 1 when a certificate/audit verdict is false,
2 on a usage error.  Every file lands under ``--out`` (default ./out).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import round_decimal
from .certificate import compute_constants, derivation_audit, verify_all
from .export import export_tables, profiles_tsv, write_certificate
from .grid import format_points_tsv
from .lp import OPTIMAL, check_certificate
from .relaxation import (
    CASE_ALIASES, ODD_FAT, ReducedDualCase, build_four_direction, curvature_diagnostic, dual_cover_check,
    solve_four_direction, solve_reduced,
)
from .search import max_ntil, verify_ntil

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# index windows of the interior active ranges, by m
DEFAULT_WINDOWS = {40: ((30, 38), (15, 22)), 80: ((60, 78), (30, 44)), 120: ((90, 118), (45, 66)), 160: ((120, 158), (60, 88))}

# exhaustive search without a budget is only allowed below this n
UNBUDGETED_MAX_N = 12


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    eps: int | None = None
    m: int | None = None
    case: str | None = None
    a_window: tuple[int, int] | None = None
    b_window: tuple[int, int] | None = None
    budget: float | None = None
    max_n: int = 16
    out: Path = field(default_factory=lambda: Path("out"))
    witness_out: str | None = None
    profiles_out: str | None = None
    digits: int = 15
    threads: int = 1

    def validate(self):
        if self.digits < 0 or self.threads < 1:
            raise UsageError("--digits must be >= 0 and --threads >= 1")
        if self.budget is not None and self.budget <= 0:
            raise UsageError("--budget must be positive")
        if self.command in ("search", "lp"):
            if self.n is None or self.n < 2:
                raise UsageError("--n must be at least 2")
            if self.eps not in (0, 1):
                raise UsageError("--eps must be 0 or 1")
        if self.command == "search" and self.n > UNBUDGETED_MAX_N and self.budget is None:
            raise UsageError(f"search with n > {UNBUDGETED_MAX_N} needs --budget SECONDS")
        if self.command in ("reduced", "diagnose"):
            if self.case not in CASE_ALIASES:
                raise UsageError("--case must be fat, thin or even")
            if self.m is None or self.m < 1:
                raise UsageError("--m must be positive")
        if self.command == "diagnose":
            if CASE_ALIASES[self.case] != ODD_FAT:
                raise UsageError("diagnose supports --case fat only")
            if self.a_window is None or self.b_window is None:
                if self.m not in DEFAULT_WINDOWS:
                    raise UsageError(f"no default windows for m={self.m}; pass --a-window and --b-window")
        if self.command == "export-tables" and self.max_n < 2:
            raise UsageError("--max-n must be at least 2")


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO..HI, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ntil-checkerboard", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory (default ./out)")
        p.add_argument("--digits", type=int, default=15, help="decimal places in reports (default 15)")
        p.add_argument("--threads", type=int, default=1, help="worker processes for the search (default 1)")
        return p

    p = common(sub.add_parser("search", help="exact maximum NTIL subset of one colour class"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=int, required=True)
    p.add_argument("--budget", type=float, help="time budget in seconds")
    p.add_argument("--witness-out", help="write the witness points as TSV (relative to --out)")

    p = common(sub.add_parser("lp", help="four-direction LP optimum"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=int, required=True)

    p = common(sub.add_parser("reduced", help="symmetry-reduced dual LP"))
    p.add_argument("--case", required=True, choices=["fat", "thin", "even"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--profiles-out", help="write the optimal profiles as TSV (relative to --out)")

    p = common(sub.add_parser("diagnose", help="second-difference diagnostic on reduced profiles"))
    p.add_argument("--case", required=True, choices=["fat"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a-window", type=_window)
    p.add_argument("--b-window", type=_window)

    common(sub.add_parser("certify", help="verify the continuum dual certificate and write the TSV package"))
    common(sub.add_parser("audit", help="check the stationarity-system residuals"))

    p = common(sub.add_parser("export-tables", help="LP bound vs exact maximum for 2 <= n <= max-n"))
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--budget", type=float, help="per-search time budget in seconds")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(**{k: v for k, v in vars(ns).items()})


def _under(out: Path, name: str) -> Path:
    path = out / name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def run(cfg: RunConfig, stdout=None) -> int:
    out = stdout or sys.stdout
    cfg.validate()
    cmd = cfg.command

    if cmd == "search":
        w = max_ntil(cfg.n, cfg.eps, time_budget=cfg.budget, workers=cfg.threads)
        if not verify_ntil(w):
            print("witness failed verification", file=out)
            return EXIT_FAIL
        print(str(w.size) if w.exact else f">={w.size}", file=out)
        text = format_points_tsv(w.points)
        if cfg.witness_out:
            _under(cfg.out, cfg.witness_out).write_bytes(text.encode("ascii"))
        else:
            out.write(text)
        return EXIT_OK

    if cmd == "lp":
        sol, weights = solve_four_direction(cfg.n, cfg.eps)
        if sol.status != OPTIMAL:
            print(sol.status, file=out)
            return EXIT_FAIL
        ok = check_certificate(build_four_direction(cfg.n, cfg.eps), sol) and dual_cover_check(cfg.n, cfg.eps, weights)
        print(f"{sol.value}\t{round_decimal(sol.value, 3)}", file=out)
        return EXIT_OK if ok else EXIT_FAIL

    if cmd == "reduced":
        case = ReducedDualCase(CASE_ALIASES[cfg.case], cfg.m)
        sol = solve_reduced(case)
        print(f"{case.kind}\tm={case.m}\tn={case.n}", file=out)
        print(f"value\t{sol.value}\t{round_decimal(sol.value, cfg.digits)}", file=out)
        ratio = sol.value / case.n
        print(f"ratio\t{ratio}\t{round_decimal(ratio, cfg.digits)}", file=out)
        if cfg.profiles_out:
            _under(cfg.out, cfg.profiles_out).write_bytes(profiles_tsv(sol, cfg.digits).encode("ascii"))
        return EXIT_OK

    if cmd == "diagnose":
        case = ReducedDualCase(ODD_FAT, cfg.m)
        aw, bw = DEFAULT_WINDOWS.get(cfg.m, (None, None))
        aw, bw = cfg.a_window or aw, cfg.b_window or bw
        sol = solve_reduced(case)
        try:
            rep = curvature_diagnostic(sol, aw, bw)
        except ValueError as exc:
            raise UsageError(str(exc))
        d = min(cfg.digits, 10)
        print(f"a_window\t{aw[0]}..{aw[1]}\tb_window\t{bw[0]}..{bw[1]}", file=out)
        print(f"m2_avg_d2a\t{round_decimal(rep.a_scaled, d)}", file=out)
        print(f"m2_avg_d2b\t{round_decimal(rep.b_scaled, d)}", file=out)
        print(f"ratio\t{'undefined' if rep.ratio is None else round_decimal(rep.ratio, d)}", file=out)
        return EXIT_OK

    if cmd == "certify":
        rep = verify_all()
        write_certificate(rep, cfg.out, cfg.digits)
        counts = rep.coefficient_counts()
        print(f"verdict\t{'true' if rep.verdict else 'false'}", file=out)
        print(f"cells {rep.cell_count} triangles {rep.triangle_count} coefficients {counts['total']} "
              f"zero {counts['zero']} positive {counts['positive']} negative {counts['negative']}", file=out)
        if rep.alpha is not None:
            print(f"alpha\t{rep.alpha.decimal(cfg.digits)}", file=out)
        for msg in rep.failures:
            print(f"failure\t{msg}", file=out)
        return EXIT_OK if rep.verdict else EXIT_FAIL

    if cmd == "audit":
        entries = derivation_audit(compute_constants())
        for name, ok in entries:
            print(f"{'ok' if ok else 'FAIL'}\t{name}", file=out)
        return EXIT_OK if all(ok for _, ok in entries) else EXIT_FAIL

    if cmd == "export-tables":
        text = export_tables(cfg.max_n, cfg.budget, cfg.threads)
        _under(cfg.out, "table_lp_vs_search.tsv").write_bytes(text.encode("ascii"))
        out.write(text)
        return EXIT_OK

    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return run(config_from_args(ns))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
