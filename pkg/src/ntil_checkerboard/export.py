"""TSV emission and parsing for the certificate package, reduced profiles and
the small-n comparison table.

All files are ASCII with LF line endings and start with a header row.
Rationals are written "num/den"; field elements as three such coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from pathlib import Path

from .algebra import CubicField, FieldElem, format_rational, parse_rational, round_decimal
from .certificate import IJK, SIGN_CHAR, CertificateReport
from .lp import OPTIMAL
from .relaxation import ProfileSolution, solve_four_direction
from .search import max_ntil

CERTIFICATE_FILES = ("constants.tsv", "sign_checks.tsv", "triangles.tsv", "bernstein_coefficients.tsv", "report.txt")
_CHAR_SIGN = {v: k for k, v in SIGN_CHAR.items()}


def _tsv(rows) -> str:
    return "".join("\t".join(str(x) for x in row) + "\n" for row in rows)


def _rows(text: str) -> list[list[str]]:
    lines = text.splitlines()
    return [line.split("\t") for line in lines[1:] if line]


def _coeffs(x: FieldElem) -> list[str]:
    return [format_rational(c) for c in x.coeffs]


def _triple(x: FieldElem) -> str:
    return ",".join(_coeffs(x))


def _parse_triple(field: CubicField, text: str) -> FieldElem:
    return field(*(parse_rational(t) for t in text.split(",")))


# ---------------------------------------------------------------------------
# certificate package
# ---------------------------------------------------------------------------


def constants_tsv(rep: CertificateReport, digits: int = 15) -> str:
    k = rep.constants
    rows = [("name", "c0", "c1", "c2", "decimal")]
    iv = k.p_interval
    rows.append(("p", format_rational(iv.lo), format_rational(iv.hi), "", "interval"))
    for name, val in k.items():
        if name != "p":
            rows.append((name, *_coeffs(val), val.decimal(digits)))
    if rep.alpha is not None:
        rows.append(("alpha", *_coeffs(rep.alpha), rep.alpha.decimal(digits)))
    return _tsv(rows)


def parse_constants_tsv(field: CubicField, text: str) -> dict[str, FieldElem]:
    """Constants by name; p is rebuilt as the field generator after checking
    that its interval row brackets the field's own root."""
    out = {}
    for name, c0, c1, c2, dec in _rows(text):
        if name == "p":
            lo, hi = parse_rational(c0), parse_rational(c1)
            if not lo <= field.interval.lo < field.interval.hi <= hi:
                raise ValueError("p interval does not match the field")
            out["p"] = field.gen
        else:
            out[name] = field(parse_rational(c0), parse_rational(c1), parse_rational(c2))
    return out


def sign_checks_tsv(rep: CertificateReport) -> str:
    rows = [("name", "expected", "computed", "pass")]
    for chk in rep.sign_checks:
        rows.append((chk.name, SIGN_CHAR[chk.expected], SIGN_CHAR[chk.computed], "true" if chk.passed else "false"))
    return _tsv(rows)


def triangles_tsv(rep: CertificateReport) -> str:
    rows = [("tri_id", "cell_id", "u0 v0", "u1 v1", "u2 v2")]
    for tri in rep.triangles:
        rows.append((tri.id, tri.cell_id, *(f"{_triple(u)} {_triple(v)}" for u, v in tri.vertices)))
    return _tsv(rows)


def parse_triangles_tsv(field: CubicField, text: str) -> list[tuple[int, int, list[tuple[FieldElem, FieldElem]]]]:
    out = []
    for tid, cid, *verts in _rows(text):
        pts = []
        for cell in verts:
            u, v = cell.split(" ")
            pts.append((_parse_triple(field, u), _parse_triple(field, v)))
        out.append((int(tid), int(cid), pts))
    return out


def bernstein_tsv(rep: CertificateReport) -> str:
    rows = [("tri_id", "ijk", "c0", "c1", "c2", "sign")]
    for rec in rep.bernstein:
        for key in IJK:
            rows.append((rec.triangle_id, key, *_coeffs(rec.coefficients[key]), SIGN_CHAR[rec.signs[key]]))
    return _tsv(rows)


def parse_bernstein_tsv(field: CubicField, text: str) -> list[tuple[int, str, FieldElem, int]]:
    return [
        (int(tid), ijk, field(parse_rational(c0), parse_rational(c1), parse_rational(c2)), _CHAR_SIGN[s])
        for tid, ijk, c0, c1, c2, s in _rows(text)
    ]


def report_text(rep: CertificateReport, digits: int = 15) -> str:
    counts = rep.coefficient_counts()
    lines = [
        f"verdict\t{'true' if rep.verdict else 'false'}",
        f"cells\t{rep.cell_count}",
        f"triangles\t{rep.triangle_count}",
        f"bernstein_coefficients\t{counts['total']}",
        f"zero\t{counts['zero']}",
        f"positive\t{counts['positive']}",
        f"negative\t{counts['negative']}",
        f"sign_checks_passed\t{sum(c.passed for c in rep.sign_checks)}/{len(rep.sign_checks)}",
        f"audit_passed\t{sum(ok for _, ok in rep.audit)}/{len(rep.audit)}",
    ]
    if rep.alpha is not None:
        coeffs = ",".join(str(int(c)) for c in reversed(rep.alpha_minpoly.coeffs))
        lines += [
            f"alpha\t{rep.alpha.decimal(digits)}",
            f"alpha_minpoly_high_first\t{coeffs}",
        ]
        if rep.alpha_root_index is not None:
            lines.append(f"alpha_root\t{rep.alpha_root_index + 1} of {rep.alpha_real_roots} real roots")
    if rep.constants is not None:
        lines.append(f"ell_sign\t{SIGN_CHAR[rep.constants.ell.sign()]}")
    for msg in rep.failures:
        lines.append(f"failure\t{msg}")
    return "\n".join(lines) + "\n"


def write_certificate(rep: CertificateReport, out: Path, digits: int = 15) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    texts = {
        "constants.tsv": constants_tsv(rep, digits) if rep.constants is not None else "",
        "sign_checks.tsv": sign_checks_tsv(rep),
        "triangles.tsv": triangles_tsv(rep),
        "bernstein_coefficients.tsv": bernstein_tsv(rep),
        "report.txt": report_text(rep, digits),
    }
    paths = []
    for name in CERTIFICATE_FILES:
        path = out / name
        path.write_bytes(texts[name].encode("ascii"))
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


def profiles_tsv(sol: ProfileSolution, digits: int = 15) -> str:
    names = ["a", "b"] + (["c"] if sol.case.kind == "even" else [])
    cols = [sol.a, sol.b, sol.c][: len(names)]
    rows = [["index", *names, *(f"{x}_decimal" for x in names)]]
    for i in range(max(len(c) for c in cols)):
        exact = [format_rational(c[i]) if i < len(c) else "" for c in cols]
        dec = [round_decimal(c[i], digits) if i < len(c) else "" for c in cols]
        rows.append([i, *exact, *dec])
    return _tsv(rows)


def parse_profiles_tsv(text: str) -> dict[str, list[Fraction]]:
    lines = text.splitlines()
    header = lines[0].split("\t")
    names = [h for h in header[1:] if not h.endswith("_decimal")]
    out: dict[str, list[Fraction]] = {k: [] for k in names}
    for row in _rows(text):
        for k, cell in zip(names, row[1:]):
            if cell:
                out[k].append(parse_rational(cell))
    return out


# ---------------------------------------------------------------------------
# small-n comparison table
# ---------------------------------------------------------------------------


@dataclass
class TableRow:
    n: int
    lp: tuple[Fraction, Fraction]
    d: tuple[int, int]
    exact: tuple[bool, bool]

    def floor_gap(self, eps: int) -> int:
        return floor(self.lp[eps]) - self.d[eps]


def table_row(n: int, budget: float | None = None, workers: int = 1) -> TableRow:
    lp, d, exact = [], [], []
    for eps in (0, 1):
        sol, _ = solve_four_direction(n, eps)
        if sol.status != OPTIMAL:
            raise RuntimeError(f"four-direction LP at n={n}, eps={eps} is {sol.status}")
        w = max_ntil(n, eps, time_budget=budget, workers=workers)
        lp.append(sol.value)
        d.append(w.size)
        exact.append(w.exact)
    return TableRow(n, tuple(lp), tuple(d), tuple(exact))


def table_tsv(rows: list[TableRow]) -> str:
    """Truncated searches print their D value as ">=D" (a lower bound)."""
    out = [("n", "L0", "L0_decimal", "D0", "L1", "L1_decimal", "D1")]
    for r in rows:
        cells = [r.n]
        for eps in (0, 1):
            d = str(r.d[eps]) if r.exact[eps] else f">={r.d[eps]}"
            cells += [format_rational(r.lp[eps]), round_decimal(r.lp[eps], 3), d]
        out.append(cells)
    return _tsv(out)


def export_tables(max_n: int, budget: float | None = None, workers: int = 1) -> str:
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    return table_tsv([table_row(n, budget, workers) for n in range(2, max_n + 1)])
