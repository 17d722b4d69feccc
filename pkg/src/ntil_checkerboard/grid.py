"""Grid geometry: parity classes, the four line families and collinearity.

Colour convention: ``eps = 0`` is the class containing the corner (0, 0), so
for odd ``n`` it is the fat class.  Points are listed row-major (y outer).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, NamedTuple

ROW, COLUMN, DIAG_PLUS, DIAG_MINUS = "row", "column", "diagPlus", "diagMinus"
FAMILIES = (ROW, COLUMN, DIAG_PLUS, DIAG_MINUS)


class GridPoint(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class ParityClass:
    n: int
    eps: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")

    def __contains__(self, pt) -> bool:
        x, y = pt
        return 0 <= x < self.n and 0 <= y < self.n and (x + y) % 2 == self.eps

    @property
    def size(self) -> int:
        n2 = self.n * self.n
        return (n2 + 1) // 2 if self.eps == 0 else n2 // 2


@dataclass(frozen=True)
class LineId:
    """A line of one of the four families.

    ``offset`` is y for rows, x for columns, x - y for diagPlus and x + y for
    diagMinus."""

    family: str
    offset: int

    def contains(self, pt) -> bool:
        x, y = pt
        if self.family == ROW:
            return y == self.offset
        if self.family == COLUMN:
            return x == self.offset
        if self.family == DIAG_PLUS:
            return x - y == self.offset
        if self.family == DIAG_MINUS:
            return x + y == self.offset
        raise ValueError(f"unknown family {self.family!r}")

    def in_range(self, n: int) -> bool:
        if self.family in (ROW, COLUMN):
            return 0 <= self.offset < n
        if self.family == DIAG_PLUS:
            return -(n - 1) <= self.offset <= n - 1
        return 0 <= self.offset <= 2 * n - 2


def class_points(pc: ParityClass) -> list[GridPoint]:
    return [GridPoint(x, y) for y in range(pc.n) for x in range(pc.n) if (x + y) % 2 == pc.eps]


def grid_points(n: int) -> list[GridPoint]:
    return [GridPoint(x, y) for y in range(n) for x in range(n)]


def family_lines(family: str, n: int) -> list[LineId]:
    if family in (ROW, COLUMN):
        offs = range(n)
    elif family == DIAG_PLUS:
        offs = range(-(n - 1), n)
    elif family == DIAG_MINUS:
        offs = range(0, 2 * n - 1)
    else:
        raise ValueError(f"unknown family {family!r}")
    return [LineId(family, c) for c in offs]


def all_lines(n: int) -> list[LineId]:
    return [line for fam in FAMILIES for line in family_lines(fam, n)]


def lines_through(pt) -> tuple[LineId, LineId, LineId, LineId]:
    x, y = pt
    return (LineId(ROW, y), LineId(COLUMN, x), LineId(DIAG_PLUS, x - y), LineId(DIAG_MINUS, x + y))


def line_points(line: LineId, n: int) -> list[GridPoint]:
    return [p for p in grid_points(n) if line.contains(p)]


def collinear(a, b, c) -> bool:
    if a == b or a == c or b == c:
        raise ValueError("collinear() needs three distinct points")
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) == 0


def line_through(a, b) -> tuple[int, int, int]:
    """Normalized integer line (A, B, C) with A x + B y = C through a != b.

    gcd(A, B, C) = 1 and the first nonzero of (A, B) is positive."""
    if a == b:
        raise ValueError("line_through() needs two distinct points")
    A = b[1] - a[1]
    B = a[0] - b[0]
    C = A * a[0] + B * a[1]
    g = gcd(gcd(A, B), C)
    A, B, C = A // g, B // g, C // g
    if A < 0 or (A == 0 and B < 0):
        A, B, C = -A, -B, -C
    return A, B, C


def line_monochromatic(line: LineId, n: int) -> bool:
    """True iff every grid point of ``line`` has the same colour."""
    pts = line_points(line, n)
    return len({(x + y) % 2 for x, y in pts}) <= 1


def diagonal_capacities(n: int, eps: int, family: str = DIAG_PLUS) -> dict[int, int]:
    """NTIL capacity min(|D cap C_eps|, 2) of each nonempty diagonal in ``family``."""
    pc = ParityClass(n, eps)
    out = {}
    for line in family_lines(family, n):
        k = sum(1 for p in line_points(line, n) if p in pc)
        if k:
            out[line.offset] = min(k, 2)
    return out


def capacity_bound(n: int) -> int:
    """The diagonal capacity bound 2n - 2 on any monochromatic NTIL set."""
    if n < 2:
        raise ValueError("capacity bound needs n >= 2")
    return 2 * n - 2


def capacity_accounting(n: int, eps: int) -> dict[str, int]:
    """Per-family breakdown of the slope +1 capacity: singleton diagonals
    contribute 1, the rest 2."""
    caps = diagonal_capacities(n, eps)
    singles = sum(1 for k in caps.values() if k == 1)
    doubles = sum(1 for k in caps.values() if k == 2)
    return {"diagonals": len(caps), "singletons": singles, "full": doubles, "total": singles + 2 * doubles}


def symmetries(n: int):
    """The 8 symmetries of the n x n square as point maps."""
    s = n - 1
    return [
        lambda x, y: (x, y),
        lambda x, y: (s - y, x),
        lambda x, y: (s - x, s - y),
        lambda x, y: (y, s - x),
        lambda x, y: (s - x, y),
        lambda x, y: (x, s - y),
        lambda x, y: (y, x),
        lambda x, y: (s - y, s - x),
    ]


def colour_preserving_symmetries(n: int, eps: int):
    pc = ParityClass(n, eps)
    probe = class_points(pc)
    return [g for g in symmetries(n) if all(g(*p) in pc for p in probe)]


def format_points_tsv(points: Iterable) -> str:
    return "".join(f"{x}\t{y}\n" for x, y in points)


def parse_points_tsv(text: str) -> list[GridPoint]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        x, y = line.split("\t")
        out.append(GridPoint(int(x), int(y)))
    return out
