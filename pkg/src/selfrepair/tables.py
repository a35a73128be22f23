"""Reference four-year reliability tables (nines intervals and printed overheads)."""

from __future__ import annotations

from dataclasses import dataclass

from .codes import ArrayScheme, build_scheme


@dataclass(frozen=True)
class TableRow:
    scheme: ArrayScheme
    spares: int | None
    overhead: str  # as printed
    nines_ci: tuple[float, float]


def _twod(n, spares, overhead, ci):
    return TableRow(build_scheme("twod", n), spares, overhead, ci)


def _groups(variant, m, n, spares, overhead, ci):
    return TableRow(build_scheme(variant, n, m), spares, overhead, ci)


TABLES = {
    1: (
        "Two-dimensional self-repairing arrays",
        [
            _twod(7, 19, "55.32%", (4.99, 5.05)),
            _twod(7, 20, "56.25%", (5.17, 5.25)),
            _twod(8, 23, "52.54%", (5.00, 5.06)),
            _twod(8, 24, "53.33%", (5.12, 5.20)),
            _twod(9, 27, "50.00%", (4.89, 4.94)),
            _twod(9, 28, "50.68%", (5.03, 5.09)),
            _twod(10, 33, "48.86%", (4.98, 5.04)),
            _twod(10, 34, "49.44%", (5.07, 5.13)),
            _twod(11, 53, "53.78%", (4.98, 5.04)),
            _twod(11, 54, "54.17%", (5.00, 5.06)),
            _twod(12, None, "∞", (4.79, 4.84)),
        ],
    ),
    2: (
        "Sets of RAID level 6 arrays with 12 disks each",
        [
            _groups("raid6", 1, 12, 18, "66.67%", (5.02, 5.09)),
            _groups("raid6", 2, 12, None, "∞", (4.48, 4.84)),
            _groups("raid6", 3, 12, None, "∞", (4.35, 4.64)),
            _groups("raid6", 4, 12, None, "∞", (4.33, 4.63)),
        ],
    ),
    3: (
        "Sets of triple-parity arrays with 15 disks each",
        [
            _groups("tp", 1, 15, 13, "57.14%", (4.98, 5.17)),
            _groups("tp", 1, 15, 14, "58.62%", (5.36, 5.66)),
            _groups("tp", 2, 15, 20, "52.00%", (4.90, 5.19)),
            _groups("tp", 3, 15, 26, "49.30%", (4.98, 5.30)),
            _groups("tp", 3, 15, 27, "50.00%", (5.23, 5.97)),
        ],
    ),
}


def intervals_overlap(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]
