"""Closed-form fatal fractions for sets of ``m`` identical parity groups.

A k-failure pattern is fatal when some group loses more disks than its
parity equivalents.  The counts below enumerate the ways the largest
group's share of the k failures can exceed that threshold.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .codes import SurvivalProfile


def _check(m: int, n: int, k: int, n_min: int):
    if m < 1:
        raise ValueError(f"group count must be at least 1, got {m}")
    if n < n_min:
        raise ValueError(f"need at least {n_min} disks per group, got {n}")
    if m * n < k:
        raise ValueError(f"cannot place {k} failures on {m * n} disks")


def raid6_fatal_fraction(m: int, n: int, k: int) -> Fraction:
    if k not in (3, 4, 5):
        raise ValueError(f"RAID-6 fractions are defined for k in 3..5, got {k}")
    _check(m, n, k, 3)
    if k == 3:
        fatal = m * comb(n, 3)
    elif k == 4:
        fatal = m * comb(n, 4) + m * (m - 1) * n * comb(n, 3)
    else:
        fatal = (m * comb(n, 5) + m * (m - 1) * n * comb(n, 4)
                 + m * comb((m - 1) * n, 2) * comb(n, 3))
    return Fraction(fatal, comb(m * n, k))


def triple_parity_fatal_fraction(m: int, n: int, k: int) -> Fraction:
    if k not in (4, 5, 6):
        raise ValueError(f"triple-parity fractions are defined for k in 4..6, got {k}")
    _check(m, n, k, 4)
    if k == 4:
        fatal = m * comb(n, 4)
    elif k == 5:
        fatal = m * comb(n, 5) + m * (m - 1) * n * comb(n, 4)
    else:
        fatal = (m * comb(n, 6) + m * (m - 1) * n * comb(n, 5)
                 + m * comb((m - 1) * n, 2) * comb(n, 4))
    return Fraction(fatal, comb(m * n, k))


def fatal_fraction(m: int, n: int, parity_equiv: int, k: int) -> Fraction:
    if parity_equiv == 2:
        return raid6_fatal_fraction(m, n, k)
    if parity_equiv == 3:
        return triple_parity_fatal_fraction(m, n, k)
    raise ValueError(f"parity_equiv must be 2 or 3, got {parity_equiv}")


def profile_from_closed_form(m: int, n: int, parity_equiv: int) -> SurvivalProfile:
    fractions = []
    for j in (1, 2, 3):
        k = parity_equiv + j
        # patterns larger than the array cannot occur; treat them as certain loss
        fractions.append(Fraction(0) if k > m * n else 1 - fatal_fraction(m, n, parity_equiv, k))
    return SurvivalProfile(m * n, parity_equiv, tuple(fractions), method="closed-form")
