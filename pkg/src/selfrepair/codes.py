"""Array geometries and exact erasure decodability.

A complete two-dimensional array with ``n`` parity stripes has one parity
disk per stripe and one data disk at every intersection of two stripes.  Its
parity-check structure has one row per stripe: the column of parity disk
``P_i`` is the unit vector ``e_i`` and the column of data disk ``D_ij`` is
``e_i + e_j``.  An erasure pattern is decodable iff its columns are linearly
independent over GF(2).

Group schemes (``m`` RAID-6 or triple-parity groups of ``n`` disks) are MDS
per group, so a pattern is decodable iff no group loses more disks than it
has parity equivalents.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels

DEFAULT_BUDGET = 30_000_000

TWOD = "twod"
RAID6 = "raid6"
TRIPLE = "tp"

_PARITY_EQUIV = {RAID6: 2, TRIPLE: 3}
_GROUP_MIN = {RAID6: 4, TRIPLE: 5}


class EnumerationBudgetExceeded(ValueError):
    def __init__(self, subsets: int, budget: int):
        super().__init__(
            f"exhaustive enumeration needs {subsets:,} subsets, over the budget of "
            f"{budget:,}; enable sampling to estimate the profile instead"
        )
        self.subsets = subsets
        self.budget = budget


@dataclass(frozen=True, order=True)
class DiskPosition:
    """``kind`` is ``"D"`` (data, a < b), ``"P"`` (parity, b unused) or ``"G"`` (group a, slot b)."""

    kind: str
    a: int
    b: int = 0

    @classmethod
    def data(cls, i: int, j: int) -> "DiskPosition":
        if i == j:
            raise ValueError("a data disk sits at the intersection of two distinct stripes")
        return cls("D", min(i, j), max(i, j))

    @classmethod
    def parity(cls, i: int) -> "DiskPosition":
        return cls("P", i)

    @classmethod
    def member(cls, group: int, slot: int) -> "DiskPosition":
        return cls("G", group, slot)

    def __str__(self):
        if self.kind == "D":
            return f"D{self.a}_{self.b}"
        if self.kind == "P":
            return f"P{self.a}"
        return f"G{self.a}.{self.b}"


@dataclass(frozen=True)
class ArrayScheme:
    variant: str
    n: int
    m: int = 1
    positions: tuple[DiskPosition, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.variant == TWOD:
            n = self.n
            pos = [DiskPosition.data(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)]
            pos += [DiskPosition.parity(i) for i in range(1, n + 1)]
        else:
            pos = [DiskPosition.member(g, k) for g in range(self.m) for k in range(self.n)]
        object.__setattr__(self, "positions", tuple(pos))
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(pos)})

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def parity_equiv(self) -> int:
        """Parity disks per group, or stripes for the 2D scheme."""
        return self.n if self.variant == TWOD else _PARITY_EQUIV[self.variant]

    @property
    def parity_count(self) -> int:
        return self.n if self.variant == TWOD else self.m * _PARITY_EQUIV[self.variant]

    @property
    def data_count(self) -> int:
        return self.size - self.parity_count

    @property
    def tolerance(self) -> int:
        """Number of simultaneous failures always survived (n_f)."""
        return 2 if self.variant == TWOD else _PARITY_EQUIV[self.variant]

    @property
    def descriptor(self) -> str:
        if self.variant == TWOD:
            return f"twod:{self.n}"
        return f"{self.variant}:{self.m}x{self.n}"

    def index(self, position: DiskPosition | int) -> int:
        if isinstance(position, (int, np.integer)):
            if not 0 <= position < self.size:
                raise ValueError(f"position index {position} outside scheme of size {self.size}")
            return int(position)
        try:
            return self._index[position]
        except KeyError:
            raise ValueError(f"{position} is not a position of {self.descriptor}") from None

    def columns(self) -> list[int]:
        """Parity-check columns as bit masks (bit ``i-1`` is stripe ``i``); 2D only."""
        if self.variant != TWOD:
            raise ValueError("group schemes have no binary parity-check structure")
        cols = []
        for p in self.positions:
            if p.kind == "D":
                cols.append((1 << (p.a - 1)) | (1 << (p.b - 1)))
            else:
                cols.append(1 << (p.a - 1))
        return cols

    def parity_check_rows(self) -> list[int]:
        """One bit vector of length N per stripe (bit ``c`` set iff column ``c`` touches it)."""
        rows = [0] * self.n
        for c, col in enumerate(self.columns()):
            for i in range(self.n):
                if col >> i & 1:
                    rows[i] |= 1 << c
        return rows

    def group_of(self, index: int) -> int:
        return index // self.n


def build_scheme(variant: str, n: int, m: int = 1) -> ArrayScheme:
    if variant == TWOD:
        if n < 3:
            raise ValueError(f"a 2D array needs at least 3 parity stripes, got {n}")
        return ArrayScheme(TWOD, n)
    if variant not in _PARITY_EQUIV:
        raise ValueError(f"unknown scheme variant {variant!r}")
    if m < 1:
        raise ValueError(f"group count must be at least 1, got {m}")
    if n < _GROUP_MIN[variant]:
        raise ValueError(
            f"{variant} groups need at least {_GROUP_MIN[variant]} disks each, got {n}")
    return ArrayScheme(variant, n, m)


def parse_scheme(text: str) -> ArrayScheme:
    """Parse descriptors such as ``twod:10``, ``raid6:2x12`` or ``tp:1x15``."""
    try:
        variant, _, shape = text.strip().partition(":")
        variant = variant.lower()
        if variant == TWOD:
            return build_scheme(TWOD, int(shape))
        m, _, n = shape.lower().partition("x")
        return build_scheme(variant, int(n), int(m))
    except ValueError as exc:
        raise ValueError(f"bad scheme descriptor {text!r}: {exc}") from None


def gf2_independent(columns: Iterable[int]) -> bool:
    basis: list[int] = []
    for c in columns:
        for b in basis:
            c = min(c, c ^ b)
        if c == 0:
            return False
        basis.append(c)
    return True


def is_recoverable(scheme: ArrayScheme, erased: Iterable[DiskPosition | int]) -> bool:
    idx = {scheme.index(p) for p in erased}
    if scheme.variant == TWOD:
        cols = scheme.columns()
        return gf2_independent(cols[i] for i in idx)
    counts: dict[int, int] = {}
    for i in idx:
        g = scheme.group_of(i)
        counts[g] = counts.get(g, 0) + 1
    return all(c <= scheme.parity_equiv for c in counts.values())


def peel_recoverable(scheme: ArrayScheme, erased: Iterable[DiskPosition | int]) -> bool:
    """Iterative peeling: repair any stripe holding exactly one erasure until stuck."""
    if scheme.variant != TWOD:
        raise ValueError("peeling is defined for the 2D parity-check structure only")
    cols = scheme.columns()
    left = {scheme.index(p) for p in erased}
    progress = True
    while left and progress:
        progress = False
        for stripe in range(scheme.n):
            hit = [i for i in left if cols[i] >> stripe & 1]
            if len(hit) == 1:
                left.discard(hit[0])
                progress = True
    return not left


def fatal_triple_count_closed(n: int) -> int:
    """Data disk plus its two parity disks, or three data disks of one triangle."""
    if n < 3:
        raise ValueError(f"need at least 3 stripes, got {n}")
    return math.comb(n, 2) + math.comb(n, 3)


def recoverable_counts(scheme: ArrayScheme, max_size: int) -> list[int]:
    """Number of decodable erasure patterns of each size ``0..max_size``."""
    if scheme.variant == TWOD:
        return kernels.count_recoverable(0, scheme.columns(), 0, 0, scheme.size, max_size)
    return kernels.count_recoverable(
        1, [], scheme.n, scheme.parity_equiv, scheme.size, max_size)


@dataclass(frozen=True)
class SurvivalProfile:
    """Five-number characterization: size, n_f and the surviving fractions f1..f3."""

    size: int
    n_f: int
    fractions: tuple  # Fraction when exact, float when sampled
    stderr: tuple | None = None
    method: str = "enumeration"

    def __post_init__(self):
        if len(self.fractions) != 3:
            raise ValueError("a survival profile carries exactly three fractions")
        if any(not 0 <= f <= 1 for f in self.fractions):
            raise ValueError("fractions must lie in [0, 1]")

    @property
    def f1(self):
        return self.fractions[0]

    @property
    def f2(self):
        return self.fractions[1]

    @property
    def f3(self):
        return self.fractions[2]

    @property
    def exact(self) -> bool:
        return all(isinstance(f, Fraction) for f in self.fractions)

    def conditional_ratios(self) -> tuple[float, float, float]:
        """Probability of surviving the step to n_f + j given survival at n_f + j - 1."""
        out = []
        prev = 1
        for f in self.fractions:
            out.append(float(Fraction(f) / Fraction(prev)) if prev else 0.0)
            prev = f
        return tuple(out)


def _stratified_fraction(scheme: ArrayScheme, k: int, samples: int,
                         rng: np.random.Generator) -> tuple[float, float]:
    """Estimate the decodable share of k-subsets, stratified by parity-disk count."""
    N = scheme.size
    if scheme.variant == TWOD:
        parity = np.arange(scheme.data_count, N)
        data = np.arange(scheme.data_count)
    else:
        parity, data = np.arange(0), np.arange(N)
    total = math.comb(N, k)
    estimate = 0.0
    variance = 0.0
    for h in range(0, min(k, len(parity)) + 1):
        weight = math.comb(len(parity), h) * math.comb(len(data), k - h) / total
        if weight == 0:
            continue
        n_h = max(2, round(samples * weight))
        hits = 0
        for _ in range(n_h):
            pick = list(rng.choice(parity, h, replace=False)) + list(rng.choice(data, k - h, replace=False))
            hits += is_recoverable(scheme, (int(i) for i in pick))
        p = hits / n_h
        estimate += weight * p
        variance += weight * weight * p * (1 - p) / (n_h - 1)
    return estimate, math.sqrt(variance)


def survival_profile(scheme: ArrayScheme, budget: int = DEFAULT_BUDGET,
                     allow_sampling: bool = False, samples: int = 200_000,
                     seed: int = 0) -> SurvivalProfile:
    n_f = scheme.tolerance
    N = scheme.size
    sizes = [n_f + j for j in (1, 2, 3)]
    exact_upto = n_f
    for k in sizes:
        if k <= N and math.comb(N, k) > budget:
            break
        exact_upto = k
    if exact_upto < sizes[-1] and not allow_sampling:
        raise EnumerationBudgetExceeded(math.comb(N, sizes[-1]), budget)

    counts = recoverable_counts(scheme, min(exact_upto, N))
    fractions: list = []
    errors: list[float] = []
    rng = np.random.default_rng(seed)
    for k in sizes:
        if k > N:
            fractions.append(Fraction(0))
            errors.append(0.0)
        elif k <= exact_upto:
            fractions.append(Fraction(counts[k], math.comb(N, k)))
            errors.append(0.0)
        else:
            est, se = _stratified_fraction(scheme, k, samples, rng)
            fractions.append(est)
            errors.append(se)
    if all(isinstance(f, Fraction) for f in fractions):
        return SurvivalProfile(N, n_f, tuple(fractions))
    return SurvivalProfile(N, n_f, tuple(fractions), tuple(errors), method="sampling")


def fatal_patterns(scheme: ArrayScheme, k: int) -> Iterable[tuple[int, ...]]:
    """All undecodable k-subsets, by brute force; meant for small schemes."""
    for combo in itertools.combinations(range(scheme.size), k):
        if not is_recoverable(scheme, combo):
            yield combo


def peeling_disagreements(scheme: ArrayScheme, max_size: int) -> list[tuple[int, ...]]:
    """Patterns where peeling and the rank test disagree (rank is authoritative)."""
    out: list[tuple[int, ...]] = []
    for k in range(max_size + 1):
        for combo in itertools.combinations(range(scheme.size), k):
            if peel_recoverable(scheme, combo) != is_recoverable(scheme, combo):
                out.append(combo)
    return out


def describe(pattern: Sequence[int], scheme: ArrayScheme) -> str:
    return "{" + ", ".join(str(scheme.positions[i]) for i in pattern) + "}"
