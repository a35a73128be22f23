"""Age-dependent disk failure process with piecewise-constant (bathtub) rates.

Ages and times are in years.  A phase's stated value is turned into a hazard
rate according to the selected :class:`RateInterpretation`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

HOURS_PER_YEAR = 365.25 * 24.0


class RateInterpretation(enum.Enum):
    HAZARD = "hazard"
    AFR = "afr"  # annualized failure probability, lambda = -ln(1 - p)

    def convert(self, value: float) -> float:
        if self is RateInterpretation.HAZARD:
            return value
        if value >= 1.0:
            raise ValueError(f"annualized failure probability must be < 1, got {value}")
        return -math.log1p(-value)


@dataclass(frozen=True)
class BathtubProfile:
    """Ordered ``(start_age, rate)`` phases; the last phase never ends."""

    phases: tuple[tuple[float, float], ...] = ((0.0, 0.051), (1.5, 0.014), (3.0, 0.118))

    def __post_init__(self):
        phases = tuple((float(a), float(r)) for a, r in self.phases)
        if not phases:
            raise ValueError("a bathtub profile needs at least one phase")
        if phases[0][0] != 0.0:
            raise ValueError("the first phase must start at age 0")
        for (a0, _), (a1, _) in zip(phases, phases[1:]):
            if not a1 > a0:
                raise ValueError("phase start ages must be strictly increasing")
        if any(r < 0 or not math.isfinite(r) for _, r in phases):
            raise ValueError("phase rates must be finite and nonnegative")
        object.__setattr__(self, "phases", phases)

    @property
    def starts(self) -> tuple[float, ...]:
        return tuple(a for a, _ in self.phases)

    def rates(self, interp: RateInterpretation = RateInterpretation.HAZARD) -> tuple[float, ...]:
        return tuple(interp.convert(r) for _, r in self.phases)

    @classmethod
    def zero(cls) -> "BathtubProfile":
        return cls(((0.0, 0.0),))


def _phase_index(starts: Sequence[float], age: float) -> int:
    k = 0
    while k + 1 < len(starts) and starts[k + 1] <= age:
        k += 1
    return k


def hazard_at(profile: BathtubProfile, interp: RateInterpretation, age: float) -> float:
    """Hazard rate per year at ``age``; phase boundaries belong to the later phase."""
    if age < 0:
        raise ValueError(f"age must be nonnegative, got {age}")
    return profile.rates(interp)[_phase_index(profile.starts, age)]


def cumulative_hazard(profile: BathtubProfile, interp: RateInterpretation,
                      from_age: float, to_age: float) -> float:
    if from_age < 0 or to_age < from_age:
        raise ValueError(f"need 0 <= from_age <= to_age, got ({from_age}, {to_age})")
    starts = profile.starts
    rates = profile.rates(interp)
    total = 0.0
    for k, rate in enumerate(rates):
        lo = max(starts[k], from_age)
        hi = starts[k + 1] if k + 1 < len(starts) else math.inf
        hi = min(hi, to_age)
        if hi > lo:
            total += rate * (hi - lo)
    return total


def walk_phases(starts: Sequence[float], rates: Sequence[float], age: float, budget: float) -> float:
    """Age at which ``budget`` units of hazard have accumulated past ``age``.

    The compiled kernel mirrors this arithmetic operation for operation so
    both backends draw bit-identical failure times.
    """
    k = _phase_index(starts, age)
    t = age
    last = len(starts) - 1
    while True:
        rate = rates[k]
        end = starts[k + 1] if k < last else math.inf
        if rate > 0.0:
            cap = rate * (end - t)
            if budget <= cap:
                return t + budget / rate
            budget -= cap
        elif k == last:
            return math.inf
        t = end
        k += 1


def sample_failure_time(profile: BathtubProfile, interp: RateInterpretation,
                        current_age: float, u: float) -> float:
    """Exact inverse-transform draw of the failure age of a disk alive at ``current_age``.

    Returns ``math.inf`` when every remaining phase has zero rate and the
    hazard budget ``-ln(u)`` can never be spent.
    """
    if not 0.0 < u < 1.0:
        raise ValueError(f"u must lie in (0, 1), got {u}")
    if current_age < 0:
        raise ValueError(f"current_age must be nonnegative, got {current_age}")
    return walk_phases(profile.starts, profile.rates(interp), current_age, -math.log(u))


def survival_probability(profile: BathtubProfile, interp: RateInterpretation,
                         from_age: float, to_age: float) -> float:
    return math.exp(-cumulative_hazard(profile, interp, from_age, to_age))
