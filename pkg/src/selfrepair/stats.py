"""Bernoulli aggregation of run outcomes, confidence intervals and nines."""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

UNLIMITED = None


def nines(reliability: float) -> float:
    if not 0.0 <= reliability < 1.0:
        raise ValueError(f"reliability must lie in [0, 1), got {reliability}")
    return 0.0 - math.log10(1.0 - reliability)


def _nines_of_loss(p: float) -> float:
    # works on the loss probability directly, so tiny p keeps full precision
    return math.inf if p <= 0.0 else -math.log10(p)


def _z(level: float) -> float:
    return NormalDist().inv_cdf(0.5 + level / 2.0)


def wilson_loss_interval(losses: int, runs: int, level: float = 0.95) -> tuple[float, float]:
    if runs < 1:
        raise ValueError("need at least one run")
    if not 0 <= losses <= runs:
        raise ValueError(f"losses must lie in [0, runs], got {losses}")
    z = _z(level)
    p = losses / runs
    z2n = z * z / runs
    centre = (p + z2n / 2.0) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(p * (1.0 - p) / runs + z2n / (4.0 * runs))
    lo = 0.0 if losses == 0 else max(0.0, centre - half)
    hi = 1.0 if losses == runs else min(1.0, centre + half)
    return lo, hi


def normal_loss_interval(losses: int, runs: int, level: float = 0.95) -> tuple[float, float]:
    p = losses / runs
    half = _z(level) * math.sqrt(p * (1.0 - p) / runs)
    return max(0.0, p - half), min(1.0, p + half)


def confidence_interval(losses: int, runs: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval, expressed on reliability ``1 - p``."""
    lo, hi = wilson_loss_interval(losses, runs, level)
    return 1.0 - hi, 1.0 - lo


@dataclass(frozen=True)
class ReliabilityEstimate:
    runs: int
    losses: int
    exhaustions: int = 0
    fatal_losses: int = 0
    policy_losses: int = 0
    peak_sum: int = 0

    def __post_init__(self):
        if self.runs < 1 or not 0 <= self.losses <= self.runs:
            raise ValueError(f"inconsistent counts: {self.losses} losses in {self.runs} runs")

    @property
    def loss_probability(self) -> float:
        return self.losses / self.runs

    @property
    def reliability(self) -> float:
        return 1.0 - self.losses / self.runs

    @property
    def loss_ci(self) -> tuple[float, float]:
        return wilson_loss_interval(self.losses, self.runs)

    @property
    def ci(self) -> tuple[float, float]:
        lo, hi = self.loss_ci
        return 1.0 - hi, 1.0 - lo

    @property
    def nines(self) -> float:
        return _nines_of_loss(self.loss_probability)

    @property
    def nines_ci(self) -> tuple[float, float]:
        lo, hi = self.loss_ci
        return _nines_of_loss(hi), _nines_of_loss(lo)

    @property
    def normal_nines_ci(self) -> tuple[float, float]:
        lo, hi = normal_loss_interval(self.losses, self.runs)
        return _nines_of_loss(hi), _nines_of_loss(lo)

    @property
    def stderr(self) -> float:
        p = self.loss_probability
        return math.sqrt(p * (1.0 - p) / self.runs)

    @property
    def mean_peak(self) -> float:
        return self.peak_sum / self.runs

    def __add__(self, other: "ReliabilityEstimate") -> "ReliabilityEstimate":
        return ReliabilityEstimate(
            self.runs + other.runs, self.losses + other.losses,
            self.exhaustions + other.exhaustions, self.fatal_losses + other.fatal_losses,
            self.policy_losses + other.policy_losses, self.peak_sum + other.peak_sum)


def space_overhead(data: int, parity: int, spares: int | None) -> float:
    """Share of all disks not holding user data; ``inf`` for an unlimited spare pool."""
    if data < 1 or parity < 0:
        raise ValueError("need data >= 1 and parity >= 0")
    if spares is UNLIMITED:
        return math.inf
    if spares < 0:
        raise ValueError("spare count must be nonnegative")
    return (parity + spares) / (data + parity + spares)


def format_overhead(value: float) -> str:
    return "∞" if math.isinf(value) else f"{100.0 * value:.2f}%"


def format_nines(value: float) -> str:
    return "∞" if math.isinf(value) else f"{value:.2f}"


def format_nines_ci(ci: tuple[float, float]) -> str:
    return f"({format_nines(ci[0])}, {format_nines(ci[1])})"
