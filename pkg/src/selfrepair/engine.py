"""Event-driven Monte Carlo simulation of a self-repairing array over its mission.

Every position starts with a new disk and the spare pool holds new disks;
all of them age from commissioning.  A failed position is rebuilt onto a
spare committed at failure time and returns to service ``repair_time`` later.
Losses are detected either exactly (decodability of the current erasure
pattern) or through a survival profile's conditional fractions.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

from . import closed_form, kernels
from .codes import TWOD, ArrayScheme, SurvivalProfile, survival_profile
from .failure_model import HOURS_PER_YEAR, BathtubProfile, RateInterpretation, cumulative_hazard
from .stats import ReliabilityEstimate

CHUNK_RUNS = 250_000
DEFAULT_REPAIR = 24.0 / HOURS_PER_YEAR
SEED_MAX = (1 << 64) - 1


class LossMode(enum.Enum):
    EXACT = "exact"
    PROFILE = "profile"


class ExhaustionPolicy(enum.Enum):
    CONTINUE = "continue"
    LOSS = "loss"


class ConfigError(ValueError):
    pass


class TargetUnreachable(RuntimeError):
    def __init__(self, message: str, trace: list):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class SimConfig:
    scheme: ArrayScheme
    spares: int | None = 0  # None means an unlimited pool
    mission: float = 4.0
    repair_time: float = DEFAULT_REPAIR
    bathtub: BathtubProfile = field(default_factory=BathtubProfile)
    interp: RateInterpretation = RateInterpretation.HAZARD
    loss_mode: LossMode = LossMode.EXACT
    profile: SurvivalProfile | None = None
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.CONTINUE
    runs: int = 1_000_000
    seed: int = 0

    def validate(self) -> "SimConfig":
        if not isinstance(self.runs, int) or self.runs < 1:
            raise ConfigError(f"runs must be a positive integer, got {self.runs!r}")
        if not self.mission > 0 or not math.isfinite(self.mission):
            raise ConfigError(f"mission must be positive, got {self.mission}")
        if not self.repair_time >= 0:
            raise ConfigError(f"repair_time must be nonnegative, got {self.repair_time}")
        if self.spares is not None and (not isinstance(self.spares, int) or self.spares < 0):
            raise ConfigError(f"spares must be a nonnegative integer or unlimited, got {self.spares!r}")
        if not 0 <= self.seed <= SEED_MAX:
            raise ConfigError("seed must fit in 64 unsigned bits")
        if self.profile is not None and self.profile.size != self.scheme.size:
            raise ConfigError(
                f"survival profile describes {self.profile.size} disks but "
                f"{self.scheme.descriptor} has {self.scheme.size}")
        return self

    @property
    def unlimited(self) -> bool:
        return self.spares is None


@dataclass(frozen=True)
class RunOutcome:
    survived: bool
    loss_time: float | None = None
    trigger: str | None = None  # "fatal_pattern" or "policy_exhaustion"
    spares_exhausted_at: float | None = None
    peak_concurrent_failures: int = 0


def default_profile(scheme: ArrayScheme) -> SurvivalProfile:
    if scheme.variant == TWOD:
        return survival_profile(scheme, allow_sampling=True)
    return closed_form.profile_from_closed_form(scheme.m, scheme.n, scheme.parity_equiv)


def kernel_plan(config: SimConfig) -> kernels.KernelPlan:
    config.validate()
    scheme = config.scheme
    rates = config.bathtub.rates(config.interp)
    surv0 = math.exp(-cumulative_hazard(config.bathtub, config.interp, 0.0, config.mission))
    ratios = (1.0, 1.0, 1.0)
    n_f = scheme.tolerance
    if config.loss_mode is LossMode.PROFILE:
        profile = config.profile or default_profile(scheme)
        ratios = profile.conditional_ratios()
        n_f = profile.n_f
    if scheme.variant == TWOD:
        kind, columns, gsize, gtol = 0, tuple(scheme.columns()), 0, 0
    else:
        kind, columns, gsize, gtol = 1, (), scheme.n, scheme.parity_equiv
    return kernels.KernelPlan(
        kind=kind, columns=columns, group_size=gsize, group_tol=gtol,
        n_positions=scheme.size,
        spares=-1 if config.spares is None else config.spares,
        mission=float(config.mission), repair=float(config.repair_time),
        starts=config.bathtub.starts, rates=rates, surv0=surv0,
        mode=0 if config.loss_mode is LossMode.EXACT else 1, n_f=n_f, ratios=ratios,
        policy=0 if config.exhaustion is ExhaustionPolicy.CONTINUE else 1,
    )


def simulate_run(config: SimConfig, run_index: int, backend=None) -> RunOutcome:
    plan = kernel_plan(config)
    impl = backend or kernels.for_plan(plan)
    code, t, exhausted, peak = impl.simulate_one(plan, config.seed, run_index)
    return RunOutcome(
        survived=code == 0,
        loss_time=None if code == 0 else t,
        trigger={0: None, 1: "fatal_pattern", 2: "policy_exhaustion"}[code],
        spares_exhausted_at=exhausted if exhausted >= 0.0 else None,
        peak_concurrent_failures=peak,
    )


def _chunk(args):
    plan, seed, start, stop, name = args
    impl = kernels.python if name == "python" else kernels.for_plan(plan)
    return impl.run_campaign(plan, seed, start, stop)


def default_workers() -> int:
    env = os.environ.get("SELFREPAIR_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def simulate(config: SimConfig, workers: int = 1, backend: str | None = None,
             progress: Callable[[int, int], None] | None = None) -> ReliabilityEstimate:
    """Run the whole campaign; the result depends only on the config, not on ``workers``."""
    plan = kernel_plan(config)
    jobs = [(plan, config.seed, lo, min(lo + CHUNK_RUNS, config.runs), backend)
            for lo in range(0, config.runs, CHUNK_RUNS)]
    totals = [0, 0, 0, 0, 0]
    done = 0

    def add(res, job):
        nonlocal done
        for k in range(5):
            totals[k] += res[k]
        done += job[3] - job[2]
        if progress:
            progress(done, config.runs)

    if workers <= 1 or len(jobs) == 1:
        for job in jobs:
            add(_chunk(job), job)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for job, res in zip(jobs, pool.map(_chunk, jobs)):
                add(res, job)
    losses, fatal, policy, exhaustions, peak_sum = totals
    return ReliabilityEstimate(config.runs, losses, exhaustions, fatal, policy, peak_sum)


@dataclass(frozen=True)
class SpareSearch:
    spares: int
    estimate: ReliabilityEstimate
    trace: list  # (spares or None, estimate) per probe, in probe order


def min_spares_for_target(config: SimConfig, target_nines: float, workers: int = 1,
                          max_spares: int | None = None) -> SpareSearch:
    """Smallest spare pool whose lower nines bound reaches ``target_nines``.

    Every probe reuses ``config.seed`` so the probes share their random
    streams.  Raises :class:`TargetUnreachable` when even an unlimited pool
    misses the target.
    """
    trace: list = []
    cache: dict = {}

    def probe(spares):
        if spares not in cache:
            est = simulate(replace(config, spares=spares), workers=workers)
            cache[spares] = est
            trace.append((spares, est))
        return cache[spares]

    def meets(spares):
        return probe(spares).nines_ci[0] >= target_nines

    if not meets(None):
        raise TargetUnreachable(
            f"{config.scheme.descriptor} misses {target_nines} nines even with unlimited spares", trace)
    limit = max_spares if max_spares is not None else 8 * config.scheme.size + 64
    if meets(0):
        return SpareSearch(0, cache[0], trace)
    bad, good = 0, 1
    while not meets(good):
        bad = good
        good *= 2
        if good > limit:
            raise TargetUnreachable(
                f"no spare count up to {limit} reaches {target_nines} nines", trace)
    while good - bad > 1:
        mid = (bad + good) // 2
        if meets(mid):
            good = mid
        else:
            bad = mid
    return SpareSearch(good, cache[good], trace)
