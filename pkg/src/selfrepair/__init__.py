"""Reliability simulation and combinatorial analysis of self-repairing disk arrays."""

from .closed_form import profile_from_closed_form, raid6_fatal_fraction, triple_parity_fatal_fraction
from .codes import (ArrayScheme, DiskPosition, SurvivalProfile, build_scheme, fatal_triple_count_closed,
                    is_recoverable, parse_scheme, survival_profile)
from .engine import SimConfig, min_spares_for_target, simulate, simulate_run
from .failure_model import BathtubProfile, RateInterpretation
from .kernels import BACKEND
from .stats import ReliabilityEstimate, nines, space_overhead

__all__ = [
    "ArrayScheme", "BACKEND", "BathtubProfile", "DiskPosition", "RateInterpretation",
    "ReliabilityEstimate", "SimConfig", "SurvivalProfile", "build_scheme",
    "fatal_triple_count_closed", "is_recoverable", "min_spares_for_target", "nines",
    "parse_scheme", "profile_from_closed_form", "raid6_fatal_fraction", "simulate",
    "simulate_run", "space_overhead", "survival_profile", "triple_parity_fatal_fraction",
]
