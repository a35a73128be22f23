"""Campaign configuration files.

The format is INI (``configparser``).  A ``[campaign]`` section carries the
global seed, an optional worker count and the output directory; every other
section is one named simulation::

    [campaign]
    seed = 2014
    workers = 4
    out = results

    [twod-10-33]
    scheme = twod:10          ; twod:<n> | raid6:<m>x<n> | tp:<m>x<n>
    spares = 33               ; integer or "unlimited"
    runs = 20000000
    mission_years = 4
    repair_hours = 24         ; or repair_years
    bathtub = 0:0.051, 1.5:0.014, 3:0.118
    interp = hazard           ; hazard | afr
    mode = exact              ; exact | profile
    profile = 110/120, 1/2, 1/3   ; optional, profile mode only
    exhaustion = continue     ; continue | loss
    seed = 7                  ; optional, overrides the campaign seed
    out = results/twod        ; optional, overrides the campaign directory

Unknown keys are errors.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .codes import SurvivalProfile, parse_scheme
from .engine import ConfigError, ExhaustionPolicy, LossMode, SimConfig
from .failure_model import HOURS_PER_YEAR, BathtubProfile, RateInterpretation

CAMPAIGN = "campaign"
CAMPAIGN_KEYS = {"seed", "workers", "out"}
RUN_KEYS = {"scheme", "spares", "runs", "mission_years", "repair_hours", "repair_years",
            "bathtub", "interp", "mode", "profile", "exhaustion", "seed", "out"}


@dataclass(frozen=True)
class NamedConfig:
    name: str
    sim: SimConfig
    out: str | None = None


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    workers: int | None = None
    out: str = "results"
    configs: tuple[NamedConfig, ...] = field(default_factory=tuple)

    def output_dir(self, cfg: NamedConfig) -> Path:
        return Path(cfg.out or self.out)


def _int(value: str, key: str) -> int:
    try:
        return int(value.replace("_", ""))
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _enum(cls, value: str, key: str):
    try:
        return cls(value.strip().lower())
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise ConfigError(f"{key}: expected one of {choices}, got {value!r}") from None


def parse_bathtub(text: str) -> BathtubProfile:
    phases = []
    for item in text.split(","):
        start, sep, rate = item.strip().partition(":")
        if not sep:
            raise ConfigError(f"bathtub: phase {item.strip()!r} is not start_age:rate")
        phases.append((_float(start, "bathtub"), _float(rate, "bathtub")))
    try:
        return BathtubProfile(tuple(phases))
    except ValueError as exc:
        raise ConfigError(f"bathtub: {exc}") from None


def _parse_section(name: str, sec, default_seed: int) -> NamedConfig:
    unknown = set(sec) - RUN_KEYS
    if unknown:
        raise ConfigError(f"[{name}]: unknown keys {', '.join(sorted(unknown))}")
    if "scheme" not in sec:
        raise ConfigError(f"[{name}]: missing required key 'scheme'")
    if "repair_hours" in sec and "repair_years" in sec:
        raise ConfigError(f"[{name}]: give repair_hours or repair_years, not both")
    try:
        scheme = parse_scheme(sec["scheme"])
    except ValueError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None
    kw = {"scheme": scheme, "seed": default_seed}
    if "spares" in sec:
        v = sec["spares"].strip().lower()
        kw["spares"] = None if v in ("unlimited", "inf", "∞") else _int(v, "spares")
    if "runs" in sec:
        kw["runs"] = _int(sec["runs"], "runs")
    if "mission_years" in sec:
        kw["mission"] = _float(sec["mission_years"], "mission_years")
    if "repair_hours" in sec:
        kw["repair_time"] = _float(sec["repair_hours"], "repair_hours") / HOURS_PER_YEAR
    if "repair_years" in sec:
        kw["repair_time"] = _float(sec["repair_years"], "repair_years")
    if "bathtub" in sec:
        kw["bathtub"] = parse_bathtub(sec["bathtub"])
    if "interp" in sec:
        kw["interp"] = _enum(RateInterpretation, sec["interp"], "interp")
    if "mode" in sec:
        kw["loss_mode"] = _enum(LossMode, sec["mode"], "mode")
    if "exhaustion" in sec:
        kw["exhaustion"] = _enum(ExhaustionPolicy, sec["exhaustion"], "exhaustion")
    if "seed" in sec:
        kw["seed"] = _int(sec["seed"], "seed")
    if "profile" in sec:
        try:
            fr = tuple(Fraction(x.strip()) for x in sec["profile"].split(","))
            kw["profile"] = SurvivalProfile(scheme.size, scheme.tolerance, fr, method="config")
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"[{name}]: profile: {exc}") from None
    sim = SimConfig(**kw)
    try:
        sim.validate()
    except ConfigError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None
    return NamedConfig(name, sim, sec.get("out"))


def loads(text: str) -> CampaignConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    seed, workers, out = 0, None, "results"
    if parser.has_section(CAMPAIGN):
        sec = parser[CAMPAIGN]
        unknown = set(sec) - CAMPAIGN_KEYS
        if unknown:
            raise ConfigError(f"[campaign]: unknown keys {', '.join(sorted(unknown))}")
        if "seed" in sec:
            seed = _int(sec["seed"], "seed")
        if "workers" in sec:
            workers = _int(sec["workers"], "workers")
            if workers < 1:
                raise ConfigError("workers must be at least 1")
        out = sec.get("out", out)
    configs = tuple(_parse_section(name, parser[name], seed)
                    for name in parser.sections() if name != CAMPAIGN)
    if not configs:
        raise ConfigError("the config file defines no simulations")
    return CampaignConfig(seed, workers, out, configs)


def load(path: str | Path) -> CampaignConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return loads(text)


def dumps(campaign: CampaignConfig) -> str:
    parser = configparser.ConfigParser(interpolation=None)
    parser[CAMPAIGN] = {"seed": str(campaign.seed), "out": campaign.out}
    if campaign.workers is not None:
        parser[CAMPAIGN]["workers"] = str(campaign.workers)
    for nc in campaign.configs:
        s = nc.sim
        sec = {
            "scheme": s.scheme.descriptor,
            "spares": "unlimited" if s.spares is None else str(s.spares),
            "runs": str(s.runs),
            "mission_years": repr(s.mission),
            "repair_years": repr(s.repair_time),
            "bathtub": ", ".join(f"{a!r}:{r!r}" for a, r in s.bathtub.phases),
            "interp": s.interp.value,
            "mode": s.loss_mode.value,
            "exhaustion": s.exhaustion.value,
            "seed": str(s.seed),
        }
        if s.profile is not None:
            sec["profile"] = ", ".join(str(Fraction(f)) for f in s.profile.fractions)
        if nc.out is not None:
            sec["out"] = nc.out
        parser[nc.name] = sec
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def sim_to_dict(sim: SimConfig) -> dict:
    """Full config echo for result records."""
    return {
        "scheme": sim.scheme.descriptor,
        "spares": "unlimited" if sim.spares is None else sim.spares,
        "runs": sim.runs,
        "mission_years": sim.mission,
        "repair_years": sim.repair_time,
        "bathtub": [{"start_age_years": a, "rate_per_year": r} for a, r in sim.bathtub.phases],
        "interp": sim.interp.value,
        "mode": sim.loss_mode.value,
        "profile": None if sim.profile is None else [str(Fraction(f)) for f in sim.profile.fractions],
        "exhaustion": sim.exhaustion.value,
        "seed": sim.seed,
    }
