from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from selfrepair import codes, config
from selfrepair.config import CampaignConfig, NamedConfig
from selfrepair.engine import ConfigError, ExhaustionPolicy, LossMode, SimConfig
from selfrepair.failure_model import BathtubProfile, RateInterpretation


def test_documented_example_parses():
    doc = config.__doc__
    example = "\n".join(line[4:] for line in doc.splitlines() if line.startswith("    "))
    camp = config.loads(example)
    assert camp.seed == 2014 and camp.workers == 4 and camp.out == "results"
    (nc,) = camp.configs
    s = nc.sim
    assert nc.name == "twod-10-33" and s.scheme.descriptor == "twod:10"
    assert s.spares == 33 and s.runs == 20_000_000 and s.seed == 7
    assert s.repair_time == pytest.approx(1 / 365.25)
    assert s.bathtub == BathtubProfile()
    assert s.profile.fractions == (Fraction(110, 120), Fraction(1, 2), Fraction(1, 3))
    assert camp.output_dir(nc).as_posix() == "results/twod"


def test_defaults():
    camp = config.loads("[a]\nscheme = raid6:2x12\nspares = unlimited\n")
    s = camp.configs[0].sim
    assert s.spares is None and s.mission == 4 and s.runs == 1_000_000
    assert s.interp is RateInterpretation.HAZARD and s.loss_mode is LossMode.EXACT
    assert s.exhaustion is ExhaustionPolicy.CONTINUE


@pytest.mark.parametrize("text", [
    "[a]\nscheme = twod:5\ncolour = red\n",
    "[campaign]\nthreads = 2\n[a]\nscheme = twod:5\n",
    "[a]\nscheme = twod:5\nruns = 0\n",
    "[a]\nscheme = twod:5\nspares = -3\n",
    "[a]\nscheme = twod:2\n",
    "[a]\nscheme = raid5:4\n",
    "[a]\nspares = 3\n",
    "[a]\nscheme = twod:5\nrepair_hours = 24\nrepair_years = 0.1\n",
    "[a]\nscheme = twod:5\nbathtub = 1:0.1\n",
    "[a]\nscheme = twod:5\ninterp = weibull\n",
    "[a]\nscheme = twod:5\nmode = profile\nprofile = 1/2, 1/3\n",
    "[campaign]\nseed = 1\n",
    "not an ini file",
])
def test_bad_configs_rejected(text):
    with pytest.raises(ConfigError):
        config.loads(text)


schemes = st.sampled_from(["twod:3", "twod:10", "raid6:1x12", "raid6:3x8", "tp:2x15"])
phases = st.lists(st.tuples(st.floats(0.01, 10), st.floats(0, 5)), max_size=3).map(
    lambda xs: ((0.0, 0.05),) + tuple(sorted({a: r for a, r in xs}.items())))


@st.composite
def sims(draw):
    scheme = codes.parse_scheme(draw(schemes))
    mode = draw(st.sampled_from(list(LossMode)))
    profile = None
    if mode is LossMode.PROFILE and draw(st.booleans()):
        fr = tuple(Fraction(draw(st.integers(0, 50)), 50) for _ in range(3))
        profile = codes.SurvivalProfile(scheme.size, scheme.tolerance, fr, method="config")
    return SimConfig(
        scheme=scheme,
        spares=draw(st.one_of(st.none(), st.integers(0, 500))),
        mission=draw(st.floats(0.1, 20)),
        repair_time=draw(st.floats(0, 0.5)),
        bathtub=BathtubProfile(draw(phases)),
        interp=draw(st.sampled_from(list(RateInterpretation))),
        loss_mode=mode, profile=profile,
        exhaustion=draw(st.sampled_from(list(ExhaustionPolicy))),
        runs=draw(st.integers(1, 10**9)),
        seed=draw(st.integers(0, 2**64 - 1)),
    )


@settings(max_examples=80, deadline=None)
@given(st.lists(sims(), min_size=1, max_size=3), st.integers(0, 2**64 - 1),
       st.one_of(st.none(), st.integers(1, 64)))
def test_round_trip(sim_list, seed, workers):
    camp = CampaignConfig(seed, workers, "out/dir",
                          tuple(NamedConfig(f"run-{i}", s, None if i else "x") for i, s in enumerate(sim_list)))
    back = config.loads(config.dumps(camp))
    assert back == camp
