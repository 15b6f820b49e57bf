from pathlib import Path

import pytest
from hypothesis import assume, settings
from hypothesis import strategies as st

from household_alloc.model import EconomyParams, PreferenceWeights

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def rel_err(x, ref):
    if x == ref:
        return 0.0
    return abs(x - ref) / max(abs(x), abs(ref))


@st.composite
def interior_instances(draw, min_margin=0.05):
    """Admissible interior instances over the verification ranges."""
    g14 = [draw(st.floats(0.1, 5.0)) for _ in range(4)]
    g57 = [draw(st.floats(0.1, 1.0)) for _ in range(3)]
    g = g14 + g57
    assume(g[1] + g[4] - g[2] >= min_margin)
    econ = EconomyParams(
        w=draw(st.floats(0.5, 10.0)),
        tau=draw(st.floats(0.01, 0.5)),
        w_next=draw(st.floats(0.5, 2.0)),
        R_next=draw(st.floats(0.9, 1.5)),
        Rp_next=draw(st.floats(0.9, 1.5)),
    )
    return PreferenceWeights.from_sequence(g), econ


@pytest.fixture
def ones():
    return PreferenceWeights.ones()


@pytest.fixture
def half_g3():
    return PreferenceWeights.ones().with_weight(3, 0.5)


@pytest.fixture
def econ():
    return EconomyParams(w=1.0, tau=0.1)


@pytest.fixture
def config_dir():
    return CONFIG_DIR
