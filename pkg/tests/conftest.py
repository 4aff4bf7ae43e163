import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from coopic.channel import ChannelParams

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

db = st.floats(min_value=0.0, max_value=80.0, allow_nan=False)
bits = st.floats(min_value=0.0, max_value=40.0, allow_nan=False)
phase = st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False, exclude_max=True)


@st.composite
def channel_params(draw, symmetric=False):
    s1, i1, c12 = draw(db), draw(db), draw(bits)
    if symmetric:
        s2, i2, c21 = s1, i1, c12
    else:
        s2, i2, c21 = draw(db), draw(db), draw(bits)
    return ChannelParams.from_db(s1, s2, i1, i2, draw(phase), c12, c21)


def random_params(rng: np.random.Generator, n: int):
    """Plain seeded draws, for loops too long for hypothesis."""
    out = []
    for _ in range(n):
        s = rng.uniform(0, 80, size=4)
        c = rng.uniform(0, 40, size=2)
        out.append(ChannelParams.from_db(*s, rng.uniform(0, 2 * math.pi), *c))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
