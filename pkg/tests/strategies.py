"""Hypothesis strategies for states and unitaries."""

import numpy as np
from hypothesis import strategies as st

from luequiv.states import SCCoefficients, haar_unitary, random_sc

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def sc2q(draw):
    """Valid two-qubit SC coefficients, including pure and boundary states."""
    c1 = draw(st.floats(0.0, 1.0))
    frac = draw(st.one_of(st.just(0.0), st.just(1.0), st.floats(0.0, 1.0)))
    phase = draw(st.floats(-np.pi, np.pi))
    lam = frac * np.sqrt(c1 * (1.0 - c1))
    return SCCoefficients.two_qubit(c1, lam * np.exp(1j * phase), 1.0 - c1)


@st.composite
def random_sc_states(draw, levels=2, parties=2):
    return random_sc(draw(seeds), levels, parties)


@st.composite
def unitaries(draw, dim=2):
    return haar_unitary(dim, draw(seeds))
