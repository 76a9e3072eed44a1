import numpy as np
import pytest
from hypothesis import strategies as st

from gaussian_coherence import states


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def one_mode_params():
    """Hypothesis strategy for the random-state generator parameters of one mode."""
    return st.tuples(
        st.floats(0, 2),
        st.floats(-1, 1),
        st.floats(0, 2 * np.pi),
        st.floats(-2, 2),
        st.floats(-2, 2),
    )


def state_from_params(p):
    nbar, r, theta, dx, dy = p
    return states.make_displaced_squeezed_thermal(nbar, r, theta, complex(dx, dy) / 2)
