import numpy as np
import pytest

from gaussian_coherence import states
from gaussian_coherence.core import reduce, symplectic_eigenvalues, validate_state
from gaussian_coherence.coherence import mean_photon_numbers


@pytest.mark.parametrize("nbar, diag", [(0, 1.0), (1, 3.0), (0.5, 2.0)])
def test_thermal(nbar, diag):
    s = states.make_thermal(nbar)
    np.testing.assert_array_equal(s.V, diag * np.eye(2))
    np.testing.assert_array_equal(s.d, np.zeros(2))
    assert symplectic_eigenvalues(s).values == (2 * nbar + 1,)


def test_thermal_negative():
    with pytest.raises(ValueError):
        states.make_thermal(-0.1)


@pytest.mark.parametrize("alpha, d", [(0, (0, 0)), (1, (2, 0)), (1j, (0, 2))])
def test_coherent(alpha, d):
    s = states.make_coherent(alpha)
    np.testing.assert_array_equal(s.V, np.eye(2))
    np.testing.assert_array_equal(s.d, d)


def test_squeezed():
    np.testing.assert_allclose(states.make_squeezed(0).V, np.eye(2))
    np.testing.assert_allclose(states.make_squeezed(1, 0).V, np.diag([np.e ** 2, np.e ** -2]))
    np.testing.assert_allclose(
        states.make_squeezed(1, np.pi / 2).V, np.diag([np.e ** -2, np.e ** 2]), atol=1e-14
    )


def test_two_mode_squeezed():
    np.testing.assert_allclose(states.make_two_mode_squeezed(0).V, np.eye(4))
    s = states.make_two_mode_squeezed(1)
    assert symplectic_eigenvalues(s).values == (1.0, 1.0)
    np.testing.assert_allclose(mean_photon_numbers(s), [np.sinh(1) ** 2] * 2, rtol=1e-14)
    for r in (0.3, 1.0, 1.7):
        red = reduce(states.make_two_mode_squeezed(r), [1])
        np.testing.assert_allclose(red.V, states.make_thermal(np.sinh(r) ** 2).V, rtol=1e-13)


def test_constructors_are_valid_and_pure(rng):
    for _ in range(100):
        r, theta = rng.uniform(-2, 2), rng.uniform(0, 2 * np.pi)
        sq = states.make_squeezed(r, theta)
        tms = states.make_two_mode_squeezed(r)
        for s in (sq, tms):
            assert validate_state(s.V, s.d).ok
            np.testing.assert_allclose(symplectic_eigenvalues(s, tol=0).values, 1.0, atol=1e-12)


def test_displaced_squeezed_thermal():
    s = states.make_displaced_squeezed_thermal(nbar=0.5, r=0.3, theta=0.2, alpha=0.5 - 0.25j)
    assert symplectic_eigenvalues(s).values[0] == pytest.approx(2.0, rel=1e-12)
    np.testing.assert_array_equal(s.d, [1.0, -0.5])


def test_random_states_valid(rng):
    for m in (1, 2, 3):
        for _ in range(100):
            s = states.random_state(rng, m)
            assert s.modes == m
            assert validate_state(s.V, s.d).ok
