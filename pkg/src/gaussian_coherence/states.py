"""Constructors for named Gaussian states and a random-state generator."""

import numpy as np
from scipy.linalg import expm

from .core import GaussianState, symplectic_form, tensor_all


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def vacuum(modes=1) -> GaussianState:
    return GaussianState(np.eye(2 * modes), np.zeros(2 * modes), check=False)


def make_thermal(nbar: float) -> GaussianState:
    """Thermal state with mean photon number ``nbar``: ``V = (2 nbar + 1) I``."""
    nbar = float(nbar)
    if not nbar >= 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar!r}")
    return GaussianState((2 * nbar + 1) * np.eye(2), np.zeros(2), check=False)


def make_coherent(alpha: complex) -> GaussianState:
    """Coherent state ``|alpha>``: vacuum covariance, ``d = (2 Re alpha, 2 Im alpha)``."""
    alpha = complex(alpha)
    return GaussianState(np.eye(2), [2 * alpha.real, 2 * alpha.imag], check=False)


def squeezed_cov(r, theta=0.0):
    # r > 0 stretches the first quadrature at theta = 0
    R = rotation(theta)
    return R @ np.diag([np.exp(2 * r), np.exp(-2 * r)]) @ R.T


def make_squeezed(r: float, theta: float = 0.0) -> GaussianState:
    """Squeezed vacuum, ``V = R(theta) diag(e^{2r}, e^{-2r}) R(theta)^T``."""
    return GaussianState(squeezed_cov(r, theta), np.zeros(2))


def make_displaced_squeezed_thermal(nbar=0.0, r=0.0, theta=0.0, alpha=0j) -> GaussianState:
    """Most general one-mode Gaussian state.

    ``V = (2 nbar + 1) R(theta) diag(e^{2r}, e^{-2r}) R(theta)^T`` and
    ``d = (2 Re alpha, 2 Im alpha)``.
    """
    if not nbar >= 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar!r}")
    alpha = complex(alpha)
    V = (2 * nbar + 1) * squeezed_cov(r, theta)
    return GaussianState(V, [2 * alpha.real, 2 * alpha.imag])


def make_two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum; each reduced mode is thermal with ``nbar = sinh(r)**2``."""
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    Z = np.diag([1.0, -1.0])
    V = np.block([[c * np.eye(2), s * Z], [s * Z, c * np.eye(2)]])
    return GaussianState(V, np.zeros(4))


def make_explicit(V, d=None, modes=None) -> GaussianState:
    return GaussianState(V, d, modes)


def random_symplectic(modes, rng, scale=0.3):
    """Random symplectic matrix ``expm(Omega H)`` with symmetric Gaussian ``H``."""
    H = rng.normal(scale=scale, size=(2 * modes, 2 * modes))
    H = 0.5 * (H + H.T)
    return expm(symplectic_form(modes) @ H)


def random_state(rng, modes=1, nbar_max=2.0, r_max=1.0, d_max=2.0, displaced=True):
    """Random valid Gaussian state for property tests.

    Each mode is ``(2 nbar + 1) R diag(e^{2r}, e^{-2r}) R^T`` with
    ``nbar ~ U[0, nbar_max]``, ``r ~ U[-r_max, r_max]``, ``theta ~ U[0, 2 pi)``
    and displacement entries ``~ U[-d_max, d_max]``. Multimode states are a
    product of such modes followed by a random symplectic transformation.
    """
    parts = []
    for _ in range(modes):
        nbar = rng.uniform(0, nbar_max)
        r = rng.uniform(-r_max, r_max)
        theta = rng.uniform(0, 2 * np.pi)
        V = (2 * nbar + 1) * squeezed_cov(r, theta)
        d = rng.uniform(-d_max, d_max, size=2) if displaced else np.zeros(2)
        parts.append(GaussianState(V, d))
    state = tensor_all(parts)
    if modes == 1:
        return state
    S = random_symplectic(modes, rng)
    V = S @ state.V @ S.T
    return GaussianState(0.5 * (V + V.T), S @ state.d)
