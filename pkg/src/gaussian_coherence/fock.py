"""Number-basis matrix elements of one-mode Gaussian states.

This is an independent route to the quantities computed in closed form by
:mod:`gaussian_coherence.coherence`. Inverting the characteristic function
and expanding in coherent states gives

    rho_mn = (1 / pi^3) d^m/du^m d^n/dv^n J |_{u=v=0} / sqrt(m! n!)

where ``J`` is a six-dimensional Gaussian integral with quadratic form ``A``
and linear term ``B = (u, iu, v, -iv, -i d2, i d1)``. Evaluating it,

    J = (2 pi)^3 / sqrt(det A) * exp(xi),
    xi = 1/2 [(u, v) B2 (u, v)^T + B1 (u, v)^T + B0].

Because ``xi`` is quadratic in ``(u, v)``, the derivatives of ``exp(xi)``
obey a three-term recurrence (a two-variable Hermite recurrence), which is
evaluated here in a normalised form that never forms factorials.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import GaussianState

MAX_CUTOFF = 200
DEFICIT_WARNING = 1e-2
COHERENCE_MAX_DEFICIT = 1e-4
NEGATIVE_EIG_TOL = 1e-8
CONSISTENCY_TOL = 1e-9
CROSS_CHECK_TOL = 1e-8
# deficit that the automatic cutoff search aims for
AUTO_CUTOFF_DEFICIT = 1e-10

# (u, v) points at which the printed coefficients are checked against B A^-1 B^T
_SAMPLE_UV = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.7, -1.3), (-0.4, 0.9))


class InternalConsistencyError(RuntimeError):
    """Closed-form coefficients disagree with their numeric evaluation."""


class TruncationError(ValueError):
    """Truncated matrix is too far from a density matrix to be trusted."""


def _unpack(V, d=None):
    if isinstance(V, GaussianState):
        if V.modes != 1:
            raise ValueError("the Fock oracle handles one-mode states only")
        return np.array(V.V), np.array(V.d)
    V = np.asarray(V, dtype=float)
    if V.shape != (2, 2):
        raise ValueError(f"the Fock oracle handles one-mode states only, got V of shape {V.shape}")
    d = np.zeros(2) if d is None else np.asarray(d, dtype=float).reshape(2)
    return V, d


def det_A_closed_form(V) -> float:
    V = np.asarray(V, dtype=float)
    return 16.0 * (np.linalg.det(V) + V[0, 0] + V[1, 1] + 1.0)


def build_A(V):
    """Six-dimensional quadratic form of the matrix-element integral.

    Variables are ordered ``(x_alpha, y_alpha, x_beta, y_beta, x_lambda, y_lambda)``.

    Returns:
        tuple: ``(A, det_A)`` with ``A`` a complex symmetric 6x6 array and
        ``det_A`` its (real, positive) determinant.

    Raises:
        InternalConsistencyError: if the numeric determinant differs from
            ``16 (det V + V11 + V22 + 1)`` by more than 1e-9 relative.
    """
    V, _ = _unpack(V)
    V11, V12, V22 = V[0, 0], 0.5 * (V[0, 1] + V[1, 0]), V[1, 1]
    j = 1j
    A = np.array(
        [
            [2, 0, -1, -j, 1, j],
            [0, 2, j, -1, -j, 1],
            [-1, j, 2, 0, -1, j],
            [-j, -1, 0, 2, -j, -1],
            [1, -j, -1, -j, 1 + V22, -V12],
            [j, 1, j, -1, -V12, 1 + V11],
        ],
        dtype=complex,
    )
    numeric = np.linalg.det(A)
    closed = det_A_closed_form(V)
    if abs(numeric - closed) > CONSISTENCY_TOL * abs(closed):
        raise InternalConsistencyError(f"det A = {numeric} but closed form gives {closed}")
    return A, float(closed)


@dataclass(frozen=True)
class QuadraticFormCoefficients:
    """Coefficients of ``xi(u, v) = 1/2 [(u, v) B2 (u, v)^T + B1 (u, v)^T + B0]``."""

    B2: np.ndarray
    B1: np.ndarray
    B0: complex
    detA: float

    def xi(self, u, v):
        uv = np.array([u, v], dtype=complex)
        return 0.5 * (uv @ self.B2 @ uv + self.B1 @ uv + self.B0)


def source_vector(u, v, d):
    return np.array([u, 1j * u, v, -1j * v, -1j * d[1], 1j * d[0]], dtype=complex)


def quadratic_coeffs(V, d=None, check=True) -> QuadraticFormCoefficients:
    """Closed-form ``B2``, ``B1``, ``B0`` for a one-mode state ``(V, d)``.

    With ``check=True`` the closed forms are compared with ``1/2 B A^-1 B^T``
    computed by a linear solve at a handful of ``(u, v)`` points.
    """
    V, d = _unpack(V, d)
    V11, V12, V22 = V[0, 0], 0.5 * (V[0, 1] + V[1, 0]), V[1, 1]
    d1, d2 = d
    j = 1j
    D = 1 + V11 + V22 + V11 * V22 - V12 ** 2
    off = (V11 * V22 - V12 ** 2 - 1) / D
    B2 = np.array(
        [[(V11 - V22 + 2j * V12) / D, off], [off, (V11 - V22 - 2j * V12) / D]], dtype=complex
    )
    B1 = 2.0 * np.array(
        [
            ((1 - j * V12 + V22) * d1 + j * (1 + V11 + j * V12) * d2) / D,
            ((1 + j * V12 + V22) * d1 - j * (1 + V11 - j * V12) * d2) / D,
        ],
        dtype=complex,
    )
    B0 = complex(-((1 + V22) * d1 ** 2 - 2 * V12 * d1 * d2 + (1 + V11) * d2 ** 2) / D)
    A, detA = build_A(V)
    coeffs = QuadraticFormCoefficients(B2, B1, B0, detA)
    if check:
        for u, v in _SAMPLE_UV:
            B = source_vector(u, v, d)
            numeric = 0.5 * B @ np.linalg.solve(A, B)
            closed = coeffs.xi(u, v)
            if abs(numeric - closed) > CROSS_CHECK_TOL * max(1.0, abs(numeric)):
                raise InternalConsistencyError(
                    f"xi({u}, {v}) = {closed} from closed form but {numeric} numerically"
                )
    return coeffs


def _hermite_table(coeffs: QuadraticFormCoefficients, cutoff: int) -> np.ndarray:
    """``G[m, n] = d_u^m d_v^n exp(xi - B0/2) |_0 / sqrt(m! n!)``.

    Column zero is filled with the ``u`` recurrence, every row with the ``v``
    recurrence, so ``G[m, n]`` and ``G[n, m]`` come from different paths.
    """
    xu, xv = 0.5 * coeffs.B1
    xuu, xvv, xuv = coeffs.B2[0, 0], coeffs.B2[1, 1], coeffs.B2[0, 1]
    size = cutoff + 1
    sq = np.sqrt(np.arange(size + 1, dtype=float))
    G = np.zeros((size, size), dtype=complex)
    G[0, 0] = 1.0
    for m in range(size - 1):
        acc = xu * G[m, 0]
        if m:
            acc += sq[m] * xuu * G[m - 1, 0]
        G[m + 1, 0] = acc / sq[m + 1]
    for m in range(size):
        for n in range(size - 1):
            acc = xv * G[m, n]
            if n:
                acc += sq[n] * xvv * G[m, n - 1]
            if m:
                acc += sq[m] * xuv * G[m - 1, n]
            G[m, n + 1] = acc / sq[n + 1]
    if not np.all(np.isfinite(G)):
        raise OverflowError(f"matrix elements overflow at cutoff {cutoff}")
    return G


def _check_cutoff(cutoff):
    cutoff = int(cutoff)
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    if cutoff > MAX_CUTOFF:
        raise OverflowError(f"cutoff {cutoff} exceeds the supported maximum {MAX_CUTOFF}")
    return cutoff


def _prefactor(coeffs):
    # (2 pi)^3 / pi^3 = 8; det A > 0 for physical V, so take the positive root
    return 8.0 / np.sqrt(coeffs.detA) * np.exp(0.5 * coeffs.B0)


def fock_element(V, d=None, m=0, n=0) -> complex:
    """Single number-basis element ``<m| rho |n>`` of a one-mode state."""
    if m < 0 or n < 0:
        raise ValueError("Fock indices must be non-negative")
    coeffs = quadratic_coeffs(V, d)
    G = _hermite_table(coeffs, _check_cutoff(max(m, n)))
    return complex(_prefactor(coeffs) * G[m, n])


@dataclass(frozen=True)
class FockMatrix:
    """Truncated density matrix ``rho[m, n]`` for ``0 <= m, n <= cutoff``."""

    cutoff: int
    elements: np.ndarray
    trace_deficit: float

    @property
    def warning(self) -> bool:
        """True when the truncation discards more than 1% of the trace."""
        return self.trace_deficit > DEFICIT_WARNING

    @property
    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.elements))


def default_cutoff(V, d=None) -> int:
    """``max(20, ceil(10 (nbar + 1)))`` capped at the supported maximum."""
    V, d = _unpack(V, d)
    nbar = max(0.25 * (V[0, 0] + V[1, 1] + d @ d - 2.0), 0.0)
    return min(max(20, math.ceil(10 * (nbar + 1))), MAX_CUTOFF)


def fock_matrix(V, d=None, cutoff=None) -> FockMatrix:
    """All elements up to ``cutoff`` (default from :func:`default_cutoff`)."""
    V, d = _unpack(V, d)
    cutoff = default_cutoff(V, d) if cutoff is None else _check_cutoff(cutoff)
    coeffs = quadratic_coeffs(V, d)
    rho = _prefactor(coeffs) * _hermite_table(coeffs, cutoff)
    rho.flags.writeable = False
    deficit = abs(1.0 - float(np.real(np.trace(rho))))
    return FockMatrix(cutoff, rho, deficit)


def adaptive_fock_matrix(V, d=None, target_deficit=AUTO_CUTOFF_DEFICIT) -> FockMatrix:
    """Start from :func:`default_cutoff` and double until the deficit is below target.

    Stops at :data:`MAX_CUTOFF`; the returned matrix then carries whatever
    deficit remains.
    """
    V, d = _unpack(V, d)
    cutoff = default_cutoff(V, d)
    while True:
        fm = fock_matrix(V, d, cutoff)
        if fm.trace_deficit <= target_deficit or cutoff >= MAX_CUTOFF:
            return fm
        cutoff = min(2 * cutoff, MAX_CUTOFF)


def hermiticity_residual(fm: FockMatrix) -> float:
    return float(np.max(np.abs(fm.elements - fm.elements.conj().T)))


def oracle_mean_photon(fm: FockMatrix) -> float:
    """``sum_n n rho_nn`` from the truncated matrix."""
    if fm.trace_deficit > DEFICIT_WARNING:
        raise TruncationError(
            f"trace deficit {fm.trace_deficit:.3g} exceeds {DEFICIT_WARNING}; raise the cutoff"
        )
    return float(np.arange(fm.cutoff + 1) @ fm.diagonal)


def oracle_entropy(fm: FockMatrix) -> float:
    """Von Neumann entropy in bits of the truncated matrix."""
    herm = 0.5 * (fm.elements + fm.elements.conj().T)
    p = np.linalg.eigvalsh(herm)
    if p[0] < -NEGATIVE_EIG_TOL:
        raise TruncationError(f"truncated matrix has eigenvalue {p[0]:.3g}; raise the cutoff")
    p = p[p > 0]
    return float(-(p @ np.log2(p)))


def oracle_coherence(fm: FockMatrix) -> float:
    """Relative entropy to the matched thermal state, from the truncated matrix.

    The entropy comes from diagonalising the truncated matrix; the cross term
    ``tr[rho log2 delta]`` only needs the oracle mean photon number.
    """
    if fm.trace_deficit > COHERENCE_MAX_DEFICIT:
        raise TruncationError(
            f"trace deficit {fm.trace_deficit:.3g} exceeds {COHERENCE_MAX_DEFICIT}; raise the cutoff"
        )
    S = oracle_entropy(fm)
    n = oracle_mean_photon(fm)
    cross = 0.0 if n <= 0 else n * np.log2(n) - (n + 1) * np.log2(n + 1)
    return float(-S - cross)


def diagonality_residual(fm: FockMatrix) -> float:
    """Largest off-diagonal magnitude ``max_{m != n} |rho_mn|``."""
    off = np.abs(fm.elements).copy()
    np.fill_diagonal(off, 0.0)
    return float(off.max()) if off.size else 0.0
