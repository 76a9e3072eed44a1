"""Gaussian state representation, physicality checks and symplectic spectra.

Conventions used throughout the package:

* quadratures are mode-interleaved, ``(x1, p1, x2, p2, ...)``;
* the vacuum covariance matrix is the identity, so a thermal mode with mean
  photon number ``nbar`` has covariance ``(2 nbar + 1) I``;
* the displacement of a coherent state ``|alpha>`` is
  ``(2 Re alpha, 2 Im alpha)``;
* entropies and coherences are in bits.
"""

import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9
TOL_ENV_VAR = "GAUSS_COHERENCE_TOL"

# symplectic eigenvalues this far below 1 are an error rather than noise
UNPHYSICAL_NU_TOL = 1e-6


class ShapeError(ValueError):
    """Array dimensions do not match the declared number of modes."""


class DataError(ValueError):
    """Input arrays contain NaN or infinite entries."""


class UnphysicalStateError(ValueError):
    """Covariance matrix violates the uncertainty principle."""


def default_tol():
    """Return the default tolerance, honouring ``GAUSS_COHERENCE_TOL``."""
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    tol = float(raw)
    if not np.isfinite(tol) or tol < 0:
        raise ValueError(f"{TOL_ENV_VAR} must be a non-negative number, got {raw!r}")
    return tol


def symplectic_form(modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with one ``[[0, 1], [-1, 0]]`` block per mode."""
    if modes < 1:
        raise ValueError(f"mode count must be positive, got {modes}")
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _as_arrays(V, d, modes=None):
    V = np.array(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2 or V.shape[0] == 0:
        raise ShapeError(f"covariance must be a non-empty 2m x 2m matrix, got shape {V.shape}")
    if modes is None:
        modes = V.shape[0] // 2
    if V.shape != (2 * modes, 2 * modes):
        raise ShapeError(f"covariance shape {V.shape} does not match {modes} mode(s)")
    d = np.zeros(2 * modes) if d is None else np.array(d, dtype=float).reshape(-1)
    if d.shape != (2 * modes,):
        raise ShapeError(f"displacement length {d.size} does not match {modes} mode(s)")
    if not (np.all(np.isfinite(V)) and np.all(np.isfinite(d))):
        raise DataError("covariance and displacement must be finite")
    return V, d, modes


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a physicality check.

    ``violations`` holds ``(check, measured, threshold)`` triples; the report
    is ``ok`` exactly when there are none.
    """

    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        lines = ["invalid:"]
        for name, value, threshold in self.violations:
            lines.append(f"  {name}: measured {value:.6g}, threshold {threshold:.6g}")
        return "\n".join(lines)


def validate_state(V, d=None, modes=None, tol=None) -> ValidationReport:
    """Check that ``(V, d)`` describes a physical ``modes``-mode Gaussian state.

    Args:
        V: covariance matrix, shape ``(2m, 2m)``.
        d: displacement vector of length ``2m``; zero if omitted.
        modes: expected mode count; inferred from ``V`` if omitted.
        tol: tolerance for symmetry (relative) and for the minimum
            eigenvalue of ``V + i Omega`` (absolute).

    Returns:
        ValidationReport: with a violation per failed check.

    Raises:
        ShapeError: on inconsistent dimensions.
        DataError: on non-finite entries.
    """
    tol = default_tol() if tol is None else tol
    V, d, modes = _as_arrays(V, d, modes)
    violations = []
    asym = float(np.max(np.abs(V - V.T)))
    sym_threshold = tol * max(float(np.linalg.norm(V)), 1.0)
    if asym > sym_threshold:
        violations.append(("V symmetric", asym, sym_threshold))
    herm = 0.5 * (V + V.T) + 1j * symplectic_form(modes)
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    if min_eig < -tol:
        violations.append(("V+iΩ PSD", min_eig, -tol))
    return ValidationReport(tuple(violations))


class GaussianState:
    """Gaussian state ``rho(V, d)`` of ``modes`` bosonic modes.

    The arrays are copied and frozen on construction. With ``check=True``
    (the default) the state is validated and :class:`UnphysicalStateError`
    is raised for unphysical input.
    """

    __slots__ = ("V", "d", "modes")

    def __init__(self, V, d=None, modes=None, *, check=True, tol=None):
        V, d, modes = _as_arrays(V, d, modes)
        if check:
            report = validate_state(V, d, modes, tol=tol)
            if not report.ok:
                raise UnphysicalStateError(str(report))
        V.flags.writeable = False
        d.flags.writeable = False
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "modes", modes)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianState is immutable")

    def __repr__(self):
        return f"GaussianState(modes={self.modes}, V={self.V.tolist()}, d={self.d.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, GaussianState):
            return NotImplemented
        return np.array_equal(self.V, other.V) and np.array_equal(self.d, other.d)

    def __hash__(self):
        return hash((self.V.tobytes(), self.d.tobytes()))

    def mode_block(self, i):
        """Covariance block and displacement of mode ``i`` (0-based)."""
        sl = slice(2 * i, 2 * i + 2)
        return self.V[sl, sl], self.d[sl]


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues, sorted in descending order."""

    values: tuple = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def is_pure(self, tol=DEFAULT_TOL):
        return all(nu <= 1.0 + tol for nu in self.values)


def _snap(nus, tol):
    nus = np.asarray(nus, dtype=float)
    if np.any(nus < 1.0 - UNPHYSICAL_NU_TOL):
        raise UnphysicalStateError(
            f"symplectic eigenvalue {nus.min():.12g} is below 1; state is unphysical"
        )
    # float noise around purity; also absorbs (1 - 1e-6, 1) left over by a looser validation tol
    nus = np.where(np.abs(nus - 1.0) <= tol, 1.0, nus)
    return np.maximum(nus, 1.0)


def symplectic_eigenvalues_general(V) -> np.ndarray:
    """Moduli of the eigenvalues of ``i Omega V``, one per pair, descending.

    No clamping is applied; used by :func:`symplectic_eigenvalues` and as a
    cross-check of the one-mode closed form.
    """
    V = np.asarray(V, dtype=float)
    modes = V.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(modes) @ V))
    ev = np.sort(ev)[::-1]
    # eigenvalues come in +/- nu pairs
    return 0.5 * (ev[0::2] + ev[1::2])


def symplectic_eigenvalues(state: GaussianState, tol=None) -> SymplecticSpectrum:
    """Symplectic spectrum of ``state.V``.

    One-mode states use ``nu = sqrt(det V)``; multimode states use the moduli
    of the eigenvalues of ``i Omega V``. Values within ``tol`` of 1 are
    snapped to exactly 1.

    Raises:
        UnphysicalStateError: if some eigenvalue is below ``1 - 1e-6``.
    """
    tol = default_tol() if tol is None else tol
    if state.modes == 1:
        V = state.V
        det = float(V[0, 0] * V[1, 1] - V[0, 1] * V[1, 0])
        nus = np.array([np.sqrt(max(det, 0.0))])
    else:
        nus = symplectic_eigenvalues_general(state.V)
    nus = np.sort(_snap(nus, tol))[::-1]
    return SymplecticSpectrum(tuple(float(x) for x in nus))


def _xlog2x(x):
    return 0.0 if x <= 0.0 else x * np.log2(x)


def g_function(nu: float) -> float:
    """Entropy in bits carried by one symplectic eigenvalue ``nu >= 1``.

    ``g(nu) = (nu+1)/2 log2((nu+1)/2) - (nu-1)/2 log2((nu-1)/2)``, with
    ``g(1) = 0``.
    """
    nu = float(nu)
    if not nu >= 1.0:
        raise ValueError(f"g is defined for nu >= 1, got {nu!r}")
    return _xlog2x((nu + 1.0) / 2.0) - _xlog2x((nu - 1.0) / 2.0)


def entropy(state: GaussianState) -> float:
    """Von Neumann entropy of ``state`` in bits, the sum of ``g`` over its spectrum."""
    return float(sum(g_function(nu) for nu in symplectic_eigenvalues(state)))


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    """Product state ``a (x) b``: direct-sum covariance, concatenated displacement."""
    n = 2 * a.modes
    V = np.zeros((n + 2 * b.modes,) * 2)
    V[:n, :n] = a.V
    V[n:, n:] = b.V
    return GaussianState(V, np.concatenate([a.d, b.d]), check=False)


def tensor_all(states) -> GaussianState:
    states = list(states)
    if not states:
        raise ValueError("need at least one state")
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def reduce(state: GaussianState, modes) -> GaussianState:
    """Reduced state on the given 0-based mode indices, in the order given."""
    modes = [int(i) for i in modes]
    if not modes:
        raise ValueError("mode index set is empty")
    if len(set(modes)) != len(modes):
        raise ValueError(f"duplicate mode indices in {modes}")
    bad = [i for i in modes if not 0 <= i < state.modes]
    if bad:
        raise IndexError(f"mode indices {bad} out of range for {state.modes} mode(s)")
    idx = np.array([[2 * i, 2 * i + 1] for i in modes]).ravel()
    return GaussianState(state.V[np.ix_(idx, idx)], state.d[idx], check=False)
