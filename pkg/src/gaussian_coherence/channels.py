"""Gaussian channels ``(T, N, dbar)`` and the incoherent-channel classifier.

A channel acts on a state as ``d -> T d + dbar`` and ``V -> T V T^T + N``.
It is physical when ``N + i Omega - i T Omega T^T >= 0``.
"""

from dataclasses import dataclass

import numpy as np

from .core import (
    GaussianState,
    ShapeError,
    DataError,
    ValidationReport,
    default_tol,
    symplectic_form,
)
from .states import rotation

# an off-pattern block counts as zero below this fraction of ||T||
BLOCK_ZERO_TOL = 1e-9


class ChannelError(ValueError):
    """Channel is unphysical or incompatible with its argument."""


class GaussianChannel:
    """Gaussian channel on ``modes`` modes. Arrays are frozen on construction."""

    __slots__ = ("T", "N", "dbar", "modes")

    def __init__(self, T, N=None, dbar=None, *, check=True, tol=None):
        T = np.array(T, dtype=float)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] % 2 or T.shape[0] == 0:
            raise ShapeError(f"T must be a non-empty 2m x 2m matrix, got shape {T.shape}")
        n = T.shape[0]
        N = np.zeros((n, n)) if N is None else np.array(N, dtype=float)
        dbar = np.zeros(n) if dbar is None else np.array(dbar, dtype=float).reshape(-1)
        if N.shape != T.shape:
            raise ShapeError(f"N has shape {N.shape}, expected {T.shape}")
        if dbar.shape != (n,):
            raise ShapeError(f"dbar has length {dbar.size}, expected {n}")
        if not all(np.all(np.isfinite(a)) for a in (T, N, dbar)):
            raise DataError("channel entries must be finite")
        for a in (T, N, dbar):
            a.flags.writeable = False
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "dbar", dbar)
        object.__setattr__(self, "modes", n // 2)
        if check:
            report = validate_channel(self, tol=tol)
            if not report.ok:
                raise ChannelError(str(report))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianChannel is immutable")

    def __repr__(self):
        return (
            f"GaussianChannel(modes={self.modes}, T={self.T.tolist()}, "
            f"N={self.N.tolist()}, dbar={self.dbar.tolist()})"
        )


def validate_channel(ch: GaussianChannel, tol=None) -> ValidationReport:
    """Physicality check for a channel.

    Checks symmetry of ``N`` and positivity of the Hermitian matrix
    ``N + i Omega - i T Omega T^T``. One-mode channels are additionally
    checked against ``N >= 0`` and ``det N >= (det T - 1)^2``, which is an
    equivalent form of the same condition.
    """
    tol = default_tol() if tol is None else tol
    T, N = ch.T, ch.N
    violations = []
    asym = float(np.max(np.abs(N - N.T)))
    sym_threshold = tol * max(float(np.linalg.norm(N)), 1.0)
    if asym > sym_threshold:
        violations.append(("N symmetric", asym, sym_threshold))
    omega = symplectic_form(ch.modes)
    Ns = 0.5 * (N + N.T)
    M = Ns + 1j * omega - 1j * (T @ omega @ T.T)
    M = 0.5 * (M + M.conj().T)
    min_eig = float(np.linalg.eigvalsh(M)[0])
    if min_eig < -tol:
        violations.append(("N+iΩ-iTΩTᵗ PSD", min_eig, -tol))
    if ch.modes == 1:
        gap = float(np.linalg.det(Ns) - (np.linalg.det(T) - 1.0) ** 2)
        scale = max(1.0, float(np.linalg.det(T) - 1.0) ** 2)
        if gap < -tol * scale:
            violations.append(("det N >= (det T - 1)^2", gap, -tol * scale))
        n_min = float(np.linalg.eigvalsh(Ns)[0])
        if n_min < -tol:
            violations.append(("N PSD", n_min, -tol))
    return ValidationReport(tuple(violations))


def apply(ch: GaussianChannel, state: GaussianState) -> GaussianState:
    """Apply ``ch`` to ``state``."""
    if ch.modes != state.modes:
        raise ChannelError(f"channel acts on {ch.modes} mode(s), state has {state.modes}")
    V = ch.T @ state.V @ ch.T.T + ch.N
    return GaussianState(0.5 * (V + V.T), ch.T @ state.d + ch.dbar, check=False)


def compose(outer: GaussianChannel, inner: GaussianChannel) -> GaussianChannel:
    """Channel equal to applying ``inner`` first, then ``outer``."""
    if outer.modes != inner.modes:
        raise ChannelError(f"cannot compose {outer.modes}-mode and {inner.modes}-mode channels")
    To = outer.T
    return GaussianChannel(
        To @ inner.T,
        To @ inner.N @ To.T + outer.N,
        To @ inner.dbar + outer.dbar,
        check=False,
    )


def _blockdiag(blocks):
    m = len(blocks)
    out = np.zeros((2 * m, 2 * m))
    for i, b in enumerate(blocks):
        out[2 * i:2 * i + 2, 2 * i:2 * i + 2] = b
    return out


def identity_channel(modes=1):
    return GaussianChannel(np.eye(2 * modes), check=False)


def loss(eta, modes=1):
    """Pure-loss channel with transmissivity ``eta`` in ``[0, 1]`` on every mode."""
    if not 0 <= eta <= 1:
        raise ValueError(f"transmissivity must lie in [0, 1], got {eta!r}")
    n = 2 * modes
    return GaussianChannel(np.sqrt(eta) * np.eye(n), (1 - eta) * np.eye(n))


def amplifier(gain, modes=1):
    """Phase-insensitive amplifier with gain ``G >= 1`` on every mode."""
    if not gain >= 1:
        raise ValueError(f"amplifier gain must be >= 1, got {gain!r}")
    n = 2 * modes
    return GaussianChannel(np.sqrt(gain) * np.eye(n), (gain - 1) * np.eye(n))


def phase_rotation(theta, modes=1):
    return GaussianChannel(_blockdiag([rotation(theta)] * modes))


def displacement_channel(dbar):
    dbar = np.asarray(dbar, dtype=float)
    return GaussianChannel(np.eye(dbar.size), None, dbar)


def beamsplitter(theta):
    """Passive two-mode mixer ``[[cos I, sin I], [-sin I, cos I]]``."""
    c, s = np.cos(theta), np.sin(theta)
    T = np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]])
    return GaussianChannel(T)


@dataclass(frozen=True)
class ModeBlock:
    """Per-output-mode data of an incoherent channel: ``T_ij = t O``, ``N_ii = w I``."""

    t: float
    O: np.ndarray
    w: float

    @property
    def det_O(self) -> int:
        return 1 if np.linalg.det(self.O) > 0 else -1

    @property
    def theta(self) -> float:
        # O = R(theta) or O = R(theta) diag(1, -1); both have first column (cos, sin)
        return float(np.arctan2(self.O[1, 0], self.O[0, 0]))

    @property
    def reflect(self) -> bool:
        return self.det_O < 0

    @property
    def bound(self) -> float:
        return abs(self.t ** 2 * self.det_O - 1.0)


@dataclass(frozen=True)
class IncoherentDecomposition:
    """Block structure of an incoherent channel.

    ``permutation[i] = j`` means output mode ``i`` is fed by input mode ``j``,
    i.e. the only nonzero block in block-row ``i`` of ``T`` sits in
    block-column ``j``. ``blocks[i]`` holds the data of output mode ``i``.
    """

    permutation: tuple
    blocks: tuple

    def to_channel(self) -> GaussianChannel:
        m = len(self.blocks)
        T = np.zeros((2 * m, 2 * m))
        N = np.zeros((2 * m, 2 * m))
        for i, (j, b) in enumerate(zip(self.permutation, self.blocks)):
            T[2 * i:2 * i + 2, 2 * j:2 * j + 2] = b.t * b.O
            N[2 * i:2 * i + 2, 2 * i:2 * i + 2] = b.w * np.eye(2)
        return GaussianChannel(T, N, check=False)


@dataclass(frozen=True)
class Rejection:
    """Why a channel is not incoherent; ``condition`` is one of ``a``-``d``."""

    condition: str
    reason: str

    def __bool__(self):
        return False

    def __str__(self):
        return f"({self.condition}) {self.reason}"


def classify_incoherent(ch: GaussianChannel, tol=None):
    """Decide whether ``ch`` has the structure of an incoherent Gaussian channel.

    The conditions, checked in order, are

    (a) ``dbar = 0``;
    (b) ``T`` is a block permutation whose nonzero 2x2 blocks are
        scaled orthogonal matrices ``t O``;
    (c) ``N = diag(w_1 I, ..., w_m I)``;
    (d) ``w_i >= |t_i^2 det O_i - 1|``.

    Block rows of ``T`` that are entirely zero are ``t = 0`` blocks; they take
    ``O = I`` and are paired with the unused block columns in order.

    Returns:
        IncoherentDecomposition if every condition holds, otherwise a
        :class:`Rejection` naming the first failed condition.
    """
    tol = default_tol() if tol is None else tol
    m = ch.modes
    dnorm = float(np.linalg.norm(ch.dbar))
    if dnorm > tol:
        return Rejection("a", f"d̄ ≠ 0 (|d̄| = {dnorm:.6g})")

    T = ch.T
    zero_tol = BLOCK_ZERO_TOL * max(float(np.linalg.norm(T)), 1.0)
    nonzero = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for j in range(m):
            nonzero[i, j] = np.linalg.norm(T[2 * i:2 * i + 2, 2 * j:2 * j + 2]) > zero_tol
    for i in range(m):
        if nonzero[i].sum() > 1:
            return Rejection("b", f"block-row {i} of T has {nonzero[i].sum()} nonzero blocks")
    for j in range(m):
        if nonzero[:, j].sum() > 1:
            return Rejection("b", f"block-column {j} of T has {nonzero[:, j].sum()} nonzero blocks")

    free_cols = [j for j in range(m) if not nonzero[:, j].any()]
    perm = []
    ts, Os = [], []
    for i in range(m):
        if nonzero[i].any():
            j = int(np.flatnonzero(nonzero[i])[0])
            B = T[2 * i:2 * i + 2, 2 * j:2 * j + 2]
            t = float(np.sqrt(np.trace(B @ B.T) / 2))
            resid = float(np.max(np.abs(B @ B.T - t ** 2 * np.eye(2))))
            if resid > tol * max(1.0, t ** 2):
                return Rejection(
                    "b", f"block not scaled-orthogonal at T block ({i}, {j}) (|BBᵗ - t²I| = {resid:.3g})"
                )
            O = B / t
        else:
            j = free_cols.pop(0)
            t, O = 0.0, np.eye(2)
        perm.append(j)
        ts.append(t)
        Os.append(O)

    N = ch.N
    ws = []
    for i in range(m):
        off = N.copy()
        off[2 * i:2 * i + 2, 2 * i:2 * i + 2] = 0.0
        row_off = float(np.max(np.abs(off[2 * i:2 * i + 2, :])))
        blk = N[2 * i:2 * i + 2, 2 * i:2 * i + 2]
        if row_off > tol or abs(blk[0, 1]) > tol or abs(blk[1, 0]) > tol:
            return Rejection("c", f"N is not block-diagonal isotropic at mode {i}")
        if abs(blk[0, 0] - blk[1, 1]) > tol * max(1.0, abs(blk[0, 0])):
            return Rejection("c", f"N block {i} is not proportional to the identity")
        ws.append(float(0.5 * (blk[0, 0] + blk[1, 1])))

    blocks = []
    for i in range(m):
        b = ModeBlock(ts[i], Os[i], ws[i])
        if b.w < b.bound - tol:
            return Rejection("d", f"mode {i}: w = {b.w:.6g} below bound |t² det O - 1| = {b.bound:.6g}")
        blocks.append(b)
    return IncoherentDecomposition(tuple(perm), tuple(blocks))


def make_incoherent_channel(params, permutation=None) -> GaussianChannel:
    """Build an incoherent channel from per-output-mode parameters.

    Args:
        params: sequence of ``(t, theta, reflect, w)`` tuples, one per output
            mode. The block is ``t R(theta)``, right-multiplied by
            ``diag(1, -1)`` when ``reflect`` is true; the noise is ``w I``.
        permutation: ``permutation[i]`` is the input mode feeding output mode
            ``i``. Identity when omitted.

    Raises:
        ValueError: if some ``w`` is below ``|t^2 det O - 1|`` or the
            permutation is malformed.
    """
    params = [tuple(p) for p in params]
    m = len(params)
    if m == 0:
        raise ValueError("need parameters for at least one mode")
    permutation = tuple(range(m)) if permutation is None else tuple(int(j) for j in permutation)
    if sorted(permutation) != list(range(m)):
        raise ValueError(f"{permutation} is not a permutation of range({m})")
    blocks = []
    for i, (t, theta, reflect, w) in enumerate(params):
        if t < 0:
            raise ValueError(f"mode {i}: scale t must be >= 0, got {t}")
        O = rotation(theta) @ (np.diag([1.0, -1.0]) if reflect else np.eye(2))
        b = ModeBlock(float(t), O, float(w))
        if b.w < b.bound - 1e-12:
            raise ValueError(
                f"mode {i}: noise w = {w} is below the bound |t² det O - 1| = {b.bound:.12g}"
            )
        blocks.append(b)
    return IncoherentDecomposition(permutation, tuple(blocks)).to_channel()


def random_incoherent_channel(rng, modes=1, t_max=1.5, w_extra=1.0):
    """Random incoherent channel: random scales, rotations, reflections, noise and mode order."""
    params = []
    for _ in range(modes):
        t = rng.uniform(0, t_max)
        reflect = bool(rng.random() < 0.3)
        bound = abs(t * t * (-1 if reflect else 1) - 1)
        w = bound + (rng.uniform(0, w_extra) if rng.random() < 0.8 else 0.0)
        params.append((t, rng.uniform(0, 2 * np.pi), reflect, w))
    return make_incoherent_channel(params, rng.permutation(modes))
