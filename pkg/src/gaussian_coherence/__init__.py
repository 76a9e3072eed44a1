"""Coherence of Gaussian states: closed-form relative entropy of coherence,
incoherent states and channels, and a truncated Fock-space cross-check."""

from .core import (
    GaussianState,
    SymplecticSpectrum,
    ValidationReport,
    ShapeError,
    DataError,
    UnphysicalStateError,
    symplectic_form,
    validate_state,
    symplectic_eigenvalues,
    g_function,
    entropy,
    tensor,
    tensor_all,
    reduce,
)
from .states import (
    vacuum,
    make_thermal,
    make_coherent,
    make_squeezed,
    make_displaced_squeezed_thermal,
    make_two_mode_squeezed,
    make_explicit,
    random_state,
)
from .channels import (
    GaussianChannel,
    IncoherentDecomposition,
    Rejection,
    validate_channel,
    apply,
    compose,
    classify_incoherent,
    make_incoherent_channel,
    loss,
    amplifier,
    phase_rotation,
)
from .coherence import (
    CoherenceReport,
    coherence,
    mean_photon_numbers,
    closest_incoherent_state,
    relative_entropy_to_incoherent,
    is_incoherent,
)

__version__ = "0.1.0"
