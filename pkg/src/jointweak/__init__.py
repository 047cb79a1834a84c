"""Joint weak measurement toolkit.

Simulates weak measurements of two commuting observables at arbitrary
coupling strength with exact continuous (Gaussian) and discrete (two-qubit)
pointer engines, closed-form displacement formulas, a brute-force grid
oracle, and the Hardy-paradox application with its negative joint weak
probabilities.
"""

from .errors import (
    ClippingRisk,
    ConfigError,
    DegenerateNorm,
    DimensionMismatch,
    NonCommuting,
    NormalizationError,
    NotHermitian,
    NotIdempotent,
    NotInvolutory,
    OrthogonalPostselection,
    ToolkitError,
    UnsupportedMonomial,
)
from .gaussian import (
    GaussianPointer,
    GaussianSuperposition,
    MomentReport,
    eigenbranch_superposition,
    moments,
    overlap_moment,
    postselect_involutory,
    postselect_projector,
    superposition_from_weak_values,
)
from .hilbert import (
    Ket,
    Operator,
    check_commute,
    classify,
    expm_hermitian,
    identity,
    joint_eigenbasis,
    ket,
    operator,
    projector,
    sigma_x,
    sigma_y,
    sigma_z,
    tensor,
)
from .weakvalue import (
    WeakValueSet,
    postselect_probability,
    weak_value,
    weak_value_set,
)

__version__ = "0.1.0"

__all__ = [
    "Ket",
    "Operator",
    "WeakValueSet",
    "GaussianPointer",
    "GaussianSuperposition",
    "MomentReport",
    "ket",
    "operator",
    "identity",
    "sigma_x",
    "sigma_y",
    "sigma_z",
    "projector",
    "tensor",
    "expm_hermitian",
    "check_commute",
    "classify",
    "joint_eigenbasis",
    "weak_value",
    "weak_value_set",
    "postselect_probability",
    "postselect_involutory",
    "postselect_projector",
    "superposition_from_weak_values",
    "eigenbranch_superposition",
    "overlap_moment",
    "moments",
    "ToolkitError",
    "DimensionMismatch",
    "NotHermitian",
    "NonCommuting",
    "NotInvolutory",
    "NotIdempotent",
    "OrthogonalPostselection",
    "DegenerateNorm",
    "UnsupportedMonomial",
    "ClippingRisk",
    "NormalizationError",
    "ConfigError",
]
