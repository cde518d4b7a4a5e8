"""Stability atlas and modal spectral analysis for abstract thermoelastic
systems with Cattaneo heat flux."""

__version__ = "0.1.0"

from .atlas import (  # noqa: E402
    DomainError,
    ParameterPoint,
    RegionLabel,
    StabilityVerdict,
    VerdictKind,
    classify,
    classify_inertial,
    classify_noninertial,
    decay_order,
    sample_atlas,
    wellposed,
)
from .catalog import Preset, SpectralSequence, mu_sequence, preset  # noqa: E402
from .quartic import QuarticCoeffs, solve_quartic  # noqa: E402
from .resolvent import growth_exponent, modal_resolvent_norm, resolvent_sup  # noqa: E402
from .semigroup import (  # noqa: E402
    EnergyTrace,
    ModalState,
    decay_fit,
    dissipation_residual,
    energy,
    evolve_mode,
    semigroup_norm,
)
from .spectrum import (  # noqa: E402
    ModalBlock,
    RootSet,
    asymptotic_error,
    characteristic_coeffs,
    modal_block,
    modal_eigenvalues,
    optimality_exponent,
    predicted_roots,
)

__all__ = [name for name in dir() if not name.startswith("_")]
