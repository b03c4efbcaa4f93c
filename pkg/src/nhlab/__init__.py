"""Numerical laboratory for non-Hermitian Schrödinger operators with Jordan cells.

Four exactly solvable complex-shifted models (a Jordan bound pair, a two-level
system that coalesces into it, a zero-energy threshold chain, and a bound state
embedded in the continuum) plus the machinery to certify their spectral
properties: biorthogonality tables, regularized resolutions of identity,
wave-packet observables, Green-function pole orders, transparent scattering,
and the finite-dimensional biorthogonal algebra of Jordan blocks.
"""

from .errors import (
    AsymptoteNotReached,
    AtPole,
    ConvergenceError,
    DomainError,
    ExcludedMomentum,
    FitUnstable,
    NhlabError,
    OnCut,
    ParameterError,
    SingularTransform,
    SlowDecay,
    ToleranceNotMet,
    ZeroDenominator,
)
from .models import (
    MODEL_IDS,
    ModelParams,
    Role,
    SpectralFunction,
    bound_states,
    continuation_limit,
    continuum_state,
    denominator,
    potential,
    threshold_chain,
)
from .quadrature import (
    ContourPath,
    integrate_contour,
    integrate_interval,
    integrate_real_line,
)
from .diffop import residual
from .biortho import binorm, binorm_states, expected_gram, gram, smeared_orthonormality
from .coalescence import kernel_gap, potential_gap, state_limit_orders
from .identity import (
    TestFunction,
    apply_identity,
    convergence_study,
    gaussian_battery,
    in_class,
    lemma_functional,
    probe_points,
    sine_functional,
    sine_functional_bound,
    slow_decay_battery,
)
from .observables import (
    average,
    exact_values,
    fit_slope,
    packet,
    packet_values,
    sweep,
)
from .scattering import (
    green,
    green_defect,
    pole_order,
    reflection_bound,
    transmission,
    transmission_closed,
)
from .jordan import (
    BiorthSystem,
    CellGroup,
    JordanSpec,
    TriangleTransform,
    binorm_structure,
    build,
    chain_residual,
    diagonalize_identity,
    intertwiner_space,
    mansym_matrix,
    random_spec,
    random_transform,
    t_symmetric_form,
    triangle,
)

__version__ = "1.0.0"

__all__ = [
    "MODEL_IDS",
    "ModelParams",
    "Role",
    "SpectralFunction",
    "bound_states",
    "continuation_limit",
    "continuum_state",
    "denominator",
    "potential",
    "threshold_chain",
    "ContourPath",
    "integrate_contour",
    "integrate_interval",
    "integrate_real_line",
    "residual",
    "binorm",
    "binorm_states",
    "expected_gram",
    "gram",
    "smeared_orthonormality",
    "kernel_gap",
    "potential_gap",
    "state_limit_orders",
    "TestFunction",
    "apply_identity",
    "convergence_study",
    "gaussian_battery",
    "in_class",
    "lemma_functional",
    "probe_points",
    "sine_functional",
    "sine_functional_bound",
    "slow_decay_battery",
    "average",
    "exact_values",
    "fit_slope",
    "packet",
    "packet_values",
    "sweep",
    "green",
    "green_defect",
    "pole_order",
    "reflection_bound",
    "transmission",
    "transmission_closed",
    "BiorthSystem",
    "CellGroup",
    "JordanSpec",
    "TriangleTransform",
    "binorm_structure",
    "build",
    "chain_residual",
    "diagonalize_identity",
    "intertwiner_space",
    "mansym_matrix",
    "random_spec",
    "random_transform",
    "t_symmetric_form",
    "triangle",
    "NhlabError",
    "ParameterError",
    "DomainError",
    "ExcludedMomentum",
    "ConvergenceError",
    "ToleranceNotMet",
    "SlowDecay",
    "OnCut",
    "AtPole",
    "AsymptoteNotReached",
    "FitUnstable",
    "SingularTransform",
    "ZeroDenominator",
]
