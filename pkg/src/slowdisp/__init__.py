"""Construction and verification of 10th-order-flat Floquet dispersion.

A two-level periodically forced Dirac system with piecewise-constant forcing
has a monodromy matrix in SU(2) whose Floquet angle theta(xi) can be made
flat to order 10 at xi = 0 by tuning four segment durations.  This package
finds such durations, certifies the root with a Newton-Kantorovich argument
at high precision, and verifies the resulting n^(-1/10) dispersive decay by
direct oscillatory quadrature.
"""

from .certify import (
    Certificate,
    certify,
    compute_alpha,
    gradient_diagnostics,
    lipschitz_bound_analytic,
    lipschitz_bound_sampled,
    radius_flip_boundary,
)
from .dispersion import (
    BumpProfile,
    DecayFitResult,
    DispersionProfile,
    decay_fit,
    default_bump_halfwidth,
    dispersion_profile,
    flatness_exponent,
    flatness_order,
    oscillatory_amplitude,
    phase_constant,
    stationary_phase_prediction,
    theta_grid,
    theta_jet,
    trace_values,
)
from .errors import (
    BranchDegeneracyError,
    ConditioningError,
    DegenerateSpectrumError,
    IndeterminateOrderError,
    InternalConsistencyError,
    NoCandidateError,
    NonConvergenceError,
    QuadratureAccuracyError,
    SlowdispError,
)
from .jets import TruncatedJet, jet_mul, jet_reciprocal, jet_sqrt, omega_jet
from .monodromy import (
    MatrixJet,
    TraceJet,
    UnitaryMatrix2,
    Word,
    letter_at,
    letter_jet,
    ode_oracle,
    trace_jet,
    word_at,
    word_jet,
    word_t_jacobian_jet,
)
from .precision import DOUBLE, QUAD256, Precision
from .reference import ROOT_DECIMALS, reference_root, reference_word
from .solver import (
    FlatnessResidual,
    PipelineResult,
    SearchConfig,
    ValidityConstraints,
    newton_refine,
    random_search,
    residual,
    residual_norm,
    search_pipeline,
    stochastic_descent,
    symmetry_orbit,
)

__version__ = "0.1.0"
