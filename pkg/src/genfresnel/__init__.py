"""Generalized Fresnel integrals, cutoff-regularized oscillatory integrals and
stationary phase expansions for degenerate power phases."""

__version__ = "0.1.0"

from .amplitudes import Amplitude, MultivariateAmplitude, parse_amplitude, schwartz_decay_report, taylor_at_zero
from .cutoff import CutoffFunction, cutoff_properties, get_cutoff
from .errors import (
    CapExceededError,
    ConvergenceError,
    DomainError,
    GammaOverflowError,
    GenFresnelError,
    NoiseFloorError,
    PoleError,
    PreconditionError,
    SingularMatrixError,
)
from .fresnel import (
    FresnelParams,
    PoleReport,
    Sign,
    closed_form,
    full_line_term_coefficient,
    generalized_beta,
    poles_in_p,
    poles_in_q,
)
from .quadratic import (
    QuadExpansion,
    SymmetricMatrix,
    fresnel_fourier_check,
    quadratic_expansion,
    quadratic_phase_quadrature,
    signature_and_det,
)
from .regularization import (
    EpsilonSchedule,
    QuadratureOutcome,
    abel_oracle,
    chi_derivative_integral,
    ibp_precondition,
    regularized_integral,
    regularized_line_integral,
    rotated_contour_oracle,
)
from .special import euler_beta, gamma, gamma_residue
from .stationary import (
    AsymptoticExpansion,
    LambdaGrid,
    decay_slope_fit,
    expansion_vs_oracle,
    full_line_expansion,
    half_line_expansion,
    weighted_half_line_value,
)
