"""Numerical harmonic analysis for the Jacobi-Cherednik operator.

Special functions (the Opdam hypergeometric function and Jacobi functions),
the Opdam-Cherednik transform and its generalised translation, the windowed
transform with its Gaussian kernel, weighted modulation-space norms and an
uncertainty-principle harness.
"""

__version__ = "0.1.0"

from .errors import (
    BoundViolation,
    BudgetError,
    CherednikError,
    ConvergenceError,
    DomainError,
    EvaluationError,
)
from .specfun import JCParams, cherednik_apply, hyp2f1, jacobi_phi, opdam_G
from .measures import harish_chandra_C, plancherel_density, weight_A, weight_B
from .quadrature import QuadratureRule, build_rule, integrate_line, integrate_plane
from .sampled import SampledFunction1D, SpectralFunction, TimeFreqFunction
from .translation import kernel_K, translate
from .transform import oc_inverse, oc_transform, plancherel_check
from .windowed import (
    WindowedRules,
    clear_caches,
    default_window,
    gaussian_kernel,
    heat_window,
    modulation,
    sandwich_check,
    tf_shift,
    wo_inverse,
    wo_transform,
)
from .modspace import box_norm_bound_check, mod_norm_1d, mod_norm_2d, stft
from .ucp import (
    cowling_price_certify,
    gaussian_envelope_fit,
    hardy_extremal_check,
    morgan_threshold,
    super_gaussian_envelope_fit,
)
