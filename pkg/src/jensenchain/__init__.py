"""Machine-checkable refinements of the discrete Jensen inequality.

A weight function interpolates between the two sides of Jensen's
inequality; this package evaluates the resulting one-parameter chains,
their t-averages, and the special-mean applications (identric,
logarithmic and p-logarithmic means, Ky Fan ratios, p-th power norms on
finite discrete measure spaces, power sums over doubly stochastic
matrices, and a concave harmonic-fraction chain).
"""

from .apps import (
    FiniteMeasureSpace,
    FunctionVector,
    agm_chain,
    harmonic_chain,
    kyfan_chain,
    lp_chain,
    matrix_power_bounds,
    power_sum_chain,
)
from .errors import DomainError, NumericError, ValidationError
from .functions import CATALOG_NAMES, ConvexFunctionSpec, Interval, check_direction, get_function
from .means import (
    EPS_DEG,
    identric,
    integral_mean,
    ln_identric,
    log_mean,
    logarithmic,
    p_logarithmic,
    pow_integral_mean,
)
from .measures import (
    DoublyStochasticMatrix,
    ProbabilityVector,
    WeightFunction,
    embed_doubly_stochastic,
    interpolate_weight,
    random_doubly_stochastic,
    random_weight,
    rank_one_weight,
    sinkhorn_normalize,
    validate_weight,
)
from .refine import (
    ConvexityCheck,
    HadamardWeights,
    IdentityCheck,
    JensenInstance,
    RefinementChain,
    chain_at_t,
    chain_hadamard,
    chain_integral,
    chain_matrix,
    chain_tolerance,
    matrix_instance,
    phi,
    phi_convexity_check,
    phi_integral_closed,
    phi_integral_quad,
    phi_values,
    tighten,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES",
    "ConvexFunctionSpec",
    "ConvexityCheck",
    "DomainError",
    "DoublyStochasticMatrix",
    "EPS_DEG",
    "FiniteMeasureSpace",
    "FunctionVector",
    "HadamardWeights",
    "IdentityCheck",
    "Interval",
    "JensenInstance",
    "NumericError",
    "ProbabilityVector",
    "RefinementChain",
    "ValidationError",
    "WeightFunction",
    "agm_chain",
    "chain_at_t",
    "chain_hadamard",
    "chain_integral",
    "chain_matrix",
    "chain_tolerance",
    "check_direction",
    "embed_doubly_stochastic",
    "get_function",
    "harmonic_chain",
    "identric",
    "integral_mean",
    "interpolate_weight",
    "kyfan_chain",
    "ln_identric",
    "log_mean",
    "logarithmic",
    "lp_chain",
    "matrix_instance",
    "matrix_power_bounds",
    "p_logarithmic",
    "phi",
    "phi_convexity_check",
    "phi_integral_closed",
    "phi_integral_quad",
    "phi_values",
    "pow_integral_mean",
    "power_sum_chain",
    "random_doubly_stochastic",
    "random_weight",
    "rank_one_weight",
    "sinkhorn_normalize",
    "tighten",
    "validate_weight",
]
