"""catent: exact-arithmetic certificates for categorical-entropy gaps.

Computes lower bounds for the entropy of twist-type autoequivalence words on
lattice/dimension-level models of derived categories, together with the exact
spectral radius of the induced lattice action, and reports whether the
Gromov-Yomdin equality ``h_cat = log rho`` is violated.
"""

__version__ = "0.1.0"

from .errors import (
    CollapseError,
    ContractError,
    EngineError,
    InputError,
    NumericError,
    ResourceError,
)
from .graded import (
    GradedDim,
    GradedDimInterval,
    cone_bounds,
    cone_exact_from_map_rank,
    convolve,
    delta_value,
    direct_sum,
    shift,
)
from .lattice import (
    BilinearLattice,
    IntPolynomial,
    LatticeVector,
    SquareIntMatrix,
    char_poly,
    is_unipotent,
    pairing_eval,
    spectral_radius,
)
from .twists import (
    BoundSeries,
    HKModel,
    SurfaceModel,
    TwistState,
    advance,
    entropy_lower_bound,
    ext_growth_series,
    first_iterate_profile,
    gy_verdict,
    initial_twist_state,
    spherical_twist_series,
)
from .words import (
    ActionWord,
    ExplicitMatrix,
    PTwist,
    Shift,
    SphericalTwist,
    TensorClass,
    induced_matrix,
    word_log_rho,
)

__all__ = [
    "__version__",
    "EngineError",
    "InputError",
    "NumericError",
    "ResourceError",
    "ContractError",
    "CollapseError",
    "BilinearLattice",
    "LatticeVector",
    "SquareIntMatrix",
    "IntPolynomial",
    "pairing_eval",
    "char_poly",
    "spectral_radius",
    "is_unipotent",
    "GradedDim",
    "GradedDimInterval",
    "shift",
    "direct_sum",
    "convolve",
    "cone_bounds",
    "cone_exact_from_map_rank",
    "delta_value",
    "ActionWord",
    "Shift",
    "PTwist",
    "TensorClass",
    "SphericalTwist",
    "ExplicitMatrix",
    "induced_matrix",
    "word_log_rho",
    "HKModel",
    "SurfaceModel",
    "TwistState",
    "BoundSeries",
    "initial_twist_state",
    "advance",
    "first_iterate_profile",
    "ext_growth_series",
    "entropy_lower_bound",
    "gy_verdict",
    "spherical_twist_series",
]
