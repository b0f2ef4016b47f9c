"""Radial Dunkl transforms, rearrangements and weighted transform inequalities."""

__version__ = "0.1.0"

from .errors import (
    DegenerateError, DivergenceError, DomainError, DunklError, InadmissibleParameters,
)
from .measure import (
    DunklIndex, Gaussian, Indicator, PowerGaussian, PowerProfile, Step, Tabulated, Zero,
    ball_measure, lp_norm, make_family, radial_integral,
)
from .rearrange import decreasing_rearrangement, distribution
from .transform import TransformedProfile, dunkl_transform_radial, inverse_transform_radial
from .weights import (
    bp_check, bp_equivalent_condition, hardy_condition_A, hardy_condition_B,
    pitt_index_check, theorem1_condition, theorem1_condition_power,
    theorem2_condition_ii, theorem2_condition_ii_power,
)
from .inequalities import (
    InequalityReport, theorem1_necessity_probe, verify_hlp, verify_pitt, verify_theorem1,
)
from .besov import BesovParams, besov_seminorm, make_phi, verify_theorem3

__all__ = [
    "__version__",
    "DunklError", "DomainError", "DivergenceError", "DegenerateError",
    "InadmissibleParameters",
    "DunklIndex", "Gaussian", "Indicator", "PowerGaussian", "PowerProfile", "Step",
    "Tabulated", "Zero", "ball_measure", "lp_norm", "make_family", "radial_integral",
    "decreasing_rearrangement", "distribution",
    "TransformedProfile", "dunkl_transform_radial", "inverse_transform_radial",
    "bp_check", "bp_equivalent_condition", "hardy_condition_A", "hardy_condition_B",
    "pitt_index_check", "theorem1_condition", "theorem1_condition_power",
    "theorem2_condition_ii", "theorem2_condition_ii_power",
    "InequalityReport", "theorem1_necessity_probe", "verify_hlp", "verify_pitt",
    "verify_theorem1",
    "BesovParams", "besov_seminorm", "make_phi", "verify_theorem3",
]
