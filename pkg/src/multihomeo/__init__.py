"""Changes of variable that keep families of Fourier multipliers bounded.

Exact dyadic nets, homeomorphisms built from them, grid multiplier norms and
the experiment pipelines that check the construction numerically.
"""

from .families import TestFunction, from_spec
from .homeo import (
    AffineLineMap,
    CoordinateHomeomorphism,
    NetHomeomorphism,
    RadialHomeomorphism,
    TorusHomeomorphism,
    radial_build,
    radial_eval,
    radial_lipschitz_check,
    torus_adapt,
)
from .mnorm import (
    MultiplierNormEstimator,
    MultiplierSymbol,
    NormEstimate,
    apply,
    estimate_c,
    lower_bound,
    norm_m2,
    telescope_bound,
    upper_bound,
)
from .modulus import CModel, Modulus, estimate_modulus, select_b, select_delta
from .nets import AlphaNet, BetaNet, Interval, NetAddress, dyadic_interval, dyadic_line, net_alpha, net_beta
from .spectral import (
    FrequencyPartition,
    GridSignal,
    SquareFunction,
    approximant,
    dyadic_partition,
    empirical_lp_constants,
    project,
    refine_partition_dyadic,
    square_function,
)

__version__ = "0.1.0"

__all__ = [
    "AffineLineMap",
    "AlphaNet",
    "BetaNet",
    "CModel",
    "CoordinateHomeomorphism",
    "FrequencyPartition",
    "GridSignal",
    "Interval",
    "Modulus",
    "MultiplierNormEstimator",
    "MultiplierSymbol",
    "NetAddress",
    "NetHomeomorphism",
    "NormEstimate",
    "RadialHomeomorphism",
    "SquareFunction",
    "TestFunction",
    "TorusHomeomorphism",
    "apply",
    "approximant",
    "dyadic_interval",
    "dyadic_line",
    "dyadic_partition",
    "empirical_lp_constants",
    "estimate_c",
    "estimate_modulus",
    "from_spec",
    "lower_bound",
    "net_alpha",
    "net_beta",
    "norm_m2",
    "project",
    "radial_build",
    "radial_eval",
    "radial_lipschitz_check",
    "refine_partition_dyadic",
    "select_b",
    "select_delta",
    "square_function",
    "telescope_bound",
    "torus_adapt",
    "upper_bound",
]
