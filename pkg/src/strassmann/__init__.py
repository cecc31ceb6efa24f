"""Zero bounds and finiteness certificates for systems of p-adic power series.

The package works with restricted power series known up to ``O(p^N)``: it
builds saturation chains by lifting syzygies, computes Gröbner bases over F_p
and in the Tate algebra, bounds common zeros with a multivariate Strassmann
bound, and applies all of this to Thue equations by Skolem's method.
"""

from .fppoly import FpIdeal, FpPoly, groebner_basis, local_dimension, quotient_dimension, rational_points, syzygies
from .padic import NumberRingElement, PadicScalar, PrecisionError, padic_exp, padic_log, vp
from .rseries import ApproxIdeal, ApproxSeries, DegreeCapError, parse_series
from .saturation import SaturationChain, lifting_check, run_chain, saturate_exact
from .skolem import QUINTIC_INSTANCE, ThueInstance, solve_thue
from .tategb import TateGB, algorithm2, minimalize, reduce_basis, tate_buchberger, tate_divide
from .zerobound import ZeroBoundReport, bound_from_chain, multivariate_bound, strassmann_one_var

__version__ = "0.1.0"

__all__ = [
    "ApproxIdeal",
    "ApproxSeries",
    "DegreeCapError",
    "FpIdeal",
    "FpPoly",
    "NumberRingElement",
    "QUINTIC_INSTANCE",
    "PadicScalar",
    "PrecisionError",
    "SaturationChain",
    "TateGB",
    "ThueInstance",
    "ZeroBoundReport",
    "algorithm2",
    "bound_from_chain",
    "groebner_basis",
    "lifting_check",
    "local_dimension",
    "minimalize",
    "multivariate_bound",
    "padic_exp",
    "padic_log",
    "parse_series",
    "quotient_dimension",
    "rational_points",
    "reduce_basis",
    "run_chain",
    "saturate_exact",
    "solve_thue",
    "strassmann_one_var",
    "syzygies",
    "tate_buchberger",
    "tate_divide",
    "vp",
]
