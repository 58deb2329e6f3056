"""Stochastic disk packings with a prescribed grain-size curve and porosity."""
from . import distributions, fitting, granulometry, packing
from .distributions import Constant, Gamma, Hyperbolic, Lognormal, Weibull
from .fitting import FitConfig, chi_square_gof, fit_candidates, fit_mle, select_best
from .granulometry import GranulometricCurve, parse_granulometric_table, read_curve, to_log_histogram
from .packing import Polygon, RadiusModel, Rectangle, sequential_pack, verify_packing

__all__ = [
    "distributions", "fitting", "granulometry", "packing",
    "Constant", "Gamma", "Hyperbolic", "Lognormal", "Weibull",
    "FitConfig", "chi_square_gof", "fit_candidates", "fit_mle", "select_best",
    "GranulometricCurve", "parse_granulometric_table", "read_curve", "to_log_histogram",
    "Polygon", "RadiusModel", "Rectangle", "sequential_pack", "verify_packing",
]
