"""Normal modes, inner products and two-point functions of scalar fields on anti-de Sitter space."""

from .errors import (AdsModesError, BelowBoundError, ChartBoundaryError, DegenerateParameterError, DivergenceError,
                     DomainError, ExtrapolationError, InvalidSpecError, NonConvergenceError, NormalizationPoleError,
                     ParameterPoleError, PoleError)
from .geometry import Point
from .modes2 import Family, ModeSpec, RadialProfile, frequency, radial_profile
from .products import gram_matrix, kg_inner, regularized_inner
from .propagators import Kind, PropagatorKind, closed_form, gb_decomposition, mode_sum
from .dipole4 import DipoleFamily, DipoleModeSpec, triplet_space
from .spectral import PotentialSpec, potential_v, singleton_below_minimum

__version__ = "0.1.0"

__all__ = [
    "AdsModesError", "BelowBoundError", "ChartBoundaryError", "DegenerateParameterError", "DivergenceError",
    "DomainError", "ExtrapolationError", "InvalidSpecError", "NonConvergenceError", "NormalizationPoleError",
    "ParameterPoleError", "PoleError", "Point", "Family", "ModeSpec", "RadialProfile", "frequency",
    "radial_profile", "gram_matrix", "kg_inner", "regularized_inner", "Kind", "PropagatorKind", "closed_form",
    "gb_decomposition", "mode_sum", "DipoleFamily", "DipoleModeSpec", "triplet_space", "PotentialSpec",
    "potential_v", "singleton_below_minimum",
]
