"""Exact Weil representations, lattice Gauss sums, Hecke operators and L-series
for vector-valued modular forms."""

from .cyclotomic import Cyclotomic, e_frac, sqrt_nat
from .errors import WeilHeckeError
from .expansions import FourierExpansion, scalar_fixture, theta_series
from .hecke import hecke
from .kloosterman import H_c, KloostermanQuery, kloosterman_zeta
from .quadratic import DiscriminantForm, FiniteQuadraticModule, Lattice, discriminant_form
from .weil import MetaplecticElement, WeilRep

__all__ = [
    "Cyclotomic", "e_frac", "sqrt_nat", "WeilHeckeError", "FourierExpansion", "scalar_fixture",
    "theta_series", "hecke", "H_c", "KloostermanQuery", "kloosterman_zeta", "DiscriminantForm",
    "FiniteQuadraticModule", "Lattice", "discriminant_form", "MetaplecticElement", "WeilRep",
]
__version__ = "0.1.0"
