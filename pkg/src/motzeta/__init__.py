"""Exact motivic zeta functions and nearby fibers from simple normal
crossings data, with the supporting toric and lattice combinatorics and a
finite-field arc-counting oracle."""

from .errors import MotivicError
from .grothring import POINT, BasisContext, GrothClass, StratumSymbol, dualize, induce_m, specialize_count
from .laurent import L, LaurentPoly
from .ratfunc import DenomFactor, TRational
from .resolution import (
    ResolutionData,
    check_functional_naive,
    check_functional_sprime,
    check_power_rule,
    check_self_duality,
    equivariant_zeta,
    naive_zeta,
    nearby_fiber,
)

__version__ = "0.1.0"

__all__ = [
    "L",
    "POINT",
    "BasisContext",
    "DenomFactor",
    "GrothClass",
    "LaurentPoly",
    "MotivicError",
    "ResolutionData",
    "StratumSymbol",
    "TRational",
    "check_functional_naive",
    "check_functional_sprime",
    "check_power_rule",
    "check_self_duality",
    "dualize",
    "equivariant_zeta",
    "induce_m",
    "naive_zeta",
    "nearby_fiber",
    "specialize_count",
]
