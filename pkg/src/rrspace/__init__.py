"""Riemann-Roch spaces and divisor arithmetic on nodal plane curves over prime fields."""
from .bipoly import BiPoly
from .divisor import Curve, NodalDivisor, SmoothDivisor, add, equals, subtract, validate
from .errors import (AssumptionViolated, InvalidInput, NotNodal, RetriesExhausted, RRError,
                     ZerosAtInfinity)
from .randomness import RngConfig
from .riemann_roch import (RRBasis, check_input_assumptions, comp_princ_div, interpolate,
                           make_curve, nodal_precompute, numerator_basis, random_smooth_divisor,
                           riemann_roch_basis)
from .upoly import UPoly

__version__ = "0.1.0"
