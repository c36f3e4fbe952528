"""Exact arithmetic for the curves y^2 + xy = x^3 + mx^2 + nx (n odd, gcd(4m+1, n) = 1).

Invariants, reduction at every prime, rational 2- and 4-torsion, the mu_2
quotient, and exhaustive searches reproducing the two "exactly two curves"
classifications.
"""

from .arith import factor, is_prime, legendre, valuation
from .classification import (
    SearchBox,
    build_dossier,
    enumerate_curves,
    theorem_order_four,
    theorem_order_two,
)
from .points import INFINITY, Point, add, count_points, multiply, order_of
from .reduction import Twist, fiber_chain, fiber_report, fiber_reports, kodaira, twist_kind
from .torsion import find_d, torsion_profile, translate_to_Q, velu_quotient
from .weierstrass import (
    CoordinateChange,
    FamilyCurve,
    InvalidFamilyError,
    WeierstrassEquation,
    apply_change,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "CoordinateChange",
    "FamilyCurve",
    "InvalidFamilyError",
    "Point",
    "SearchBox",
    "Twist",
    "WeierstrassEquation",
    "add",
    "apply_change",
    "build_dossier",
    "count_points",
    "enumerate_curves",
    "factor",
    "fiber_chain",
    "fiber_report",
    "fiber_reports",
    "find_d",
    "is_prime",
    "kodaira",
    "legendre",
    "multiply",
    "order_of",
    "theorem_order_four",
    "theorem_order_two",
    "torsion_profile",
    "translate_to_Q",
    "twist_kind",
    "valuation",
    "velu_quotient",
]
