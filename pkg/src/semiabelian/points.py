"""Chord-tangent group law over Q and over prime fields, plus point counting.

Points over Q have Fraction coordinates; points over F_p have int residues
in range(p). The same formulas serve both: only division differs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from .arith import _jacobi, is_prime
from .weierstrass import WeierstrassEquation

__all__ = [
    "F2_CURVES",
    "INFINITY",
    "Infinity",
    "NotOnCurveError",
    "NotIntegralError",
    "Point",
    "PointCount",
    "ReducedCurve",
    "add",
    "classify_F2",
    "count_points",
    "multiply",
    "negate",
    "on_curve",
    "order_of",
    "reduce_equation",
    "reduce_mod_p",
]


class NotOnCurveError(ValueError):
    pass


class NotIntegralError(ValueError):
    """A coordinate has the prime in its denominator."""


class Infinity:
    """The point at infinity (0:1:0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction | int
    y: Fraction | int

    def __str__(self):
        return f"({self.x}, {self.y})"


CurvePoint = Union[Point, Infinity]


@dataclass(frozen=True)
class ReducedCurve:
    """A Weierstrass equation with coefficients in F_p (possibly singular)."""

    p: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def coefficients(self) -> tuple[int, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def disc(self) -> int:
        # integral polynomial in the a_i, so reduction commutes with it
        eq = WeierstrassEquation(*self.coefficients)
        return int(eq.invariants.disc) % self.p

    @property
    def is_smooth(self) -> bool:
        return self.disc != 0

    def lhs_minus_rhs(self, x: int, y: int) -> int:
        a1, a2, a3, a4, a6 = self.coefficients
        return (y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)) % self.p


def _residue(a: Fraction, p: int) -> int:
    a = Fraction(a)
    if a.denominator % p == 0:
        raise NotIntegralError(f"{a} is not {p}-integral")
    return a.numerator * pow(a.denominator, -1, p) % p


def reduce_equation(eq: WeierstrassEquation, p: int) -> ReducedCurve:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return ReducedCurve(p, *(_residue(a, p) for a in eq.coefficients))


Curve = Union[WeierstrassEquation, ReducedCurve]


def _ops(curve: Curve):
    """(normalize, divide) for the coefficient field of the curve."""
    if isinstance(curve, ReducedCurve):
        p = curve.p
        return (lambda a: a % p), (lambda a, b: a * pow(b, -1, p) % p)
    return Fraction, (lambda a, b: Fraction(a) / b)


def on_curve(curve: Curve, pt: CurvePoint) -> bool:
    if pt is INFINITY:
        return True
    norm, _ = _ops(curve)
    return norm(curve.lhs_minus_rhs(pt.x, pt.y)) == 0


def _check(curve: Curve, *pts: CurvePoint) -> None:
    for pt in pts:
        if not on_curve(curve, pt):
            raise NotOnCurveError(f"{pt} is not on {curve}")


def _neg(curve: Curve, pt: CurvePoint) -> CurvePoint:
    if pt is INFINITY:
        return INFINITY
    norm, _ = _ops(curve)
    return Point(pt.x, norm(-pt.y - curve.a1 * pt.x - curve.a3))


def negate(curve: Curve, pt: CurvePoint) -> CurvePoint:
    """-(x, y) = (x, -y - a1 x - a3)."""
    _check(curve, pt)
    return _neg(curve, pt)


def _add(curve: Curve, p1: CurvePoint, p2: CurvePoint) -> CurvePoint:
    if p1 is INFINITY:
        return p2
    if p2 is INFINITY:
        return p1
    norm, div = _ops(curve)
    a1, a2, a3, a4, _ = curve.coefficients
    x1, y1, x2, y2 = p1.x, p1.y, p2.x, p2.y
    if norm(x1 - x2) == 0:
        if norm(y1 + y2 + a1 * x2 + a3) == 0:
            return INFINITY
        # tangent; the denominator is nonzero because P != -P
        num = 3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1
        den = 2 * y1 + a1 * x1 + a3
    else:
        num = y2 - y1
        den = x2 - x1
    lam = div(num, den)
    nu = norm(y1 - lam * x1)
    x3 = norm(lam * lam + a1 * lam - a2 - x1 - x2)
    y3 = norm(-(lam + a1) * x3 - nu - a3)
    return Point(x3, y3)


def add(curve: Curve, p1: CurvePoint, p2: CurvePoint) -> CurvePoint:
    _check(curve, p1, p2)
    return _add(curve, p1, p2)


def multiply(curve: Curve, k: int, pt: CurvePoint) -> CurvePoint:
    _check(curve, pt)
    if k < 0:
        k, pt = -k, _neg(curve, pt)
    result: CurvePoint = INFINITY
    while k:
        if k & 1:
            result = _add(curve, result, pt)
        pt = _add(curve, pt, pt)
        k >>= 1
    return result


def order_of(curve: Curve, pt: CurvePoint, bound: int = 12) -> int | None:
    """Smallest k >= 1 with k*pt = O, or None if k would exceed ``bound``.

    The default bound 12 is Mazur's cap on torsion orders over Q.
    """
    _check(curve, pt)
    acc = pt
    for k in range(1, bound + 1):
        if acc is INFINITY:
            return k
        acc = _add(curve, acc, pt)
    return None


def reduce_mod_p(curve: WeierstrassEquation, pt: CurvePoint, p: int) -> CurvePoint:
    """Coordinate-wise reduction; rejects points that are not p-integral."""
    _check(curve, pt)
    if pt is INFINITY:
        return INFINITY
    return Point(_residue(pt.x, p), _residue(pt.y, p))


# -- counting --------------------------------------------------------------


class PointCount(NamedTuple):
    count: int
    smooth: bool


def count_points(curve: Curve, p: int | None = None) -> PointCount:
    """Number of projective F_p-points, including the one at infinity.

    Singular reductions are counted too; ``smooth`` flags them.
    """
    if isinstance(curve, WeierstrassEquation):
        if p is None:
            raise ValueError("a prime is needed to reduce a rational equation")
        curve = reduce_equation(curve, p)
    p = curve.p
    if p > 10**4:
        raise ValueError("brute-force counting is limited to p <= 10^4")
    a1, a2, a3, a4, a6 = curve.coefficients
    total = 1
    if p == 2:
        for x in range(2):
            for y in range(2):
                total += curve.lhs_minus_rhs(x, y) == 0
    else:
        # y^2 + by = f has 1 + ((b^2 + 4f)/p) solutions
        for x in range(p):
            b = a1 * x + a3
            f = x * x * x + a2 * x * x + a4 * x + a6
            total += 1 + _jacobi(b * b + 4 * f, p)
    return PointCount(total, curve.is_smooth)


# The five elliptic curves over F_2, indexed by their number of points.
F2_CURVES = {
    "E1": WeierstrassEquation(0, 1, 1, 0, 1),
    "E2": WeierstrassEquation(1, 1, 0, 1, 0),
    "E3": WeierstrassEquation(0, 0, 1, 0, 0),
    "E4": WeierstrassEquation(1, 0, 0, 1, 0),
    "E5": WeierstrassEquation(0, 1, 1, 0, 0),
}


def classify_F2(curve: Curve) -> str:
    """Name ("E1".."E5") of the isomorphism class of the reduction mod 2."""
    count, smooth = count_points(curve, 2)
    if not smooth:
        raise ValueError("reduction at 2 is singular")
    return f"E{count}"
