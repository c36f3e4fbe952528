"""Two- and four-torsion of family curves and the quotient by mu_2.

When n = -d(4m+1+16d) for an odd d, the rational 2-torsion is
P = (0, 0), Q = (4d, -2d) and P + Q, the last one generating mu_2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import divisors, gcd, is_square
from .points import Point, _add, add, order_of
from .reduction import ComponentClass, kodaira
from .weierstrass import (
    CoordinateChange,
    FamilyCurve,
    WeierstrassEquation,
    apply_change,
)

__all__ = [
    "InvalidWitnessError",
    "QuotientResult",
    "TorsionProfile",
    "all_even_kodaira",
    "find_d",
    "halving_points",
    "mu2_action_free",
    "pq_component_class",
    "pq_point",
    "q_point",
    "torsion_profile",
    "translate_to_Q",
    "velu_intermediate",
    "velu_intermediate_chain",
    "velu_quotient",
]

P_POINT = Point(Fraction(0), Fraction(0))


class InvalidWitnessError(ValueError):
    """d does not solve n = -d(4m+1+16d)."""


def _is_witness(c: FamilyCurve, d: int) -> bool:
    return c.n == -d * (4 * c.m + 1 + 16 * d)


def _check_witness(c: FamilyCurve, d: int) -> None:
    if not _is_witness(c, d):
        raise InvalidWitnessError(f"d = {d} does not satisfy n = -d(4m+1+16d) for {c}")


def find_d(c: FamilyCurve) -> int | None:
    """The integer root of 16d^2 + (4m+1)d + n = 0, if there is one.

    Any integer root divides n. Two integer roots would multiply to n/16,
    which is not an integer since n is odd, so the root is unique.
    """
    k = 4 * c.m + 1
    found = [
        d
        for a in divisors(c.n)
        for d in (a, -a)
        if 16 * d * d + k * d + c.n == 0
    ]
    if len(found) > 1:
        raise AssertionError(f"several witnesses {found} for {c}")
    return found[0] if found else None


def q_point(c: FamilyCurve, d: int) -> Point:
    return Point(Fraction(4 * d), Fraction(-2 * d))


def pq_point(c: FamilyCurve, d: int) -> Point:
    a = 4 * c.m + 1 + 16 * d
    return Point(Fraction(-a, 4), Fraction(a, 8))


def halving_points(eq: WeierstrassEquation, target: Point) -> list[Point]:
    """All rational R with 2R = target, for integral eq and integral target.

    x(2R) = x(target) is a monic quartic in x(R) with integer coefficients,
    so its rational roots are integers dividing the constant term.
    """
    if not eq.is_integral or Fraction(target.x).denominator != 1:
        raise ValueError("halving search needs integral data")
    inv = eq.invariants
    b2, b4, b6, b8 = (int(b) for b in (inv.b2, inv.b4, inv.b6, inv.b8))
    xt = int(target.x)
    coeffs = [1, -4 * xt, -b4 - b2 * xt, -2 * b6 - 2 * b4 * xt, -b8 - b6 * xt]

    def quartic(x):
        return (((x + coeffs[1]) * x + coeffs[2]) * x + coeffs[3]) * x + coeffs[4]

    low = next((c for c in reversed(coeffs) if c), 1)
    cands = {0} if coeffs[4] == 0 else set()
    for a in divisors(low):
        cands.update((a, -a))

    a1, a2, a3, a4, a6 = (int(a) for a in eq.coefficients)
    found = []
    for x in sorted(cands):
        if quartic(x):
            continue
        b = a1 * x + a3
        disc = b * b + 4 * (x**3 + a2 * x * x + a4 * x + a6)
        if not is_square(disc):
            continue
        s = isqrt(disc)
        for y2 in {-b + s, -b - s}:
            pt = Point(Fraction(x), Fraction(y2, 2))
            if _add(eq, pt, pt) == target:
                found.append(pt)
    return sorted(found)


@dataclass(frozen=True)
class TorsionProfile:
    P: Point
    d: int | None
    Q: Point | None
    PQ: Point | None
    R: Point | None
    halves_of_P: tuple[Point, ...] = ()

    @property
    def two_torsion_rank(self) -> int:
        return 2 if self.d is not None else 1


def torsion_profile(c: FamilyCurve) -> TorsionProfile:
    """2-torsion from the witness d, and points R with 2R = P.

    R is the largest point (lexicographically in (x, y)) among the halves of P.
    """
    eq = c.equation
    if order_of(eq, P_POINT) != 2:
        raise AssertionError("P should have order 2")
    d = find_d(c)
    Q = PQ = None
    if d is not None:
        Q, PQ = q_point(c, d), pq_point(c, d)
        for pt in (Q, PQ):
            if order_of(eq, pt) != 2:
                raise AssertionError(f"{pt} should have order 2 on {c}")
        if add(eq, P_POINT, Q) != PQ:
            raise AssertionError("P + Q disagrees with the closed form")
    halves = tuple(halving_points(eq, P_POINT))
    R = halves[-1] if halves else None
    return TorsionProfile(P_POINT, d, Q, PQ, R, halves)


def all_even_kodaira(c: FamilyCurve) -> bool:
    """Every fiber has even index v, i.e. (4m+1)^2 - 64n is a square."""
    return is_square(c.disc_cofactor)


# -- translation to Q and the mu_2 quotient --------------------------------


def translate_to_Q(c: FamilyCurve, d: int) -> FamilyCurve:
    """Move Q = (4d, -2d) to the origin: (m + 12d, d(4m+1+32d))."""
    _check_witness(c, d)
    return FamilyCurve(c.m + 12 * d, d * (4 * c.m + 1 + 32 * d))


def translation_change(d: int) -> CoordinateChange:
    return CoordinateChange(u=1, r=4 * d, s=0, t=-2 * d)


@dataclass(frozen=True)
class QuotientResult:
    source: FamilyCurve
    d: int
    target: FamilyCurve


def velu_quotient(c: FamilyCurve, d: int) -> QuotientResult:
    """E / mu_2 for mu_2 generated by P + Q: the curve (m + 6d, d^2)."""
    _check_witness(c, d)
    return QuotientResult(c, d, FamilyCurve(c.m + 6 * d, d * d))


def velu_intermediate(m: int, d: int) -> tuple[Fraction, Fraction]:
    """a4, a6 of Velu's model y^2 + xy = x^3 + mx^2 + a4 x + a6 of E / <P+Q>.

    Here n = -d(4m+1+16d) is implied.
    """
    m, d = Fraction(m), Fraction(d)
    a4 = -5 * m**2 - 64 * m * d - Fraction(5, 2) * m - 176 * d**2 - 16 * d - Fraction(5, 16)
    a6 = (
        3 * m**3 + 64 * m**2 * d + Fraction(9, 4) * m**2 + 432 * m * d**2
        + 32 * m * d + Fraction(9, 16) * m + 896 * d**3 + 108 * d**2
        + 4 * d + Fraction(3, 64)
    )
    return a4, a6


def velu_intermediate_changes(m: int, d: int) -> list[CoordinateChange]:
    """Translation by t = -m/2 - 4d - 1/8, the s = 1/2 shear, then scaling by 2."""
    t = -Fraction(m, 2) - 4 * d - Fraction(1, 8)
    return [
        CoordinateChange(u=1, r=-2 * t, s=0, t=t),
        CoordinateChange(u=1, r=0, s=Fraction(1, 2), t=0),
        CoordinateChange(u=2),
    ]


def velu_intermediate_chain(m: int, d: int) -> WeierstrassEquation:
    """Velu's model pushed through the three coordinate changes."""
    a4, a6 = velu_intermediate(m, d)
    eq = WeierstrassEquation(1, m, 0, a4, a6)
    for ch in velu_intermediate_changes(m, d):
        eq = apply_change(eq, ch)
    return eq


def pq_component_class(c: FamilyCurve, d: int, p: int) -> ComponentClass:
    """P + Q is nontrivial at p iff p | (4m+1+16d)(4m+1+32d); never at 2."""
    _check_witness(c, d)
    k = 4 * c.m + 1
    if p != 2 and (k + 16 * d) * (k + 32 * d) % p == 0:
        return ComponentClass.NONTRIVIAL
    return ComponentClass.TRIVIAL


def mu2_action_free(c: FamilyCurve, d: int, p: int) -> bool:
    """Translation by P + Q acts freely on the fiber at p iff p does not divide d."""
    _check_witness(c, d)
    return d % p != 0


def mu2_action_free_by_fibers(c: FamilyCurve, d: int, p: int) -> bool:
    """Same predicate from its definition: non-free iff the fiber is
    multiplicative and P + Q lies on the identity component."""
    multiplicative = kodaira(c, p) > 0
    trivial = pq_component_class(c, d, p) is ComponentClass.TRIVIAL
    return not (multiplicative and trivial)


def random_witness_curve(rng: random.Random, m_bound: int = 10**6, d_bound: int = 10**6) -> tuple[FamilyCurve, int]:
    """A random family curve with full rational 2-torsion, and its witness."""
    while True:
        m = rng.randint(-m_bound, m_bound)
        d = rng.randint(-d_bound, d_bound) | 1
        n = -d * (4 * m + 1 + 16 * d)
        if n % 2 and gcd(4 * m + 1, n) == 1:
            return FamilyCurve(m, n), d
