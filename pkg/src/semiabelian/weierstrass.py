"""Weierstrass equations, their invariants, and the family y^2 + xy = x^3 + mx^2 + nx."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .arith import gcd

__all__ = [
    "CoordinateChange",
    "FamilyCurve",
    "InvalidFamilyError",
    "InvariantSet",
    "Minimality",
    "SingularCurveError",
    "WeierstrassEquation",
    "apply_change",
    "family_invariants",
    "family_isomorphisms",
    "family_new",
    "invariants",
    "is_globally_minimal_Iv",
]


class SingularCurveError(ArithmeticError):
    """The cubic has zero discriminant."""


class InvalidFamilyError(ValueError):
    """(m, n) violates one of the family conditions.

    ``reason`` is a short machine-friendly tag: "n even", "gcd", or "singular".
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class InvariantSet:
    b2: Fraction
    b4: Fraction
    b6: Fraction
    b8: Fraction
    c4: Fraction
    c6: Fraction
    disc: Fraction

    @property
    def j(self) -> Fraction:
        if self.disc == 0:
            raise SingularCurveError("j-invariant undefined: discriminant is zero")
        return self.c4**3 / self.disc


def _invariants(a1, a2, a3, a4, a6) -> InvariantSet:
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return InvariantSet(*(Fraction(v) for v in (b2, b4, b6, b8, c4, c6, disc)))


@dataclass(frozen=True)
class WeierstrassEquation:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational coefficients."""

    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def invariants(self) -> InvariantSet:
        if self.is_integral:
            return _invariants(*(int(a) for a in self.coefficients))
        return _invariants(*self.coefficients)

    @property
    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coefficients)

    def lhs_minus_rhs(self, x, y):
        """Evaluate y^2 + a1xy + a3y - (x^3 + a2x^2 + a4x + a6)."""
        return (
            y * y + self.a1 * x * y + self.a3 * y
            - (x * x * x + self.a2 * x * x + self.a4 * x + self.a6)
        )

    def __str__(self) -> str:
        lhs = _poly("y^2", [(self.a1, "xy"), (self.a3, "y")])
        rhs = _poly("x^3", [(self.a2, "x^2"), (self.a4, "x"), (self.a6, "")])
        return f"{lhs} = {rhs}"


def _poly(lead: str, terms) -> str:
    out = lead
    for a, mono in terms:
        if not a:
            continue
        sign = " - " if a < 0 else " + "
        mag = abs(a)
        if mono and mag == 1:
            body = mono
        else:
            body = (f"({mag})" if mag.denominator != 1 and mono else str(mag)) + mono
        out += sign + body
    return out


def invariants(eq: WeierstrassEquation) -> InvariantSet:
    return eq.invariants


# -- coordinate changes ----------------------------------------------------


@dataclass(frozen=True)
class CoordinateChange:
    """x = u^2 x' + r,  y = u^3 y' + s u^2 x' + t."""

    u: Fraction = Fraction(1)
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("u", "r", "s", "t"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.u == 0:
            raise ValueError("coordinate change needs u != 0")

    def then(self, other: CoordinateChange) -> CoordinateChange:
        """The single change equal to applying self, then other."""
        u, r, s, t = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return CoordinateChange(
            u * u2,
            r + u * u * r2,
            s + u * s2,
            t + u * u * s * r2 + u**3 * t2,
        )

    def inverse(self) -> CoordinateChange:
        u, r, s, t = self.u, self.r, self.s, self.t
        return CoordinateChange(1 / u, -r / u**2, -s / u, (r * s - t) / u**3)

    def apply_to_point(self, x, y) -> tuple[Fraction, Fraction]:
        """New coordinates (x', y') of the point with old coordinates (x, y)."""
        u, r, s, t = self.u, self.r, self.s, self.t
        xp = (x - r) / u**2
        yp = (y - t - s * u * u * xp) / u**3
        return Fraction(xp), Fraction(yp)


IDENTITY = CoordinateChange()
SIGN_INVOLUTION = CoordinateChange(u=-1, s=-1)


def apply_change(eq: WeierstrassEquation, ch: CoordinateChange) -> WeierstrassEquation:
    """Coefficients of the equation in the primed coordinates."""
    a1, a2, a3, a4, a6 = eq.coefficients
    u, r, s, t = ch.u, ch.r, ch.s, ch.t
    return WeierstrassEquation(
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u**2,
        (a3 + r * a1 + 2 * t) / u**3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
        (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
    )


# -- the (m, n) family -----------------------------------------------------


@dataclass(frozen=True)
class FamilyCurve:
    """The curve y^2 + xy = x^3 + mx^2 + nx with n odd and gcd(4m+1, n) = 1.

    Construction validates the pair and raises InvalidFamilyError otherwise.
    The point P = (0, 0) is the distinguished 2-division point.
    """

    m: int
    n: int
    invariants: InvariantSet = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m, n = self.m, self.n
        if n % 2 == 0:
            raise InvalidFamilyError("n even", f"n = {n} is even")
        g = gcd(4 * m + 1, n)
        if g != 1:
            raise InvalidFamilyError("gcd", f"gcd(4m+1, n) = gcd({4 * m + 1}, {n}) = {g}")
        if self.disc_cofactor == 0:
            raise InvalidFamilyError("singular", "discriminant vanishes")
        object.__setattr__(self, "invariants", family_invariants(self))

    @property
    def disc_cofactor(self) -> int:
        """(4m+1)^2 - 64n, the discriminant with the n^2 factor removed."""
        return (4 * self.m + 1) ** 2 - 64 * self.n

    @property
    def disc(self) -> int:
        return self.n * self.n * self.disc_cofactor

    @property
    def c4(self) -> int:
        return (4 * self.m + 1) ** 2 - 48 * self.n

    @property
    def j(self) -> Fraction:
        return self.invariants.j

    @cached_property
    def equation(self) -> WeierstrassEquation:
        return WeierstrassEquation(1, self.m, 0, self.n, 0)

    def __str__(self) -> str:
        return f"(m={self.m}, n={self.n})"


def family_new(m: int, n: int) -> FamilyCurve:
    return FamilyCurve(m, n)


def family_invariants(c: FamilyCurve) -> InvariantSet:
    """Invariants of the family member from the closed forms for c4 and Delta."""
    m, n = c.m, c.n
    k = 4 * m + 1
    b2, b4, b6, b8 = k, 2 * n, 0, -n * n
    c4 = k * k - 48 * n
    c6 = -(k**3) + 72 * k * n
    disc = n * n * (k * k - 64 * n)
    return InvariantSet(*(Fraction(v) for v in (b2, b4, b6, b8, c4, c6, disc)))


def family_isomorphisms(c1: FamilyCurve, c2: FamilyCurve) -> list[CoordinateChange]:
    """All changes of coordinates fixing (0, 0) that carry c1's equation to c2's.

    Keeping a1 = 1 forces u = 1 + 2s, so over the integers (u, s) is (1, 0)
    or (-1, -1); fixing the origin forces r = t = 0.
    """
    found = []
    for ch in (IDENTITY, SIGN_INVOLUTION):
        if apply_change(c1.equation, ch) == c2.equation:
            found.append(ch)
    return found


class Minimality(enum.Enum):
    MINIMAL_MULTIPLICATIVE = "minimal-multiplicative"
    UNDETERMINED = "undetermined"


def is_globally_minimal_Iv(eq: WeierstrassEquation) -> Minimality:
    """Integral equation with gcd(c4, Delta) = 1 is globally minimal of type I_v.

    Any common prime factor leaves the question open, since only the
    multiplicative branch of Tate's algorithm is covered.
    """
    if not eq.is_integral:
        raise ValueError("equation must have integral coefficients")
    inv = eq.invariants
    if inv.disc != 0 and gcd(int(inv.c4), int(inv.disc)) == 1:
        return Minimality.MINIMAL_MULTIPLICATIVE
    return Minimality.UNDETERMINED
