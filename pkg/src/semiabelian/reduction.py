"""Reduction of family curves at each prime.

All fibers are of type I_v (good or multiplicative), so the per-prime data is
the index v, the split/non-split twist, the node on the Weierstrass model,
and which component a section passes through.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .arith import _jacobi, _val, factor_product, gcd, is_prime, prime_divisors
from .points import INFINITY, CurvePoint, NotIntegralError, _residue
from .weierstrass import FamilyCurve

__all__ = [
    "ComponentClass",
    "FiberChain",
    "FiberComponent",
    "FiberReport",
    "GoodReductionError",
    "Twist",
    "additive_primes",
    "bad_primes",
    "component_class_P",
    "fiber_chain",
    "fiber_chain_by_orbits",
    "fiber_report",
    "fiber_reports",
    "is_narrow_P",
    "kodaira",
    "point_component_class",
    "singular_point",
    "singular_point_check",
    "twist_kind",
]


class Twist(str, enum.Enum):
    GOOD = "good"
    SPLIT = "split"
    NONSPLIT = "nonsplit"


class ComponentClass(str, enum.Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"


class GoodReductionError(ValueError):
    """Asked for multiplicative data at a prime of good reduction."""


def additive_primes(m: int, n: int) -> list[int]:
    """Primes where y^2 + xy = x^3 + mx^2 + nx has additive reduction.

    Accepts pairs outside the family on purpose.
    """
    g = gcd(4 * m + 1, n)
    return list(prime_divisors(g)) if g > 1 else []


def kodaira(c: FamilyCurve, p: int) -> int:
    """Index v of the Kodaira symbol I_v at p: 2 v_p(n) + v_p((4m+1)^2 - 64n)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return 2 * _val(p, c.n) + _val(p, c.disc_cofactor)


def bad_primes(c: FamilyCurve) -> tuple[int, ...]:
    return factor_product([c.n, c.disc_cofactor]).primes


def _inv(a: int, p: int) -> int:
    return pow(a, -1, p)


def singular_point(c: FamilyCurve, p: int) -> tuple[int, int]:
    """Residues (x, y) of the node of the fiber at an odd bad prime p."""
    if c.n % p == 0:
        return (0, 0)
    k = 4 * c.m + 1
    return (-k * _inv(8, p) % p, k * _inv(16, p) % p)


def twist_kind(c: FamilyCurve, p: int) -> tuple[Twist, tuple[int, int]]:
    """Split or non-split reduction at an odd prime with v >= 1, and the node.

    At p | n the node is the origin and the fiber is split iff 4m+1 is a
    square mod p. Otherwise it is split iff (4m+1 / p) = (-2 / p), where
    (-2 / p) = (-1)^((p^2 + 4p - 5) / 8).
    """
    twist, pt, _ = _twist(c, p)
    return twist, pt


def _twist(c: FamilyCurve, p: int):
    if p == 2:
        raise ValueError("no multiplicative reduction at 2 in the family")
    if kodaira(c, p) == 0:
        raise GoodReductionError(f"{c} has good reduction at {p}")
    k = 4 * c.m + 1
    leg = _jacobi(k, p)
    if c.n % p == 0:
        target = 1
    else:
        target = -1 if ((p * p + 4 * p - 5) // 8) % 2 else 1
    twist = Twist.SPLIT if leg == target else Twist.NONSPLIT
    return twist, singular_point(c, p), {"legendre_4m_plus_1": leg, "split_target": target}


def singular_point_check(c: FamilyCurve, p: int, pt: tuple[int, int] | None = None) -> bool:
    """Does pt (default: the reported node) lie on the non-smooth locus mod p?

    The locus is cut out by x = -2y, 12y^2 - (4m+1)y + n = 0 and the
    curve equation.
    """
    if pt is None:
        pt = singular_point(c, p)
    x, y = pt
    m, n = c.m, c.n
    return (
        (x + 2 * y) % p == 0
        and (12 * y * y - (4 * m + 1) * y + n) % p == 0
        and (y * y + x * y - x**3 - m * x * x - n * x) % p == 0
    )


def component_class_P(c: FamilyCurve, p: int) -> ComponentClass:
    """Class of P = (0, 0) in the component group at p: nontrivial iff p | n."""
    return ComponentClass.NONTRIVIAL if c.n % p == 0 else ComponentClass.TRIVIAL


def is_narrow_P(c: FamilyCurve) -> bool:
    return c.n in (1, -1)


def point_component_class(c: FamilyCurve, pt: CurvePoint, p: int) -> ComponentClass:
    """Component class of a rational point at p, read off the Weierstrass model.

    The smooth locus of the minimal Weierstrass model is the identity
    component, so a point is nontrivial exactly when it reduces to the node.
    Points that are not p-integral reduce to O.
    """
    if p == 2 or kodaira(c, p) == 0 or pt is INFINITY:
        return ComponentClass.TRIVIAL
    try:
        red = (_residue(pt.x, p), _residue(pt.y, p))
    except NotIntegralError:
        return ComponentClass.TRIVIAL
    if red == singular_point(c, p):
        return ComponentClass.NONTRIVIAL
    return ComponentClass.TRIVIAL


@dataclass(frozen=True)
class FiberReport:
    p: int
    kodaira_v: int
    twist: Twist
    singular_point: tuple[int, int] | None
    P_component_trivial: bool
    legendre: dict = field(default_factory=dict, compare=False)

    @property
    def symbol(self) -> str:
        return f"I_{self.kodaira_v}"


def fiber_report(c: FamilyCurve, p: int) -> FiberReport:
    v = kodaira(c, p)
    trivial = component_class_P(c, p) is ComponentClass.TRIVIAL
    if v == 0:
        return FiberReport(p, 0, Twist.GOOD, None, trivial)
    twist, pt, legs = _twist(c, p)
    return FiberReport(p, v, twist, pt, trivial, legs)


def fiber_reports(c: FamilyCurve) -> list[FiberReport]:
    """Reports for every prime dividing the discriminant, ascending."""
    return [fiber_report(c, p) for p in bad_primes(c)]


# -- special fibers of the minimal regular model ---------------------------


@dataclass(frozen=True)
class FiberComponent:
    degree: int  # 1: geometrically irreducible over F_p; 2: splits over F_{p^2}
    kind: str  # "line" or "pinched-line"


@dataclass(frozen=True)
class FiberChain:
    """Components of the special fiber of the minimal regular model.

    Split fibers form a cycle of v lines. Non-split fibers form a chain; in
    both cases ``intersections[i]`` is the degree of the closed point where
    component i meets component i + 1 (cyclically for split fibers).
    """

    v: int
    twist: Twist
    components: tuple[FiberComponent, ...]
    intersections: tuple[int, ...]

    @property
    def w(self) -> int:
        return len(self.components)

    @property
    def cyclic(self) -> bool:
        return self.twist is Twist.SPLIT

    @property
    def component_group_order(self) -> int | None:
        """Order of the component group; only pinned down here for split fibers."""
        return self.v if self.twist is Twist.SPLIT else None


def fiber_chain(v: int, twist: Twist | str) -> FiberChain:
    """Closed-form description of the I_v fiber over F_p.

    Non-split: w = (v+1)/2 components for odd v and (v+2)/2 for even v. The
    first is a line over F_p, the middle ones are lines over F_{p^2}, and all
    intersection points have degree 2. For even v the last component is a
    line over F_p; for odd v it is a line over F_{p^2} with one point pinched
    to a rational point. For v = 1 the lone component is a rational curve
    with a node whose branches are conjugate.
    """
    twist = Twist(twist)
    if v < 1:
        raise ValueError("fiber chains need v >= 1")
    if twist is Twist.GOOD:
        raise ValueError("fiber chains describe multiplicative fibers")
    if twist is Twist.SPLIT:
        return FiberChain(v, twist, (FiberComponent(1, "line"),) * v, (1,) * v)
    if v == 1:
        return FiberChain(1, twist, (FiberComponent(1, "pinched-line"),), ())
    if v % 2:
        w = (v + 1) // 2
        last = FiberComponent(2, "pinched-line")
    else:
        w = (v + 2) // 2
        last = FiberComponent(1, "line")
    comps = (FiberComponent(1, "line"),) + (FiberComponent(2, "line"),) * (w - 2) + (last,)
    return FiberChain(v, twist, comps, (2,) * (w - 1))


def fiber_chain_by_orbits(v: int, twist: Twist | str) -> FiberChain:
    """Brute-force fiber_chain from the geometric v-cycle and Frobenius.

    Over F_{p^2} the fiber is a cycle D_0, ..., D_{v-1} with nodes
    e_j = D_j & D_{j+1}. Frobenius acts trivially in the split case and by
    i -> -i on components (so e_j -> e_{-j-1}) in the non-split case.
    Components over F_p are the orbits; a node whose orbit stays within a
    single component orbit pinches that component.
    """
    twist = Twist(twist)
    if v < 1 or twist is Twist.GOOD:
        raise ValueError("need v >= 1 and a multiplicative twist")
    if twist is Twist.SPLIT:
        sigma_c = lambda i: i  # noqa: E731
        sigma_e = lambda j: j  # noqa: E731
    else:
        sigma_c = lambda i: (-i) % v  # noqa: E731
        sigma_e = lambda j: (-j - 1) % v  # noqa: E731

    def orbits(n, sigma):
        seen, out = set(), []
        for i in range(n):
            if i not in seen:
                orb = frozenset({i, sigma(i)})
                seen |= orb
                out.append(orb)
        return out

    comp_orbits = orbits(v, sigma_c)
    owner = {i: k for k, orb in enumerate(comp_orbits) for i in orb}
    edge_orbits = orbits(v, sigma_e)

    pinched = set()
    links: dict[frozenset, int] = {}
    for orb in edge_orbits:
        j = min(orb)
        a, b = owner[j], owner[(j + 1) % v]
        if a == b and (twist is Twist.NONSPLIT or v == 1):
            pinched.add(a)
        else:
            links[frozenset({a, b})] = len(orb)

    comps = tuple(
        FiberComponent(len(orb), "pinched-line" if k in pinched else "line")
        for k, orb in enumerate(comp_orbits)
    )
    if twist is Twist.SPLIT:
        if v == 1:
            return FiberChain(1, twist, (FiberComponent(1, "line"),), (1,))
        inter = tuple(links[frozenset({k, (k + 1) % v})] for k in range(v))
        return FiberChain(v, twist, comps, inter)
    if len(links) != len(comps) - 1:
        raise AssertionError(f"quotient of the {v}-cycle is not a chain")
    inter = tuple(links[frozenset({k, k + 1})] for k in range(len(comps) - 1))
    return FiberChain(v, twist, comps, inter)
