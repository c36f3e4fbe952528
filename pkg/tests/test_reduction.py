import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from semiabelian.arith import factor
from semiabelian.points import Point, count_points, reduce_equation
from semiabelian.reduction import (
    ComponentClass,
    FiberComponent,
    GoodReductionError,
    Twist,
    additive_primes,
    bad_primes,
    component_class_P,
    fiber_chain,
    fiber_chain_by_orbits,
    fiber_report,
    fiber_reports,
    is_narrow_P,
    kodaira,
    point_component_class,
    singular_point,
    singular_point_check,
    twist_kind,
)
from semiabelian.torsion import halving_points, P_POINT
from semiabelian.weierstrass import FamilyCurve

from strategies import family_curves


def fibers(m, n):
    return {f.p: (f.kodaira_v, f.twist) for f in fiber_reports(FamilyCurve(m, n))}


def test_classified_curve_fibers():
    assert fibers(-4, -1) == {17: (2, Twist.SPLIT)}
    assert fibers(4, 1) == {3: (2, Twist.NONSPLIT), 5: (2, Twist.SPLIT)}
    assert {p: v for p, (v, _) in fibers(2, 1).items()} == {17: 1}
    assert {p: v for p, (v, _) in fibers(-2, 1).items()} == {3: 1, 5: 1}
    # Delta = -63 = -3^2 * 7
    assert {p: v for p, (v, _) in fibers(0, 1).items()} == {3: 2, 7: 1}


def test_kodaira_examples():
    assert kodaira(FamilyCurve(-4, -1), 17) == 2
    assert kodaira(FamilyCurve(-2, 1), 3) == 1
    assert kodaira(FamilyCurve(-2, 1), 5) == 1
    assert kodaira(FamilyCurve(0, 1), 2) == 0
    with pytest.raises(ValueError):
        kodaira(FamilyCurve(0, 1), 9)


@pytest.mark.parametrize(
    "m, n, expected",
    [(1, 5, [5]), (6, 25, [5]), (2, 9, [3]), (0, 1, []), (-4, -1, []), (5, 21 * 11, [3, 7])],
)
def test_additive_primes(m, n, expected):
    assert additive_primes(m, n) == expected


@given(st.integers(-300, 300), st.integers(-300, 300).filter(bool))
def test_additive_primes_are_gcd_primes(m, n):
    g = math.gcd(4 * m + 1, n)
    assert additive_primes(m, n) == sorted(sympy.primefactors(g))


@given(family_curves())
def test_valid_pairs_have_no_additive_primes(c):
    assert additive_primes(c.m, c.n) == []


@given(family_curves(bound=10**6))
def test_kodaira_is_valuation_of_disc(c):
    ref = sympy.factorint(abs(c.disc))
    assert {p: kodaira(c, p) for p in bad_primes(c)} == ref
    # the sum of v_p log p is log|Delta|
    assert math.prod(p ** kodaira(c, p) for p in bad_primes(c)) == abs(c.disc)
    assert math.isclose(sum(kodaira(c, p) * math.log(p) for p in bad_primes(c)), math.log(abs(c.disc)))


def test_twist_examples():
    twist, pt = twist_kind(FamilyCurve(0, 3), 3)
    assert (twist, pt) == (Twist.SPLIT, (0, 0))
    # -15 = 2 = 6^2 mod 17 and (-2 / 17) = 1
    twist, pt = twist_kind(FamilyCurve(-4, -1), 17)
    assert twist is Twist.SPLIT
    inv8, inv16 = pow(8, -1, 17), pow(16, -1, 17)
    assert twist_kind(FamilyCurve(2, 1), 17)[1] == (-9 * inv8 % 17, 9 * inv16 % 17)


def test_twist_errors():
    with pytest.raises(GoodReductionError):
        twist_kind(FamilyCurve(-4, -1), 3)
    with pytest.raises(ValueError):
        twist_kind(FamilyCurve(-4, -1), 2)


def test_fiber_report_legendre_audit():
    rep = fiber_report(FamilyCurve(4, 1), 3)
    assert rep.symbol == "I_2"
    assert rep.legendre == {"legendre_4m_plus_1": -1, "split_target": 1}
    good = fiber_report(FamilyCurve(4, 1), 7)
    assert good.twist is Twist.GOOD and good.singular_point is None and good.kodaira_v == 0


def _singular_points(c, p):
    """All affine points mod p where the curve and both partials vanish."""
    m, n = c.m, c.n
    out = []
    for x in range(p):
        for y in range(p):
            F = y * y + x * y - x**3 - m * x * x - n * x
            Fx = y - 3 * x * x - 2 * m * x - n
            Fy = 2 * y + x
            if F % p == Fx % p == Fy % p == 0:
                out.append((x, y))
    return out


@given(family_curves(bound=2000))
def test_twist_and_node_against_brute_force(c):
    primes = [p for p in bad_primes(c) if p < 400]
    assume(primes)
    for p in primes:
        twist, node = twist_kind(c, p)
        assert _singular_points(c, p) == [node]
        assert singular_point_check(c, p)
        # a nodal cubic has p (split) or p + 2 (non-split) points over F_p
        count = count_points(reduce_equation(c.equation, p))
        assert not count.smooth
        assert count.count == (p if twist is Twist.SPLIT else p + 2)


def test_singular_point_check_rejects_wrong_points():
    c = FamilyCurve(-4, -1)
    x, y = singular_point(c, 17)
    assert singular_point_check(c, 17, (x, y))
    assert not singular_point_check(c, 17, ((x + 1) % 17, y))
    assert singular_point_check(FamilyCurve(0, 3), 3, (0, 0))


def test_component_class_of_P():
    assert component_class_P(FamilyCurve(-4, -1), 17) is ComponentClass.TRIVIAL
    assert component_class_P(FamilyCurve(0, 3), 3) is ComponentClass.NONTRIVIAL
    assert is_narrow_P(FamilyCurve(-4, -1)) and is_narrow_P(FamilyCurve(4, 1))
    assert not is_narrow_P(FamilyCurve(0, 3))


@given(family_curves())
def test_component_class_formula_matches_node_route(c):
    for p in bad_primes(c):
        assert point_component_class(c, P_POINT, p) is component_class_P(c, p)
    narrow = all(component_class_P(c, p) is ComponentClass.TRIVIAL for p in bad_primes(c))
    assert narrow == is_narrow_P(c)


def test_non_narrow_half_of_P():
    c = FamilyCurve(0, 1)
    R = Point(Fraction(1), Fraction(1))
    assert R in halving_points(c.equation, P_POINT)
    assert point_component_class(c, R, 3) is ComponentClass.NONTRIVIAL
    assert point_component_class(c, R, 7) is ComponentClass.TRIVIAL


LINE, LINE2 = FiberComponent(1, "line"), FiberComponent(2, "line")


def test_fiber_chain_examples():
    assert fiber_chain(4, Twist.SPLIT).components == (LINE,) * 4
    assert fiber_chain(4, "split").cyclic and fiber_chain(4, "split").component_group_order == 4
    one = fiber_chain(1, Twist.NONSPLIT)
    assert one.components == (FiberComponent(1, "pinched-line"),) and one.intersections == ()
    two = fiber_chain(2, Twist.NONSPLIT)
    assert two.components == (LINE, LINE) and two.intersections == (2,)
    three = fiber_chain(3, Twist.NONSPLIT)
    assert three.components == (LINE, FiberComponent(2, "pinched-line")) and three.w == 2
    six = fiber_chain(6, Twist.NONSPLIT)
    assert six.components == (LINE, LINE2, LINE2, LINE) and six.intersections == (2, 2, 2)


@pytest.mark.parametrize("v", range(1, 51))
def test_fiber_chain_matches_orbits(v):
    for twist in (Twist.SPLIT, Twist.NONSPLIT):
        assert fiber_chain(v, twist) == fiber_chain_by_orbits(v, twist)
    w = fiber_chain(v, Twist.NONSPLIT).w
    assert w == ((v + 1) // 2 if v % 2 else (v + 2) // 2)


def test_fiber_chain_counts_rational_components():
    # geometric components defined over F_p: 1 for odd v, 2 for even v
    for v in range(1, 30):
        ch = fiber_chain(v, Twist.NONSPLIT)
        assert sum(c.degree == 1 for c in ch.components) == (1 if v % 2 else 2)
        assert sum(c.degree for c in ch.components) == v


def test_fiber_chain_rejects():
    with pytest.raises(ValueError):
        fiber_chain(0, Twist.SPLIT)
    with pytest.raises(ValueError):
        fiber_chain(2, Twist.GOOD)


def test_bad_primes_factor_disc():
    c = FamilyCurve(4, 1)
    assert bad_primes(c) == factor(c.disc).primes == (3, 5)
