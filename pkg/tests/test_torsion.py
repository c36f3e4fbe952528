import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semiabelian.arith import is_square
from semiabelian.points import NotIntegralError, Point, add, multiply, order_of, reduce_mod_p
from semiabelian.reduction import ComponentClass, bad_primes, kodaira
from semiabelian.torsion import (
    P_POINT,
    InvalidWitnessError,
    all_even_kodaira,
    find_d,
    halving_points,
    mu2_action_free,
    mu2_action_free_by_fibers,
    pq_component_class,
    pq_point,
    q_point,
    random_witness_curve,
    torsion_profile,
    translate_to_Q,
    translation_change,
    velu_intermediate,
    velu_intermediate_chain,
    velu_quotient,
)
from semiabelian.weierstrass import FamilyCurve, WeierstrassEquation, apply_change

from strategies import family_curves, witness_curves

F = Fraction


@pytest.mark.parametrize("m, n, d", [(-4, -1, 1), (4, 1, -1), (0, 1, None), (0, -17, 1), (2, 1, None)])
def test_find_d(m, n, d):
    assert find_d(FamilyCurve(m, n)) == d


@given(witness_curves())
def test_find_d_recovers_witness(cd):
    c, d = cd
    assert find_d(c) == d
    assert d % 2 == 1


def test_torsion_profile_examples():
    prof = torsion_profile(FamilyCurve(-4, -1))
    assert prof.P == Point(0, 0)
    assert (prof.Q, prof.PQ) == (Point(4, -2), Point(F(-1, 4), F(1, 8)))
    assert prof.two_torsion_rank == 2 and prof.R is None

    prof = torsion_profile(FamilyCurve(2, 1))
    assert prof.d is None and prof.Q is None
    assert prof.R == Point(-1, 1)

    prof = torsion_profile(FamilyCurve(-2, 1))
    assert prof.R == Point(1, 0)

    prof = torsion_profile(FamilyCurve(0, 1))
    assert prof.Q is None and prof.two_torsion_rank == 1


@given(witness_curves())
def test_two_torsion_group_law(cd):
    c, d = cd
    eq = c.equation
    Q, PQ = q_point(c, d), pq_point(c, d)
    assert order_of(eq, Q) == order_of(eq, PQ) == 2
    assert add(eq, P_POINT, Q) == PQ
    assert add(eq, Q, PQ) == P_POINT


def test_pq_does_not_reduce_mod_2():
    c = FamilyCurve(-4, -1)
    with pytest.raises(NotIntegralError):
        reduce_mod_p(c.equation, pq_point(c, 1), 2)


def _halves_by_brute_force(eq, bound=60):
    found = []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            pt = Point(F(x), F(y))
            if eq.lhs_minus_rhs(pt.x, pt.y) == 0 and add(eq, pt, pt) == P_POINT:
                found.append(pt)
    return found


@pytest.mark.parametrize("m, n", [(2, 1), (-2, 1), (0, 1), (0, 3), (-4, -1), (6, 9), (12, 25)])
def test_halving_matches_brute_force(m, n):
    eq = FamilyCurve(m, n).equation
    assert halving_points(eq, P_POINT) == _halves_by_brute_force(eq)


@given(family_curves(bound=300))
def test_halves_double_to_P(c):
    for R in halving_points(c.equation, P_POINT):
        assert multiply(c.equation, 2, R) == P_POINT
        assert order_of(c.equation, R) == 4


@given(st.integers(-50, 50).map(lambda k: 2 * k + 1), st.integers(-50, 50))
def test_halving_rational_x_family(k, a):
    """x(R)^2 = n: halves exist exactly when n is a square, e.g. n = k^2."""
    n = k * k
    m = a
    try:
        c = FamilyCurve(m, n)
    except ValueError:
        return
    for R in halving_points(c.equation, P_POINT):
        assert R.x * R.x == n


def test_halving_requires_integral_data():
    with pytest.raises(ValueError):
        halving_points(WeierstrassEquation(F(1, 2), 0, 0, 1, 0), P_POINT)


@pytest.mark.parametrize("m, n, expected", [(-4, -1, True), (-2, 1, False), (0, 3, False)])
def test_all_even_kodaira_examples(m, n, expected):
    assert all_even_kodaira(FamilyCurve(m, n)) is expected


@given(family_curves())
def test_even_kodaira_equivalence(c):
    even = all(kodaira(c, p) % 2 == 0 for p in bad_primes(c))
    assert (find_d(c) is not None) == even == all_even_kodaira(c)


@given(witness_curves())
def test_square_decomposition(cd):
    c, d = cd
    k = 4 * c.m + 1
    assert c.disc == (d * (k + 16 * d) * (k + 32 * d)) ** 2
    assert is_square(c.disc_cofactor)


@pytest.mark.parametrize(
    "m, n, d, target",
    [(-4, -1, 1, (2, 1)), (4, 1, -1, (-2, 1)), (0, -17, 1, (6, 1))],
)
def test_velu_quotient(m, n, d, target):
    q = velu_quotient(FamilyCurve(m, n), d)
    assert (q.target.m, q.target.n) == target


def test_velu_quotient_rejects_bad_witness():
    with pytest.raises(InvalidWitnessError):
        velu_quotient(FamilyCurve(0, 1), 1)


@given(witness_curves())
def test_quotient_fibers(cd):
    """An isogeny of degree 2 doubles v at p | d and halves it elsewhere."""
    c, d = cd
    t = velu_quotient(c, d).target
    assert set(bad_primes(t)) == set(bad_primes(c))
    for p in bad_primes(c):
        v, vt = kodaira(c, p), kodaira(t, p)
        assert vt == (2 * v if d % p == 0 else v // 2)


def generic_velu_two_torsion(eq: WeierstrassEquation, pt: Point):
    """Velu's a4, a6 for the quotient by a rational 2-torsion point."""
    a1, a2, a3, a4, a6 = eq.coefficients
    x0 = pt.x
    b2 = a1 * a1 + 4 * a2
    t = 3 * x0 * x0 + 2 * a2 * x0 + a4 - a1 * pt.y
    w = x0 * t
    return a4 - 5 * t, a6 - b2 * t - 7 * w


@given(witness_curves())
def test_velu_intermediate_matches_generic_velu(cd):
    c, d = cd
    assert velu_intermediate(c.m, d) == generic_velu_two_torsion(c.equation, pq_point(c, d))


def _sign_flipped_in_d(m, d):
    # the same polynomials with every term odd in d negated
    m, d = F(m), F(d)
    a4 = -5 * m**2 + 64 * m * d - F(5, 2) * m - 176 * d**2 + 16 * d - F(5, 16)
    a6 = (
        3 * m**3 - 64 * m**2 * d + F(9, 4) * m**2 + 432 * m * d**2 - 32 * m * d
        + F(9, 16) * m - 896 * d**3 + 108 * d**2 - 4 * d + F(3, 64)
    )
    return a4, a6


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))
def test_sign_flipped_variant_is_the_wrong_kernel(m, d):
    assert _sign_flipped_in_d(m, d) == velu_intermediate(m, -d)


def test_sign_flipped_variant_misses_closed_form():
    a4, a6 = _sign_flipped_in_d(-4, 1)
    from semiabelian.torsion import velu_intermediate_changes

    eq = WeierstrassEquation(1, -4, 0, a4, a6)
    for ch in velu_intermediate_changes(-4, 1):
        eq = apply_change(eq, ch)
    assert eq != WeierstrassEquation(1, 2, 0, 1, 0)


@pytest.mark.parametrize("m, d, target", [(-4, 1, (2, 1)), (4, -1, (-2, 1)), (0, 1, (6, 1))])
def test_velu_intermediate_chain_examples(m, d, target):
    assert velu_intermediate_chain(m, d) == WeierstrassEquation(1, target[0], 0, target[1], 0)


def test_velu_intermediate_chain_random():
    rng = random.Random(7)
    for _ in range(1000):
        m, d = rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)
        assert velu_intermediate_chain(m, d) == WeierstrassEquation(1, m + 6 * d, 0, d * d, 0)


@pytest.mark.parametrize("m, n, d, image", [(-4, -1, 1, (8, 17)), (4, 1, -1, (-8, 15))])
def test_translate_to_Q(m, n, d, image):
    c = FamilyCurve(m, n)
    t = translate_to_Q(c, d)
    assert (t.m, t.n) == image
    assert apply_change(c.equation, translation_change(d)) == t.equation


@given(witness_curves())
def test_translate_to_Q_is_an_involution(cd):
    c, d = cd
    t = translate_to_Q(c, d)
    assert apply_change(c.equation, translation_change(d)) == t.equation
    assert find_d(t) == -d
    assert translate_to_Q(t, -d) == c


def test_component_class_examples():
    c = FamilyCurve(-4, -1)
    assert pq_component_class(c, 1, 17) is ComponentClass.NONTRIVIAL
    assert pq_component_class(c, 1, 3) is ComponentClass.TRIVIAL
    assert pq_component_class(c, 1, 2) is ComponentClass.TRIVIAL


@given(witness_curves())
def test_pq_component_class_matches_node_route(cd):
    from semiabelian.reduction import point_component_class

    c, d = cd
    PQ = pq_point(c, d)
    for p in bad_primes(c):
        assert pq_component_class(c, d, p) is point_component_class(c, PQ, p)


def test_mu2_action_examples():
    assert all(mu2_action_free(FamilyCurve(-4, -1), 1, p) for p in (3, 5, 17))
    c = FamilyCurve(0, -17)
    assert mu2_action_free(c, 1, 17)
    assert kodaira(c, 17) > 0 and pq_component_class(c, 1, 17) is ComponentClass.NONTRIVIAL
    # d = 3, m = 0: n = -3 * 49
    c = FamilyCurve(0, -147)
    assert find_d(c) == 3 and not mu2_action_free(c, 3, 3)


@given(witness_curves())
def test_mu2_action_matches_definition(cd):
    c, d = cd
    for p in set(bad_primes(c)) | {3, 5, 7}:
        assert mu2_action_free(c, d, p) == mu2_action_free_by_fibers(c, d, p)


def test_random_witness_curve():
    rng = random.Random(3)
    for _ in range(50):
        c, d = random_witness_curve(rng)
        assert find_d(c) == d
