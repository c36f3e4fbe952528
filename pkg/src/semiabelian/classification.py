"""Exhaustive enumeration of family curves and the two "exactly two curves" searches."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

from .arith import Factorization, factor_product, gcd
from .points import classify_F2, order_of, reduce_equation, reduce_mod_p
from .reduction import (
    ComponentClass,
    FiberReport,
    bad_primes,
    fiber_reports,
    is_narrow_P,
    point_component_class,
)
from .torsion import (
    TorsionProfile,
    find_d,
    halving_points,
    P_POINT,
    torsion_profile,
    velu_quotient,
)
from .weierstrass import FamilyCurve, InvariantSet

__all__ = [
    "ClosureReport",
    "CurveDossier",
    "SearchBox",
    "build_dossier",
    "enumerate_curves",
    "is_valid_pair",
    "order_four_by_quotient",
    "order_two_by_forcing",
    "quotient_closure_check",
    "theorem_order_four",
    "theorem_order_two",
    "valid_curves",
]


@dataclass(frozen=True)
class SearchBox:
    m_min: int
    m_max: int
    n_min: int
    n_max: int

    def __post_init__(self):
        if self.m_min > self.m_max or self.n_min > self.n_max:
            raise ValueError(f"empty search box {self}")

    @classmethod
    def square(cls, bound: int) -> SearchBox:
        return cls(-bound, bound, -bound, bound)

    def contains(self, m: int, n: int) -> bool:
        return self.m_min <= m <= self.m_max and self.n_min <= n <= self.n_max

    def rows(self) -> range:
        return range(self.m_min, self.m_max + 1)


@dataclass(frozen=True)
class CurveDossier:
    curve: FamilyCurve
    invariants: InvariantSet
    disc_factorization: Factorization
    fibers: tuple[FiberReport, ...]
    torsion: TorsionProfile
    narrow_P: bool
    f2_class: str


def is_valid_pair(m: int, n: int) -> bool:
    # (4m+1)^2 - 64n is odd, so the discriminant never vanishes
    return n % 2 == 1 and gcd(4 * m + 1, n) == 1


def _row(m: int, box: SearchBox) -> Iterator[FamilyCurve]:
    first = box.n_min if box.n_min % 2 else box.n_min + 1
    k = 4 * m + 1
    for n in range(first, box.n_max + 1, 2):
        if gcd(k, n) == 1:
            yield FamilyCurve(m, n)


def valid_curves(box: SearchBox) -> Iterator[FamilyCurve]:
    """Valid pairs in lexicographic (m, n) order."""
    for m in box.rows():
        yield from _row(m, box)


def build_dossier(c: FamilyCurve) -> CurveDossier:
    return CurveDossier(
        curve=c,
        invariants=c.invariants,
        disc_factorization=factor_product([c.n, c.n, c.disc_cofactor]),
        fibers=tuple(fiber_reports(c)),
        torsion=torsion_profile(c),
        narrow_P=is_narrow_P(c),
        f2_class=classify_F2(c.equation),
    )


def _row_dossiers(args: tuple[int, SearchBox]) -> list[CurveDossier]:
    m, box = args
    return [build_dossier(c) for c in _row(m, box)]


def enumerate_curves(box: SearchBox, jobs: int = 1) -> Iterator[CurveDossier]:
    """Dossiers for every valid pair in the box, in lexicographic order.

    With jobs > 1 the rows m = const are farmed out to worker processes;
    results are still yielded row by row in order.
    """
    if jobs <= 1:
        for c in valid_curves(box):
            yield build_dossier(c)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for row in pool.map(_row_dossiers, ((m, box) for m in box.rows()), chunksize=4):
            yield from row


def _filter(box: SearchBox, pred: Callable[[FamilyCurve], bool], jobs: int) -> list[FamilyCurve]:
    if jobs <= 1:
        return [c for c in valid_curves(box) if pred(c)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        rows = pool.map(_filter_row, ((m, box, pred) for m in box.rows()), chunksize=8)
        return [c for row in rows for c in row]


def _filter_row(args) -> list[FamilyCurve]:
    m, box, pred = args
    return [c for c in _row(m, box) if pred(c)]


# -- order two --------------------------------------------------------------


def has_narrow_P_and_Q(c: FamilyCurve) -> bool:
    return is_narrow_P(c) and find_d(c) is not None


def theorem_order_two(box: SearchBox, jobs: int = 1) -> list[FamilyCurve]:
    """Curves whose P is narrow and which carry a second 2-division point."""
    return _filter(box, has_narrow_P_and_Q, jobs)


def order_two_by_forcing() -> list[FamilyCurve]:
    """Solve the conditions directly: n = +-1 forces d = +-1 and m = -4d."""
    found = []
    for n in (-1, 1):
        for d in (-1, 1):
            if n % d:
                continue
            # n = -d(4m + 1 + 16d)  <=>  4m = -n/d - 1 - 16d
            four_m = -(n // d) - 1 - 16 * d
            if four_m % 4 == 0:
                found.append(FamilyCurve(four_m // 4, n))
    return sorted(found, key=lambda c: (c.m, c.n))


# -- order four -------------------------------------------------------------


def narrow_order_four_points(c: FamilyCurve) -> list:
    """Points R with 2R = P that are narrow and keep order 4 modulo 2."""
    eq = c.equation
    halves = halving_points(eq, P_POINT)
    if not halves:
        return []
    primes = bad_primes(c)
    red2 = reduce_equation(eq, 2)
    good = []
    for R in halves:
        if order_of(eq, R) != 4:
            continue
        if any(point_component_class(c, R, p) is ComponentClass.NONTRIVIAL for p in primes):
            continue
        if order_of(red2, reduce_mod_p(eq, R, 2)) != 4:
            continue
        good.append(R)
    return good


def has_narrow_order_four(c: FamilyCurve) -> bool:
    return bool(narrow_order_four_points(c))


def theorem_order_four(box: SearchBox, jobs: int = 1) -> list[FamilyCurve]:
    """Curves with a narrow R of order 4 that still has order 4 in E(F_2)."""
    return _filter(box, has_narrow_order_four, jobs)


def order_four_by_quotient() -> list[FamilyCurve]:
    """The mu_2 quotients of the order-two curves."""
    out = [velu_quotient(c, find_d(c)).target for c in order_two_by_forcing()]
    return sorted(out, key=lambda c: (c.m, c.n))


# -- quotient closure ---------------------------------------------------------


@dataclass(frozen=True)
class ClosureReport:
    quotients: tuple[tuple[FamilyCurve, int, FamilyCurve], ...]
    all_targets_valid: bool
    order_two_targets: tuple[FamilyCurve, ...]
    order_four: tuple[FamilyCurve, ...]

    @property
    def closes(self) -> bool:
        key = lambda c: (c.m, c.n)  # noqa: E731
        return self.all_targets_valid and sorted(self.order_two_targets, key=key) == sorted(
            self.order_four, key=key
        )


def quotient_closure_check(box: SearchBox, jobs: int = 1) -> ClosureReport:
    """Quotient every curve with full 2-torsion in the box and re-check the targets."""
    quotients = []
    valid = True
    for c in valid_curves(box):
        d = find_d(c)
        if d is None:
            continue
        target = velu_quotient(c, d).target
        dossier = build_dossier(target)
        valid &= dossier.torsion.P == P_POINT and bad_primes(target) == tuple(
            f.p for f in dossier.fibers
        )
        quotients.append((c, d, target))
    two = theorem_order_two(box, jobs)
    targets = tuple(velu_quotient(c, find_d(c)).target for c in two)
    four = tuple(theorem_order_four(box, jobs))
    return ClosureReport(tuple(quotients), bool(valid), targets, four)
