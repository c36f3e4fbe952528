"""Machine check of the classification results.

Each check returns a CheckResult; ``run_all`` produces the scoreboard used
by ``semiabelian verify`` and by the acceptance tests. Expected outputs are
golden constants; any drift fails loudly.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .arith import factor_product, valuation
from .classification import (
    SearchBox,
    _row,
    is_valid_pair,
    narrow_order_four_points,
    order_four_by_quotient,
    order_two_by_forcing,
    theorem_order_four,
    theorem_order_two,
)
from .points import (
    F2_CURVES,
    add,
    count_points,
    order_of,
    reduce_equation,
    reduce_mod_p,
)
from .reduction import (
    Twist,
    fiber_chain,
    fiber_chain_by_orbits,
    fiber_report,
    fiber_reports,
    kodaira,
)
from .torsion import (
    P_POINT,
    all_even_kodaira,
    find_d,
    torsion_profile,
    velu_intermediate_chain,
    velu_quotient,
)
from .weierstrass import FamilyCurve, WeierstrassEquation, gcd

# golden values --------------------------------------------------------------

ORDER_TWO = {
    (-4, -1): {"j": Fraction(20346417, 289), "fibers": {17: 2}},
    (4, 1): {"j": Fraction(13997521, 225), "fibers": {3: 2, 5: 2}},
}
ORDER_FOUR = {
    (2, 1): {"j": Fraction(35937, 17), "fibers": {17: 1}},
    (-2, 1): {"j": Fraction(-1, 15), "fibers": {3: 1, 5: 1}},
}
QUOTIENTS = {(-4, -1): (2, 1), (4, 1): (-2, 1)}
F2_COUNTS = {"E1": 1, "E2": 2, "E3": 3, "E4": 4, "E5": 5}

REFS = {
    1: "exactly two curves with a narrow 2-division point and full 2-torsion",
    2: "exactly two curves with a narrow 4-division point of order 4 mod 2",
    3: "mu_2 quotient y^2+xy = x^3+(m+6d)x^2+d^2x",
    4: "full 2-torsion <=> all Kodaira indices even <=> n = -d(4m+1+16d)",
    5: "2-torsion P, Q = (4d,-2d), P+Q = (-(4m+1+16d)/4, (4m+1+16d)/8)",
    6: "five elliptic curves over F_2 with 1..5 points",
    7: "gcd(Delta, c4) = 1, Delta = n^2(c4 - 16n), v = v_p(Delta)",
    8: "non-split I_v: chain of (v+1)/2 or (v+2)/2 components",
    9: "node of the fiber on x = -2y, 12y^2 - (4m+1)y + n = 0",
}

TITLES = {
    1: "order-two classification",
    2: "order-four classification",
    3: "quotient closure",
    4: "even-Kodaira equivalence",
    5: "group-law oracle",
    6: "F_2 point counts",
    7: "radical-ideal and valuation identities",
    8: "fiber-chain oracle",
    9: "singular-point verification",
}


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    ref: str = ""
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number}. {self.title} ({self.seconds:.1f}s): {self.detail}"


def _fiber_map(c: FamilyCurve) -> dict[int, int]:
    return {f.p: f.kodaira_v for f in fiber_reports(c)}


def _pairs(curves) -> list[tuple[int, int]]:
    return sorted((c.m, c.n) for c in curves)


def theorem_box(bound: int) -> SearchBox:
    return SearchBox(-bound, bound, -(bound + 1), bound + 1)


# individual checks -------------------------------------------------------------


def check_order_two(box: SearchBox, jobs: int = 1) -> tuple[bool, str]:
    found = _pairs(theorem_order_two(box, jobs))
    forced = _pairs(order_two_by_forcing())
    problems = []
    if found != sorted(ORDER_TWO):
        problems.append(f"search found {found}")
    if forced != sorted(ORDER_TWO):
        problems.append(f"forcing gives {forced}")
    for (m, n), gold in ORDER_TWO.items():
        c = FamilyCurve(m, n)
        if c.j != gold["j"]:
            problems.append(f"j{(m, n)} = {c.j}")
        if _fiber_map(c) != gold["fibers"]:
            problems.append(f"fibers{(m, n)} = {_fiber_map(c)}")
    return not problems, "; ".join(problems) or f"{found}, j and I_2 fibers match"


def check_order_four(box: SearchBox, jobs: int = 1) -> tuple[bool, str]:
    found = _pairs(theorem_order_four(box, jobs))
    via_quotient = _pairs(order_four_by_quotient())
    problems = []
    if found != sorted(ORDER_FOUR):
        problems.append(f"search found {found}")
    if via_quotient != sorted(ORDER_FOUR):
        problems.append(f"quotients give {via_quotient}")
    for (m, n), gold in ORDER_FOUR.items():
        c = FamilyCurve(m, n)
        if c.j != gold["j"]:
            problems.append(f"j{(m, n)} = {c.j}")
        if _fiber_map(c) != gold["fibers"]:
            problems.append(f"fibers{(m, n)} = {_fiber_map(c)}")
    return not problems, "; ".join(problems) or f"{found}, j and I_1 fibers match"


def check_quotients(samples: int = 1000, seed: int = 0) -> tuple[bool, str]:
    problems = []
    for (m, n), (m2, n2) in QUOTIENTS.items():
        c = FamilyCurve(m, n)
        target = velu_quotient(c, find_d(c)).target
        if (target.m, target.n) != (m2, n2):
            problems.append(f"{(m, n)} -> {(target.m, target.n)}")
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        m = rng.randint(-10**6, 10**6)
        d = rng.randint(-10**6, 10**6)
        chained = velu_intermediate_chain(m, d)
        if chained != WeierstrassEquation(1, m + 6 * d, 0, d * d, 0):
            bad += 1
    if bad:
        problems.append(f"{bad}/{samples} intermediate chains disagree")
    detail = "; ".join(problems) or f"(-4,-1)->(2,1), (4,1)->(-2,1); {samples} Velu chains agree"
    return not problems, detail


def _sweep_row(args) -> tuple[int, int, int, int, list]:
    m, box = args
    curves = fibers = 0
    eq_fail = sq_fail = 0
    sing_fail = []
    for c in _row(m, box):
        curves += 1
        d = find_d(c)
        fac = factor_product([c.n, c.n, c.disc_cofactor])
        even = all(e % 2 == 0 for _, e in fac.factors)
        if (d is not None) != even or even != all_even_kodaira(c):
            eq_fail += 1
        if d is not None:
            root = d * (4 * c.m + 1 + 16 * d) * (4 * c.m + 1 + 32 * d)
            if c.disc != root * root:
                sq_fail += 1
        for p in fac.primes:
            fibers += 1
            rep = fiber_report(c, p)
            x, y = rep.singular_point
            if not (
                (x + 2 * y) % p == 0
                and (12 * y * y - (4 * c.m + 1) * y + c.n) % p == 0
                and (y * y + x * y - x**3 - c.m * x * x - c.n * x) % p == 0
            ):
                sing_fail.append((c.m, c.n, p))
    return curves, fibers, eq_fail, sq_fail, sing_fail


@dataclass
class SweepResult:
    curves: int
    fibers: int
    equivalence_failures: int
    square_failures: int
    singular_failures: list


def even_kodaira_sweep(m_bound: int, n_bound: int, jobs: int = 1) -> SweepResult:
    """All valid pairs with |m| <= m_bound, |n| <= n_bound."""
    box = SearchBox(-m_bound, m_bound, -n_bound, n_bound)
    args = [(m, box) for m in box.rows()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, args, chunksize=4))
    else:
        rows = [_sweep_row(a) for a in args]
    out = SweepResult(0, 0, 0, 0, [])
    for curves, fibers, eq_fail, sq_fail, sing in rows:
        out.curves += curves
        out.fibers += fibers
        out.equivalence_failures += eq_fail
        out.square_failures += sq_fail
        out.singular_failures += sing
    return out


def check_even_kodaira(sweep: SweepResult) -> tuple[bool, str]:
    ok = sweep.equivalence_failures == 0 and sweep.square_failures == 0
    return ok, (
        f"{sweep.curves} curves: {sweep.equivalence_failures} equivalence and "
        f"{sweep.square_failures} square-decomposition failures"
    )


def check_singular_points(sweep: SweepResult) -> tuple[bool, str]:
    bad = sweep.singular_failures
    detail = f"{sweep.fibers} fibers, {len(bad)} failures"
    if bad:
        detail += f", first {bad[0]}"
    return not bad, detail


def check_group_law() -> tuple[bool, str]:
    problems = []
    for m, n in list(ORDER_TWO) + list(ORDER_FOUR):
        c = FamilyCurve(m, n)
        eq = c.equation
        red = reduce_equation(eq, 2)
        prof = torsion_profile(c)
        if order_of(eq, P_POINT) != 2 or order_of(red, reduce_mod_p(eq, P_POINT, 2)) != 2:
            problems.append(f"P on {(m, n)}")
        if (m, n) in ORDER_TWO:
            d = prof.d
            if d is None or add(eq, prof.P, prof.Q) != prof.PQ:
                problems.append(f"P+Q on {(m, n)}")
                continue
            a = 4 * m + 1 + 16 * d
            if prof.PQ.x != Fraction(-a, 4) or prof.PQ.y != Fraction(a, 8):
                problems.append(f"PQ coordinates on {(m, n)}")
            if order_of(eq, prof.Q) != 2 or order_of(red, reduce_mod_p(eq, prof.Q, 2)) != 2:
                problems.append(f"Q on {(m, n)}")
            if order_of(eq, prof.PQ) != 2:
                problems.append(f"PQ order on {(m, n)}")
        else:
            Rs = narrow_order_four_points(c)
            if not Rs or prof.R is None or order_of(eq, prof.R) != 4:
                problems.append(f"R on {(m, n)}")
                continue
            for R in Rs:
                if order_of(red, reduce_mod_p(eq, R, 2)) != 4:
                    problems.append(f"R mod 2 on {(m, n)}")
    return not problems, "; ".join(problems) or "orders 2/4 and P+Q hold over Q and mod 2"


def _random_valid_pair(rng: random.Random, bound: int = 10**6) -> FamilyCurve:
    while True:
        m = rng.randint(-bound, bound)
        n = rng.randint(-bound, bound) | 1
        if is_valid_pair(m, n):
            return FamilyCurve(m, n)


def check_f2_counts(samples: int = 1000, seed: int = 1) -> tuple[bool, str]:
    problems = []
    for name, eq in F2_CURVES.items():
        got = count_points(eq, 2)
        if got.count != F2_COUNTS[name] or not got.smooth:
            problems.append(f"{name}: {got}")
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        c = _random_valid_pair(rng)
        expected = 2 if c.m % 2 else 4
        if count_points(c.equation, 2) != (expected, True):
            bad += 1
    if bad:
        problems.append(f"{bad}/{samples} family curves miscounted")
    return not problems, "; ".join(problems) or f"E1..E5 -> 1..5; {samples} family curves give 2/4"


def check_identities(samples: int = 10_000, seed: int = 2) -> tuple[bool, str]:
    rng = random.Random(seed)
    gcd_bad = rel_bad = val_bad = 0
    for _ in range(samples):
        c = _random_valid_pair(rng, bound=10**4)
        disc, c4 = c.disc, c.c4
        if gcd(disc, c4) != 1:
            gcd_bad += 1
        if disc != c.n**2 * (c4 - 16 * c.n):
            rel_bad += 1
        for p in factor_product([c.n, c.n, c.disc_cofactor]).primes:
            if kodaira(c, p) != valuation(p, disc):
                val_bad += 1
    ok = gcd_bad == rel_bad == val_bad == 0
    return ok, f"{samples} curves: gcd {gcd_bad}, relation {rel_bad}, valuation {val_bad} failures"


def check_fiber_chains(v_max: int = 50) -> tuple[bool, str]:
    bad = []
    for v in range(1, v_max + 1):
        for twist in (Twist.SPLIT, Twist.NONSPLIT):
            closed, brute = fiber_chain(v, twist), fiber_chain_by_orbits(v, twist)
            if closed != brute:
                bad.append((v, twist.value))
        expected_w = (v + 1) // 2 if v % 2 else (v + 2) // 2
        if fiber_chain(v, Twist.NONSPLIT).w != expected_w:
            bad.append((v, "w"))
    return not bad, f"v = 1..{v_max}: {len(bad)} mismatches" + (f", first {bad[0]}" if bad else "")


# scoreboard ------------------------------------------------------------------


def _timed(number: int, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failed check, not a crashed run
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(number, TITLES[number], passed, detail, time.perf_counter() - start, REFS[number])


def run_all(bound: int = 100, jobs: int = 1, sweep_scale: int | None = None) -> list[CheckResult]:
    """Run checks 1-9.

    Theorem searches use m in [-bound, bound], n in [-(bound+1), bound+1]; the
    even-Kodaira sweep uses |m| <= 2*sweep_scale, |n| <= 20*sweep_scale
    (sweep_scale defaults to bound).
    """
    scale = bound if sweep_scale is None else sweep_scale
    box = theorem_box(bound)
    results = [
        _timed(1, lambda: check_order_two(box, jobs)),
        _timed(2, lambda: check_order_four(box, jobs)),
        _timed(3, check_quotients),
    ]
    sweep_holder = {}

    def sweep():
        start = time.perf_counter()
        sweep_holder["sweep"] = even_kodaira_sweep(2 * scale, 20 * scale, jobs)
        sweep_holder["seconds"] = time.perf_counter() - start
        return check_even_kodaira(sweep_holder["sweep"])

    results.append(_timed(4, sweep))
    results += [
        _timed(5, check_group_law),
        _timed(6, check_f2_counts),
        _timed(7, check_identities),
        _timed(8, check_fiber_chains),
    ]
    if "sweep" in sweep_holder:
        res9 = _timed(9, lambda: check_singular_points(sweep_holder["sweep"]))
    else:
        res9 = CheckResult(9, TITLES[9], False, "sweep did not complete", 0.0, REFS[9])
    results.append(res9)
    return results


__all__ = ["CheckResult", "SweepResult", "even_kodaira_sweep", "run_all", "theorem_box"]
