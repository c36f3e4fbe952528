"""Command-line interface: ``semiabelian <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 invalid mathematical input,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any

from .arith import factor_product, is_prime
from .classification import (
    SearchBox,
    enumerate_curves,
    has_narrow_order_four,
    has_narrow_P_and_Q,
    narrow_order_four_points,
)
from .points import order_of
from .reduction import (
    FiberReport,
    Twist,
    fiber_chain,
    fiber_report,
    fiber_reports,
    is_narrow_P,
)
from .torsion import (
    find_d,
    mu2_action_free,
    pq_component_class,
    torsion_profile,
    translate_to_Q,
    velu_quotient,
)
from .verify import run_all
from .weierstrass import FamilyCurve, InvalidFamilyError, is_globally_minimal_Iv

SCHEMA_VERSION = "1"

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3


class InvalidInput(Exception):
    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


# -- serialization ---------------------------------------------------------


def rational(q) -> dict[str, str]:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def point(pt) -> dict | None:
    if pt is None:
        return None
    return {"x": rational(pt.x), "y": rational(pt.y)}


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def envelope(command: str, inp: dict, result: dict, provenance: list[str]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": inp,
        "result": result,
        "provenance": provenance,
    }


def _fmt(value) -> str:
    if isinstance(value, dict) and set(value) == {"num", "den"}:
        return value["num"] if value["den"] == "1" else f"{value['num']}/{value['den']}"
    if isinstance(value, dict) and set(value) == {"x", "y"}:
        return f"({_fmt(value['x'])}, {_fmt(value['y'])})"
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list) and all(not isinstance(v, (dict, list)) or _leafish(v) for v in value):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def _leafish(value) -> bool:
    return isinstance(value, dict) and (set(value) == {"num", "den"} or set(value) == {"x", "y"})


def _records(value) -> bool:
    return (
        isinstance(value, list)
        and value
        and all(isinstance(v, dict) and not _leafish(v) for v in value)
    )


def render_table(result: dict, indent: str = "") -> list[str]:
    """Plain-text rendering carrying every number of the JSON payload."""
    lines = []
    width = max((len(k) for k in result), default=0)
    for key, value in result.items():
        if isinstance(value, dict) and not _leafish(value):
            lines.append(f"{indent}{key}:")
            lines += render_table(value, indent + "  ")
        elif _records(value):
            lines.append(f"{indent}{key}:")
            for i, rec in enumerate(value):
                lines.append(f"{indent}  [{i}]")
                lines += render_table(rec, indent + "    ")
        else:
            lines.append(f"{indent}{key.ljust(width)}  {_fmt(value)}")
    return lines


# -- payload builders --------------------------------------------------------


def _curve(m: int, n: int) -> FamilyCurve:
    try:
        return FamilyCurve(m, n)
    except InvalidFamilyError as exc:
        raise InvalidInput(exc.reason, str(exc)) from None


def _factorization(f) -> dict:
    return {"sign": f.sign, "factors": [{"p": p, "e": e} for p, e in f.factors]}


def _chain(v: int, twist: Twist) -> dict | None:
    if v == 0:
        return None
    ch = fiber_chain(v, twist)
    return {
        "w": ch.w,
        "cyclic": ch.cyclic,
        "components": [{"degree": c.degree, "kind": c.kind} for c in ch.components],
        "intersections": list(ch.intersections),
    }


def _fiber(c: FamilyCurve, rep: FiberReport, d: int | None) -> dict:
    out = {
        "p": rep.p,
        "kodaira": rep.symbol,
        "v": rep.kodaira_v,
        "twist": rep.twist.value,
        "singular_point": list(rep.singular_point) if rep.singular_point else None,
        "P_component": "trivial" if rep.P_component_trivial else "nontrivial",
        "legendre": dict(rep.legendre),
        "chain": _chain(rep.kodaira_v, rep.twist),
    }
    if d is not None:
        out["PQ_component"] = pq_component_class(c, d, rep.p).value
        out["mu2_free"] = mu2_action_free(c, d, rep.p)
    return out


def invariants_payload(c: FamilyCurve) -> tuple[dict, list[str]]:
    inv = c.invariants
    result = {
        "valid": True,
        "curve": {"m": c.m, "n": c.n},
        "equation": str(c.equation),
        "invariants": {k: rational(getattr(inv, k)) for k in ("b2", "b4", "b6", "b8", "c4", "c6", "disc")},
        "j": rational(c.j),
        "disc_factorization": _factorization(factor_product([c.n, c.n, c.disc_cofactor])),
        "minimality": is_globally_minimal_Iv(c.equation).value,
    }
    prov = [
        "invariants: Tate's b/c formulas",
        "invariants.disc: n^2((4m+1)^2-64n)",
        "invariants.c4: (4m+1)^2-48n",
        "j: c4^3/disc",
        "minimality: gcd(c4, disc) = 1 gives a minimal model with only I_v fibers",
    ]
    return result, prov


def reduce_payload(c: FamilyCurve, p: int | None) -> tuple[dict, list[str]]:
    d = find_d(c)
    if p is None:
        result = {"fibers": [_fiber(c, rep, d) for rep in fiber_reports(c)]}
    else:
        if not is_prime(p):
            raise InvalidInput("not prime", f"p = {p} is not prime")
        result = {"fiber": _fiber(c, fiber_report(c, p), d)}
    result["curve"] = {"m": c.m, "n": c.n}
    result["witness_d"] = d
    prov = [
        "v: 2 v_p(n) + v_p((4m+1)^2-64n)",
        "twist at p | n: split iff (4m+1 / p) = 1",
        "twist at p not dividing n: split iff (4m+1 / p) = (-1)^((p^2+4p-5)/8)",
        "singular_point: (0,0) if p | n, else (-(4m+1)/8, (4m+1)/16) mod p",
        "chain: Frobenius orbits on the geometric v-cycle",
        "P_component: nontrivial iff p | n",
        "PQ_component: nontrivial iff p | (4m+1+16d)(4m+1+32d)",
        "mu2_free: iff p does not divide d",
    ]
    return result, prov


def torsion_payload(c: FamilyCurve) -> tuple[dict, list[str]]:
    prof = torsion_profile(c)
    eq = c.equation
    result = {
        "curve": {"m": c.m, "n": c.n},
        "P": point(prof.P),
        "narrow_P": is_narrow_P(c),
        "d": prof.d,
        "Q": point(prof.Q),
        "PQ": point(prof.PQ),
        "two_torsion_rank": prof.two_torsion_rank,
        "halves_of_P": [point(r) for r in prof.halves_of_P],
        "R": point(prof.R),
        "order_R": order_of(eq, prof.R) if prof.R is not None else None,
        "narrow_order_four": [point(r) for r in narrow_order_four_points(c)],
    }
    prov = [
        "P: (0,0) has order 2",
        "d: integer root of 16d^2+(4m+1)d+n",
        "Q: (4d,-2d)",
        "PQ: (-(4m+1+16d)/4, (4m+1+16d)/8)",
        "halves_of_P: integer roots of x(2R) = 0",
        "narrow_order_four: halves of order 4, trivial at every bad prime, order 4 mod 2",
    ]
    return result, prov


def quotient_payload(c: FamilyCurve) -> tuple[dict, list[str]]:
    d = find_d(c)
    if d is None:
        raise InvalidInput("no witness", f"{c} has no second 2-division point; mu_2 quotient undefined")
    q = velu_quotient(c, d)
    shifted = translate_to_Q(c, d)
    t = q.target
    result = {
        "source": {"m": c.m, "n": c.n},
        "d": d,
        "kernel_generator": point(torsion_profile(c).PQ),
        "target": {"m": t.m, "n": t.n},
        "target_j": rational(t.j),
        "target_fibers": [
            {"p": r.p, "kodaira": r.symbol, "v": r.kodaira_v, "twist": r.twist.value}
            for r in fiber_reports(t)
        ],
        "translated_to_Q": {"m": shifted.m, "n": shifted.n},
    }
    prov = [
        "target: (m+6d, d^2)",
        "kernel_generator: P+Q generates mu_2",
        "translated_to_Q: (m+12d, d(4m+1+32d))",
    ]
    return result, prov


def _curve_summary(dos) -> dict:
    c = dos.curve
    return {
        "m": c.m,
        "n": c.n,
        "j": rational(c.j),
        "disc": rational(c.disc),
        "fibers": [
            {"p": f.p, "kodaira": f.symbol, "v": f.kodaira_v, "twist": f.twist.value}
            for f in dos.fibers
        ],
        "d": dos.torsion.d,
        "narrow_P": dos.narrow_P,
        "f2_class": dos.f2_class,
    }


FILTERS = {
    "all": None,
    "order-two": has_narrow_P_and_Q,
    "order-four": has_narrow_order_four,
}


def enumerate_payload(box: SearchBox, which: str, jobs: int) -> tuple[dict, list[str]]:
    pred = FILTERS[which]
    curves = [
        _curve_summary(dos)
        for dos in enumerate_curves(box, jobs)
        if pred is None or pred(dos.curve)
    ]
    result = {"count": len(curves), "curves": curves}
    prov = [
        "valid pairs: n odd, gcd(4m+1, n) = 1, lexicographic order",
        "order-two: n = +-1 and a witness d exists",
        "order-four: a narrow point of order 4 keeping order 4 mod 2",
    ]
    return result, prov


# -- argument parsing -----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semiabelian", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def curve_args(sp):
        sp.add_argument("-m", type=int, required=True)
        sp.add_argument("-n", type=int, required=True)
        sp.add_argument("--json", action="store_true", help="emit a JSON envelope")

    curve_args(sub.add_parser("invariants", help="b/c invariants, discriminant, j"))
    red = sub.add_parser("reduce", help="fiber data at every bad prime, or at -p")
    curve_args(red)
    red.add_argument("-p", type=int)
    curve_args(sub.add_parser("torsion", help="2-torsion and halves of P"))
    curve_args(sub.add_parser("quotient", help="quotient by the mu_2 generated by P+Q"))

    en = sub.add_parser("enumerate", help="all valid pairs in a box")
    en.add_argument("--box", type=int, default=10, help="|m|, |n| <= BOX (default 10)")
    en.add_argument("--m-min", type=int)
    en.add_argument("--m-max", type=int)
    en.add_argument("--n-min", type=int)
    en.add_argument("--n-max", type=int)
    en.add_argument("--filter", choices=sorted(FILTERS), default="all")
    en.add_argument("--jobs", type=int, default=1)
    en.add_argument("--json", action="store_true")

    ve = sub.add_parser("verify", help="machine-check the classification")
    ve.add_argument("--box", type=int, default=100, help="theorem search bound (default 100)")
    ve.add_argument(
        "--sweep-scale", type=int, default=None,
        help="even-Kodaira sweep covers |m| <= 2S, |n| <= 20S (default S = BOX)",
    )
    ve.add_argument("--jobs", type=int, default=1)
    ve.add_argument("--json", action="store_true")
    return parser


def _emit(args, command: str, inp: dict, result: dict, prov: list[str], out) -> None:
    if args.json:
        out.write(dumps(envelope(command, inp, result, prov)))
    else:
        out.write("\n".join(render_table(result)) + "\n")


def _cmd_verify(args, out) -> int:
    if args.box < 1:
        raise InvalidInput("box", "--box must be positive")
    start = time.perf_counter()
    results = run_all(args.box, args.jobs, args.sweep_scale)
    total = time.perf_counter() - start
    failed = [r for r in results if not r.passed]
    if args.json:
        result = {
            "passed": not failed,
            "seconds": round(total, 3),
            "checks": [
                {
                    "number": r.number,
                    "title": r.title,
                    "passed": r.passed,
                    "detail": r.detail,
                    "reference": r.ref,
                    "seconds": round(r.seconds, 3),
                }
                for r in results
            ],
        }
        if failed:
            result["first_failure"] = failed[0].number
        inp = {"box": args.box, "sweep_scale": args.sweep_scale, "jobs": args.jobs}
        out.write(dumps(envelope("verify", inp, result, ["golden constants embedded in verify"])))
    else:
        for r in results:
            out.write(r.line() + "\n")
            out.write(f"       ref: {r.ref}\n")
        verdict = "all checks passed" if not failed else f"FAILED: check {failed[0].number} ({failed[0].title})"
        out.write(f"{len(results) - len(failed)}/{len(results)} passed in {total:.1f}s; {verdict}\n")
    if failed:
        sys.stderr.write(f"verification failed: check {failed[0].number} ({failed[0].title})\n")
        return EXIT_VERIFY
    return EXIT_OK


def _box_from(args) -> SearchBox:
    b = args.box
    bounds = [
        args.m_min if args.m_min is not None else -b,
        args.m_max if args.m_max is not None else b,
        args.n_min if args.n_min is not None else -b,
        args.n_max if args.n_max is not None else b,
    ]
    try:
        return SearchBox(*bounds)
    except ValueError as exc:
        raise InvalidInput("box", str(exc)) from None


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    cmd = args.command
    inp: dict = {}
    try:
        if cmd == "verify":
            return _cmd_verify(args, out)
        if cmd == "enumerate":
            box = _box_from(args)
            inp = {
                "m_min": box.m_min, "m_max": box.m_max,
                "n_min": box.n_min, "n_max": box.n_max,
                "filter": args.filter,
            }
            result, prov = enumerate_payload(box, args.filter, args.jobs)
        else:
            inp = {"m": args.m, "n": args.n}
            if cmd == "reduce":
                inp["p"] = args.p
            c = _curve(args.m, args.n)
            if cmd == "invariants":
                result, prov = invariants_payload(c)
            elif cmd == "reduce":
                result, prov = reduce_payload(c, args.p)
            elif cmd == "torsion":
                result, prov = torsion_payload(c)
            else:
                result, prov = quotient_payload(c)
    except InvalidInput as exc:
        result = {"valid": False, "reason": exc.reason, "message": str(exc)}
        if args.json:
            out.write(dumps(envelope(cmd, inp, result, [])))
        else:
            out.write(f"invalid input ({exc.reason}): {exc}\n")
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    _emit(args, cmd, inp, result, prov, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
