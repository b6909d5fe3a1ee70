"""Command line interface.

Exit codes: 0 success / true / equivalent, 1 false / not equivalent / failed
checks, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .coset_model import ExpPoint, cosets_correspond
from .definability import eval_atomic, parse_formula, rewrite
from .errors import QTorusError
from .morita import (
    MoritaWitness,
    brute_force_search,
    decide_morita,
    theta2_from_proof_matrix,
)
from .quad_field import Mat2Z, cf_expand, mobius_apply, parse_number, parse_quad
from .report import Report, use_color
from .torus_core import verify_torus
from .transform import build_transform, default_universe, verify_transform

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _report_payload(report: Report) -> dict:
    out = report.summary()
    out["failures"] = report.lines(only_failures=True)
    out["notes"] = sorted(report.notes)
    return out


def _emit_report(args, report: Report) -> int:
    if args.json:
        print(json.dumps(_report_payload(report), sort_keys=True))
    else:
        print(report.render(only_failures=not args.verbose))
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_cf(args) -> int:
    theta = parse_quad(args.theta)
    cf = cf_expand(theta)
    payload = {"theta": str(theta), "preperiod": list(cf.preperiod), "period": list(cf.period)}
    _emit(
        args,
        payload,
        f"theta = {theta}\npreperiod: {list(cf.preperiod)}\nperiod: {list(cf.period)}",
    )
    return EXIT_OK


def _witness_checks(w: MoritaWitness) -> dict[str, bool]:
    P = w.proof_matrix()
    return {
        "mobius(matrix, theta1) = theta2": mobius_apply(w.matrix, w.theta1) == w.theta2,
        "|det(matrix)| = 1": abs(w.matrix.det) == 1,
        "theta*(Z theta1 + Z) = Z theta2 + Z": cosets_correspond(w.theta1, w.theta2, w.scaling_theta),
        "c*theta2 + d = (a*theta2 + b)/theta1": P.c * w.theta2 + P.d == (P.a * w.theta2 + P.b) / w.theta1,
        "(d*theta1 - b)/(-c*theta1 + a) = theta2": theta2_from_proof_matrix(P, w.theta1) == w.theta2,
    }


def cmd_morita(args) -> int:
    t1, t2 = parse_quad(args.theta1), parse_quad(args.theta2)
    result = decide_morita(t1, t2)
    oracle = None
    if args.bound is not None:
        found = brute_force_search(t1, t2, args.bound)
        oracle = None if found is None else found.rows()
    payload: dict = {"theta1": str(t1), "theta2": str(t2), "equivalent": bool(result)}
    if args.bound is not None:
        payload["oracle"] = {"bound": args.bound, "matrix": oracle}
    lines = [f"theta1 = {t1}", f"theta2 = {t2}"]
    if isinstance(result, MoritaWitness):
        checks = _witness_checks(result)
        P = result.proof_matrix()
        payload.update(
            matrix=result.matrix.rows(),
            proof_matrix=P.rows(),
            scaling_theta=str(result.scaling_theta),
            tail_indices=list(result.tail_indices),
            checks=checks,
        )
        lines += [
            "equivalent",
            f"matrix: {result.matrix}",
            f"lattice map (a, b; c, d): {P}",
            f"scaling theta: {result.scaling_theta}",
            f"tails agree from indices {result.tail_indices[0]} and {result.tail_indices[1]}",
        ]
        lines += [f"{'OK' if ok else 'FAIL'} {name}" for name, ok in checks.items()]
    else:
        payload.update(reason=result.reason, evidence=result.evidence)
        lines += [f"not equivalent: {result.reason}"]
        lines += [f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(result.evidence.items())]
    if args.bound is not None:
        lines.append(f"brute force (bound {args.bound}): {oracle if oracle else 'none found'}")
    _emit(args, payload, "\n".join(lines))
    if isinstance(result, MoritaWitness) and not all(payload["checks"].values()):
        return EXIT_FALSE
    return EXIT_OK if result else EXIT_FALSE


def cmd_torus_verify(args) -> int:
    return _emit_report(args, verify_torus(args.exp_range))


def cmd_transform_verify(args) -> int:
    t1, t2 = parse_quad(args.theta1), parse_quad(args.theta2)
    result = decide_morita(t1, t2)
    if not isinstance(result, MoritaWitness):
        _emit(
            args,
            {"equivalent": False, "reason": result.reason, "checked": 0, "failed": 0},
            f"not equivalent: {result.reason}",
        )
        return EXIT_FALSE
    t = build_transform(t1, t2, result, default_universe(t1))
    return _emit_report(args, verify_transform(t, args.exp_range, args.exp_range))


def cmd_rewrite(args) -> int:
    M = Mat2Z(args.a, args.b, args.c, args.d)
    f = rewrite(M)
    _emit(
        args,
        {"matrix": M.rows(), "formula": str(f), "normalized": str(f.normalized())},
        str(f),
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    f = parse_formula(args.formula)
    x, y = ExpPoint(parse_number(args.x)), ExpPoint(parse_number(args.y))
    theta = parse_quad(args.theta)
    value = eval_atomic(f, x, y, theta)
    first, second = f.arguments(x, y)
    _emit(
        args,
        {"formula": str(f), "value": value, "arguments": [str(first.alpha), str(second.alpha)]},
        "true" if value else "false",
    )
    return EXIT_OK if value else EXIT_FALSE


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="qtorus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cf", parents=[common], help="continued fraction of a quadratic irrational")
    p.add_argument("theta")
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("morita", parents=[common], help="decide Morita equivalence")
    p.add_argument("theta1")
    p.add_argument("theta2")
    p.add_argument("--bound", type=_positive, default=None, help="also run the brute-force oracle")
    p.set_defaults(func=cmd_morita)

    p = sub.add_parser("torus-verify", parents=[common], help="operator relations and pairing axioms")
    p.add_argument("--exp-range", type=_positive, default=4)
    p.add_argument("--verbose", action="store_true", help="print OK lines too")
    p.set_defaults(func=cmd_torus_verify)

    p = sub.add_parser("transform-verify", parents=[common], help="diagrams and pairing preservation")
    p.add_argument("theta1")
    p.add_argument("theta2")
    p.add_argument("--exp-range", type=_positive, default=4)
    p.add_argument("--verbose", action="store_true", help="print OK lines too")
    p.set_defaults(func=cmd_transform_verify)

    p = sub.add_parser("rewrite", parents=[common], help="C_theta atom for a GL2(Z) matrix")
    for name in "abcd":
        p.add_argument(name, type=int)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("eval", parents=[common], help="evaluate a C_theta atom at two points")
    p.add_argument("formula")
    p.add_argument("x", help="exponent of x = exp(2 pi i x)")
    p.add_argument("y", help="exponent of y = exp(2 pi i y)")
    p.add_argument("theta")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QTorusError as exc:
        msg = f"error: {type(exc).__name__}: {exc}"
        if use_color():
            msg = f"\x1b[31m{msg}\x1b[0m"
        print(msg, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
