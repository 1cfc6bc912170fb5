"""Command-line front end: ``qstirling {stirling,normal-order,verify,series}``.

Exit status is 0 on success, 1 when a verification fails and 2 on bad
arguments.
"""

from __future__ import annotations

import argparse
import json
import sys

from .boson_algebra import QChoice, inverse_normal_form, normal_order_power, reorder_right
from .deformed_numbers import BracketKind
from .series_expansion import (
    commutator_closed_form,
    commutator_residual,
    commutator_series,
    hamiltonian_closed_form,
    hamiltonian_residual,
    hamiltonian_series,
)
from .stirling import StirlingFamily, build_table
from .suite import SuiteConfig, check_ids, run_suite

LIMIT = 64
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse already exits with 2 on usage errors; keep that for our own checks too
    def bounded(self, args, name, value, lo=1):
        if value < lo:
            self.error(f"{name} must be >= {lo}")
        if value > LIMIT and not args.unsafe_large:
            self.error(f"{name} > {LIMIT} needs --unsafe-large")


def _parser() -> _Parser:
    top = _Parser(prog="qstirling", description="Deformed Stirling numbers and boson normal ordering.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    def common(p, formats):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--output", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--unsafe-large", action="store_true", help=f"allow sizes above {LIMIT}")

    st = sub.add_parser("stirling", help="print a Stirling table")
    st.add_argument("--family", required=True, choices=[f.value for f in StirlingFamily])
    st.add_argument("--n-max", type=int, default=5)
    common(st, ["text", "json", "csv"])

    no = sub.add_parser("normal-order", help="normal form of [n]^m or its inverse")
    no.add_argument("--m", type=int)
    no.add_argument("--k", type=int)
    no.add_argument("--inverse", action="store_true", help="expand (a+)^k a^k in powers of [n]")
    no.add_argument("--kind", choices=[k.value for k in BracketKind], default="G")
    no.add_argument("--Q", dest="q_choice", default="Q_equals_q", help="q, p, 1 or symbolic")
    no.add_argument("--right", action="store_true", help="place coefficients right of a^k")
    common(no, ["text", "json"])

    ve = sub.add_parser("verify", help="run the verification suite")
    ve.add_argument("--n-max", type=int, default=10)
    ve.add_argument("--dim", type=int, default=10)
    ve.add_argument("--op-max", type=int, default=5, help="largest k or m for operator identities")
    ve.add_argument("--kind", choices=[k.value for k in BracketKind], action="append")
    ve.add_argument("--only", action="append", metavar="ID", help="run only this check id (repeatable)")
    ve.add_argument("--pairs", type=int, default=20, help="random points for the float check")
    ve.add_argument("--list", action="store_true", help="print the check ids and exit")
    common(ve, ["json"])

    se = sub.add_parser("series", help="small-deformation expansion of one level")
    se.add_argument("--what", choices=["hamiltonian", "commutator"], required=True)
    se.add_argument("--level", type=int, required=True)
    se.add_argument("--order", type=int, default=2)
    common(se, ["text", "json"])
    return top


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_stirling(args, parser) -> int:
    parser.bounded(args, "--n-max", args.n_max)
    table = build_table(args.family, args.n_max)
    out = {"json": table.to_json, "csv": table.to_csv, "text": table.to_text}[args.format]()
    _emit(args, out)
    return EXIT_OK


def cmd_normal_order(args, parser) -> int:
    try:
        q_choice = QChoice.parse(args.q_choice)
    except ValueError as exc:
        parser.error(str(exc))
    if args.inverse:
        if args.k is None:
            parser.error("--inverse needs --k")
        parser.bounded(args, "--k", args.k)
        form = inverse_normal_form(args.k, args.kind)
    else:
        if args.m is None:
            parser.error("--m is required")
        parser.bounded(args, "--m", args.m)
        form = normal_order_power(args.m, args.kind, q_choice)
        if args.right:
            form = reorder_right(form)
    _emit(args, form.to_json() if args.format == "json" else form.to_text())
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    if args.list:
        _emit(args, "\n".join(check_ids()))
        return EXIT_OK
    if args.dim < 2:
        parser.error("--dim must be >= 2")
    parser.bounded(args, "--dim", args.dim, lo=2)
    parser.bounded(args, "--n-max", args.n_max)
    parser.bounded(args, "--op-max", args.op_max)
    if args.pairs < 0:
        parser.error("--pairs must be >= 0")
    only = None
    if args.only:
        known = set(check_ids())
        unknown = sorted(set(args.only) - known)
        if unknown:
            parser.error(f"unknown check id(s): {', '.join(unknown)}")
        only = frozenset(args.only)
    kinds = tuple(BracketKind(k) for k in dict.fromkeys(args.kind)) if args.kind else tuple(BracketKind)
    cfg = SuiteConfig(n_max=args.n_max, dim=args.dim, op_max=args.op_max, kinds=kinds, only=only, pairs=args.pairs)
    reports = run_suite(cfg)
    _emit(args, json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_series(args, parser) -> int:
    if args.level < 0:
        parser.error("--level must be >= 0")
    if args.order < 0:
        parser.error("--order must be >= 0")
    parser.bounded(args, "--level", args.level, lo=0)
    parser.bounded(args, "--order", args.order, lo=0)
    if args.what == "hamiltonian":
        value = hamiltonian_series(args.level, args.order)
        closed = hamiltonian_closed_form(args.level, args.order)
        residual = hamiltonian_residual(args.level, args.order)
        checked = min(args.order, 1)
    else:
        value = commutator_series(args.level, args.order)
        closed = commutator_closed_form(args.level, args.order)
        residual = commutator_residual(args.level, args.order)
        checked = min(args.order, 2)
    if args.format == "json":
        payload = {
            **value.to_json(),
            "what": args.what,
            "closed_form": closed.to_json(),
            "checked_degree": checked,
            "residual": residual.to_json(),
        }
        _emit(args, json.dumps(payload, sort_keys=True))
    else:
        _emit(
            args,
            f"value: {value.series}\n"
            f"closed form: {closed}\n"
            f"checked through degree: {checked}\n"
            f"residual: {residual}\n",
        )
    return EXIT_OK if residual.is_zero() else EXIT_FAIL


COMMANDS = {
    "stirling": cmd_stirling,
    "normal-order": cmd_normal_order,
    "verify": cmd_verify,
    "series": cmd_series,
}


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
