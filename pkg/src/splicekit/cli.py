"""Command-line interface.

Commands: ``generate``, ``verify``, ``export-dot``, ``normal-form``,
``monodromy``, ``fibres``.  Output is JSON on stdout (or ``--out``).

Exit codes: 0 success, 2 invalid input, 3 an invariant failed, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .arith import ArithError, parse_rational
from .bundle import Bundle, fixture_report, generate_bundle, verify_bundle
from .fibres import GENERIC, SPECIAL, attach_values, classify_irregular_fibres, euler_balance_check, suzuki_check
from .monodromy import free_probe_detail, h_infinity, local_monodromies
from .plumbing import plumbing_to_dot
from .poly import FamilyInstance, russell
from .splice import SimpleTypeParams, ValidationError, _k_and_case, normal_form, splice_to_dot, validate
from .verify import SweepBounds, run_sweep

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INVARIANT = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def _int_list(text: Optional[str]) -> List[int]:
    if text is None or text.strip() in ("", "[]"):
        return []
    try:
        return [int(t) for t in text.strip("[] ").split(",") if t.strip()]
    except ValueError:
        raise CliError(EXIT_INVALID, f"expected comma-separated integers, got {text!r}") from None


def _rat_list(text: Optional[str]) -> Optional[List[Fraction]]:
    if text is None:
        return None
    if text.strip() in ("", "[]"):
        return []
    try:
        return [parse_rational(t) for t in text.strip("[] ").split(",") if t.strip()]
    except ArithError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from None


def _add_request_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["F1", "F2", "F3"], default="F1")
    p.add_argument("--pqparams", metavar="P,Q,p,q", help="four positive integers with Pq-pQ=1")
    p.add_argument("--a", metavar="a1,a2,...", default="", help="arm lengths a_1..a_{r-1}")
    p.add_argument("--alphas", metavar="RATS", help="alpha_0..alpha_{k-1} (default all 1)")
    p.add_argument("--betas", metavar="RATS", help="beta_1..beta_{r-1} (default 1..r-1)")
    p.add_argument("--h", metavar="RATS", help="coefficients of h(x), lowest first (F3)")


def _params_from_args(args) -> SimpleTypeParams:
    a = tuple(_int_list(args.a))
    if args.family == "F3":
        params = SimpleTypeParams("F3", a=a)
    else:
        if not args.pqparams:
            raise CliError(EXIT_INVALID, "--pqparams P,Q,p,q is required for F1/F2")
        pq = _int_list(args.pqparams)
        if len(pq) != 4:
            raise CliError(EXIT_INVALID, "--pqparams needs exactly four integers")
        params = SimpleTypeParams(args.family, *pq, a=a)
    errs = validate(params)
    if errs:
        raise CliError(EXIT_INVALID, "; ".join(errs))
    return params


def _instance_from_args(args) -> FamilyInstance:
    params = _params_from_args(args)
    betas = _rat_list(args.betas)
    if betas is None:
        betas = [Fraction(i) for i in range(1, params.r)]
    if params.family == "F3":
        h = _rat_list(args.h) or []
        inst = FamilyInstance(params, (), tuple(betas), tuple(h))
    else:
        k = _k_and_case(params.P, params.Q, params.p, params.q)[0]
        alphas = _rat_list(args.alphas)
        if alphas is None:
            alphas = [Fraction(1)] * k
        inst = FamilyInstance(params, tuple(alphas), tuple(betas), tuple(_rat_list(args.h) or []))
    errs = inst.errors()
    if errs:
        raise CliError(EXIT_INVALID, "; ".join(errs))
    return inst


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {out}: {exc}") from None
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_bundle(path: str) -> Bundle:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    try:
        return Bundle.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_INVALID, f"malformed bundle: {exc}") from None


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    inst = _instance_from_args(args)
    b = generate_bundle(inst, polynomial_checks=not args.skip_polynomial_checks)
    if not b.report["ok"]:
        failed = [n for n, v in b.report["properties"].items() if v["status"] == "fail"]
        sys.stderr.write(f"invariant failure: {', '.join(failed)}\n")
        sys.stderr.write(_dump(b.report))
        return EXIT_INVARIANT
    _emit(b.to_json(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.bundle:
        report = {"source": args.bundle, "properties": verify_bundle(_load_bundle(args.bundle))}
    elif args.fixture:
        if args.fixture != "russell":
            raise CliError(EXIT_INVALID, f"unknown fixture {args.fixture!r}")
        report = {"source": "fixture:russell", "properties": fixture_report("russell", russell(), 21)}
    elif args.pqparams or args.family == "F3" and args.a:
        from .verify import run_properties
        inst = _instance_from_args(args)
        report = {"source": "request", "instance": inst.to_dict(),
                  "properties": run_properties(inst)}
    else:
        bounds = SweepBounds(args.max_pq, args.max_r, args.max_a)
        families = [args.family] if args.only_family else ["F1", "F2", "F3"]
        pb = SweepBounds(args.poly_max_pq, args.poly_max_r, args.poly_max_a)
        report = run_sweep(args.count, args.seed, families, bounds, polynomial_bounds=pb)
        report["source"] = "sweep"
        _emit(_dump(report), args.out)
        return EXIT_OK if report["ok"] else EXIT_INVARIANT
    report["ok"] = all(v["status"] != "fail" for v in report["properties"].values())
    _emit(_dump(report), args.out)
    return EXIT_OK if report["ok"] else EXIT_INVARIANT


def cmd_export_dot(args) -> int:
    if not args.section:
        raise CliError(EXIT_INVALID, "--section must be 'plumbing' or 'splice'")
    if args.section not in ("plumbing", "splice"):
        raise CliError(EXIT_INVALID, f"unknown section {args.section!r}")
    if args.bundle:
        b = _load_bundle(args.bundle)
        g, d = b.plumbing, b.splice
    else:
        from .splice import build_plumbing, build_splice
        params = _params_from_args(args)
        g, d = build_plumbing(params), build_splice(params)
    text = plumbing_to_dot(g) if args.section == "plumbing" else splice_to_dot(d)
    _emit(text, args.out)
    return EXIT_OK


def cmd_normal_form(args) -> int:
    params = _params_from_args(args)
    nf = normal_form(params)
    out = nf.to_dict()
    out["satisfies_bounds"] = nf.satisfies_bounds()
    out["det"] = nf.det
    _emit(_dump(out), args.out)
    return EXIT_OK if nf.satisfies_bounds() else EXIT_INVARIANT


def cmd_monodromy(args) -> int:
    r = args.r
    if r is None:
        if args.family != "F1":
            raise CliError(EXIT_INVALID, "monodromy is tabulated for F1; pass --r")
        r = _params_from_args(args).r
    if r < 1:
        raise CliError(EXIT_INVALID, "r >= 1 required")
    from .monodromy import braids_equal, permutation, product_of_local
    out = {
        "r": r,
        "local": [h.to_list() for h in local_monodromies(r)],
        "h_infinity": h_infinity(r).to_list(),
        "product_equals_h_infinity": braids_equal(product_of_local(r), h_infinity(r)),
        "pure": all(permutation(h) == tuple(range(r + 1)) for h in local_monodromies(r)),
    }
    ok = out["product_equals_h_infinity"] and out["pure"]
    if args.probe_len:
        if r < 2:
            raise CliError(EXIT_INVALID, "free-generation probe needs r >= 2")
        res = free_probe_detail(r, args.probe_len)
        out["free_probe"] = res.to_dict()
        ok = ok and res.ok
    _emit(_dump(out), args.out)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_fibres(args) -> int:
    inst = _instance_from_args(args)
    if inst.params.family != "F1":
        raise CliError(EXIT_INVALID, "fibre topology is tabulated for F1 only")
    locus = SPECIAL if args.special else GENERIC
    fib = attach_values(classify_irregular_fibres(inst.params, locus), inst)
    out = {
        "locus": locus,
        "fibres": [f.to_dict() for f in fib],
        "component_identity": suzuki_check(inst.params, locus, fib),
        "euler_balance": euler_balance_check(inst.params, locus, fib),
    }
    _emit(_dump(out), args.out)
    return EXIT_OK if out["component_identity"] and out["euler_balance"] else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splicekit",
        description="Plumbing graphs, splice diagrams, polynomials and monodromy "
                    "of rational polynomials of simple type.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a bundle for one instance")
    _add_request_args(p)
    p.add_argument("--skip-polynomial-checks", action="store_true",
                   help="skip fibre-inverse and rescaling checks (large instances)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="verify a bundle, an instance, a fixture or a seeded sweep")
    _add_request_args(p)
    p.add_argument("--bundle", help="bundle JSON file ('-' for stdin)")
    p.add_argument("--fixture", help="named fixture (russell)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--max-pq", type=int, default=30)
    p.add_argument("--max-r", type=int, default=6)
    p.add_argument("--max-a", type=int, default=5)
    p.add_argument("--poly-max-pq", type=int, default=12)
    p.add_argument("--poly-max-r", type=int, default=5)
    p.add_argument("--poly-max-a", type=int, default=3)
    p.add_argument("--only-family", action="store_true", help="sweep only --family")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", help="Graphviz text for a plumbing graph or splice diagram")
    _add_request_args(p)
    p.add_argument("--bundle")
    p.add_argument("--section", default="plumbing")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("normal-form", help="normal-form exponent descriptor")
    _add_request_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("monodromy", help="local monodromies and the monodromy at infinity")
    _add_request_args(p)
    p.add_argument("--r", type=int)
    p.add_argument("--probe-len", type=int, default=0,
                   help="also probe free generation up to this word length")
    p.add_argument("--out")
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("fibres", help="irregular fibres of an F1 instance")
    _add_request_args(p)
    p.add_argument("--special", action="store_true", help="use the special locus")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fibres)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
