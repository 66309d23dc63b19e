"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 input error, 3 numerical failure.
A JSON report always goes to standard output (or ``--out``); a short human
summary goes to standard error unless ``--json`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .datasets import BTOAData, as_btoa, parse_dataset, validate_admissible
from .errors import DataError, NumericalError, ParseError, SingularMatrixError
from .fixtures import FIXTURES, random_contraction
from .lft import FreeParameter, lft_apply_many, make_interpolant, parse_parameter
from .pick import pick_matrix
from .realization import Realization, constant_realization
from .verify import ContourConfig, check_interpolation
from .winding import kappa_certificate

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
VERIFY_TOL = 1e-6


class Outcome:
    def __init__(self, code: int, report: dict, summary: str):
        self.exit_code = code
        self.report = report
        self.summary = summary


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc


def load_data(path: str) -> BTOAData:
    return as_btoa(parse_dataset(_read(path)))


def _parameter(args, d: BTOAData) -> FreeParameter:
    if getattr(args, "g_file", None):
        return parse_parameter(_read(args.g_file), d.p, d.m)
    if getattr(args, "g_random", False):
        rng = np.random.default_rng(args.seed)
        return FreeParameter.constant(random_contraction(rng, d.p, d.m))
    return FreeParameter.zero(d.p, d.m)


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise DataError(f"not a complex number: {text!r}") from exc


def cmd_validate(args) -> Outcome:
    rep = validate_admissible(load_data(args.path), args.tol if args.tol is not None else 1e-8)
    code = EXIT_OK if rep.verdict else EXIT_NEGATIVE
    return Outcome(code, rep.to_dict(), f"admissible: {rep.verdict}")


def cmd_pick(args) -> Outcome:
    rep = pick_matrix(load_data(args.path), args.tol)
    code = EXIT_OK if rep.solvable_schur else EXIT_NEGATIVE
    s = f"inertia {rep.inertia.counts}, verdict {rep.verdict}, kappa {rep.kappa}"
    return Outcome(code, rep.to_dict(), s)


def cmd_solve(args) -> Outcome:
    d = load_data(args.path)
    G = _parameter(args, d)
    try:
        interp = make_interpolant(d, G, args.tol)
    except SingularMatrixError as exc:
        return Outcome(EXIT_NEGATIVE, {"error": str(exc)}, str(exc))
    pts = [_complex(t) for t in (args.eval or [])]
    vals = lft_apply_many(interp.theta, G, pts) if pts else []
    report = {
        "kappa_expected": interp.kappa_expected,
        "G": G.to_dict(),
        "theta": interp.theta.to_dict(),
        "psi": interp.psi.to_dict(),
        "side_condition": interp.side.to_dict(),
        "values": [{"lambda": lam, "S": v} for lam, v in zip(pts, vals)],
    }
    code = EXIT_OK if interp.side_condition_ok else EXIT_NEGATIVE
    s = f"kappa {interp.kappa_expected}, side condition ok: {interp.side_condition_ok}"
    for lam, v in zip(pts, vals):
        s += f"\nS({lam}) = {np.array2string(v, precision=6)}"
    return Outcome(code, report, s)


def cmd_verify(args) -> Outcome:
    d = load_data(args.path)
    cfg = ContourConfig(nodes_per_circle=args.nodes)
    if args.s_file:
        S = _s_file(args.s_file, d)
    else:
        try:
            S = make_interpolant(d, _parameter(args, d), args.tol)
        except SingularMatrixError as exc:
            return Outcome(EXIT_NEGATIVE, {"error": str(exc)}, str(exc))
    rep = check_interpolation(S, d, cfg, kappa=args.kappa)
    ok = rep.passed(VERIFY_TOL)
    return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, rep.to_dict(),
                   f"residuals ({rep.r_left:.3e}, {rep.r_right:.3e}, {rep.r_bi:.3e}), "
                   f"sup norm {rep.contractivity_max:.6f}, pass: {ok}")


def _s_file(path: str, d: BTOAData):
    """A candidate solution need not be contractive or stable, so skip those checks."""
    try:
        doc = json.loads(_read(path))
    except ValueError as exc:
        raise ParseError(f"JSON syntax error: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if doc.get("kind") == "constant":
        return constant_realization(jsonio.decode_matrix(doc.get("value"), "value", (d.p, d.m)))
    if doc.get("kind") == "realization":
        A = jsonio.decode_matrix(doc.get("A"), "A")
        n = A.shape[0]
        B = jsonio.decode_matrix(doc.get("B"), "B", (n, d.m) if n else (None, None)).reshape(n, d.m)
        C = jsonio.decode_matrix(doc.get("C"), "C", (d.p, n) if n else (None, None)).reshape(d.p, n)
        D = jsonio.decode_matrix(doc.get("D"), "D", (d.p, d.m))
        return Realization(A, B, C, D)
    raise ParseError("kind must be \"constant\" or \"realization\"", "kind")


def cmd_kappa(args) -> Outcome:
    d = load_data(args.path)
    try:
        cert = kappa_certificate(d, _parameter(args, d))
    except SingularMatrixError as exc:
        return Outcome(EXIT_NEGATIVE, {"error": str(exc)}, str(exc))
    s = (f"kappa {cert.kappa_pick}, wno det Theta22 {cert.wno_theta22}, wno det psi {cert.wno_psi}, "
         f"poles {cert.pole_count_S}, certified: {cert.certified}")
    return Outcome(EXIT_OK if cert.certified else EXIT_NEGATIVE, cert.to_dict(), s)


def cmd_demo(args) -> Outcome:
    rows, lines = [], []
    for name, build in FIXTURES.items():
        d = build()
        rep = pick_matrix(d)
        cert = kappa_certificate(d)
        interp = make_interpolant(d)
        res = check_interpolation(interp, d, kappa=rep.kappa or 0)
        rows.append({
            "fixture": name,
            "inertia": list(rep.inertia.counts),
            "kappa": rep.kappa,
            "residuals": [res.r_left, res.r_right, res.r_bi],
            "sup_norm_axis": res.axis_max,
            "certified": cert.certified,
        })
        lines.append(f"{name}: inertia {rep.inertia.counts} kappa {rep.kappa} "
                     f"max residual {max(res.r_left, res.r_right, res.r_bi):.2e} certified {cert.certified}")
    ok = all(r["certified"] for r in rows)
    return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, {"fixtures": rows}, "\n".join(lines))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="zero tolerance for inertia / residual checks")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--json", action="store_true", help="suppress the summary on stderr")

    gflags = argparse.ArgumentParser(add_help=False)
    g = gflags.add_mutually_exclusive_group()
    g.add_argument("--g-zero", action="store_true", help="free parameter G = 0 (default)")
    g.add_argument("--g-file", help="free parameter from a JSON file")
    g.add_argument("--g-random", action="store_true", help="random constant contraction (uses --seed)")

    ap = argparse.ArgumentParser(prog="nevpick", description="Bitangential Nevanlinna-Pick interpolation on the right half plane.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check admissibility of a data file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pick", parents=[common], help="Pick matrix, inertia and kappa")
    p.add_argument("path")
    p.set_defaults(func=cmd_pick)

    p = sub.add_parser("solve", parents=[common, gflags], help="build Theta, psi and an interpolant")
    p.add_argument("path")
    p.add_argument("--eval", nargs="*", metavar="LAMBDA", help="points at which to evaluate S, e.g. 3 or 1+2j")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common, gflags], help="check interpolation residuals")
    p.add_argument("path")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--s-from-solve", action="store_true", help="verify the interpolant built from G (default)")
    src.add_argument("--s-file", help="verify a function given as a JSON constant or realization")
    p.add_argument("--nodes", type=int, default=256, help="quadrature nodes per circle")
    p.add_argument("--kappa", type=int, default=0, help="allowed pole count; > 0 samples the norm on the axis only")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kappa", parents=[common, gflags], help="winding-number certificate for kappa")
    p.add_argument("path")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("demo", parents=[common], help="run the built-in fixtures")
    p.set_defaults(func=cmd_demo)
    return ap


def run(argv: list[str] | None = None) -> tuple[Outcome, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args), args
    except DataError as exc:
        return Outcome(EXIT_INPUT, {"error": str(exc), "kind": "input"}, f"input error: {exc}"), args
    except NumericalError as exc:
        return Outcome(EXIT_NUMERIC, {"error": str(exc), "kind": "numerical"}, f"numerical failure: {exc}"), args


def main(argv: list[str] | None = None) -> int:
    try:
        out, args = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INPUT if exc.code else EXIT_OK
    text = jsonio.dumps({"exit_code": out.exit_code, **out.report}) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if not args.json:
        sys.stderr.write(out.summary + "\n")
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
