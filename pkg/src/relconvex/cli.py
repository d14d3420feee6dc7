"""Command-line front end.

Exit codes: 0 when the computed verdict is true (or Feasible, or a value
was produced), 3 when the verdict is mathematically false or Infeasible,
1 for usage and input errors, 2 when an iteration failed to converge.
Every subcommand takes --json (machine-readable report) and --tol; the
RELCONVEX_TOL environment variable overrides the default tolerance.
Wherever a file path is expected, a comma-separated inline value works
too.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from ._defaults import DEFAULT_TOL
from . import convexity, inequalities, majorization, polyroots, reproduce, spectra, transport
from .errors import ConvergenceError, InputError, RelconvexError
from .measures import WeightedMeasure

EXIT_TRUE = 0
EXIT_FALSE = 3
EXIT_INPUT = 1
EXIT_NUMERIC = 2


@dataclass
class RunReport:
    """Stable, JSON-serializable record of one CLI invocation."""

    subcommand: str
    inputs: dict
    result: dict
    residuals: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_TOL
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "result": self.result,
            "residuals": self.residuals,
            "tolerance": self.tolerance,
            "wall_time_s": self.wall_time_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        return cls(
            subcommand=data["subcommand"],
            inputs=data["inputs"],
            result=data["result"],
            residuals=data.get("residuals", {}),
            tolerance=data.get("tolerance", DEFAULT_TOL),
            wall_time_s=data.get("wall_time_s", 0.0),
        )


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the documented contract reserves 2
    # for numerical failures, so usage errors are remapped to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _default_tol() -> float:
    raw = os.environ.get("RELCONVEX_TOL", "")
    if raw:
        try:
            return float(raw)
        except ValueError:
            raise InputError(f"RELCONVEX_TOL is not a number: {raw!r}")
    return DEFAULT_TOL


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split(",") if tok.strip() != ""])
    except ValueError as exc:
        raise InputError(f"cannot parse {text!r} as comma-separated numbers: {exc}")


def _load_measure(spec: str) -> WeightedMeasure:
    """File path to a measure JSON, or inline points with optional weights.

    Inline syntax: "1,2,3" (uniform weights) or "1,2,3@0.2,0.3,0.5".
    """
    if os.path.exists(spec):
        with open(spec) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{spec} is not valid JSON: {exc}")
        return WeightedMeasure.from_dict(data)
    if "@" in spec:
        pts_text, w_text = spec.split("@", 1)
        pts = _parse_floats(pts_text)
        w = _parse_floats(w_text)
    else:
        pts = _parse_floats(spec)
        w = np.full(pts.size, 1.0 / max(pts.size, 1))
    if pts.size == 0:
        raise InputError(f"no points in {spec!r}")
    return WeightedMeasure(dimension=1, points=pts.reshape(-1, 1), weights=w)


def _load_vector(spec: str) -> np.ndarray:
    if os.path.exists(spec):
        with open(spec) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data = data.get("points", data.get("values"))
        return np.asarray(data, dtype=np.float64).reshape(-1)
    return _parse_floats(spec)


def _load_matrix(spec: str) -> spectra.SymmetricMatrix:
    """Matrix JSON file, or inline rows separated by semicolons."""
    if os.path.exists(spec):
        with open(spec) as fh:
            return spectra.SymmetricMatrix.from_dict(json.load(fh))
    rows = [_parse_floats(r) for r in spec.split(";") if r.strip()]
    if not rows:
        raise InputError(f"no matrix rows in {spec!r}")
    entries = np.vstack(rows)
    return spectra.SymmetricMatrix(order=entries.shape[0], entries=entries)


def _load_polynomial(spec: str) -> polyroots.ComplexPolynomial:
    if os.path.exists(spec):
        with open(spec) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data = data["coefficients"]
        return polyroots.ComplexPolynomial.from_pairs(data)
    return polyroots.ComplexPolynomial.from_pairs(_parse_floats(spec))


def _resolve_function(name: str) -> convexity.ScalarFunction:
    if name in convexity.BUILTIN_NAMES:
        return convexity.builtin_function(name)
    return convexity.function_from_expression(name)


def _verdict_exit(flag: bool) -> int:
    return EXIT_TRUE if flag else EXIT_FALSE


# --- command handlers -------------------------------------------------------


def _cmd_majorize(args, tol):
    x = _load_vector(args.x)
    y = _load_vector(args.y)
    ok = majorization.is_majorized(x, y, tol)
    result = {"verdict": bool(ok)}
    residuals = {}
    if ok and args.witness:
        cert = majorization.hlp_transfer_matrix(x, y, tol)
        resid = float(np.max(np.abs(cert.apply(y) - x)))
        residuals["transfer"] = resid
        with open(args.witness, "w") as fh:
            json.dump(
                {"order": cert.order, "entries": cert.entries.tolist()}, fh, indent=2
            )
        result["witness_file"] = args.witness
    report = RunReport(
        subcommand="majorize",
        inputs={"x": args.x, "y": args.y},
        result=result,
        residuals=residuals,
        tolerance=tol,
    )
    return _verdict_exit(ok), report


def _cmd_transport(args, tol):
    mu_x = _load_measure(args.x)
    mu_y = _load_measure(args.y)
    verdict = transport.weighted_majorization_decide(mu_x, mu_y, tol)
    result = {"verdict": "Feasible" if verdict.feasible else "Infeasible"}
    residuals = {"phase1_objective": verdict.phase1_objective}
    if verdict.feasible:
        rep = verdict.certificate.residuals
        residuals.update(
            row_sum=rep.max_row_sum_dev,
            weight_transfer=rep.max_weight_transfer_dev,
            barycenter=rep.max_barycenter_dev,
        )
        if args.witness:
            with open(args.witness, "w") as fh:
                json.dump(verdict.certificate.to_dict(), fh, indent=2)
            result["witness_file"] = args.witness
    report = RunReport(
        subcommand="transport",
        inputs={"x": args.x, "y": args.y},
        result=result,
        residuals=residuals,
        tolerance=tol,
    )
    return _verdict_exit(verdict.feasible), report


def _cmd_certify(args, tol):
    f = _resolve_function(args.fn)
    lo, hi = _parse_floats(args.region)
    region = convexity.Interval(float(lo), float(hi))
    outcome = convexity.support_line_certify(
        f,
        args.at,
        region,
        grid_points=args.grid,
        refine_depth=args.depth,
        tol=tol,
    )
    if outcome.certified:
        result = {
            "verdict": "certified",
            "slope": outcome.slope,
            "offset": outcome.offset,
            "truncated": outcome.truncated,
            "grid_points": outcome.grid_points,
            "refine_depth": outcome.refine_depth,
        }
        residuals = {"min_margin": outcome.min_margin}
        code = EXIT_TRUE
    else:
        result = {
            "verdict": "refuted",
            "witness": outcome.witness,
            "f_value": outcome.f_value,
            "line_value": outcome.line_value,
        }
        residuals = {"margin": outcome.margin}
        code = EXIT_FALSE
    report = RunReport(
        subcommand="certify",
        inputs={"fn": args.fn, "at": args.at, "region": args.region},
        result=result,
        residuals=residuals,
        tolerance=tol,
    )
    return code, report


def _cmd_boundary(args, tol):
    f = _resolve_function(args.fn)
    value = convexity.convexity_boundary(f, args.at, args.dir, tol=tol)
    if math.isinf(value):
        result = {"value": "unbounded"}
        residuals = {}
    else:
        fa = float(f(args.at))
        sa = float(f.deriv(args.at))
        resid = abs(float(f(value)) - fa - sa * (value - args.at))
        result = {"value": value}
        residuals = {"defining_equation_residual": resid}
    report = RunReport(
        subcommand="boundary",
        inputs={"fn": args.fn, "at": args.at, "dir": args.dir},
        result=result,
        residuals=residuals,
        tolerance=tol,
    )
    return EXIT_TRUE, report


def _cmd_verify(args, tol):
    kind = args.check
    if kind == "popoviciu":
        f = _resolve_function(args.fn)
        a, b, c = _parse_floats(args.points)
        ok = inequalities.popoviciu_verify(f, a, b, c, tol)
        witness = inequalities.popoviciu_witness(a, b, c)
        result = {"verdict": bool(ok), "witness_case": witness.case_tag}
        inputs = {"check": kind, "fn": args.fn, "points": args.points}
    elif kind == "xexp":
        w = _parse_floats(args.weights)
        x = _parse_floats(args.points)
        ok = inequalities.xexp_weighted_jensen_verify(w, x, tol)
        result = {"verdict": bool(ok)}
        inputs = {"check": kind, "weights": args.weights, "points": args.points}
    elif kind == "bg":
        x = _parse_floats(args.points)
        ok = inequalities.borwein_girgensohn_verify(x, tol)
        result = {"verdict": bool(ok)}
        inputs = {"check": kind, "points": args.points}
    elif kind == "bnl":
        x = _parse_floats(args.x)
        y = _parse_floats(args.y)
        ok = inequalities.bnl_triplet_verify(x, y, tol)
        result = {"verdict": bool(ok)}
        inputs = {"check": kind, "x": args.x, "y": args.y}
    else:  # jensen
        f = _resolve_function(args.fn)
        mu = _load_measure(args.dist)
        rep = inequalities.probabilistic_jensen_verify(
            mu, f, truncation_level=args.truncate, tol=tol
        )
        ok = rep.verdict
        result = {"verdict": bool(ok), **rep.to_dict()}
        inputs = {
            "check": kind,
            "fn": args.fn,
            "dist": args.dist,
            "truncate": args.truncate,
        }
    report = RunReport(
        subcommand=f"verify-{kind}",
        inputs=inputs,
        result=result,
        tolerance=tol,
    )
    return _verdict_exit(ok), report


def _cmd_spectra(args, tol):
    if args.check == "schur-horn":
        mat = _load_matrix(args.input[0])
        ok = spectra.schur_horn_check(mat, tol)
        result = {"verdict": bool(ok)}
        inputs = {"check": args.check, "input": args.input}
    else:  # trace-ineq
        mats = [_load_matrix(spec) for spec in args.input]
        if args.weights:
            w = _parse_floats(args.weights)
        else:
            w = np.full(len(mats), 1.0 / len(mats))
        ok = spectra.trace_inequality_verify(w, mats, tol)
        result = {"verdict": bool(ok)}
        inputs = {
            "check": args.check,
            "input": args.input,
            "weights": args.weights,
        }
    report = RunReport(
        subcommand=f"spectra-{args.check}",
        inputs=inputs,
        result=result,
        tolerance=tol,
    )
    return _verdict_exit(ok), report


def _cmd_poly(args, tol):
    p = _load_polynomial(args.coeffs)
    inputs = {"check": args.check, "coeffs": args.coeffs}
    residuals = {}
    if args.check == "roots":
        rts = polyroots.roots(p)
        resid = float(np.max(np.abs(p(rts)))) if rts.size else 0.0
        result = {
            "roots": [[float(z.real), float(z.imag)] for z in rts],
        }
        residuals["max_abs_value_at_roots"] = resid
        code = EXIT_TRUE
    elif args.check == "gauss-lucas":
        ok = polyroots.gauss_lucas_check(p, tol)
        result = {"verdict": bool(ok)}
        code = _verdict_exit(ok)
    elif args.check == "malamud":
        verdict = polyroots.malamud_majorization_check(p, tol)
        result = {"verdict": "Feasible" if verdict.feasible else "Infeasible"}
        residuals["phase1_objective"] = verdict.phase1_objective
        code = _verdict_exit(verdict.feasible)
    else:  # dbs
        fns = {
            "abs2": lambda z: np.abs(z) ** 2,
            "re": lambda z: np.real(z),
            "absre": lambda z: np.abs(np.real(z)),
            "repos": lambda z: np.maximum(np.real(z), 0.0),
        }
        ok = polyroots.debruijn_springer_verify(p, fns[args.fn], tol)
        result = {"verdict": bool(ok), "fn": args.fn}
        inputs["fn"] = args.fn
        code = _verdict_exit(ok)
    report = RunReport(
        subcommand=f"poly-{args.check}",
        inputs=inputs,
        result=result,
        residuals=residuals,
        tolerance=tol,
    )
    return code, report


def _cmd_reproduce(args, tol):
    if args.only:
        names = []
        for tok in args.only.split(","):
            tok = tok.strip()
            if tok in reproduce.GROUPS:
                names.extend(reproduce.GROUPS[tok])
            elif tok in reproduce.ENTRY_NAMES:
                names.append(tok)
            else:
                raise InputError(f"unknown reproduction entry {tok!r}")
    elif args.target in reproduce.GROUPS:
        names = list(reproduce.GROUPS[args.target])
    elif args.target in reproduce.ENTRY_NAMES:
        names = [args.target]
    else:
        raise InputError(
            f"unknown reproduction target {args.target!r}; "
            f"choose from {', '.join(reproduce.ENTRY_NAMES)} or a group "
            f"({', '.join(reproduce.GROUPS)})"
        )
    suite = reproduce.run_suite(names, seed=args.seed, tol=tol)
    result = {
        "all_passed": suite["all_passed"],
        "seed": suite["seed"],
        "entries": suite["entries"],
    }
    report = RunReport(
        subcommand="reproduce",
        inputs={"target": args.target, "only": args.only, "seed": args.seed},
        result=result,
        tolerance=tol,
        wall_time_s=suite["wall_time_s"],
    )
    return _verdict_exit(suite["all_passed"]), report


# --- argument wiring --------------------------------------------------------


def build_parser(default_tol: float) -> _Parser:
    parser = _Parser(
        prog="relconvex",
        description="Majorization, stochastic certificates, and convexity-point checks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="print a machine-readable report"
    )
    common.add_argument(
        "--tol",
        type=float,
        default=default_tol,
        help=f"numeric tolerance (default {default_tol:g}, env RELCONVEX_TOL)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("majorize", parents=[common], help="classical vector majorization")
    p.add_argument("--x", required=True, help="vector file or inline comma list")
    p.add_argument("--y", required=True, help="vector file or inline comma list")
    p.add_argument("--witness", help="write the transfer-matrix certificate here")
    p.set_defaults(handler=_cmd_majorize)

    p = sub.add_parser(
        "transport", parents=[common], help="weighted majorization between measures"
    )
    p.add_argument("--x", required=True, help="measure JSON or inline points[@weights]")
    p.add_argument("--y", required=True, help="measure JSON or inline points[@weights]")
    p.add_argument("--witness", help="write the row-stochastic certificate here")
    p.set_defaults(handler=_cmd_transport)

    p = sub.add_parser(
        "certify", parents=[common], help="supporting-line certificate at a point"
    )
    p.add_argument("--fn", required=True, help="built-in name or expression in t")
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--region", required=True, help="lo,hi")
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--depth", type=int, default=20)
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser(
        "boundary", parents=[common], help="edge of the convexity neighborhood"
    )
    p.add_argument("--fn", required=True)
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--dir", choices=("left", "right"), default="right")
    p.set_defaults(handler=_cmd_boundary)

    p = sub.add_parser("verify", parents=[], help="named inequality checks")
    vsub = p.add_subparsers(dest="check", required=True)
    v = vsub.add_parser("popoviciu", parents=[common])
    v.add_argument("--fn", default="square")
    v.add_argument("--points", required=True, help="a,b,c")
    v.set_defaults(handler=_cmd_verify)
    v = vsub.add_parser("xexp", parents=[common])
    v.add_argument("--weights", required=True)
    v.add_argument("--points", required=True)
    v.set_defaults(handler=_cmd_verify)
    v = vsub.add_parser("bg", parents=[common])
    v.add_argument("--points", required=True)
    v.set_defaults(handler=_cmd_verify)
    v = vsub.add_parser("bnl", parents=[common])
    v.add_argument("--x", required=True, help="positive triplet")
    v.add_argument("--y", required=True, help="positive triplet")
    v.set_defaults(handler=_cmd_verify)
    v = vsub.add_parser("jensen", parents=[common])
    v.add_argument("--fn", default="xexp")
    v.add_argument("--dist", required=True, help="measure JSON or inline points[@weights]")
    v.add_argument("--truncate", type=float, default=None)
    v.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("spectra", parents=[], help="symmetric-matrix checks")
    ssub = p.add_subparsers(dest="check", required=True)
    s = ssub.add_parser("trace-ineq", parents=[common])
    s.add_argument(
        "--input", action="append", required=True, help="matrix JSON or rows 'a,b;c,d'"
    )
    s.add_argument("--weights", help="inline weights (default uniform)")
    s.set_defaults(handler=_cmd_spectra)
    s = ssub.add_parser("schur-horn", parents=[common])
    s.add_argument("--input", action="append", required=True)
    s.set_defaults(handler=_cmd_spectra)

    p = sub.add_parser("poly", parents=[], help="polynomial root checks")
    psub = p.add_subparsers(dest="check", required=True)
    for name in ("roots", "gauss-lucas", "malamud"):
        q = psub.add_parser(name, parents=[common])
        q.add_argument("--coeffs", required=True, help="JSON file or ascending inline list")
        q.set_defaults(handler=_cmd_poly)
    q = psub.add_parser("dbs", parents=[common])
    q.add_argument("--coeffs", required=True)
    q.add_argument("--fn", choices=("abs2", "re", "absre", "repos"), default="abs2")
    q.set_defaults(handler=_cmd_poly)

    p = sub.add_parser(
        "reproduce", parents=[common], help="recompute headline values and suites"
    )
    p.add_argument("target", nargs="?", default="all")
    p.add_argument("--only", help="comma list of entry names or groups")
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(handler=_cmd_reproduce)

    return parser


def _normalize_argv(argv):
    """Fold ``--flag -5,5`` into ``--flag=-5,5``.

    argparse reads a leading dash as an option; inline vectors and regions
    legitimately start with a minus sign.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok.startswith("--")
            and "=" not in tok
            and nxt is not None
            and len(nxt) > 1
            and nxt[0] == "-"
            and (nxt[1].isdigit() or nxt[1] == "." or nxt[1:].startswith("inf"))
        ):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _print_human(report: RunReport):
    result = report.result
    if "entries" in result:
        for entry in result["entries"]:
            status = "PASS" if entry["passed"] else "FAIL"
            print(f"{entry['name']:<26} {status}  computed={entry['computed']}")
        print(f"all passed: {result['all_passed']}")
        return
    if "verdict" in result:
        print(f"verdict: {result['verdict']}")
    if "value" in result:
        print(f"value: {result['value']}")
    if "roots" in result:
        for re_part, im_part in result["roots"]:
            print(f"{re_part:+.12g} {im_part:+.12g}j")
    for key, val in report.residuals.items():
        print(f"{key}: {val:.3g}")
    for key in ("witness_file", "witness_case", "mean", "f_of_mean", "mean_of_f"):
        if key in result:
            print(f"{key}: {result[key]}")


def main(argv=None) -> int:
    try:
        default_tol = _default_tol()
    except InputError as exc:
        print(f"relconvex: {exc}", file=sys.stderr)
        return EXIT_INPUT
    parser = build_parser(default_tol)
    args = parser.parse_args(_normalize_argv(sys.argv[1:] if argv is None else list(argv)))
    start = time.perf_counter()
    try:
        code, report = args.handler(args, args.tol)
    except ConvergenceError as exc:
        print(f"relconvex: did not converge: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except RelconvexError as exc:
        print(f"relconvex: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"relconvex: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.wall_time_s = report.wall_time_s or (time.perf_counter() - start)
    if args.json:
        print(report.to_json())
    else:
        _print_human(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
