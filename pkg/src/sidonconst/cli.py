"""Command-line front end: ``sidon <command> ...``.

Text output by default, ``--json`` for a machine-readable envelope
``{command, inputs, result, diagnostics}``.  Exit codes: 0 success,
1 failed verification, 2 parse/usage error, 3 numerical convergence failure.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import math
import os
import sys
import time

import numpy as np

from .config import SolverConfig
from .errors import ConvergenceError, DomainError
from .minimax import NormalizedTriple, phi_star, solve_dagger
from .numsearch import (
    SearchConfig,
    geometric_bounds,
    real_unconditional_numeric,
    sidon_numeric,
    subset_lower_bound,
)
from .sidon import (
    closed_constant,
    combined_phase,
    constant_formula,
    extremal_polynomial,
    reduce_triple,
    sign_pattern,
)
from .trigpoly import format_poly, l1_norm, parse_poly, sup_norm
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3
SIG_DIGITS = 12


class UsageError(Exception):
    pass


def parse_set(text, minimum=2):
    try:
        vals = [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"cannot parse frequency set {text!r}") from exc
    if len(vals) < minimum:
        raise UsageError(f"need at least {minimum} frequencies, got {len(vals)}")
    if len(set(vals)) != len(vals):
        raise UsageError(f"frequencies must be distinct: {text!r}")
    return vals


def parse_floats(text, count=None):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse numbers {text!r}") from exc
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} comma-separated numbers, got {len(vals)}")
    return vals


def round_sig(obj, digits=SIG_DIGITS):
    """Round every float in a JSON-like structure to ``digits`` significant digits."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return obj
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    return obj


def _solver_config(args):
    norm_tol = args.norm_tol
    if norm_tol is None and os.environ.get("SIDON_TOL"):
        try:
            norm_tol = float(os.environ["SIDON_TOL"])
        except ValueError as exc:
            raise UsageError("SIDON_TOL must be a number") from exc
    return SolverConfig() if norm_tol is None else SolverConfig(norm_tol=norm_tol)


def _search_config(args, n):
    overrides = {}
    max_iters = args.max_iters
    if max_iters is None and os.environ.get("SIDON_MAX_ITERS"):
        try:
            max_iters = int(os.environ["SIDON_MAX_ITERS"])
        except ValueError as exc:
            raise UsageError("SIDON_MAX_ITERS must be an integer") from exc
    if max_iters is not None:
        overrides["max_iters"] = max_iters
    if getattr(args, "starts", None) is not None:
        overrides["starts"] = args.starts
    return SearchConfig.for_size(n, **overrides)


def _search_payload(res):
    return {
        "value": res.value,
        "witness": format_poly(res.witness),
        "iterations": res.iterations,
        "converged": res.converged,
        "best_start": res.best_start,
        "starts": res.starts_run,
    }


def _search_diag(cfg):
    return {
        "starts": cfg.starts,
        "max_iters": cfg.max_iters,
        "simplex_tol": cfg.simplex_tol,
        "value_tol": cfg.value_tol,
        "magnitude_cap": cfg.magnitude_cap,
    }


# each command returns (inputs, result, diagnostics, text lines)


def cmd_constant(args, solver):
    lambdas = parse_set(args.set)
    inputs = {"set": lambdas}
    result, diag, lines = {}, {"tolerances": solver.as_dict()}, []
    numeric = args.numeric or len(lambdas) != 3
    if len(lambdas) == 3:
        tr = reduce_triple(lambdas)
        value = closed_constant(tr)
        result.update(
            value=value, method="closed form", formula=constant_formula(tr),
            n=tr.n, d=tr.d, k=tr.k, l=tr.l,
        )
        lines.append(f"Sidon constant of {{{', '.join(map(str, tr.lambdas))}}} = "
                     f"{constant_formula(tr)} = {value:.12g}")
        lines.append(f"  d = {tr.d}, reduced shape (k, l) = ({tr.k}, {tr.l})")
    if numeric:
        cfg = _search_config(args, len(lambdas))
        res = sidon_numeric(lambdas, cfg, solver)
        diag["search"] = _search_diag(cfg)
        payload = _search_payload(res)
        if len(lambdas) == 3:
            payload["abs_diff"] = abs(res.value - result["value"])
            result["numeric"] = payload
            lines.append(f"  numeric lower bound {res.value:.12g} "
                         f"(|diff| {payload['abs_diff']:.3g}, {res.iterations} iterations)")
        else:
            result.update(value=res.value, method="numeric lower bound", numeric=payload)
            lines.append(f"Sidon constant of {{{', '.join(map(str, sorted(lambdas)))}}} >= {res.value:.12g} "
                         f"(numeric, {cfg.starts} starts)")
            if len(lambdas) >= 3:
                lb, sub = subset_lower_bound(lambdas)
                result["subset_lower_bound"] = {"value": lb, "subset": list(sub.lambdas)}
                lines.append(f"  best three-element subset {list(sub.lambdas)}: {lb:.12g}")
            lines.append(f"  witness {payload['witness']}")
    if args.real:
        cfg = _search_config(args, len(lambdas))
        res = real_unconditional_numeric(lambdas, cfg, solver)
        diag["search"] = _search_diag(cfg)
        result["real_unconditional"] = _search_payload(res)
        lines.append(f"  real unconditionality constant >= {res.value:.12g} (numeric)")
    return inputs, result, diag, lines


def cmd_extremal(args, solver):
    lambdas = parse_set(args.set, minimum=3)
    if len(lambdas) != 3:
        raise UsageError("extremal needs exactly three frequencies")
    tr = reduce_triple(lambdas)
    f = extremal_polynomial(tr)
    sup = sup_norm(f, solver)
    l1 = l1_norm(f)
    signs = list(sign_pattern(tr))
    result = {
        "polynomial": format_poly(f),
        "frequencies": list(tr.lambdas),
        "coefficients": [f[x].real for x in tr.lambdas],
        "signs": signs,
        "sup_norm": sup.value,
        "l1_norm": l1,
        "ratio": l1 / sup.value,
        "constant": closed_constant(tr),
        "maximizers": list(sup.maximizers),
    }
    lines = [
        f"extremal polynomial: {' '.join(f'{f[x].real:+g}*e({x})' for x in tr.lambdas)}",
        f"  sup-norm {sup.value:.12g}, l1 {l1:.12g}, ratio {l1 / sup.value:.12g} "
        f"= {constant_formula(tr)}",
    ]
    return {"set": lambdas}, result, {"tolerances": solver.as_dict()}, lines


def _angles(values, degrees):
    return [math.degrees(v) if degrees else v for v in values]


def cmd_supnorm(args, solver):
    poly = parse_poly(args.poly)
    if len(poly) == 0:
        raise UsageError("polynomial has no nonzero terms")
    res = sup_norm(poly, solver)
    result = {
        "value": res.value,
        "l1_norm": l1_norm(poly),
        "maximizers": list(res.maximizers),
        "critical_points": list(res.critical_points),
        "residual": res.residual,
    }
    unit = "deg" if args.degrees else "rad"
    lines = [
        f"sup-norm {res.value:.12g}",
        f"  l1 norm {l1_norm(poly):.12g}",
        f"  maximizers ({unit}): " + ", ".join(f"{x:.10g}" for x in _angles(res.maximizers, args.degrees)),
        f"  {len(res.critical_points)} critical points, residual {res.residual:.2e}",
    ]
    diag = {"tolerances": solver.as_dict(), "grid_size": res.grid_size}
    return {"poly": format_poly(poly)}, result, diag, lines


def cmd_phases(args, solver):
    lambdas = parse_set(args.set, minimum=3)
    if len(lambdas) != 3:
        raise UsageError("phases needs exactly three frequencies")
    rhos = parse_floats(args.rho, 3)
    if not all(r > 0 for r in rhos):
        raise UsageError("--rho entries must be positive")
    sol = solve_dagger(lambdas, rhos, solver)
    result = {
        "phases": list(sol.phases),
        "min_max_value": sol.min_max_value,
        "witness_t": list(sol.witness_t),
        "d": sol.d,
        "combined_phase": combined_phase(lambdas, sol.phases),
    }
    unit = "deg" if args.degrees else "rad"
    lines = [
        f"optimal phases ({unit}): " + ", ".join(f"{x:.10g}" for x in _angles(sol.phases, args.degrees)),
        f"  minimal max modulus {sol.min_max_value:.12g} (d = {sol.d})",
    ]
    return {"set": lambdas, "rho": rhos}, result, {"tolerances": solver.as_dict()}, lines


def phi_star_rows(r, s, k, l, samples, solver):
    nt = NormalizedTriple(r, s, k, l)
    thetas = 2.0 * math.pi * np.arange(samples) / samples
    return [(float(th), phi_star(nt, th, solver)) for th in thetas]


def cmd_phi_star(args, solver):
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    rows = phi_star_rows(args.r, args.s, args.k, args.l, args.samples, solver)
    inputs = {"r": args.r, "s": args.s, "k": args.k, "l": args.l, "samples": args.samples}
    result = {"theta": [t for t, _ in rows], "phi_star": [v for _, v in rows]}
    lines = ["theta,phi_star"] + [f"{t:.12g},{v:.12g}" for t, v in rows]
    return inputs, result, {"tolerances": solver.as_dict()}, lines


def cmd_bounds(args, solver):
    lo, hi = geometric_bounds(args.geometric)
    result = {"lower": lo, "upper": hi}
    lines = [f"Sidon constant of {{{args.geometric}^k}}: {lo:.12g} < C <= {hi:.12g}"]
    return {"q": args.geometric}, result, {"tolerances": solver.as_dict()}, lines


def cmd_scan_subsets(args, solver):
    lambdas = parse_set(args.set, minimum=3)
    value, best = subset_lower_bound(lambdas)
    subsets = []
    for sub in itertools.combinations(sorted(lambdas), 3):
        tr = reduce_triple(sub)
        subsets.append({"subset": list(sub), "n": tr.n, "constant": closed_constant(tr)})
    result = {"value": value, "witness": list(best.lambdas), "subsets": subsets}
    lines = [f"lower bound {value:.12g} from {list(best.lambdas)}"]
    lines += [f"  {s['subset']}: n = {s['n']}, sec(pi/{2 * s['n']}) = {s['constant']:.12g}" for s in subsets]
    return {"set": lambdas}, result, {"tolerances": solver.as_dict()}, lines


def cmd_verify(args, solver):
    checks = run_suite(args.suite, solver)
    result = {
        "passed": all(c.passed for c in checks),
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}" for c in checks]
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} properties passed")
    return {"suite": args.suite}, result, {"tolerances": solver.as_dict()}, lines


COMMANDS = {
    "constant": cmd_constant,
    "extremal": cmd_extremal,
    "supnorm": cmd_supnorm,
    "phases": cmd_phases,
    "phi-star": cmd_phi_star,
    "bounds": cmd_bounds,
    "scan-subsets": cmd_scan_subsets,
    "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON envelope")
    common.add_argument("--degrees", action="store_true", help="display angles in degrees (text output)")
    common.add_argument("--norm-tol", type=float, default=None, help="sup-norm tolerance (env SIDON_TOL)")
    common.add_argument("--max-iters", type=int, default=None,
                        help="simplex iterations per start (env SIDON_MAX_ITERS)")
    common.add_argument("--timing", action="store_true", help="add runtime_ms to diagnostics")

    parser = argparse.ArgumentParser(prog="sidon", description="Sidon constants and sup-norms of exponential sums.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", parents=[common], help="Sidon constant of a frequency set")
    p.add_argument("set", help="comma-separated integers, e.g. 0,1,3")
    p.add_argument("--numeric", action="store_true", help="cross-check by numerical search")
    p.add_argument("--real", action="store_true", help="also estimate the real unconditionality constant")
    p.add_argument("--starts", type=int, default=None, help="multistart count")

    p = sub.add_parser("extremal", parents=[common], help="extremal polynomial of a three-element set")
    p.add_argument("set")

    p = sub.add_parser("supnorm", parents=[common], help="sup-norm of a polynomial 'freq:re,im;...'")
    p.add_argument("poly")

    p = sub.add_parser("phases", parents=[common], help="minimax phases for given moduli")
    p.add_argument("set")
    p.add_argument("--rho", required=True, help="three positive moduli a,b,c")

    p = sub.add_parser("phi-star", parents=[common], help="CSV of max_t phi(t, theta) over theta in [0, 2pi)")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--samples", type=int, default=64)

    p = sub.add_parser("bounds", parents=[common], help="bounds for the set {q^k}")
    p.add_argument("--geometric", type=int, required=True, metavar="Q")

    p = sub.add_parser("scan-subsets", parents=[common], help="best three-element subset bound")
    p.add_argument("set")

    p = sub.add_parser("verify", parents=[common], help="run the property suites")
    p.add_argument("--suite", choices=SUITES, default="quick")
    return parser


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    started = time.perf_counter()
    try:
        solver = _solver_config(args)
        inputs, result, diag, lines = COMMANDS[args.command](args, solver)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"sidon {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        extra = f" bracket={exc.bracket}" if exc.bracket else ""
        print(f"sidon {args.command}: convergence failure: {exc}{extra}", file=stderr)
        return EXIT_CONVERGENCE
    if args.timing:
        diag["runtime_ms"] = (time.perf_counter() - started) * 1e3
    if args.json:
        envelope = {"command": args.command, "inputs": inputs, "result": result, "diagnostics": diag}
        stdout.write(json.dumps(round_sig(envelope), indent=2) + "\n")
    else:
        stdout.write("\n".join(lines) + "\n")
    if args.command == "verify" and not result["passed"]:
        return EXIT_FAILED
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
