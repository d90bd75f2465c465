"""Command-line interface.

Subcommands:
  example     gap report for a built-in family (lock or unlock) at one gamma
  sweep       CSV of the six probabilities over an eta_0 grid, plus a figure
  verify-all  run the full verification registry and print a pass/fail matrix
  solve       run one solver on a user-supplied ensemble JSON file

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 solver
failure.  The NLWE_TOL environment variable overrides the default numerical
tolerance everywhere.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance, locc, oud, postinfo, report
from .ensembles import (
    LABELS,
    ensemble_from_json,
    eta0_to_gamma,
    gamma_to_eta0,
    make_lock_example,
    make_unlock_example,
)
from .oud import SolverError

EXAMPLE_MAKERS = {"lock": make_lock_example, "unlock": make_unlock_example}


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _resolve_gamma(args) -> float:
    if args.eta0 is not None:
        return eta0_to_gamma(args.eta0)
    gamma = args.gamma if args.gamma is not None else 2.0
    gamma_to_eta0(gamma)  # range check
    return gamma


def cmd_example(args) -> int:
    try:
        gamma = _resolve_gamma(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    maker = EXAMPLE_MAKERS[args.name]
    try:
        r = report.analyze(
            maker(gamma),
            locc.builtin_protocols(args.name, gamma),
            [oud.closed_form_certificate(args.name, gamma)]
            + locc.builtin_bound_certificates(args.name, gamma),
        )
    except SolverError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return 3
    if args.json:
        print(json.dumps(report.report_to_dict(r), indent=2))
        return 0
    print(f"{args.name} example, gamma = {_fmt(gamma)} (eta0 = {_fmt(gamma_to_eta0(gamma))})")
    print(f"  p_G      = {_fmt(r.p_G)}")
    print(f"  p_L      in [{_fmt(r.p_L.lower)}, {_fmt(r.p_L.upper)}]")
    print(f"  p_G_PI   = {_fmt(r.p_G_PI)}")
    print(f"  p_L_PI   in [{_fmt(r.p_L_PI.lower)}, {_fmt(r.p_L_PI.upper)}]")
    if r.p_guess is not None:
        print(f"  p_guess  = {_fmt(r.p_guess)}")
    print(f"  gap without PI: {r.nlwe_without_pi}, with PI: {r.nlwe_with_pi}")
    print(f"  classification: {r.classification}")
    return 0


SWEEP_HEADER = (
    "eta0,gamma,p_G,p_L_lower,p_L_upper,p_G_PI,p_L_PI_lower,p_L_PI_upper,"
    "p_guess,classification"
)


def sweep_rows(name: str, eta0_from: float, eta0_to: float, steps: int) -> list[dict]:
    rows = []
    for eta0 in np.linspace(eta0_from, eta0_to, steps):
        gamma = eta0_to_gamma(float(eta0))
        r = report.analyze(
            EXAMPLE_MAKERS[name](gamma),
            locc.builtin_protocols(name, gamma),
            [oud.closed_form_certificate(name, gamma)]
            + locc.builtin_bound_certificates(name, gamma),
        )
        rows.append(
            {
                "eta0": float(eta0),
                "gamma": gamma,
                "p_G": r.p_G,
                "p_L_lower": r.p_L.lower,
                "p_L_upper": r.p_L.upper,
                "p_G_PI": r.p_G_PI,
                "p_L_PI_lower": r.p_L_PI.lower,
                "p_L_PI_upper": r.p_L_PI.upper,
                "p_guess": r.p_guess,
                "classification": r.classification,
            }
        )
    return rows


def sweep_csv(rows: list[dict]) -> str:
    lines = [SWEEP_HEADER]
    keys = SWEEP_HEADER.split(",")
    for row in rows:
        cells = []
        for k in keys:
            v = row[k]
            cells.append(v if isinstance(v, str) else _fmt(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    if not (1 / 3 - 1e-12 <= args.eta0_from < args.eta0_to < 0.5) or args.steps < 2:
        print(
            "error: need 1/3 <= from < to < 1/2 and steps >= 2", file=sys.stderr
        )
        return 2
    try:
        rows = sweep_rows(args.name, args.eta0_from, args.eta0_to, args.steps)
    except SolverError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return 3
    text = sweep_csv(rows)
    for row in rows:
        for v in row.values():
            if isinstance(v, float) and not np.isfinite(v):
                print("error: non-finite value in sweep output", file=sys.stderr)
                return 3
    with open(args.output, "w", newline="") as fh:
        fh.write(text)
    figure_path = args.figure
    if figure_path is None:
        base = args.output
        figure_path = (base[:-4] if base.endswith(".csv") else base) + ".png"
    from .plotting import render_sweep_figure

    render_sweep_figure(rows, figure_path, f"{args.name} family")
    print(f"wrote {args.steps} rows to {args.output} and figure to {figure_path}")
    return 0


def cmd_verify_all(args) -> int:
    results = acceptance.run_all(seed=args.seed)
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        all_ok = all_ok and r.passed
        print(f"{status}  {r.name:<{width}}  [{r.seconds:6.2f}s]  {r.detail}")
    print("all checks passed" if all_ok else "some checks FAILED")
    return 0 if all_ok else 1


def _matrix_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def cmd_solve(args) -> int:
    try:
        with open(args.ensemble) as fh:
            e = ensemble_from_json(fh.read())
    except (OSError, ValueError, KeyError, TypeError) as err:
        print(f"error: could not load ensemble: {err}", file=sys.stderr)
        return 2
    try:
        if args.mode == "oud":
            povm, value = oud.solve_oud(e)
            cert = oud.solve_oud_dual(e)
            verdict = oud.verify_certificate(cert, povm, e)
            out = {
                "mode": "oud",
                "value": value,
                "coefficients": {i: povm.s[i] for i in LABELS},
                "effects": {i: _matrix_json(m) for i, m in povm.effects().items()},
                "certificate": {
                    "accepted": verdict.accepted,
                    "trace": verdict.p_G,
                    "dual_feasibility_residual": verdict.dual_feasibility_residual,
                    "slackness_residual": verdict.slackness_residual,
                    "inconclusive_residual": verdict.inconclusive_residual,
                },
            }
        elif args.mode == "oud-pi":
            povm, value = postinfo.solve_oud_pi(e)
            verdict = postinfo.verify_pi_unambiguous(povm, e, tol=1e-6)
            out = {
                "mode": "oud-pi",
                "value": value,
                "effects": {
                    f"{w0},{w1}": _matrix_json(m)
                    for (w0, w1), m in povm.effects.items()
                },
                "certificate": {
                    "accepted": verdict.accepted,
                    "completeness_residual": verdict.completeness_residual,
                    "psd_residual": verdict.psd_residual,
                    "max_error_free_residual": max(
                        verdict.error_free_residuals.values()
                    ),
                },
            }
        else:
            effects, value = postinfo.solve_me(e)
            verdict = postinfo.verify_me_certificate(
                postinfo.me_certificate_from_solution(e, effects),
                e,
                solver_value=value,
            )
            out = {
                "mode": "me",
                "value": value,
                "effects": {i: _matrix_json(effects[i]) for i in LABELS},
                "certificate": {
                    "accepted": verdict.accepted,
                    "trace": verdict.p_guess,
                    "dominance_residual": verdict.dominance_residual,
                    "tightness_residual": verdict.tightness_residual,
                },
            }
    except SolverError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return 3
    print(json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlwe",
        description=(
            "Optimal unambiguous discrimination of two-qubit product ensembles, "
            "with and without post-measurement information."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example", help="gap report for a built-in family")
    p.add_argument("name", choices=("lock", "unlock"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gamma", type=float, default=None)
    g.add_argument("--eta0", type=float, default=None)
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.set_defaults(fn=cmd_example)

    p = sub.add_parser("sweep", help="CSV sweep over eta0 plus a rendered figure")
    p.add_argument("name", choices=("lock", "unlock"))
    p.add_argument("--from", dest="eta0_from", type=float, default=1 / 3)
    p.add_argument("--to", dest="eta0_to", type=float, default=0.49)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--output", default="sweep.csv")
    p.add_argument("--figure", default=None, help="figure path (default: CSV path with .png)")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify-all", help="run the full verification registry")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify_all)

    p = sub.add_parser("solve", help="solve a user-supplied ensemble JSON file")
    p.add_argument("ensemble")
    p.add_argument("--mode", choices=("oud", "oud-pi", "me"), default="oud")
    p.set_defaults(fn=cmd_solve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
