"""Command-line front end: sweep, bounds, rho and policy-eval subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bounds import SmoothnessCertificate, derived_constants
from .experiments import SweepConfig, certify_rho, emit_report, run_sweep
from .policy_eval import (
    consistency_report,
    linear_benchmark,
    tanh_scalar_example,
)

PROBLEMS = {"tanh": tanh_scalar_example, "linear": linear_benchmark}


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    config = SweepConfig.load(args.config)
    if args.out_dir:
        config = replace(config, out_dir=args.out_dir)
    rows = run_sweep(config)
    paths = emit_report(rows, config.out_dir, config)
    failed = sum(r.failed for r in rows)
    print(f"sweep complete: {len(rows)} rows ({failed} failed)")
    for name, path in sorted(paths.items()):
        print(f"  {name}: {path}")
    return 0


def cmd_bounds(args) -> int:
    cert = SmoothnessCertificate(**json.loads(Path(args.cert).read_text(encoding="utf-8")))
    report = derived_constants(cert)
    payload = report.to_json_dict()
    payload["delta"] = args.delta
    payload["table"] = [
        {
            "m": m,
            "c_cap": report.c_cap(m),
            "rhs_function": report.rhs_function(m, args.delta),
            "rhs_grad_two": report.rhs_grad(m, args.delta, "two") if m >= cert.n + 1 else None,
            "rhs_grad_inf": report.rhs_grad(m, args.delta, "inf") if m >= cert.n + 1 else None,
            "rhs_policy_eval": report.rhs_policy_eval(m, args.delta) if m >= cert.n + 1 else None,
        }
        for m in args.m
    ]
    _write_or_print(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_rho(args) -> int:
    cert = certify_rho(
        args.target,
        k=args.k,
        omega_max=args.omega_max,
        omega_step=args.omega_step,
        quad_step=args.quad_step,
        sample_file=args.sample_file,
    )
    if args.out_json:
        Path(args.out_json).write_text(
            json.dumps(cert.to_json_dict(), indent=2) + "\n", encoding="utf-8", newline="\n"
        )
    if args.out_csv:
        weighted = cert.profile.decay_weighted()
        lines = ["omega,abs_fhat,weighted"] + [
            f"{repr(float(w))},{repr(float(a))},{repr(float(v))}"
            for w, a, v in zip(cert.profile.omega_grid, np.abs(cert.profile.f_hat), weighted)
        ]
        Path(args.out_csv).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    print(
        f"target={cert.target} k={cert.k} rho_hat={cert.estimate.rho_hat:.6g} "
        f"edge_ratio={cert.estimate.edge_ratio:.3g} "
        f"omega_at_max={cert.estimate.omega_at_max:.6g}"
    )
    return 0


def cmd_policy_eval(args) -> int:
    problem, model = PROBLEMS[args.problem]()
    rows, consistent = consistency_report(
        problem,
        model,
        args.x0,
        step=args.step,
        horizon=args.horizon,
        stop_radius=args.stop_radius,
    )
    lines = ["x0,v_sim,v_model,pde_residual,truncated"]
    for r in rows:
        lines.append(
            f"{repr(r.x0)},{repr(r.simulated_value)},{repr(r.model_value)},"
            f"{repr(r.residual)},{int(r.truncated)}"
        )
    _write_or_print("\n".join(lines) + "\n", args.out)
    if not consistent:
        print(
            "warning: model value disagrees with its PDE or with trajectory "
            "integration of the stated cost; both columns are reported",
            file=sys.stderr,
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="certirelu",
        description="Random shallow ReLU networks with sup-norm error certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a width sweep and emit reports")
    p.add_argument("--config", required=True, help="sweep config JSON path")
    p.add_argument("--out-dir", default=None, help="override the config output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="evaluate derived constants and bound values")
    p.add_argument("--cert", required=True, help="certificate JSON path (n,k,rho,R,p_min)")
    p.add_argument("--m", required=True, type=_int_list, help="comma-separated widths")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--out", default=None, help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("rho", help="numerically certify the decay coefficient")
    p.add_argument("--target", default="paper_vmod", choices=["paper_vmod", "gaussian", "custom"])
    p.add_argument("--sample-file", default=None, help="sample JSON for target=custom")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--omega-max", type=float, default=60.0)
    p.add_argument("--omega-step", type=float, default=0.01)
    p.add_argument("--quad-step", type=float, default=1.0 / 512.0)
    p.add_argument("--out-json", default=None)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("policy-eval", help="simulate values and report PDE residuals")
    p.add_argument("--problem", default="tanh", choices=sorted(PROBLEMS))
    p.add_argument("--x0", required=True, type=_float_list, help="comma-separated states")
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--horizon", type=float, default=60.0)
    p.add_argument("--stop-radius", type=float, default=1e-7)
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_policy_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
