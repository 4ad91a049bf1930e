"""Command-line front end.

Subcommands: price, smile, iv, bench, mc-check, sample-params.
Exit codes: 0 ok, 2 parse/validation error, 3 numerical failure,
4 failed Monte Carlo agreement check. SVJ_THREADS overrides the worker
count used for smile/iv row pricing (timing runs stay single-thread).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import bench
from .approx_pricer import Contract, ModelParams, price_approx
from .errors import (BracketError, DomainError, NumericalError, ParamError,
                     QuadratureError, SeriesTruncationError)
from .heston_moments import HestonParams
from .implied_vol import iv_surface_approx
from .jump_laws import JumpLaw, Kou, LogNormal, LogUniform
from .mc_oracle import McConfig
from .reference_pricer import implied_vol_invert, price_reference

_NUMERICAL_ERRORS = (NumericalError, QuadratureError, SeriesTruncationError,
                     BracketError, OverflowError, ZeroDivisionError)

_JUMP_BUILDERS = {
    "lognormal": (("mu_j", "sigma_j"), LogNormal),
    "kou": (("p", "eta1", "eta2"), Kou),
    "loguniform": (("a", "b"), LogUniform),
}


def load_params(path: str, nu: float = None, rho: float = None):
    """Parse a params JSON file into (ModelParams, s0).

    nu/rho arguments fill or override the file values; the shipped
    footnote file leaves them null because the experiments vary them.
    """
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParamError(f"cannot read params file: {exc}")
    except json.JSONDecodeError as exc:
        raise ParamError(f"params file is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ParamError("params file must hold a JSON object")

    def need(key, override=None):
        val = override if override is not None else data.get(key)
        if val is None:
            raise ParamError(f"missing parameter {key!r} (set it in the file "
                             "or pass the matching flag)")
        return float(val)

    heston = HestonParams(kappa=need("kappa"), theta=need("theta"),
                          nu=need("nu", nu), rho=need("rho", rho),
                          sigma0_sq=need("sigma0_sq"))
    jd = data.get("jump")
    if not isinstance(jd, dict):
        raise ParamError("params file needs a 'jump' object")
    jtype = jd.get("type")
    if jtype not in _JUMP_BUILDERS:
        raise ParamError(f"unknown jump type {jtype!r}; expected one of "
                         f"{sorted(_JUMP_BUILDERS)}")
    fields, builder = _JUMP_BUILDERS[jtype]
    try:
        variant = builder(**{f: float(jd[f]) for f in fields})
    except KeyError as exc:
        raise ParamError(f"jump type {jtype!r} needs field {exc}")
    lam = jd.get("lambda")
    if lam is None:
        raise ParamError("jump object needs 'lambda'")
    params = ModelParams(heston=heston,
                         jumps=JumpLaw(intensity=float(lam), variant=variant),
                         r=need("r"))
    s0 = float(data.get("s0", 100.0))
    if s0 <= 0.0:
        raise ParamError("s0 must be > 0")
    return params, s0


def parse_strikes(spec: str) -> list:
    """Comma list '80,90,100' or inclusive range 'start:stop:step'."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ParamError("strike range must be start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ParamError(f"non-numeric strike range {spec!r}")
        if step <= 0 or stop < start:
            raise ParamError("strike range needs step > 0 and stop >= start")
        out = []
        k = 0
        while True:
            val = start + k * step
            if val > stop + 1e-9 * max(1.0, abs(stop)):
                break
            out.append(val)
            k += 1
        return out
    try:
        out = [float(p) for p in spec.split(",") if p.strip()]
    except ValueError:
        raise ParamError(f"non-numeric strike in {spec!r}")
    if not out:
        raise ParamError("empty strike list")
    return out


def _workers() -> int:
    raw = os.environ.get("SVJ_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ParamError(f"SVJ_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise ParamError("SVJ_THREADS must be >= 1")
    return n


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def cmd_price(args) -> int:
    params, s0 = load_params(args.params, args.nu, args.rho)
    contract = Contract(s0=s0, strike=args.strike, maturity=args.maturity)
    res = price_approx(params, contract, tol=args.tol)
    _emit_json({
        "price": res.price,
        "base_term": res.base_term,
        "r0_term": res.r0_term,
        "u0_term": res.u0_term,
        "truncation": {
            "n_max": res.truncation.n_max,
            "tail_mass": res.truncation.tail_mass,
            "tolerance": res.truncation.tolerance,
        },
    })
    return 0


def cmd_smile(args) -> int:
    params, s0 = load_params(args.params, args.nu, args.rho)
    report = bench.run_smile(params, s0, parse_strikes(args.strikes),
                             args.maturity, with_iv=args.iv,
                             workers=_workers())
    sys.stdout.write(report.to_csv())
    if report.n_failed:
        print(f"{report.n_failed} row(s) failed", file=sys.stderr)
        return 3
    return 0


def cmd_iv(args) -> int:
    params, s0 = load_params(args.params, args.nu, args.rho)
    report = bench.run_smile(params, s0, parse_strikes(args.strikes),
                             args.maturity, with_iv=True, workers=_workers())
    lines = ["strike,maturity,approx_iv,ref_iv,iv_abs_error"]
    failed = 0
    for row in report.rows:
        if not row.error and args.analytic:
            try:
                row.approx_iv = iv_surface_approx(params, row.strike,
                                                  args.maturity, s0).iv_approx
            except _NUMERICAL_ERRORS + (ParamError, DomainError) as exc:
                row.error = f"{type(exc).__name__}: {exc}"
        if row.error:
            failed += 1
            lines.append(f"{row.strike:.17g},{row.maturity:.17g},ERROR,ERROR,ERROR")
        else:
            lines.append(",".join(f"{v:.17g}" for v in
                                  (row.strike, row.maturity, row.approx_iv,
                                   row.ref_iv, row.iv_abs_error)))
    sys.stdout.write("\n".join(lines) + "\n")
    if failed:
        print(f"{failed} row(s) failed", file=sys.stderr)
        return 3
    return 0


def cmd_bench(args) -> int:
    methods = tuple(args.methods.split(","))
    report = bench.run_bench(bench.BenchTask(task_id=args.task, seed=args.seed),
                             methods=methods, max_ref_sets=args.max_ref_sets)
    _emit_json(report)
    return 0


def cmd_mc_check(args) -> int:
    params, s0 = load_params(args.params, args.nu, args.rho)
    contract = Contract(s0=s0, strike=args.strike, maturity=args.maturity)
    cfg = McConfig(n_paths=args.paths, seed=args.seed, n_steps=args.steps,
                   antithetic=args.antithetic, variance_scheme=args.scheme)
    report = bench.mc_check(params, contract, cfg,
                            corrupt_drift=args.corrupt_drift)
    _emit_json(report)
    if not report["passed"]:
        print(f"mc-check FAIL: |z| = {abs(report['z_score']):.2f} > 3",
              file=sys.stderr)
        return 4
    return 0


def cmd_sample_params(args) -> int:
    sets = bench.sample_param_sets(args.n, args.seed)
    _emit_json([bench.params_to_dict(p) for p in sets])
    return 0


def _add_params_args(sub) -> None:
    sub.add_argument("--params", required=True, help="params JSON file")
    sub.add_argument("--nu", type=float, default=None,
                     help="vol-of-vol override (fills a null in the file)")
    sub.add_argument("--rho", type=float, default=None,
                     help="correlation override (fills a null in the file)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svj",
        description="Decomposition-based SVJ call pricing and benchmarks")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("price", help="price one call, JSON output")
    _add_params_args(sp)
    sp.add_argument("--strike", type=float, required=True)
    sp.add_argument("--maturity", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-12,
                    help="Poisson series tail tolerance")
    sp.set_defaults(func=cmd_price)

    sp = subs.add_parser("smile", help="price smile CSV with error columns")
    _add_params_args(sp)
    sp.add_argument("--strikes", required=True,
                    help="comma list or start:stop:step range")
    sp.add_argument("--maturity", type=float, required=True)
    sp.add_argument("--iv", action="store_true",
                    help="append implied-vol columns")
    sp.set_defaults(func=cmd_smile)

    sp = subs.add_parser("iv", help="implied-vol smile CSV")
    _add_params_args(sp)
    sp.add_argument("--strikes", required=True,
                    help="comma list or start:stop:step range")
    sp.add_argument("--maturity", type=float, required=True)
    sp.add_argument("--analytic", action="store_true",
                    help="use the analytic surface instead of inverting the "
                         "approximated price")
    sp.set_defaults(func=cmd_iv)

    sp = subs.add_parser("bench", help="timing tasks, JSON output")
    sp.add_argument("--task", type=int, required=True, choices=(1, 2, 3))
    sp.add_argument("--seed", type=int, default=20240)
    sp.add_argument("--methods",
                    default="approximation,one_integral,two_integral")
    sp.add_argument("--max-ref-sets", type=int, default=100,
                    help="cap on parameter sets timed for reference methods "
                         "(scaled up and flagged extrapolated)")
    sp.set_defaults(func=cmd_bench)

    sp = subs.add_parser("mc-check", help="Monte Carlo agreement test")
    _add_params_args(sp)
    sp.add_argument("--strike", type=float, required=True)
    sp.add_argument("--maturity", type=float, required=True)
    sp.add_argument("--paths", type=int, default=200_000)
    sp.add_argument("--seed", type=int, default=20240)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--antithetic", action="store_true")
    sp.add_argument("--scheme", default="full-truncation",
                    choices=("full-truncation", "reflection"))
    sp.add_argument("--corrupt-drift", action="store_true",
                    help="negative control: shift the MC drift so the check "
                         "must fail")
    sp.set_defaults(func=cmd_mc_check)

    sp = subs.add_parser("sample-params", help="draw benchmark parameter sets")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=20240)
    sp.set_defaults(func=cmd_sample_params)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParamError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
