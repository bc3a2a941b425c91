"""Command-line front end.

Verbs: analyze, eval, asympt, simulate, invert, check.  All verbs read
the JSON model config; numeric JSON output is printed with 17
significant digits so that re-ingesting an analyze report reproduces
identical numbers bit for bit.

Exit codes: 0 success, 1 check-suite failure, 2 invalid config or
usage, 3 computation refused (pole, cut, wrong regime, ...).
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import asymptotics, checks, kernel, oracle, transform, uniformization
from .errors import ComputationRefused, RBMQError, ValidationError
from .model import derived_scalars, load_config, params_to_dict

__all__ = ["main"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_REFUSED = 3


def _fmt(value) -> str:
    """JSON with floats at 17 significant digits (lossless round-trip)."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, complex):
        return _fmt({"re": value.real, "im": value.imag})
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = ", ".join(f"{_fmt(str(k))}: {_fmt(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise TypeError(f"cannot serialise {type(value)!r}")


def _analyze_payload(p) -> dict:
    sc = derived_scalars(p)
    payload = {
        **params_to_dict(p),
        "beta": sc.beta,
        "pi_over_beta": sc.pi_over_beta,
        "theta1_minus": sc.theta1_minus,
        "theta1_plus": sc.theta1_plus,
        "theta2_minus": sc.theta2_minus,
        "theta2_plus": sc.theta2_plus,
    }
    hyp = kernel.hyperbola(p, sc)
    payload["hyperbola"] = {
        "cx2": hyp.cx2,
        "cy2": hyp.cy2,
        "cx": hyp.cx,
        "rhs": hyp.rhs,
        "apex": hyp.apex,
        "degenerate": hyp.degenerate,
    }
    v = kernel.theta1_at_branch_point(p, sc)
    payload["theta1_at_theta2_plus"] = v
    if not p.identity_reflection:
        payload["note"] = "non-identity reflection: explicit transform unavailable"
        return payload
    b = transform.make_bundle(p)
    report = uniformization.group_order(b)
    payload["group"] = {
        "finite": report.finite,
        "order": report.order,
        "p": report.p,
        "q": report.q,
        "note": report.note,
    }
    payload["nature"] = uniformization.classify_solution_nature(b)
    regime = asymptotics.classify_regime(b)
    payload["regime"] = regime.regime
    payload["decay_rate"] = regime.decay_rate
    payload["w_prime_at_0"] = b.w1_prime0
    payload["boundary_masses"] = [b.phi1_at_0, b.phi2_at_0]
    return payload


def _cmd_analyze(p, args, out) -> int:
    out.write(_fmt(_analyze_payload(p)) + "\n")
    return EXIT_OK


_EVAL_FNS = ("phi", "phi1", "phi2", "w", "psi1", "psi2")


def _cmd_eval(p, args, out) -> int:
    b = transform.make_bundle(p)
    if args.fn == "phi":
        if args.re1 is None or args.re2 is None:
            raise ValidationError("--fn phi needs --re1/--im1 and --re2/--im2")
        t1 = complex(args.re1, args.im1)
        t2 = complex(args.re2, args.im2)
        val = transform.phi_eval(b, t1, t2)
        point = {"theta1": t1, "theta2": t2}
    else:
        if args.re is None:
            raise ValidationError(f"--fn {args.fn} needs --re/--im")
        z = complex(args.re, args.im)
        fn = {
            "phi1": transform.phi1_eval,
            "phi2": transform.phi2_eval,
            "w": transform.w_eval,
            "psi1": transform.psi1_eval,
            "psi2": transform.psi2_eval,
        }[args.fn]
        val = fn(b, z)
        point = {"arg": z}
    out.write(_fmt({"fn": args.fn, **point, "value": complex(val)}) + "\n")
    return EXIT_OK


def _cmd_asympt(p, args, out) -> int:
    b = transform.make_bundle(p)
    report = asymptotics.classify_regime(b)
    payload = {
        "regime": report.regime,
        "decay_rate": report.decay_rate,
        "power": report.power,
        "constant": report.constant,
        "pole_location": report.pole_location,
        "theta1_at_theta2_plus": report.theta1_at_theta2_plus,
    }
    if report.regime != asymptotics.REGIME_POLE:
        consts = asymptotics.constants_C1_C2(b)
        payload["C1"] = consts.c1
        payload["C2"] = consts.c2
        payload["applicable"] = consts.applicable
    out.write(_fmt(payload) + "\n")
    return EXIT_OK


def _cmd_simulate(p, args, out) -> int:
    cfg = oracle.SimConfig(
        step=args.step,
        horizon=args.horizon,
        burn_in=args.burn_in,
        seed=args.seed,
        batches=args.batches,
    )
    result = oracle.simulate(p, cfg)
    oracle.sim_result_to_csv(result, out)
    return EXIT_OK


def _cmd_invert(p, args, out) -> int:
    b = transform.make_bundle(p)
    grid = np.linspace(args.x_min, args.x_max, args.points)
    table = oracle.invert_transform(b, args.side, grid)
    oracle.density_table_to_csv(table, out)
    return EXIT_OK


def _cmd_check(p, args, out) -> int:
    results = checks.run_checks(p, seed=args.seed)
    for res in results:
        out.write(res.line() + "\n")
    failed = [r for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbmq",
        description="Stationary analysis of reflected Brownian motion in the quadrant",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="JSON model config path")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("analyze", help="derived scalars, curve, group, regime")
    common(sp)

    sp = sub.add_parser("eval", help="evaluate a transform at a point")
    common(sp)
    sp.add_argument("--fn", required=True, choices=_EVAL_FNS)
    sp.add_argument("--re", type=float, default=None)
    sp.add_argument("--im", type=float, default=0.0)
    sp.add_argument("--re1", type=float, default=None)
    sp.add_argument("--im1", type=float, default=0.0)
    sp.add_argument("--re2", type=float, default=None)
    sp.add_argument("--im2", type=float, default=0.0)

    sp = sub.add_parser("asympt", help="tail asymptotics report")
    common(sp)

    sp = sub.add_parser("simulate", help="simulate the reflected diffusion (CSV)")
    common(sp)
    sp.add_argument("--step", type=float, default=oracle.SimConfig.step)
    sp.add_argument("--horizon", type=float, default=oracle.SimConfig.horizon)
    sp.add_argument("--burn-in", type=float, default=oracle.SimConfig.burn_in)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--batches", type=int, default=oracle.SimConfig.batches)

    sp = sub.add_parser("invert", help="invert a boundary transform (CSV)")
    common(sp)
    sp.add_argument("--side", choices=("nu1", "nu2"), default="nu1")
    sp.add_argument("--x-min", type=float, default=0.1)
    sp.add_argument("--x-max", type=float, default=5.0)
    sp.add_argument("--points", type=int, default=50)

    sp = sub.add_parser("check", help="run the cross-module invariant suite")
    common(sp)
    sp.add_argument("--seed", type=int, default=0)

    return parser


_COMMANDS = {
    "analyze": _cmd_analyze,
    "eval": _cmd_eval,
    "asympt": _cmd_asympt,
    "simulate": _cmd_simulate,
    "invert": _cmd_invert,
    "check": _cmd_check,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        params = load_config(args.config)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        return _COMMANDS[args.verb](params, args, sink)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except ComputationRefused as exc:
        print(f"refused: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except RBMQError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    finally:
        if sink is not sys.stdout:
            sink.close()


if __name__ == "__main__":
    sys.exit(main())
