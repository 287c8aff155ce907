"""``corrlock`` command line.

Exit codes: 0 success, 1 invariant violation, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import io
from .bounds import merit_figures, theorem1_requirement
from .infomeasure import (
    SANDWICH_TOL,
    OptimizerConfig,
    icc_locking,
    icc_locking_upper_bound,
    is_certified,
    optimize_accessible_info,
    unlocked_icc_analytic,
)
from .mub import mub_family
from .states import LockingInstance, locking_state, unlocked_state
from .sweep import rows_to_csv, rows_to_json, run_sweep
from .verify import SUITES, run_suite


class UsageError(Exception):
    pass


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=default(0), help="RNG seed (u64)")
    p.add_argument("--threads", type=int, default=default(1), help="worker threads")
    p.add_argument("--format", choices=("csv", "json"), default=default("json"), help="tabular output format")
    return p


def _optimizer_flags(p: argparse.ArgumentParser, restarts: int = 32) -> None:
    p.add_argument("--restarts", type=int, default=restarts)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--num-outcomes", type=int, default=None)
    p.add_argument("--rel-tol", type=float, default=1e-9)


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(
        num_outcomes=args.num_outcomes,
        restarts=args.restarts,
        max_iters=args.max_iters,
        rel_tol=args.rel_tol,
        seed=args.seed,
        threads=args.threads,
    )


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _instance(d: int, L: int) -> LockingInstance:
    try:
        return LockingInstance(d, L)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_state(args) -> int:
    inst = _instance(args.d, args.L)
    rho = unlocked_state(inst) if args.unlocked else locking_state(inst)
    _emit(io.dumps(io.state_to_json(rho)) + "\n", args.out)
    return 0


def cmd_mub(args) -> int:
    try:
        fam = mub_family(args.d, args.L)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(io.dumps(io.mub_to_json(fam)) + "\n", args.out)
    return 0


def cmd_iacc(args) -> int:
    try:
        with open(args.ensemble) as fh:
            ens = io.ensemble_from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read ensemble: {exc}") from exc
    res = optimize_accessible_info(ens, _config(args))
    _emit(io.dumps(res.to_dict()) + "\n", args.out)
    return 0 if res.value <= res.upper_bound + SANDWICH_TOL else 1


def lock_demo_report(d: int, L: int, cfg: OptimizerConfig) -> dict:
    inst = _instance(d, L)
    res = icc_locking(inst, cfg)
    upper, kind = icc_locking_upper_bound(inst, cfg, hint=res)
    after = unlocked_icc_analytic(inst)
    l = inst.key_bits
    required = theorem1_requirement(after, l)
    merit = merit_figures(res.value, after, l)
    certified = is_certified(kind)
    ok = res.value <= res.upper_bound + SANDWICH_TOL
    if certified:
        ok = ok and res.value <= upper + SANDWICH_TOL and upper >= required - 1e-9
    return {
        "d": d,
        "L": L,
        "key_bits": l,
        "ic_lower": res.value,
        "ic_upper": upper,
        "ic_upper_kind": kind,
        "certified": certified,
        "optimizer_certificate": res.upper_bound,
        "optimizer_certificate_kind": res.certificate_kind,
        "converged": res.converged,
        "ic_after": after,
        "theorem1_requirement": required,
        "theorem1_saturated": certified and abs(upper - required) <= 1e-9,
        "r1": merit.r1,
        "r2": merit.r2,
        "c": res.value / math.log2(d) - 1.0 / L,
        "ok": ok,
    }


def cmd_lock_demo(args) -> int:
    rep = lock_demo_report(args.d, args.L, _config(args))
    if args.format == "csv":
        keys = sorted(rep)
        cells = [rep[k] if isinstance(rep[k], str) else io.fmt(rep[k]) for k in keys]
        text = ",".join(keys) + "\n" + ",".join(cells) + "\n"
    else:
        text = io.dumps(rep) + "\n"
    _emit(text, args.out)
    return 0 if rep["ok"] else 1


def cmd_sweep(args) -> int:
    try:
        rows = run_sweep(args.dims, _config(args), args.L_min, args.L_max, threads=args.threads, timing=not args.no_timing)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows)
    _emit(text, args.out)
    ok = all(r.ic_lower <= r.ic_upper + SANDWICH_TOL for r in rows if r.certified)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    if args.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}")
    failures = 0
    out = []
    for rep, ok in run_suite(args.suite, args.seed, args.draws):
        row = rep.to_dict()
        row["ok"] = bool(ok)
        failures += not ok
        out.append(io.dumps(row))
    _emit("\n".join(out) + ("\n" if out else ""), args.out)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corrlock", parents=[_global_flags(False)],
                                     description="Locked classical correlation: states, bounds and optimizers.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_flags(True)]

    p = sub.add_parser("state", parents=common, help="write a locking (or unlocked) state as JSON")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--unlocked", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("mub", parents=common, help="write a family of mutually unbiased bases as JSON")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mub)

    p = sub.add_parser("iacc", parents=common, help="accessible information of an ensemble")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--out")
    _optimizer_flags(p)
    p.set_defaults(func=cmd_iacc)

    p = sub.add_parser("lock-demo", parents=common, help="bounds and merit figures for one locking state")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--out")
    _optimizer_flags(p)
    p.set_defaults(func=cmd_lock_demo)

    p = sub.add_parser("sweep", parents=common, help="optimize a grid of (d, L) locking states")
    p.add_argument("--dims", type=int, nargs="+", required=True)
    p.add_argument("--L-min", dest="L_min", type=int, default=2)
    p.add_argument("--L-max", dest="L_max", type=int, default=None, help="defaults to d + 1")
    p.add_argument("--out")
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-stable output")
    _optimizer_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=common, help="run inequality verification suites")
    p.add_argument("--suite", required=True)
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"corrlock: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"corrlock: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
