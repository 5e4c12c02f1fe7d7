"""Command-line front end: simulate, classify, spectrum, verify.

Exit codes: 0 success / all gating checks passed, 1 statistical failure,
2 usage or domain error, 3 step-budget guard.  Every randomized command is
deterministic given --seed; when --seed is omitted one is drawn from OS
entropy and printed to stderr so the run stays reproducible after the fact.
"""

from __future__ import annotations

import argparse
import csv
import json
import secrets
import sys
from typing import Sequence

from .ensemble import DEFAULT_STEP_BUDGET, EnsembleConfig, simulate_replicas
from .montecarlo import (
    VerificationReport,
    verify_center_of_mass,
    verify_critical,
    verify_diffusive_clt,
    verify_slln,
    verify_superdiffusive,
)
from .params import BudgetError, ModelParams, ParameterError, RegimeError
from .theory import CRITICAL, DIFFUSIVE, SUPERDIFFUSIVE, classify_regime
from .urn import mean_replacement_matrix

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

VERIFY_SELECTORS = ("slln", "clt", "critical", "superdiffusive", "cm", "all")

#: Default ensemble sizes per battery: (n, replicas).
BATTERY_DEFAULTS = {
    "clt": (10_000, 10_000),
    "cm": (10_000, 10_000),
    "critical": (10_000, 10_000),
    "superdiffusive": (128_000, 1_000),
    "slln": (1_000_000, 100),
}


def _params_dict(params: ModelParams) -> dict:
    return {
        "d": params.d,
        "p": params.p,
        "p_exact": str(params.p_exact) if params.p_exact is not None else None,
        "q": params.q,
        "q_exact": str(params.q_exact) if params.q_exact is not None else None,
    }


def _record(command: str, seed: int | None, params: ModelParams, results) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": seed,
        "params": _params_dict(params),
        "results": results,
    }


def _resolve_seed(args) -> int:
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ParameterError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
        return args.seed
    seed = secrets.randbits(64)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _parse_params(args) -> ModelParams:
    return ModelParams(d=args.dimension, p=args.memory, q=args.first_step)


def _comma_list(text: str, kind):
    try:
        return tuple(kind(part) for part in text.split(","))
    except ValueError as err:
        raise ParameterError(f"cannot parse comma list {text!r}") from err


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-d", "--dimension", type=int, required=True,
                        help="lattice dimension (>= 1)")
    parser.add_argument("-p", "--memory", type=str, required=True,
                        help="memory parameter in (0,1); decimal or rational like 3/4")
    parser.add_argument("-q", "--first-step", type=str, default="1/2",
                        help="first-step parameter in (0,1); default 1/2")
    parser.add_argument("--seed", type=int, default=None,
                        help="unsigned 64-bit master seed; drawn from entropy if omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="merw",
        description="Simulate the multi-dimensional elephant random walk and "
                    "verify its limit behaviour numerically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate paths and dump snapshot positions")
    _add_common(sim)
    sim.add_argument("-n", "--horizon", type=int, required=True, help="number of steps")
    sim.add_argument("--replicas", type=int, default=1)
    sim.add_argument("--engine", choices=("walk", "urn"), default="walk")
    grid = sim.add_mutually_exclusive_group()
    grid.add_argument("--snapshots", type=str, default=None,
                      help="comma list of absolute times in [1, n]; default: final time")
    grid.add_argument("--fractions", type=str, default=None,
                      help="comma list of fractions s in (0,1]; times floor(s*n)")
    grid.add_argument("--exponents", type=str, default=None,
                      help="comma list of exponents t in (0,1]; times floor(n**t)")
    sim.add_argument("--format", choices=("csv", "jsonl", "json"), default="csv")
    sim.add_argument("--out", type=str, default=None, help="output path; default stdout")
    sim.add_argument("--budget", type=int, default=DEFAULT_STEP_BUDGET,
                     help="maximum total steps replicas*n")

    cls = sub.add_parser("classify", help="regime classification for (d, p)")
    _add_common(cls)
    cls.add_argument("--out", type=str, default=None)

    spec = sub.add_parser("spectrum", help="mean replacement matrix and its spectral data")
    _add_common(spec)
    spec.add_argument("--out", type=str, default=None)

    ver = sub.add_parser("verify", help="run a statistical verification battery")
    ver.add_argument("theorem", choices=VERIFY_SELECTORS)
    _add_common(ver)
    ver.add_argument("-n", "--horizon", type=int, default=None,
                     help="steps per replica; default depends on the battery")
    ver.add_argument("--replicas", type=int, default=None,
                     help="ensemble size; default depends on the battery")
    ver.add_argument("--engine", choices=("walk", "urn"), default="walk")
    vgrid = ver.add_mutually_exclusive_group()
    vgrid.add_argument("--fractions", type=str, default=None)
    vgrid.add_argument("--exponents", type=str, default=None)
    ver.add_argument("--out", type=str, default=None, help="write the JSON report here")
    ver.add_argument("--budget", type=int, default=DEFAULT_STEP_BUDGET)
    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_json(record: dict, out_path: str | None) -> None:
    _emit(json.dumps(record, indent=2) + "\n", out_path)


def cmd_simulate(args) -> int:
    params = _parse_params(args)
    seed = _resolve_seed(args)
    n = args.horizon
    if n < 1:
        raise ParameterError(f"horizon must be >= 1, got {n}")
    if args.replicas < 1:
        raise ParameterError(f"replicas must be >= 1, got {args.replicas}")
    if args.replicas * n > args.budget:
        raise BudgetError(
            f"simulation needs {args.replicas} x {n} = {args.replicas * n} steps, "
            f"exceeding the step budget of {args.budget}"
        )
    if args.snapshots is not None:
        times = sorted(set(_comma_list(args.snapshots, int)))
        if not times or times[0] < 1 or times[-1] > n:
            raise ParameterError(f"snapshot times must lie in [1, {n}], got {times}")
    elif args.fractions is not None:
        cfg_like = _comma_list(args.fractions, float)
        times = sorted({int(s * n + 1e-9) for s in cfg_like})
        if not times or times[0] < 1:
            raise ParameterError(f"fractions {cfg_like} give no valid times at n = {n}")
    elif args.exponents is not None:
        cfg_like = _comma_list(args.exponents, float)
        times = sorted({int(n**t + 1e-9) for t in cfg_like})
        if not times or times[0] < 1:
            raise ParameterError(f"exponents {cfg_like} give no valid times at n = {n}")
    else:
        times = [n]
    positions, _ = simulate_replicas(
        params, n, times, seed, args.replicas, engine=args.engine
    )
    d = params.d
    if args.format == "csv":
        lines = []
        writer_target = _CsvBuffer(lines)
        writer = csv.writer(writer_target, lineterminator="\n")
        writer.writerow(["replica", "n"] + [f"x_{k + 1}" for k in range(d)])
        for r in range(args.replicas):
            for i, t in enumerate(times):
                writer.writerow([r, t] + [int(x) for x in positions[r, i]])
        _emit("".join(lines), args.out)
    elif args.format == "jsonl":
        out_lines = []
        for r in range(args.replicas):
            for i, t in enumerate(times):
                out_lines.append(json.dumps(
                    {"replica": r, "n": t, "x": [int(x) for x in positions[r, i]]}
                ))
        _emit("\n".join(out_lines) + "\n", args.out)
    else:
        rows = [
            [r, t] + [int(x) for x in positions[r, i]]
            for r in range(args.replicas)
            for i, t in enumerate(times)
        ]
        record = _record("simulate", seed, params, {
            "engine": args.engine,
            "horizon": n,
            "replicas": args.replicas,
            "columns": ["replica", "n"] + [f"x_{k + 1}" for k in range(d)],
            "rows": rows,
        })
        _write_json(record, args.out)
    return EXIT_OK


class _CsvBuffer:
    """Minimal write() target collecting csv module output as strings."""

    def __init__(self, sink: list):
        self._sink = sink

    def write(self, text: str):
        self._sink.append(text)


def cmd_classify(args) -> int:
    params = _parse_params(args)
    report = classify_regime(params)
    record = _record("classify", args.seed, params, report.to_dict())
    _write_json(record, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    params = _parse_params(args)
    data = mean_replacement_matrix(params)
    record = _record("spectrum", args.seed, params, {
        "matrix": data.matrix.tolist(),
        "lambda1": data.lambda1,
        "lambda2": data.lambda2,
        "v1": data.v1.tolist(),
        "u1": data.u1.tolist(),
        "lambda2_multiplicity": data.lambda2_multiplicity,
    })
    _write_json(record, args.out)
    return EXIT_OK


def _default_grid(battery: str, args) -> dict:
    """Snapshot grid for one battery, honouring explicit --fractions/--exponents."""
    if args.fractions is not None:
        return {"snapshot_fractions": _comma_list(args.fractions, float)}
    if args.exponents is not None:
        return {"exponent_times": _comma_list(args.exponents, float)}
    if battery == "clt":
        return {"snapshot_fractions": (0.5, 1.0)}
    if battery == "cm":
        return {"snapshot_fractions": (1.0,)}
    if battery == "critical":
        return {"exponent_times": (1.0,)}
    if battery == "superdiffusive":
        return {"snapshot_fractions": tuple(2.0**-k for k in range(7, -1, -1))}
    if battery == "slln":
        return {"snapshot_fractions": (1e-3, 1e-2, 1e-1, 1.0)}
    raise ParameterError(f"unknown battery {battery!r}")


def _run_battery(battery: str, params: ModelParams, args, seed: int) -> VerificationReport:
    default_n, default_r = BATTERY_DEFAULTS[battery]
    cfg = EnsembleConfig(
        params=params,
        replicas=args.replicas if args.replicas is not None else default_r,
        master_seed=seed,
        n=args.horizon if args.horizon is not None else default_n,
        engine=args.engine,
        step_budget=args.budget,
        track_center_of_mass=(battery == "cm"),
        **_default_grid(battery, args),
    )
    runner = {
        "clt": verify_diffusive_clt,
        "cm": verify_center_of_mass,
        "critical": verify_critical,
        "superdiffusive": verify_superdiffusive,
        "slln": verify_slln,
    }[battery]
    return runner(cfg)


def cmd_verify(args) -> int:
    params = _parse_params(args)
    seed = _resolve_seed(args)
    if args.theorem == "all":
        regime = classify_regime(params).regime
        batteries = ["slln"]
        if regime == DIFFUSIVE:
            batteries += ["clt", "cm"]
        elif regime == CRITICAL:
            batteries += ["critical"]
        elif regime == SUPERDIFFUSIVE:
            batteries += ["superdiffusive"]
    else:
        batteries = [args.theorem]
    reports = []
    for battery in batteries:
        report = _run_battery(battery, params, args, seed)
        reports.append(report)
        for line in report.summary_lines():
            print(line)
    payload = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
    record = _record("verify", seed, params, payload)
    if args.out is not None:
        _write_json(record, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_STAT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "classify":
            return cmd_classify(args)
        if args.command == "spectrum":
            return cmd_spectrum(args)
        if args.command == "verify":
            return cmd_verify(args)
        raise ParameterError(f"unknown command {args.command!r}")
    except (ParameterError, RegimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
