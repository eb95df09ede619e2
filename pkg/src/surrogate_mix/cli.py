"""Command-line interface.

Exit codes: 0 success, 2 user or input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import oracles, scaling
from ._parallel import ENV_THREADS, resolve_threads
from .errors import (
    BadLabels,
    DimMismatch,
    EmptyDataset,
    ExperimentError,
    InvalidConfig,
    NotConverged,
    NotUnitNorm,
    PenaltyTooWeak,
    SingularSystem,
    TaskMismatch,
    TooFewPoints,
    ZeroEigenvalue,
)
from .model import (
    ExperimentPlan,
    HiDimSpec,
    LowDimCurvature,
    MixtureConfig,
    NonparamSpec,
    ScalingLawModel,
    SequenceModelSpec,
    dumps,
)
from .sim.harness import run_experiment, write_results

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
SETTINGS = ("mean", "sequence", "nonparam", "lowdim", "hidim")
DEFAULT_ALPHA_GRID = "0:1:101"

_USER_ERRORS = (InvalidConfig, EmptyDataset, DimMismatch, TooFewPoints, TaskMismatch, PenaltyTooWeak,
                NotUnitNorm, BadLabels, ZeroEigenvalue, OSError, ValueError)
_NUMERIC_ERRORS = (NotConverged, SingularSystem, ExperimentError, ArithmeticError)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _err(msg) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _guard(fn):
    """Run ``fn`` and translate exceptions into exit codes."""
    try:
        return fn()
    except _USER_ERRORS as exc:
        _err(exc)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        _err(exc)
        return EXIT_NUMERIC


def _load_json(path):
    with Path(path).open() as fh:
        return json.load(fh)


def parse_alpha_grid(spec: str) -> list[float]:
    """``start:stop:count`` (inclusive, evenly spaced) or a comma-separated list."""
    spec = spec.strip()
    try:
        if ":" in spec:
            start, stop, count = spec.split(":")
            count = int(count)
            if count < 1:
                raise ValueError
            grid = np.linspace(float(start), float(stop), count).tolist()
        else:
            grid = [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise InvalidConfig("alpha_grid", f"cannot parse {spec!r}") from None
    if not grid:
        raise InvalidConfig("alpha_grid", "empty grid")
    if any(not 0.0 <= a <= 1.0 for a in grid):
        raise InvalidConfig("alpha_grid", "values must lie in [0, 1]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidConfig("alpha_grid", "values must be strictly increasing")
    return grid


def _load_model(path) -> ScalingLawModel:
    try:
        return ScalingLawModel.from_dict(_load_json(path))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidConfig("model", f"malformed model file: {exc}") from None


def _write_curve(path, header, rows, comment):
    lines = [header] + [f"{_fmt(a)},{_fmt(r)}" for a, r in rows] + [comment]
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_simulate(plan_file, out_file, seed=None, threads=None) -> int:
    """Run an experiment plan and write the result table."""
    def run():
        try:
            plan = ExperimentPlan.from_dict(_load_json(plan_file))
        except TypeError as exc:
            raise InvalidConfig("plan", str(exc)) from None
        if seed is not None:
            plan = plan.with_seed(seed)
        rows = run_experiment(plan, threads=resolve_threads(threads))
        write_results(rows, out_file)
        return EXIT_OK

    return _guard(run)


def cmd_fit(original_csv, surrogate_csv, out_json) -> int:
    """Fit both loss tables and write the scaling-law model."""
    def run():
        model = scaling.build_model(scaling.read_loss_csv(original_csv),
                                    scaling.read_loss_csv(surrogate_csv))
        Path(out_json).write_text(dumps(model, indent=2) + "\n")
        return EXIT_OK

    return _guard(run)


def cmd_predict(model_json, n, m, alpha_grid_spec, out_csv) -> int:
    """Predicted risk over an alpha grid plus the optimum as a comment line."""
    def run():
        model = _load_model(model_json)
        grid = parse_alpha_grid(alpha_grid_spec)
        rows = [(a, scaling.predict_mixture_risk(model, n, m, a)) for a in grid]
        a_star, r_star = scaling.optimal_alpha(model, n, m)
        _write_curve(out_csv, "alpha,predicted_risk", rows,
                     f"# alpha_star={_fmt(a_star)}, risk_star={_fmt(r_star)}")
        return EXIT_OK

    return _guard(run)


def cmd_plan(model_json, n, target_risk, out=None) -> int:
    """Print the smallest surrogate count reaching ``target_risk``."""
    out = out or sys.stdout

    def run():
        model = _load_model(model_json)
        m = scaling.required_surrogate(model, n, target_risk)
        if m is None:
            print("infeasible", file=out)
        else:
            a, r = scaling.optimal_alpha(model, n, m)
            print(f"m={m} alpha={_fmt(a)} predicted_risk={_fmt(r)}", file=out)
        return EXIT_OK

    return _guard(run)


def _require(params, *keys):
    for k in keys:
        if k not in params:
            raise InvalidConfig(k, "missing")


def _oracle_curve(setting, params, grid, threads):
    if setting == "mean":
        _require(params, "d", "n", "m", "gap")
        d, n, m, gap = int(params["d"]), int(params["n"]), int(params["m"]), float(params["gap"])
        return [(a, oracles.mean_risk(d, n, m, a, gap)) for a in grid]
    if setting == "sequence":
        p = dict(params)
        lam = p.pop("lambda", 0.0)
        spec = SequenceModelSpec.from_dict(p)
        out = []
        for a in grid:
            lam_a = oracles.sequence_lambda_star(spec, a) if lam == "star" else float(lam)
            out.append((a, oracles.sequence_risk(spec, MixtureConfig(a, lam_a))[0]))
        return out
    if setting == "nonparam":
        spec = NonparamSpec.from_dict(params)
        return [(a, oracles.nonparam_risk(spec, a)) for a in grid]
    if setting == "lowdim":
        _require(params, "n", "m")
        curv = LowDimCurvature.from_dict(params)
        n, m = int(params["n"]), int(params["m"])
        return [(a, oracles.lowdim_risk(curv, n, m, a)) for a in grid]
    spec = HiDimSpec.from_dict(params)
    curve = oracles.hidim_risk_curve(spec, grid, threads=threads)
    return list(zip(curve.alphas.tolist(), curve.risks.tolist()))


def cmd_oracle(setting, params_json, out_csv, alpha_grid_spec=DEFAULT_ALPHA_GRID, threads=None) -> int:
    """Analytic risk curve for one setting, with the grid argmin as a comment."""
    def run():
        if setting not in SETTINGS:
            raise InvalidConfig("setting", f"expected one of {', '.join(SETTINGS)}, got {setting!r}")
        params = _load_json(params_json)
        if not isinstance(params, dict):
            raise InvalidConfig("params", "must be a JSON object")
        grid = parse_alpha_grid(alpha_grid_spec)
        try:
            rows = _oracle_curve(setting, params, grid, threads)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidConfig):
                raise
            raise InvalidConfig("params", str(exc)) from None
        i = int(np.argmin([r for _, r in rows]))
        _write_curve(out_csv, "alpha,risk", rows,
                     f"# argmin_alpha={_fmt(rows[i][0])}, min_risk={_fmt(rows[i][1])}")
        return EXIT_OK

    return _guard(run)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="surrogate-mix",
        description="Weighted ERM with surrogate data: simulation, risk oracles and scaling laws.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a Monte Carlo experiment plan")
    s.add_argument("plan", help="ExperimentPlan JSON file")
    s.add_argument("out", help="output CSV")
    s.add_argument("--seed", type=int, default=None, help="override the plan seed")
    s.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${ENV_THREADS} or the core count)")

    f = sub.add_parser("fit", help="fit power laws to two n,loss tables")
    f.add_argument("original_csv")
    f.add_argument("surrogate_csv")
    f.add_argument("out_json")

    pr = sub.add_parser("predict", help="predicted mixture risk over an alpha grid")
    pr.add_argument("model_json")
    pr.add_argument("out_csv")
    pr.add_argument("--n", type=int, required=True, help="original sample count")
    pr.add_argument("--m", type=int, required=True, help="surrogate sample count")
    pr.add_argument("--alpha-grid", default=DEFAULT_ALPHA_GRID,
                    help="start:stop:count or comma list (default %(default)s)")

    pl = sub.add_parser("plan", help="surrogate samples needed for a target risk")
    pl.add_argument("model_json")
    pl.add_argument("--n", type=int, required=True, help="original sample count")
    pl.add_argument("--target-risk", type=float, required=True)

    o = sub.add_parser("oracle", help="analytic risk curve for one setting")
    o.add_argument("setting", help=f"one of: {', '.join(SETTINGS)}")
    o.add_argument("params_json")
    o.add_argument("out_csv")
    o.add_argument("--alpha-grid", default=DEFAULT_ALPHA_GRID,
                   help="start:stop:count or comma list (default %(default)s)")
    o.add_argument("--threads", type=int, default=None, help="worker threads for hidim curves")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    if args.command == "simulate":
        return cmd_simulate(args.plan, args.out, args.seed, args.threads)
    if args.command == "fit":
        return cmd_fit(args.original_csv, args.surrogate_csv, args.out_json)
    if args.command == "predict":
        return cmd_predict(args.model_json, args.n, args.m, args.alpha_grid, args.out_csv)
    if args.command == "plan":
        return cmd_plan(args.model_json, args.n, args.target_risk)
    return cmd_oracle(args.setting, args.params_json, args.out_csv, args.alpha_grid, args.threads)


if __name__ == "__main__":
    sys.exit(main())
