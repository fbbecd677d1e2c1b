"""Command-line front end: solves, parameter sweeps, and self-checks.

Subcommands: ``solve`` (multi-start or fixed-x0 run emitting per-start
trajectory CSVs plus a consolidated JSON report), ``sweep`` (one solve per
parameter value, emitting sweep.csv), ``check`` (gradient consistency, the
complementarity sign grid, and an energy-descent smoke run), and ``list``.

Option precedence: command-line flags override config-file values override
built-in defaults. Given identical flags and seed, every emitted file is
byte-identical across runs.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .driver import Schedule, sample_start, select_best, solve
from .flow import FlowConfig, lyapunov_report, trajectory_to_csv
from .model import gradient_consistency
from .regularize import ncp_check
from .suite import get_problem, list_problems

__all__ = ["main", "build_parser"]

_DEFAULTS = {
    "problem": None,
    "x0": None,
    "beta": None,
    "lambda": None,
    "betas": None,
    "lambdas": None,
    "warm_start": True,
    "sweep_beta": None,
    "sweep_lambda": None,
    "starts": 1,
    "seed": 0,
    "t_end": 100.0,
    "rtol": 1e-8,
    "atol": 1e-10,
    "grad_tol": None,
    "out_dir": ".",
    "feasible_tol": 1e-6,
    "record_every": 1000,
    "h_init": 1e-3,
    "h_min": 1e-12,
    "stall_window": 50,
    "stall_eps": 1e-14,
    "max_steps": 20_000_000,
}


class ConfigError(Exception):
    """Bad flags or config file; maps to exit code 2 before any compute."""


def _parse_vector(value) -> np.ndarray:
    if isinstance(value, str):
        parts = [p for p in value.replace(";", ",").split(",") if p.strip()]
        value = parts
    try:
        vec = np.asarray([float(v) for v in value], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot parse vector: {value!r}") from exc
    if vec.size == 0:
        raise ConfigError("empty vector")
    return vec


def _parse_values(value) -> tuple:
    if isinstance(value, str):
        value = [p for p in value.split(",") if p.strip()]
    try:
        vals = tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot parse value list: {value!r}") from exc
    if not vals:
        raise ConfigError("empty sweep list")
    return vals


def _load_config_file(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(raw) - set(_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return raw


def _merge(args: argparse.Namespace) -> dict:
    merged = dict(_DEFAULTS)
    cfg_path = getattr(args, "config", None)
    if cfg_path is not None:
        merged.update(_load_config_file(cfg_path))
    for key in _DEFAULTS:
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            merged[key] = flag_val
    return merged


def _get_problem(merged):
    name = merged["problem"]
    if not name:
        raise ConfigError("--problem is required")
    try:
        return get_problem(name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc


def _schedule(merged) -> Schedule:
    betas = merged["betas"]
    lambdas = merged["lambdas"]
    if betas is not None:
        betas = tuple(float(b) for b in betas)
    elif merged["beta"] is not None:
        betas = (float(merged["beta"]),)
    if lambdas is not None:
        lambdas = tuple(float(v) for v in lambdas)
    elif merged["lambda"] is not None:
        lambdas = (float(merged["lambda"]),)
    try:
        if betas is None and lambdas is None:
            return Schedule(warm_start=merged["warm_start"])
        return Schedule(
            betas=betas if betas is not None else (1e-4,),
            lambdas=lambdas if lambdas is not None else (1e6,),
            warm_start=merged["warm_start"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _flow_config(merged) -> FlowConfig:
    try:
        return FlowConfig(
            t_end=float(merged["t_end"]),
            rtol=float(merged["rtol"]),
            atol=float(merged["atol"]),
            grad_tol=None if merged["grad_tol"] is None else float(merged["grad_tol"]),
            stall_window=int(merged["stall_window"]),
            stall_eps=float(merged["stall_eps"]),
            max_steps=int(merged["max_steps"]),
            record_every=int(merged["record_every"]),
            h_init=float(merged["h_init"]),
            h_min=float(merged["h_min"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _x0_for(problem, merged):
    if merged["x0"] is None:
        return None
    vec = _parse_vector(merged["x0"])
    if vec.shape != (problem.dim,):
        raise ConfigError(
            f"x0 has {vec.size} components, problem {problem.name} has dim {problem.dim}"
        )
    return vec


def _fmt6(x: float) -> str:
    return f"{x:.6g}"


def cmd_solve(merged) -> int:
    problem = _get_problem(merged)
    schedule = _schedule(merged)
    cfg = _flow_config(merged)
    x0 = _x0_for(problem, merged)
    seed = int(merged["seed"])
    feasible_tol = float(merged["feasible_tol"])

    out_dir = Path(merged["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)

    if x0 is not None:
        starts = [(0, x0)]
    else:
        n = int(merged["starts"])
        if n < 1:
            raise ConfigError("--starts must be >= 1")
        starts = [(i, sample_start(problem, seed, i)) for i in range(n)]

    reports = []
    for i, w0 in starts:
        rep = solve(problem, schedule, w0, cfg, seed=seed, start_index=i,
                    keep_trajectory=True)
        trajectory_to_csv(rep.trajectory, out_dir / f"traj_{i}.csv")
        rep.trajectory = None
        reports.append(rep)

    best = select_best(reports, feasible_tol)
    payload = {
        "problem": problem.name,
        "schedule": {
            "betas": list(schedule.betas),
            "lambdas": list(schedule.lambdas),
            "warm_start": schedule.warm_start,
        },
        "n_starts": len(reports),
        "root_seed": seed if x0 is None else None,
        "x0": None if x0 is None else x0.tolist(),
        "feasible_tol": feasible_tol,
        "best_index": best,
        "reports": [r.to_dict() for r in reports],
    }
    (out_dir / "report.json").write_text(json.dumps(payload, indent=2) + "\n")

    print(f"{'start':>5}  {'objective':>14}  {'violation':>12}  {'class':>5}  reason")
    for i, r in enumerate(reports):
        print(
            f"{i:>5}  {_fmt6(r.final_objective):>14}  "
            f"{_fmt6(r.mpcc_feas.max_violation):>12}  {r.stationarity:>5}  "
            f"{r.terminal_reason}"
        )
    if best is None:
        print(f"best: none feasible within {_fmt6(feasible_tol)}")
    else:
        print(f"best: start {best}, objective {_fmt6(reports[best].final_objective)}")

    ok = any(
        r.terminal_reason in ("equilibrium", "stall")
        and r.mpcc_feas.max_violation <= feasible_tol
        for r in reports
    )
    return 0 if ok else 1


def cmd_sweep(merged) -> int:
    problem = _get_problem(merged)
    cfg = _flow_config(merged)
    sweep_beta = merged["sweep_beta"]
    sweep_lambda = merged["sweep_lambda"]
    if (sweep_beta is None) == (sweep_lambda is None):
        raise ConfigError("pass exactly one of --sweep-beta / --sweep-lambda")
    x0 = _x0_for(problem, merged)
    if x0 is None:
        raise ConfigError("sweep needs a fixed --x0")
    values = _parse_values(sweep_beta if sweep_beta is not None else sweep_lambda)

    fixed_lam = float(merged["lambda"]) if merged["lambda"] is not None else 1e6
    fixed_beta = float(merged["beta"]) if merged["beta"] is not None else 1e-4
    warm = merged["warm_start"]

    rows = []
    for v in values:
        beta, lam = (v, fixed_lam) if sweep_beta is not None else (fixed_beta, v)
        try:
            schedule = Schedule.single_stage(beta, lam, warm_start=warm)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        rep = solve(problem, schedule, x0, cfg)
        rows.append((beta, lam, rep))

    ref_val = problem.reference[1] if problem.reference is not None else None

    out_dir = Path(merged["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    wcols = [f"w{i + 1}" for i in range(problem.dim)]
    lines = ["beta,lambda," + ",".join(wcols) + ",f,ref_gap"]
    for beta, lam, rep in rows:
        cells = [f"{beta:.17g}", f"{lam:.17g}"]
        cells += [f"{x:.17g}" for x in rep.final_point]
        cells.append(f"{rep.final_objective:.17g}")
        cells.append("" if ref_val is None else f"{abs(rep.final_objective - ref_val):.17g}")
        lines.append(",".join(cells))
    (out_dir / "sweep.csv").write_text("\n".join(lines) + "\n")

    header = f"{'beta':>10}  {'lambda':>10}  {'f':>14}"
    if ref_val is not None:
        header += f"  {'|f-ref|':>12}"
    header += "  w*"
    print(header)
    for beta, lam, rep in rows:
        line = f"{_fmt6(beta):>10}  {_fmt6(lam):>10}  {_fmt6(rep.final_objective):>14}"
        if ref_val is not None:
            line += f"  {_fmt6(abs(rep.final_objective - ref_val)):>12}"
        line += "  (" + ", ".join(_fmt6(x) for x in rep.final_point) + ")"
        print(line)

    ok = all(rep.terminal_reason not in ("nonfinite", "step_cap") for _, _, rep in rows)
    return 0 if ok else 1


def cmd_check(merged) -> int:
    problem = _get_problem(merged)

    checks = []
    err = gradient_consistency(problem, n_points=200, seed=0)
    checks.append(("gradient-consistency", err <= 1e-6, f"max rel err {err:.3e}"))

    grid = np.arange(-40, 41) * 0.05
    ncp_ok = all(ncp_check(p, q) for p in grid for q in grid)
    checks.append(("complementarity-grid", ncp_ok, "sign logic on [-2,2]^2, step 0.05"))

    box = problem.box()
    w0 = 0.5 * (box[:, 0] + box[:, 1])
    smoke_cfg = FlowConfig(t_end=10.0, record_every=1)
    rep = solve(problem, Schedule.single_stage(1e-2, 1e3), w0, smoke_cfg,
                keep_trajectory=True)
    ly = lyapunov_report(rep.trajectory)
    descent_ok = ly.monotone and rep.terminal_reason in ("equilibrium", "stall", "horizon")
    checks.append(
        (
            "energy-descent",
            descent_ok,
            f"terminal {rep.terminal_reason}, max uptick {ly.max_uptick:.3e}",
        )
    )

    all_ok = True
    for name, ok, detail in checks:
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all_ok else 1


def cmd_list(_merged) -> int:
    for name in list_problems():
        p = get_problem(name)
        print(f"{name}: dim {p.dim}, {p.n_ineq} ineq, {p.n_eq} eq, {p.n_pairs} pairs")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpccflow",
        description="Solve complementarity-constrained programs by penalty-energy gradient flow.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--problem", help="problem id (see the list command)")
        p.add_argument("--x0", help="initial point, comma-separated")
        p.add_argument("--beta", type=float, help="relaxation parameter (single stage)")
        p.add_argument("--lambda", dest="lambda", type=float,
                       help="penalty weight (single stage)")
        p.add_argument("--sweep-beta", dest="sweep_beta",
                       help="comma-separated betas to sweep")
        p.add_argument("--sweep-lambda", dest="sweep_lambda",
                       help="comma-separated lambdas to sweep")
        p.add_argument("--starts", type=int, help="number of seeded random starts")
        p.add_argument("--seed", type=int, help="root seed for start sampling")
        p.add_argument("--t-end", dest="t_end", type=float, help="flow horizon")
        p.add_argument("--rtol", type=float, help="step controller relative tolerance")
        p.add_argument("--atol", type=float, help="step controller absolute tolerance")
        p.add_argument("--grad-tol", dest="grad_tol", type=float,
                       help="equilibrium gradient norm (default scales with lambda*beta)")
        p.add_argument("--feasible-tol", dest="feasible_tol", type=float,
                       help="feasibility tolerance for best-start selection and exit code")
        p.add_argument("--record-every", dest="record_every", type=int,
                       help="record every k-th accepted step in trajectory CSVs")
        p.add_argument("--out-dir", dest="out_dir", help="directory for emitted files")
        p.add_argument("--config", help="JSON config file (flags override it)")

    add_common(sub.add_parser("solve", help="run one multi-start solve"))
    add_common(sub.add_parser("sweep", help="one solve per swept parameter value"))
    add_common(sub.add_parser("check", help="self-checks for a problem"))
    sub.add_parser("list", help="list registered problems")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    handlers = {
        "solve": cmd_solve,
        "sweep": cmd_sweep,
        "check": cmd_check,
        "list": cmd_list,
    }
    try:
        merged = _merge(args) if args.command != "list" else {}
        return handlers[args.command](merged)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
