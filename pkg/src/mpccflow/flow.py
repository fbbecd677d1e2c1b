"""Gradient-flow integration dw/dt = -grad E with an embedded 5(4) pair.

The stepper is the Dormand-Prince 5(4) pair (the classic ode45 method) with
PI step-size control and FSAL reuse. Integration stops at the first satisfied
criterion among

    equilibrium  ||grad E||_inf <= grad_tol
    stall        relative energy decrease < stall_eps over stall_window steps
    horizon      t >= t_end
    step_cap     accepted + rejected steps >= max_steps
    nonfinite    state, energy, or gradient stopped being finite

Problems carrying a compiled ``fused_energy`` kernel are integrated by the
numba loop in ``fastpath``; everything else runs the pure-numpy loop below.
Both implement the identical stepping policy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .energy import EnergyParams, energy_and_grad
from .model import Array, ProblemDef

__all__ = [
    "FlowConfig",
    "Trajectory",
    "StepResult",
    "LyapunovReport",
    "integrate",
    "step_dense",
    "lyapunov_report",
    "trajectory_to_csv",
    "trajectory_from_csv",
    "resolve_grad_tol",
]

# Dormand-Prince 5(4) tableau.
C2, C3, C4, C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# Difference between the 5th- and 4th-order weights.
E1, E3, E4, E5, E6, E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

# PI controller constants (order-5 error estimate).
SAFETY = 0.9
EXPO1 = 0.17
BETA_PI = 0.04
FAC_MIN = 0.2
FAC_MAX = 10.0

REASONS = ("equilibrium", "stall", "horizon", "step_cap", "nonfinite")


@dataclass(frozen=True)
class FlowConfig:
    """Integration horizon, tolerances, and stopping rules.

    ``grad_tol=None`` resolves to 1e-8 * max(1, lam*beta) at integration time,
    scaling the equilibrium test with the stiffness of the penalty term.
    """

    t_end: float = 100.0
    rtol: float = 1e-8
    atol: float = 1e-10
    grad_tol: Optional[float] = None
    stall_window: int = 50
    stall_eps: float = 1e-14
    max_steps: int = 20_000_000
    record_every: int = 1
    h_init: float = 1e-3
    h_min: float = 1e-12

    def __post_init__(self):
        if self.t_end <= 0.0:
            raise ValueError("t_end must be positive")
        if self.rtol <= 0.0 or self.atol <= 0.0:
            raise ValueError("rtol and atol must be positive")
        if self.grad_tol is not None and self.grad_tol <= 0.0:
            raise ValueError("grad_tol must be positive")
        if self.stall_window < 1 or self.max_steps < 1 or self.record_every < 1:
            raise ValueError("stall_window, max_steps, record_every must be >= 1")
        if self.h_init <= 0.0 or self.h_min <= 0.0:
            raise ValueError("h_init and h_min must be positive")


def resolve_grad_tol(cfg: FlowConfig, params: EnergyParams) -> float:
    if cfg.grad_tol is not None:
        return cfg.grad_tol
    return 1e-8 * max(1.0, params.lam * params.beta)


@dataclass(frozen=True)
class Trajectory:
    """Recorded flow: row j is (t[j], w[j], energy[j], grad_norm[j])."""

    t: Array
    w: Array
    energy: Array
    grad_norm: Array
    terminal_reason: str
    n_accepted: int = 0
    n_rejected: int = 0

    @property
    def n_rows(self) -> int:
        return self.t.size

    @property
    def final_point(self) -> Array:
        return self.w[-1]


@dataclass(frozen=True)
class StepResult:
    """Outcome of a single trial step; ``point`` is unchanged on rejection."""

    point: Array
    error_norm: float
    accepted: bool
    h_next: float


@dataclass(frozen=True)
class LyapunovReport:
    """Per-step descent check: E_{k+1} <= E_k + 1e-9 * max(1, |E_k|)."""

    monotone: bool
    max_uptick: float
    final_grad_norm: float


def _error_norm(err: Array, y: Array, y_new: Array, rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def _accept_factor(err: float, facold: float) -> float:
    if err == 0.0:
        return FAC_MAX
    return min(FAC_MAX, max(FAC_MIN, SAFETY * err ** (-EXPO1) * facold ** BETA_PI))


def integrate(problem: ProblemDef, params: EnergyParams, w0, cfg: FlowConfig = FlowConfig()) -> Trajectory:
    """Integrate the gradient flow of the penalty energy from w0.

    Deterministic: identical inputs produce an identical trajectory. Uses the
    problem's fused kernel when it has one, the generic evaluation otherwise.
    """
    w0 = problem.check_point(w0)
    if problem.fused_energy is not None:
        from .fastpath import integrate_fused

        return integrate_fused(problem.fused_energy, w0, params, cfg)
    return _integrate_generic(problem, params, w0, cfg)


def _integrate_generic(problem: ProblemDef, params: EnergyParams, w0: Array,
                       cfg: FlowConfig) -> Trajectory:
    # Trial stage points may overshoot into overflow before the step is
    # rejected; the nonfinite checks below handle those, so keep numpy quiet.
    with np.errstate(over="ignore", invalid="ignore"):
        return _integrate_generic_loop(problem, params, w0, cfg)


def _integrate_generic_loop(problem: ProblemDef, params: EnergyParams, w0: Array,
                            cfg: FlowConfig) -> Trajectory:
    grad_tol = resolve_grad_tol(cfg, params)

    def eval_eg(w):
        return energy_and_grad(problem, params, w)

    ts, ws, es, gs = [], [], [], []

    def record(t, w, e, gn):
        ts.append(t)
        ws.append(w.copy())
        es.append(e)
        gs.append(gn)

    y = w0.astype(float).copy()
    e_val, grad = eval_eg(y)
    k1 = -grad
    gn = float(np.max(np.abs(grad))) if grad.size else 0.0
    record(0.0, y, e_val, gn)

    if not (np.isfinite(e_val) and np.all(np.isfinite(grad))):
        return _finish(ts, ws, es, gs, "nonfinite", 0, 0)
    if gn <= grad_tol:
        return _finish(ts, ws, es, gs, "equilibrium", 0, 0)

    window = cfg.stall_window
    e_hist = np.empty(window + 1)
    e_hist[0] = e_val

    t, h = 0.0, cfg.h_init
    facold = 1e-4
    naccept = nreject = 0
    last_rejected = False
    reason = None
    recorded_final = True

    while reason is None:
        if naccept + nreject >= cfg.max_steps:
            reason = "step_cap"
            break
        last = False
        if t + h >= cfg.t_end:
            h = cfg.t_end - t
            last = True
        if h < cfg.h_min:
            h = cfg.h_min

        k2 = -eval_eg(y + h * (A21 * k1))[1]
        k3 = -eval_eg(y + h * (A31 * k1 + A32 * k2))[1]
        k4 = -eval_eg(y + h * (A41 * k1 + A42 * k2 + A43 * k3))[1]
        k5 = -eval_eg(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))[1]
        k6 = -eval_eg(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))[1]
        y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        e_new, g7 = eval_eg(y_new)
        k7 = -g7
        err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
        err = _error_norm(err_vec, y, y_new, cfg.rtol, cfg.atol)

        ok = (
            math.isfinite(err)
            and np.all(np.isfinite(y_new))
            and math.isfinite(e_new)
            and np.all(np.isfinite(k7))
        )
        at_floor = h <= cfg.h_min * (1.0 + 1e-12)
        if not ok:
            if at_floor:
                reason = "nonfinite"
                break
            nreject += 1
            last_rejected = True
            h = max(h * FAC_MIN, cfg.h_min)
            continue

        if err <= 1.0 or at_floor:
            t = cfg.t_end if last else t + h
            y = y_new
            k1 = k7
            e_val = e_new
            gn = float(np.max(np.abs(g7)))
            naccept += 1
            recorded_final = naccept % cfg.record_every == 0
            if recorded_final:
                record(t, y, e_val, gn)
            e_hist[naccept % (window + 1)] = e_val
            if gn <= grad_tol:
                reason = "equilibrium"
            elif naccept >= window and (
                e_hist[(naccept - window) % (window + 1)] - e_val
                < cfg.stall_eps * max(1.0, abs(e_val))
            ):
                reason = "stall"
            elif last:
                reason = "horizon"
            else:
                fac = _accept_factor(err, facold)
                if last_rejected:
                    fac = min(fac, 1.0)
                facold = max(err, 1e-4)
                last_rejected = False
                h *= fac
        else:
            nreject += 1
            last_rejected = True
            h *= max(FAC_MIN, SAFETY * err ** (-0.2))

    if not recorded_final:
        record(t, y, e_val, gn)
    return _finish(ts, ws, es, gs, reason, naccept, nreject)


def _finish(ts, ws, es, gs, reason, naccept, nreject) -> Trajectory:
    return Trajectory(
        t=np.asarray(ts, dtype=float),
        w=np.asarray(ws, dtype=float),
        energy=np.asarray(es, dtype=float),
        grad_norm=np.asarray(gs, dtype=float),
        terminal_reason=reason,
        n_accepted=naccept,
        n_rejected=nreject,
    )


def step_dense(problem: ProblemDef, params: EnergyParams, w, h: float,
               cfg: FlowConfig = FlowConfig()) -> StepResult:
    """One trial embedded-pair step of size h from w.

    Accepts when the scaled error estimate is <= 1 and suggests the next step
    size; on rejection the returned point is w itself and h_next < h.
    """
    if h <= 0.0:
        raise ValueError("step size must be positive")
    y = problem.check_point(w).astype(float)

    def rhs(v):
        with np.errstate(over="ignore", invalid="ignore"):
            return -energy_and_grad(problem, params, v)[1]

    k1 = rhs(y)
    k2 = rhs(y + h * (A21 * k1))
    k3 = rhs(y + h * (A31 * k1 + A32 * k2))
    k4 = rhs(y + h * (A41 * k1 + A42 * k2 + A43 * k3))
    k5 = rhs(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
    k6 = rhs(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
    y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
    k7 = rhs(y_new)
    err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
    err = _error_norm(err_vec, y, y_new, cfg.rtol, cfg.atol)

    accepted = bool(err <= 1.0)
    if err == 0.0:
        fac = FAC_MAX
    else:
        fac = min(FAC_MAX, max(FAC_MIN, SAFETY * err ** (-0.2)))
    if accepted:
        return StepResult(point=y_new, error_norm=err, accepted=True, h_next=h * fac)
    return StepResult(point=y, error_norm=err, accepted=False, h_next=h * min(1.0, fac))


def lyapunov_report(traj: Trajectory) -> LyapunovReport:
    """Check recorded energies for per-step descent within roundoff slack."""
    e = traj.energy
    if e.size <= 1:
        return LyapunovReport(
            monotone=True,
            max_uptick=0.0,
            final_grad_norm=float(traj.grad_norm[-1]) if e.size else float("nan"),
        )
    diffs = e[1:] - e[:-1]
    slack = 1e-9 * np.maximum(1.0, np.abs(e[:-1]))
    return LyapunovReport(
        monotone=bool(np.all(diffs <= slack)),
        max_uptick=float(max(0.0, np.max(diffs))),
        final_grad_norm=float(traj.grad_norm[-1]),
    )


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """Write rows as t,w1..wn,energy,grad_norm with 17 significant digits and LF endings."""
    n = traj.w.shape[1] if traj.w.ndim == 2 else 0
    header = "t," + ",".join(f"w{i + 1}" for i in range(n)) + ",energy,grad_norm"
    lines = [header]
    for j in range(traj.n_rows):
        cells = [f"{traj.t[j]:.17g}"]
        cells += [f"{traj.w[j, i]:.17g}" for i in range(n)]
        cells += [f"{traj.energy[j]:.17g}", f"{traj.grad_norm[j]:.17g}"]
        lines.append(",".join(cells))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def trajectory_from_csv(path) -> Trajectory:
    """Parse a trajectory CSV back; row data round-trips exactly at 17 digits."""
    with open(path, "r") as fh:
        header = fh.readline().strip().split(",")
        if header[0] != "t" or header[-2:] != ["energy", "grad_norm"]:
            raise ValueError(f"unrecognized trajectory header: {header}")
        n = len(header) - 3
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        data = data.reshape(0, n + 3)
    return Trajectory(
        t=data[:, 0].copy(),
        w=data[:, 1 : 1 + n].copy(),
        energy=data[:, 1 + n].copy(),
        grad_norm=data[:, 2 + n].copy(),
        terminal_reason="unknown",
    )
