"""End-to-end solves: homotopy schedules, multi-start, and point classification.

A solve integrates the penalty-energy flow over a (beta, lam) schedule,
optionally warm-starting each stage at the previous stage's rest point, then
classifies the final point: feasibility residuals, least-squares multiplier
estimates, stationarity class, and a constraint-gradient rank check.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import nnls

from .energy import EnergyParams
from .flow import FlowConfig, Trajectory, integrate
from .model import (
    Array,
    FeasibilityRecord,
    IndexSets,
    ProblemDef,
    classify_indices,
    evaluate,
    mpcc_feasibility,
)
from .regularize import RegularizedStack, stack_constraints

__all__ = [
    "DEFAULT_BETAS",
    "DEFAULT_LAMBDAS",
    "Schedule",
    "StageRecord",
    "MultiplierEstimate",
    "LicqRecord",
    "SolveReport",
    "MultiStartResult",
    "nlp_beta_feasibility",
    "solve",
    "multi_start",
    "sample_start",
    "select_best",
    "estimate_multipliers",
    "classify_stationarity",
    "check_mpcc_licq",
    "report_to_json",
]

DEFAULT_BETAS = (1e-1, 1e-2, 1e-3, 1e-4)
DEFAULT_LAMBDAS = (1e2, 1e3, 1e4, 1e5, 1e6)


@dataclass(frozen=True)
class Schedule:
    """Relaxation/penalty homotopy: betas strictly decreasing, lambdas strictly increasing.

    Stages are formed by zipping the two sequences, repeating the shorter
    one's final value. ``warm_start`` chains each stage's rest point into the
    next stage's initial point.
    """

    betas: tuple = DEFAULT_BETAS
    lambdas: tuple = DEFAULT_LAMBDAS
    warm_start: bool = True

    def __post_init__(self):
        betas = tuple(float(b) for b in self.betas)
        lambdas = tuple(float(v) for v in self.lambdas)
        if not betas or not lambdas:
            raise ValueError("schedule needs at least one beta and one lambda")
        if any(b <= 0.0 for b in betas) or any(v <= 0.0 for v in lambdas):
            raise ValueError("schedule parameters must be positive")
        if any(b2 >= b1 for b1, b2 in zip(betas, betas[1:])):
            raise ValueError("betas must be strictly decreasing")
        if any(v2 <= v1 for v1, v2 in zip(lambdas, lambdas[1:])):
            raise ValueError("lambdas must be strictly increasing")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "lambdas", lambdas)

    @staticmethod
    def single_stage(beta: float, lam: float, warm_start: bool = True) -> "Schedule":
        return Schedule(betas=(beta,), lambdas=(lam,), warm_start=warm_start)

    def stages(self) -> tuple:
        n = max(len(self.betas), len(self.lambdas))
        bs = self.betas + (self.betas[-1],) * (n - len(self.betas))
        ls = self.lambdas + (self.lambdas[-1],) * (n - len(self.lambdas))
        return tuple(zip(bs, ls))


@dataclass(frozen=True)
class StageRecord:
    """Terminal state of one schedule stage."""

    beta: float
    lam: float
    point: Array
    energy: float
    grad_norm: float
    terminal_reason: str
    n_accepted: int
    n_rejected: int


@dataclass(frozen=True)
class MultiplierEstimate:
    """Least-squares multipliers (mu, xi, eta, zeta) and stationarity residual."""

    mu: Array
    xi: Array
    eta: Array
    zeta: Array
    residual: float
    rank_deficient: bool


@dataclass(frozen=True)
class LicqRecord:
    """Numerical rank of the active constraint gradients vs their count."""

    ok: bool
    rank: int
    count: int


@dataclass(eq=False)
class SolveReport:
    """Everything known about one solve; canonical form is ``to_dict()``.

    ``wallclock`` and the optional ``trajectory`` are runtime diagnostics and
    deliberately excluded from the canonical dictionary so that repeated
    seeded runs serialize byte-identically.
    """

    final_point: Array
    final_objective: float
    mpcc_feas: FeasibilityRecord
    nlp_beta_feas: FeasibilityRecord
    stationarity: str
    multipliers: Optional[MultiplierEstimate]
    licq: LicqRecord
    schedule_history: tuple
    seed: Optional[int]
    start_index: Optional[int]
    terminal_reason: str
    wallclock: float
    trajectory: Optional[Trajectory] = None

    def to_dict(self) -> dict:
        mult = None
        if self.multipliers is not None:
            mult = {
                "mu": self.multipliers.mu.tolist(),
                "xi": self.multipliers.xi.tolist(),
                "eta": self.multipliers.eta.tolist(),
                "zeta": self.multipliers.zeta.tolist(),
                "residual": self.multipliers.residual,
                "rank_deficient": self.multipliers.rank_deficient,
            }
        return {
            "final_point": self.final_point.tolist(),
            "final_objective": self.final_objective,
            "mpcc_feasibility": {
                "max_violation": self.mpcc_feas.max_violation,
                "is_feasible": self.mpcc_feas.is_feasible,
                "tol": self.mpcc_feas.tol,
            },
            "nlp_beta_feasibility": {
                "max_violation": self.nlp_beta_feas.max_violation,
                "is_feasible": self.nlp_beta_feas.is_feasible,
                "tol": self.nlp_beta_feas.tol,
            },
            "stationarity": self.stationarity,
            "multipliers": mult,
            "licq_ok": self.licq.ok,
            "licq": {"ok": self.licq.ok, "rank": self.licq.rank, "count": self.licq.count},
            "schedule_history": [
                {
                    "beta": st.beta,
                    "lambda": st.lam,
                    "point": st.point.tolist(),
                    "energy": st.energy,
                    "grad_norm": st.grad_norm,
                    "terminal_reason": st.terminal_reason,
                    "n_accepted": st.n_accepted,
                    "n_rejected": st.n_rejected,
                }
                for st in self.schedule_history
            ],
            "seed": self.seed,
            "start_index": self.start_index,
            "terminal_reason": self.terminal_reason,
        }


@dataclass(frozen=True)
class MultiStartResult:
    """Reports in start order plus the index of the best feasible one (or None)."""

    reports: tuple
    best_index: Optional[int]
    feasible_tol: float

    @property
    def best(self) -> Optional[SolveReport]:
        return None if self.best_index is None else self.reports[self.best_index]


def nlp_beta_feasibility(problem: ProblemDef, w, beta: float, tol: float = 1e-6) -> FeasibilityRecord:
    """Worst violation of NLP(beta): positive parts of the stack and |h|."""
    N, h = stack_constraints(RegularizedStack(problem, beta), w)
    worst = 0.0
    if N.size:
        worst = max(worst, float(np.max(np.maximum(N, 0.0))))
    if h.size:
        worst = max(worst, float(np.max(np.abs(h))))
    return FeasibilityRecord(max_violation=worst, is_feasible=worst <= tol, tol=tol)


def _effective_activity_tol(problem: ProblemDef, w, base_tol: float) -> float:
    """Widen the activity tolerance to the resolution the point was located at.

    A complementarity product |G_k*H_k| = d^2 places the pair within d of an
    exact complementarity point, so activity decisions sharper than d are
    noise. Capped so badly infeasible points do not inflate the tolerance.
    """
    rec = evaluate(problem, w)
    if rec.G.size == 0:
        return base_tol
    d = float(np.sqrt(np.max(np.abs(rec.G * rec.H))))
    return max(base_tol, min(5e-2, 2.0 * d))


def estimate_multipliers(problem: ProblemDef, w, tol: float = 1e-6) -> MultiplierEstimate:
    """Least-squares multipliers of the weak-stationarity system at w.

    Variables: mu_j >= 0 on active g rows only, xi free, eta_k free except
    forced 0 on I_+0, zeta_k free except forced 0 on I_0+. Solved as mixed
    nonnegative least squares (free block eliminated by orthogonal projection,
    nonnegative block by NNLS); rank deficiency is flagged and resolved in
    the minimum-norm sense.
    """
    w = problem.check_point(w)
    feas = mpcc_feasibility(problem, w, tol)
    if feas.max_violation > 100.0 * tol:
        raise ValueError(
            f"point is not approximately MPCC-feasible: violation "
            f"{feas.max_violation:.3e} > {100.0 * tol:.3e}"
        )
    sets = classify_indices(problem, w, tol)
    m, l, s = problem.n_ineq, problem.n_eq, problem.n_pairs

    b = -problem.objective.gradient(w)

    free_cols, free_slots = [], []
    for i, c in enumerate(problem.eq):
        free_cols.append(c.gradient(w))
        free_slots.append(("xi", i))
    eta_idx = sorted(set(sets.biactive) | set(sets.g_zero_h_pos))
    zeta_idx = sorted(set(sets.biactive) | set(sets.g_pos_h_zero))
    for k in eta_idx:
        free_cols.append(-problem.comp_pairs[k][0].gradient(w))
        free_slots.append(("eta", k))
    for k in zeta_idx:
        free_cols.append(-problem.comp_pairs[k][1].gradient(w))
        free_slots.append(("zeta", k))
    nn_cols = [problem.ineq[j].gradient(w) for j in sets.active_g]

    F = np.column_stack(free_cols) if free_cols else np.zeros((problem.dim, 0))
    N = np.column_stack(nn_cols) if nn_cols else np.zeros((problem.dim, 0))

    rank_deficient = False
    if F.shape[1]:
        U, S, Vt = np.linalg.svd(F, full_matrices=False)
        r = int(np.sum(S > (S[0] if S.size else 0.0) * 1e-12))
        rank_deficient |= r < F.shape[1]
        Ur, Sr, Vr = U[:, :r], S[:r], Vt[:r]

        def project(mat):
            return mat - Ur @ (Ur.T @ mat)

    else:
        r = 0

        def project(mat):
            return mat

    if N.shape[1]:
        PN = project(N)
        # A nonnegative column lying numerically inside span(F) cannot reduce
        # the projected residual; NNLS on its ~1e-16 remnant returns arbitrary
        # huge multipliers that the free block then mirrors. Pin those to 0
        # (the minimum-norm resolution) and flag the deficiency.
        col_norm = np.linalg.norm(PN, axis=0)
        orig_norm = np.maximum(np.linalg.norm(N, axis=0), np.finfo(float).tiny)
        keep = np.flatnonzero(col_norm > 1e-10 * orig_norm)
        x_nn = np.zeros(N.shape[1])
        if keep.size:
            x_nn[keep], _ = nnls(PN[:, keep], project(b))
        rank_deficient |= keep.size < N.shape[1]
        if np.linalg.matrix_rank(np.column_stack([F, N])) < F.shape[1] + N.shape[1]:
            rank_deficient = True
    else:
        x_nn = np.zeros(0)

    if F.shape[1]:
        rhs = b - (N @ x_nn if N.shape[1] else 0.0)
        x_free = Vr.T @ ((Ur.T @ rhs) / Sr) if r else np.zeros(F.shape[1])
    else:
        x_free = np.zeros(0)

    resid_vec = -b
    if F.shape[1]:
        resid_vec = resid_vec + F @ x_free
    if N.shape[1]:
        resid_vec = resid_vec + N @ x_nn
    residual = float(np.linalg.norm(resid_vec))

    mu = np.zeros(m)
    for val, j in zip(x_nn, sets.active_g):
        mu[j] = val
    xi = np.zeros(l)
    eta = np.zeros(s)
    zeta = np.zeros(s)
    for val, (kind, idx) in zip(x_free, free_slots):
        if kind == "xi":
            xi[idx] = val
        elif kind == "eta":
            eta[idx] = val
        else:
            zeta[idx] = val
    return MultiplierEstimate(
        mu=mu, xi=xi, eta=eta, zeta=zeta, residual=residual, rank_deficient=rank_deficient
    )


def classify_stationarity(index_sets: IndexSets, eta, zeta, tol: float = 1e-6,
                          residual: float = 0.0) -> str:
    """Strongest stationarity class supported by the biactive multipliers.

    Each multiplier is trichotomized against the tol band (positive, zero,
    negative) and the exact sign logic is applied to that trichotomy, which
    keeps the class chain S => M => C => W intact for every input. A residual
    above tol means the multipliers do not certify stationarity at all.
    """
    if not residual <= tol:  # catches residual > tol and NaN
        return "none"
    eta = np.asarray(eta, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    s_ok = m_ok = c_ok = True
    for k in index_sets.biactive:
        se = 1 if eta[k] > tol else (-1 if eta[k] < -tol else 0)
        sz = 1 if zeta[k] > tol else (-1 if zeta[k] < -tol else 0)
        s_ok &= se >= 0 and sz >= 0
        m_ok &= (se > 0 and sz > 0) or se == 0 or sz == 0
        c_ok &= se * sz >= 0
    if s_ok:
        return "S"
    if m_ok:
        return "M"
    if c_ok:
        return "C"
    return "W"


def check_mpcc_licq(problem: ProblemDef, w, tol: float = 1e-8,
                    act_tol: float = 1e-6) -> LicqRecord:
    """Rank test of the active constraint gradients at w.

    Collects grad g_j (j active), all grad h_i, grad G_k for k in I_0+ and
    I_00, grad H_k for k in I_+0 and I_00; ok iff the numerical rank
    (singular values > tol * largest) equals the number of gradients.
    """
    w = problem.check_point(w)
    sets = classify_indices(problem, w, act_tol)
    cols = [problem.ineq[j].gradient(w) for j in sets.active_g]
    cols += [c.gradient(w) for c in problem.eq]
    for k in sorted(set(sets.g_zero_h_pos) | set(sets.biactive)):
        cols.append(problem.comp_pairs[k][0].gradient(w))
    for k in sorted(set(sets.g_pos_h_zero) | set(sets.biactive)):
        cols.append(problem.comp_pairs[k][1].gradient(w))
    count = len(cols)
    if count == 0:
        return LicqRecord(ok=True, rank=0, count=0)
    A = np.column_stack(cols)
    sv = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(sv > tol * sv[0])) if sv.size and sv[0] > 0.0 else 0
    return LicqRecord(ok=rank == count, rank=rank, count=count)


def solve(problem: ProblemDef, schedule: Schedule, w0, cfg: FlowConfig = FlowConfig(),
          *, act_tol: float = 1e-6, seed: Optional[int] = None,
          start_index: Optional[int] = None, keep_trajectory: bool = False) -> SolveReport:
    """Run the schedule from w0 and classify the final rest point.

    A stage ending ``nonfinite`` aborts the remaining stages; the report then
    carries that stage's partial result.
    """
    t0 = time.perf_counter()
    w0 = problem.check_point(w0)
    history = []
    current = w0
    final_traj = None
    final_beta = schedule.stages()[-1][0]
    for beta, lam in schedule.stages():
        params = EnergyParams(beta=beta, lam=lam)
        traj = integrate(problem, params, current, cfg)
        history.append(
            StageRecord(
                beta=beta,
                lam=lam,
                point=traj.final_point.copy(),
                energy=float(traj.energy[-1]),
                grad_norm=float(traj.grad_norm[-1]),
                terminal_reason=traj.terminal_reason,
                n_accepted=traj.n_accepted,
                n_rejected=traj.n_rejected,
            )
        )
        final_traj = traj
        final_beta = beta
        if traj.terminal_reason == "nonfinite":
            break
        if schedule.warm_start:
            current = traj.final_point

    w_star = final_traj.final_point
    feas = mpcc_feasibility(problem, w_star, act_tol)
    nlp_feas = nlp_beta_feasibility(problem, w_star, final_beta, act_tol)

    eff_tol = _effective_activity_tol(problem, w_star, act_tol)
    class_tol = max(1e-6, 10.0 * eff_tol)
    try:
        est = estimate_multipliers(problem, w_star, eff_tol)
    except ValueError:
        est = None
    if est is None:
        stationarity = "none"
    else:
        sets = classify_indices(problem, w_star, eff_tol)
        stationarity = classify_stationarity(
            sets, est.eta, est.zeta, tol=class_tol, residual=est.residual
        )
    licq = check_mpcc_licq(problem, w_star, act_tol=eff_tol)

    return SolveReport(
        final_point=w_star.copy(),
        final_objective=problem.objective(w_star),
        mpcc_feas=feas,
        nlp_beta_feas=nlp_feas,
        stationarity=stationarity,
        multipliers=est,
        licq=licq,
        schedule_history=tuple(history),
        seed=seed,
        start_index=start_index,
        terminal_reason=final_traj.terminal_reason,
        wallclock=time.perf_counter() - t0,
        trajectory=final_traj if keep_trajectory else None,
    )


def sample_start(problem: ProblemDef, root_seed: int, start_index: int) -> Array:
    """Uniform draw from the problem box via a counter-based per-start stream."""
    key = np.array([np.uint64(root_seed), np.uint64(start_index)], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    box = problem.box()
    return box[:, 0] + gen.random(problem.dim) * (box[:, 1] - box[:, 0])


def multi_start(problem: ProblemDef, schedule: Schedule, n_starts: int, root_seed: int,
                cfg: FlowConfig = FlowConfig(), *, feasible_tol: float = 1e-6,
                act_tol: float = 1e-6, keep_trajectories: bool = False) -> MultiStartResult:
    """Seeded multi-start; start i draws its initial point from stream i.

    The best report is the MPCC-feasible one (violation <= feasible_tol) with
    the lowest objective, ties broken by lowest start index; None when no
    start is feasible at that tolerance. Deterministic in root_seed.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    reports = []
    for i in range(n_starts):
        w0 = sample_start(problem, root_seed, i)
        reports.append(
            solve(
                problem,
                schedule,
                w0,
                cfg,
                act_tol=act_tol,
                seed=root_seed,
                start_index=i,
                keep_trajectory=keep_trajectories,
            )
        )
    return MultiStartResult(reports=tuple(reports),
                            best_index=select_best(reports, feasible_tol),
                            feasible_tol=feasible_tol)


def select_best(reports, feasible_tol: float = 1e-6) -> Optional[int]:
    """Index of the feasible report with the lowest objective, ties by index."""
    best_index = None
    best_obj = np.inf
    for i, rep in enumerate(reports):
        if rep.mpcc_feas.max_violation <= feasible_tol and rep.final_objective < best_obj:
            best_index = i
            best_obj = rep.final_objective
    return best_index


def report_to_json(report: SolveReport, indent: int = 2) -> str:
    """Canonical JSON text of a report; stable byte-for-byte across reruns."""
    return json.dumps(report.to_dict(), indent=indent)
