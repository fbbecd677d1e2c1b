"""Problem containers, feasibility measures, and active-set classification.

A problem instance is

    min  f(w)
    s.t. g_j(w) <= 0                     j = 1..m
         h_i(w) = 0                      i = 1..l
         0 <= G_k(w)  complementary to  H_k(w) >= 0,   k = 1..s

with every field smooth. Gradients are supplied callables; a central
finite-difference fallback is used when a gradient is omitted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

Array = np.ndarray


def finite_difference_gradient(fn: Callable[[Array], float], w: Array,
                               rel_step: float = 1e-6) -> Array:
    """Central-difference gradient with per-coordinate step rel_step*max(1, |w_i|)."""
    w = np.asarray(w, dtype=float)
    g = np.empty(w.size)
    for i in range(w.size):
        step = rel_step * max(1.0, abs(w[i]))
        wp = w.copy()
        wm = w.copy()
        wp[i] += step
        wm[i] -= step
        g[i] = (fn(wp) - fn(wm)) / (2.0 * step)
    return g


@dataclass(frozen=True)
class ScalarField:
    """A scalar function of w together with its gradient callable.

    ``grad=None`` selects the finite-difference fallback.
    """

    fn: Callable[[Array], float]
    grad: Optional[Callable[[Array], Array]] = None

    def __call__(self, w: Array) -> float:
        return float(self.fn(w))

    def gradient(self, w: Array) -> Array:
        if self.grad is None:
            return finite_difference_gradient(self.fn, w)
        return np.asarray(self.grad(w), dtype=float)


@dataclass(frozen=True)
class ProblemDef:
    """Immutable problem definition.

    Parameters
    ----------
    name : str
        Registry identifier, e.g. ``"mpcc1"``.
    dim : int
        Number of variables n.
    objective : ScalarField
        f and its gradient.
    ineq, eq : tuple of ScalarField
        g rows (<= 0) and h rows (= 0).
    comp_pairs : tuple of (ScalarField, ScalarField)
        The (G_k, H_k) pairs.
    box_hint : (n, 2) array, optional
        Sampling box for multi-start; defaults to [-5, 5]^n.
    reference : (point, value) tuple, optional
        Known solution used for reporting only, never by the solver.
    fused_energy : callable, optional
        Compiled kernel ``(w, beta, lam, grad_out) -> energy`` evaluating the
        regularized penalty energy and its gradient in one pass. When present
        the integrator uses it instead of the generic evaluation path.
    """

    name: str
    dim: int
    objective: ScalarField
    ineq: tuple = ()
    eq: tuple = ()
    comp_pairs: tuple = ()
    box_hint: Optional[Array] = None
    reference: Optional[tuple] = None
    fused_energy: Optional[Callable] = None

    @property
    def n_ineq(self) -> int:
        return len(self.ineq)

    @property
    def n_eq(self) -> int:
        return len(self.eq)

    @property
    def n_pairs(self) -> int:
        return len(self.comp_pairs)

    def box(self) -> Array:
        if self.box_hint is not None:
            return np.asarray(self.box_hint, dtype=float)
        return np.column_stack([np.full(self.dim, -5.0), np.full(self.dim, 5.0)])

    def check_point(self, w) -> Array:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        if w.shape != (self.dim,):
            raise ValueError(
                f"{self.name}: expected point of dimension {self.dim}, got shape {w.shape}"
            )
        return w


@dataclass(frozen=True)
class EvalRecord:
    """All constraint-field values of a problem at one point."""

    f: float
    g: Array
    h: Array
    G: Array
    H: Array


@dataclass(frozen=True)
class FeasibilityRecord:
    """Worst violation across all constraint families at one point."""

    max_violation: float
    is_feasible: bool
    tol: float


@dataclass(frozen=True)
class IndexSets:
    """Activity pattern of a point, all indices 0-based.

    ``biactive`` is I_00 (G=0, H=0), ``g_zero_h_pos`` is I_0+ (G=0, H>0) and
    ``g_pos_h_zero`` is I_+0 (G>0, H=0), each within the per-pair tolerance
    tol*max(1, |G_k|+|H_k|). Pairs that fit none of the three bins are listed
    in ``infeasible`` instead of being silently dropped: sign-infeasible when
    G or H is below -tol, product-infeasible when both sit above +tol.
    """

    active_g: tuple
    biactive: tuple
    g_zero_h_pos: tuple
    g_pos_h_zero: tuple
    infeasible: tuple
    tol: float


def evaluate(problem: ProblemDef, w) -> EvalRecord:
    """Evaluate objective and every constraint field at w."""
    w = problem.check_point(w)
    return EvalRecord(
        f=problem.objective(w),
        g=np.array([c(w) for c in problem.ineq], dtype=float),
        h=np.array([c(w) for c in problem.eq], dtype=float),
        G=np.array([G(w) for G, _ in problem.comp_pairs], dtype=float),
        H=np.array([H(w) for _, H in problem.comp_pairs], dtype=float),
    )


def mpcc_feasibility(problem: ProblemDef, w, tol: float = 1e-6) -> FeasibilityRecord:
    """Max violation over {g+, |h|, (-G)+, (-H)+, |G*H|}; feasible iff <= tol."""
    rec = evaluate(problem, w)
    pieces = [0.0]
    if rec.g.size:
        pieces.append(float(np.max(np.maximum(rec.g, 0.0))))
    if rec.h.size:
        pieces.append(float(np.max(np.abs(rec.h))))
    if rec.G.size:
        pieces.append(float(np.max(np.maximum(-rec.G, 0.0))))
        pieces.append(float(np.max(np.maximum(-rec.H, 0.0))))
        pieces.append(float(np.max(np.abs(rec.G * rec.H))))
    worst = max(pieces)
    return FeasibilityRecord(max_violation=worst, is_feasible=worst <= tol, tol=tol)


def classify_indices(problem: ProblemDef, w, tol: float = 1e-6) -> IndexSets:
    """Partition constraint indices by activity at w.

    Pair k uses the scaled tolerance tol*max(1, |G_k|+|H_k|).
    """
    if tol <= 0.0:
        raise ValueError("activity tolerance must be positive")
    rec = evaluate(problem, w)
    active_g = tuple(j for j, v in enumerate(rec.g) if abs(v) <= tol)
    biactive, zero_pos, pos_zero, infeasible = [], [], [], []
    for k in range(problem.n_pairs):
        gk, hk = rec.G[k], rec.H[k]
        tk = tol * max(1.0, abs(gk) + abs(hk))
        if gk < -tk or hk < -tk:
            infeasible.append(k)
        elif abs(gk) <= tk and abs(hk) <= tk:
            biactive.append(k)
        elif abs(gk) <= tk:
            zero_pos.append(k)
        elif abs(hk) <= tk:
            pos_zero.append(k)
        else:
            # both strictly positive: complementarity violated at this resolution
            infeasible.append(k)
    return IndexSets(
        active_g=active_g,
        biactive=tuple(biactive),
        g_zero_h_pos=tuple(zero_pos),
        g_pos_h_zero=tuple(pos_zero),
        infeasible=tuple(infeasible),
        tol=tol,
    )


def gradient_consistency(problem: ProblemDef, n_points: int = 200, seed: int = 0,
                         rel_step: float = 1e-6) -> float:
    """Worst relative mismatch between supplied gradients and central differences.

    Points are sampled uniformly from the problem box. The mismatch of one
    field at one point is ||g_fd - g||_inf / max(1, ||g||_inf).
    """
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    box = problem.box()
    fields = [problem.objective, *problem.ineq, *problem.eq]
    for G, H in problem.comp_pairs:
        fields.extend([G, H])
    worst = 0.0
    for _ in range(n_points):
        w = box[:, 0] + rng.random(problem.dim) * (box[:, 1] - box[:, 0])
        for fld in fields:
            g = fld.gradient(w)
            fd = finite_difference_gradient(fld.fn, w, rel_step=rel_step)
            err = np.max(np.abs(fd - g)) / max(1.0, np.max(np.abs(g)))
            worst = max(worst, float(err))
    return worst
