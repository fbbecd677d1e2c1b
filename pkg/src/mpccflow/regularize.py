"""Complementarity relaxation and the regularized constraint stack.

The scalar kernel

    phi(p, q) = p*q                   if p + q >= 0
              = -(p**2 + q**2) / 2    otherwise

vanishes exactly on {p >= 0, q >= 0, p*q = 0}, is positive only where both
arguments are positive, and is C^1 with gradient (q, p) on the first branch
and (-p, -q) on the second. Each complementarity pair (G_k, H_k) is relaxed
into the single smooth inequality row

    B_k(w, beta) = phi(G_k(w) - beta, H_k(w) - beta) <= 0,

and the regularized problem NLP(beta) collects the inequality rows in the
fixed layout [g_1..g_m, -G_1..-G_s, -H_1..-H_s, B_1..B_s] next to the
untouched equalities h.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Array, ProblemDef

__all__ = [
    "phi",
    "grad_phi",
    "ncp_check",
    "relax_b",
    "RegularizedStack",
    "stack_constraints",
    "jacobian_transpose_apply",
]


def phi(p: float, q: float) -> float:
    """Piecewise complementarity kernel; branch boundary p + q = 0 takes the product."""
    if p + q >= 0.0:
        return p * q
    return -0.5 * (p * p + q * q)


def grad_phi(p: float, q: float) -> tuple:
    """Gradient of phi; ties on p + q = 0 resolve to the product branch (q, p)."""
    if p + q >= 0.0:
        return (q, p)
    return (-p, -q)


def ncp_check(p: float, q: float, tol: float = 0.0) -> bool:
    """True when |phi| <= tol agrees with (p >= -tol, q >= -tol, |p*q| <= tol).

    Diagnostic only. The two sides carve out slightly different neighborhoods
    of the complementarity set, so tol must be small against the scale of the
    sampled (p, q) for the equivalence to be meaningful; at tol = 0 it is the
    exact zero-set characterization of phi.
    """
    near_zero = abs(phi(p, q)) <= tol
    feasible = (p >= -tol) and (q >= -tol) and abs(p * q) <= tol
    return near_zero == feasible


def relax_b(problem: ProblemDef, k: int, w, beta: float) -> float:
    """Relaxed complementarity row B_k(w, beta) for the 0-based pair index k."""
    if not 0 <= k < problem.n_pairs:
        raise IndexError(f"pair index {k} out of range for {problem.n_pairs} pairs")
    if beta < 0.0:
        raise ValueError("beta must be nonnegative")
    w = problem.check_point(w)
    G, H = problem.comp_pairs[k]
    return phi(G(w) - beta, H(w) - beta)


@dataclass(frozen=True)
class RegularizedStack:
    """Inequality stack of NLP(beta) for one problem at one beta."""

    problem: ProblemDef
    beta: float

    def __post_init__(self):
        if self.beta < 0.0:
            raise ValueError("beta must be nonnegative")

    @property
    def n_rows(self) -> int:
        return self.problem.n_ineq + 3 * self.problem.n_pairs


def stack_constraints(stack: RegularizedStack, w) -> tuple:
    """Values (N, h) of the stacked inequality rows and the equality rows at w."""
    problem, beta = stack.problem, stack.beta
    w = problem.check_point(w)
    g = [c(w) for c in problem.ineq]
    Gv = [G(w) for G, _ in problem.comp_pairs]
    Hv = [H(w) for _, H in problem.comp_pairs]
    B = [phi(Gv[k] - beta, Hv[k] - beta) for k in range(problem.n_pairs)]
    N = np.array(g + [-v for v in Gv] + [-v for v in Hv] + B, dtype=float)
    h = np.array([c(w) for c in problem.eq], dtype=float)
    return N, h


def jacobian_transpose_apply(stack: RegularizedStack, w, v_ineq, v_eq) -> Array:
    """Return J_N(w)^T v_ineq + J_h(w)^T v_eq without forming either Jacobian.

    Rows follow the stack layout; the B_k rows use the chain rule
    grad B_k = d1_phi * grad G_k + d2_phi * grad H_k at (G_k - beta, H_k - beta).
    """
    problem, beta = stack.problem, stack.beta
    w = problem.check_point(w)
    v_ineq = np.asarray(v_ineq, dtype=float)
    v_eq = np.asarray(v_eq, dtype=float)
    m, s = problem.n_ineq, problem.n_pairs
    if v_ineq.shape != (m + 3 * s,):
        raise ValueError(f"v_ineq must have {m + 3 * s} entries, got {v_ineq.shape}")
    if v_eq.shape != (len(problem.eq),):
        raise ValueError(f"v_eq must have {len(problem.eq)} entries, got {v_eq.shape}")

    out = np.zeros(problem.dim)
    for j, c in enumerate(problem.ineq):
        if v_ineq[j] != 0.0:
            out += v_ineq[j] * c.gradient(w)
    for k, (G, H) in enumerate(problem.comp_pairs):
        vG, vH, vB = v_ineq[m + k], v_ineq[m + s + k], v_ineq[m + 2 * s + k]
        need_vals = vB != 0.0
        gG = G.gradient(w) if (vG != 0.0 or need_vals) else None
        gH = H.gradient(w) if (vH != 0.0 or need_vals) else None
        if vG != 0.0:
            out -= vG * gG
        if vH != 0.0:
            out -= vH * gH
        if need_vals:
            d1, d2 = grad_phi(G(w) - beta, H(w) - beta)
            out += vB * (d1 * gG + d2 * gH)
    for i, c in enumerate(problem.eq):
        if v_eq[i] != 0.0:
            out += v_eq[i] * c.gradient(w)
    return out
