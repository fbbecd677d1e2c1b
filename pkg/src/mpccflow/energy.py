"""Quadratic penalty energy of the regularized problem and its gradient.

For parameters (beta, lam) the energy is

    E(w) = f(w) + lam/2 * ( ||N(w, beta)+||^2 + ||h(w)||^2 )

where N is the stacked inequality vector of NLP(beta) and x+ = max(x, 0)
componentwise. E is C^1; its gradient is assembled from Jacobian-transpose
products so no constraint Jacobian is ever formed densely.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Array, ProblemDef
from .regularize import RegularizedStack, grad_phi, stack_constraints

__all__ = ["EnergyParams", "penalty", "energy", "grad_energy", "energy_and_grad"]


@dataclass(frozen=True)
class EnergyParams:
    """Relaxation width beta >= 0 and penalty weight lam > 0."""

    beta: float
    lam: float

    def __post_init__(self):
        if self.beta < 0.0:
            raise ValueError("beta must be nonnegative")
        if self.lam <= 0.0:
            raise ValueError("lam must be positive")


def penalty(stack: RegularizedStack, w) -> float:
    """0.5 * (||N+||^2 + ||h||^2); zero exactly on the NLP(beta) feasible set."""
    N, h = stack_constraints(stack, w)
    Np = np.maximum(N, 0.0)
    return 0.5 * (float(Np @ Np) + float(h @ h))


def energy_and_grad(problem: ProblemDef, params: EnergyParams, w) -> tuple:
    """Energy and gradient in one pass; may return nonfinite values unchecked."""
    w = problem.check_point(w)
    beta, lam = params.beta, params.lam

    val = problem.objective(w)
    grad = problem.objective.gradient(w).copy()

    acc = 0.0
    for c in problem.ineq:
        v = c(w)
        if v > 0.0:
            acc += v * v
            grad += lam * v * c.gradient(w)
    for c in problem.eq:
        v = c(w)
        acc += v * v
        if v != 0.0:
            grad += lam * v * c.gradient(w)
    for G, H in problem.comp_pairs:
        Gv, Hv = G(w), H(w)
        # -G <= 0 and -H <= 0 rows
        if Gv < 0.0:
            acc += Gv * Gv
            grad += lam * Gv * G.gradient(w)
        if Hv < 0.0:
            acc += Hv * Hv
            grad += lam * Hv * H.gradient(w)
        # relaxed complementarity row; only its positive part contributes,
        # which forces the product branch of phi
        p, q = Gv - beta, Hv - beta
        if p + q >= 0.0 and p * q > 0.0:
            b = p * q
            acc += b * b
            d1, d2 = grad_phi(p, q)
            grad += lam * b * (d1 * G.gradient(w) + d2 * H.gradient(w))
    return val + 0.5 * lam * acc, grad


def energy(problem: ProblemDef, params: EnergyParams, w) -> float:
    """Penalty energy at w; raises OverflowError when the value is not finite."""
    val, _ = energy_and_grad(problem, params, w)
    if not np.isfinite(val):
        raise OverflowError(
            f"energy overflow at beta={params.beta}, lam={params.lam}: "
            "the penalty weight is too large for the scale of this point"
        )
    return val


def grad_energy(problem: ProblemDef, params: EnergyParams, w) -> Array:
    """Gradient of the penalty energy at w."""
    _, grad = energy_and_grad(problem, params, w)
    return grad
