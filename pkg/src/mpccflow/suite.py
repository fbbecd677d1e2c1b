"""Built-in benchmark problems and their published reference results.

Each problem ships two equivalent evaluation forms: plain numpy callables on
the ProblemDef (used by the generic code paths and all cross-checks) and a
numba kernel computing the penalty energy and gradient in one fused pass
(used by the compiled integration loop). Tests assert the two forms agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from .model import ProblemDef, ScalarField

__all__ = [
    "ReferenceRow",
    "RunSetting",
    "BenchmarkEntry",
    "mpcc1",
    "mpcc3",
    "mpcc4",
    "mpcc5",
    "mpcc6",
    "register_problem",
    "get_problem",
    "list_problems",
    "benchmark_entries",
    "benchmark_entry",
]


@dataclass(frozen=True)
class ReferenceRow:
    """Published (solution, objective value) pair with its method of origin."""

    point: tuple
    value: float
    source: str


@dataclass(frozen=True)
class RunSetting:
    """Parameter combination behind a published result; x0=None means 10 random starts."""

    beta: float
    lam: float
    x0: Optional[tuple] = None


@dataclass(frozen=True)
class BenchmarkEntry:
    """One suite problem with the settings and reference rows used for reporting."""

    problem: ProblemDef
    run_settings: tuple
    reference_rows: tuple
    comparison_values: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# fused energy kernels: kernel(w, beta, lam, grad_out) -> E
#
# Every kernel accumulates f plus 0.5*lam*sum(row+^2) over the stacked rows
# [g, -G, -H, B] and writes grad E into grad_out. The relaxed row B_k only
# contributes where its product branch is positive, so the second phi branch
# never appears here.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _kernel_mpcc1(w, beta, lam, g):
    w1, w2 = w[0], w[1]
    d = w1 - w2
    g[0] = 2.0 * d
    g[1] = -2.0 * d
    pen = 0.0
    if w1 < 0.0:
        pen += w1 * w1
        g[0] += lam * w1
    if w2 < 0.0:
        pen += w2 * w2
        g[1] += lam * w2
    p = w1 - beta
    q = w2 - beta
    if p + q >= 0.0 and p * q > 0.0:
        b = p * q
        pen += b * b
        g[0] += lam * b * q
        g[1] += lam * b * p
    return d * d + 0.5 * lam * pen


@njit(cache=True)
def _kernel_mpcc3(w, beta, lam, g):
    w1, w2 = w[0], w[1]
    g[0] = 2.0 * (w1 - 1.0)
    g[1] = 2.0 * (w2 - 0.5)
    f = (w1 - 1.0) ** 2 + (w2 - 0.5) ** 2
    pen = 0.0
    c = w1 - 1.0
    if c > 0.0:
        pen += c * c
        g[0] += lam * c
    if w2 < 0.0:
        pen += w2 * w2
        g[1] += lam * w2
    Gv = 2.0 * w1 + w2
    Hv = 2.0 - (w1 - 1.0) ** 2 - (w2 - 1.0) ** 2
    hx = -2.0 * (w1 - 1.0)
    hy = -2.0 * (w2 - 1.0)
    if Gv < 0.0:
        pen += Gv * Gv
        g[0] += lam * Gv * 2.0
        g[1] += lam * Gv
    if Hv < 0.0:
        pen += Hv * Hv
        g[0] += lam * Hv * hx
        g[1] += lam * Hv * hy
    p = Gv - beta
    q = Hv - beta
    if p + q >= 0.0 and p * q > 0.0:
        b = p * q
        pen += b * b
        g[0] += lam * b * (2.0 * q + p * hx)
        g[1] += lam * b * (q + p * hy)
    return f + 0.5 * lam * pen


@njit(cache=True)
def _pen_exp_pair(w1, w2, w3, beta, lam, g):
    # shared constraint block of mpcc4/mpcc5:
    # g rows -w1, -w3; pair G = w1, H = -exp(w1) + w2 - exp(w3).
    pen = 0.0
    if w1 < 0.0:
        # bound row and -G row coincide, both contribute
        pen += 2.0 * w1 * w1
        g[0] += 2.0 * lam * w1
    if w3 < 0.0:
        pen += w3 * w3
        g[2] += lam * w3
    e1 = np.exp(w1)
    e3 = np.exp(w3)
    Hv = -e1 + w2 - e3
    if Hv < 0.0:
        pen += Hv * Hv
        g[0] += lam * Hv * (-e1)
        g[1] += lam * Hv
        g[2] += lam * Hv * (-e3)
    p = w1 - beta
    q = Hv - beta
    if p + q >= 0.0 and p * q > 0.0:
        b = p * q
        pen += b * b
        g[0] += lam * b * (q + p * (-e1))
        g[1] += lam * b * p
        g[2] += lam * b * (p * (-e3))
    return pen


@njit(cache=True)
def _kernel_mpcc4(w, beta, lam, g):
    w1, w2, w3 = w[0], w[1], w[2]
    f = (w1 + 1.0) ** 2 + (w2 - 2.5) ** 2 + (w3 + 1.0) ** 2
    g[0] = 2.0 * (w1 + 1.0)
    g[1] = 2.0 * (w2 - 2.5)
    g[2] = 2.0 * (w3 + 1.0)
    return f + 0.5 * lam * _pen_exp_pair(w1, w2, w3, beta, lam, g)


@njit(cache=True)
def _kernel_mpcc5(w, beta, lam, g):
    w1, w2, w3 = w[0], w[1], w[2]
    f = (w1 + 1.0) ** 2 + w2 * w2 + 10.0 * (w3 - 1.0) ** 2
    g[0] = 2.0 * (w1 + 1.0)
    g[1] = 2.0 * w2
    g[2] = 20.0 * (w3 - 1.0)
    return f + 0.5 * lam * _pen_exp_pair(w1, w2, w3, beta, lam, g)


@njit(cache=True)
def _kernel_mpcc6(w, beta, lam, g):
    w1, w2, w3, w4, w5 = w[0], w[1], w[2], w[3], w[4]
    f = 0.5 * ((w1 - 3.0) ** 2 + (w2 - 4.0) ** 2)
    g[0] = w1 - 3.0
    g[1] = w2 - 4.0
    g[2] = 0.0
    g[3] = 0.0
    g[4] = 0.0
    pen = 0.0
    # bound rows: -w1..-w4, -w5, w5 - 10
    if w1 < 0.0:
        pen += w1 * w1
        g[0] += lam * w1
    if w2 < 0.0:
        pen += w2 * w2
        g[1] += lam * w2
    if w3 < 0.0:
        pen += w3 * w3
        g[2] += lam * w3
    if w4 < 0.0:
        pen += w4 * w4
        g[3] += lam * w4
    if w5 < 0.0:
        pen += w5 * w5
        g[4] += lam * w5
    c = w5 - 10.0
    if c > 0.0:
        pen += c * c
        g[4] += lam * c

    # pair (w1, c1)
    c1 = (1.0 + 0.2 * w5) * w1 - (1.0 + 1.333 * w5) - 0.333 * w3 + 2.0 * w1 * w4
    da = 1.0 + 0.2 * w5 + 2.0 * w4
    dd = 2.0 * w1
    de = 0.2 * w1 - 1.333
    if w1 < 0.0:
        pen += w1 * w1
        g[0] += lam * w1
    if c1 < 0.0:
        pen += c1 * c1
        g[0] += lam * c1 * da
        g[2] += lam * c1 * (-0.333)
        g[3] += lam * c1 * dd
        g[4] += lam * c1 * de
    p = w1 - beta
    q = c1 - beta
    if p + q >= 0.0 and p * q > 0.0:
        b = p * q
        pen += b * b
        g[0] += lam * b * (q + p * da)
        g[2] += lam * b * (p * (-0.333))
        g[3] += lam * b * (p * dd)
        g[4] += lam * b * (p * de)

    # pair (w2, c2)
    c2 = (1.0 + 0.1 * w5) * w2 - w5 + w3 + 2.0 * w2 * w4
    da = 1.0 + 0.1 * w5 + 2.0 * w4
    dd = 2.0 * w2
    de = 0.1 * w2 - 1.0
    if w2 < 0.0:
        pen += w2 * w2
        g[1] += lam * w2
    if c2 < 0.0:
        pen += c2 * c2
        g[1] += lam * c2 * da
        g[2] += lam * c2
        g[3] += lam * c2 * dd
        g[4] += lam * c2 * de
    p = w2 - beta
    q = c2 - beta
    if p + q >= 0.0 and p * q > 0.0:
        b = p * q
        pen += b * b
        g[1] += lam * b * (q + p * da)
        g[2] += lam * b * p
        g[3] += lam * b * (p * dd)
        g[4] += lam * b * (p * de)

    # pair (w3, c3)
    c3 = 0.333 * w1 - w2 + 1.0 - 0.1 * w5
    if w3 < 0.0:
        pen += w3 * w3
        g[2] += lam * w3
    if c3 < 0.0:
        pen += c3 * c3
        g[0] += lam * c3 * 0.333
        g[1] += lam * c3 * (-1.0)
        g[4] += lam * c3 * (-0.1)
    p = w3 - beta
    q = c3 - beta
    if p + q >= 0.0 and p * q > 0.0:
        b = p * q
        pen += b * b
        g[2] += lam * b * q
        g[0] += lam * b * (p * 0.333)
        g[1] += lam * b * (p * (-1.0))
        g[4] += lam * b * (p * (-0.1))

    # pair (w4, c4)
    c4 = 9.0 + 0.1 * w5 - w1 * w1 - w2 * w2
    if w4 < 0.0:
        pen += w4 * w4
        g[3] += lam * w4
    if c4 < 0.0:
        pen += c4 * c4
        g[0] += lam * c4 * (-2.0 * w1)
        g[1] += lam * c4 * (-2.0 * w2)
        g[4] += lam * c4 * 0.1
    p = w4 - beta
    q = c4 - beta
    if p + q >= 0.0 and p * q > 0.0:
        b = p * q
        pen += b * b
        g[3] += lam * b * q
        g[0] += lam * b * (p * (-2.0 * w1))
        g[1] += lam * b * (p * (-2.0 * w2))
        g[4] += lam * b * (p * 0.1)

    return f + 0.5 * lam * pen


# ---------------------------------------------------------------------------
# problem constructors
# ---------------------------------------------------------------------------


def _box(lo, hi, n):
    return np.column_stack([np.full(n, float(lo)), np.full(n, float(hi))])


def mpcc1() -> ProblemDef:
    """min (w1 - w2)^2 subject to 0 <= w1 complementary to w2 >= 0."""
    return ProblemDef(
        name="mpcc1",
        dim=2,
        objective=ScalarField(
            lambda w: (w[0] - w[1]) ** 2,
            lambda w: np.array([2.0 * (w[0] - w[1]), -2.0 * (w[0] - w[1])]),
        ),
        comp_pairs=(
            (
                ScalarField(lambda w: w[0], lambda w: np.array([1.0, 0.0])),
                ScalarField(lambda w: w[1], lambda w: np.array([0.0, 1.0])),
            ),
        ),
        box_hint=_box(-5, 5, 2),
        reference=((0.0, 0.0), 0.0),
        fused_energy=_kernel_mpcc1,
    )


def mpcc3() -> ProblemDef:
    """min (w1-1)^2 + (w2-1/2)^2 with w1 <= 1, w2 >= 0 and one quadratic pair."""
    return ProblemDef(
        name="mpcc3",
        dim=2,
        objective=ScalarField(
            lambda w: (w[0] - 1.0) ** 2 + (w[1] - 0.5) ** 2,
            lambda w: np.array([2.0 * (w[0] - 1.0), 2.0 * (w[1] - 0.5)]),
        ),
        ineq=(
            ScalarField(lambda w: w[0] - 1.0, lambda w: np.array([1.0, 0.0])),
            ScalarField(lambda w: -w[1], lambda w: np.array([0.0, -1.0])),
        ),
        comp_pairs=(
            (
                ScalarField(lambda w: 2.0 * w[0] + w[1], lambda w: np.array([2.0, 1.0])),
                ScalarField(
                    lambda w: 2.0 - (w[0] - 1.0) ** 2 - (w[1] - 1.0) ** 2,
                    lambda w: np.array([-2.0 * (w[0] - 1.0), -2.0 * (w[1] - 1.0)]),
                ),
            ),
        ),
        box_hint=_box(-5, 5, 2),
        reference=((0.0, 0.0), 1.25),
        fused_energy=_kernel_mpcc3,
    )


def _exp_pair_fields():
    G = ScalarField(lambda w: w[0], lambda w: np.array([1.0, 0.0, 0.0]))
    H = ScalarField(
        lambda w: -np.exp(w[0]) + w[1] - np.exp(w[2]),
        lambda w: np.array([-np.exp(w[0]), 1.0, -np.exp(w[2])]),
    )
    return (
        (
            ScalarField(lambda w: -w[0], lambda w: np.array([-1.0, 0.0, 0.0])),
            ScalarField(lambda w: -w[2], lambda w: np.array([0.0, 0.0, -1.0])),
        ),
        ((G, H),),
    )


def mpcc4() -> ProblemDef:
    """min (w1+1)^2 + (w2-5/2)^2 + (w3+1)^2 with w1, w3 >= 0 and one exponential pair."""
    ineq, pairs = _exp_pair_fields()
    return ProblemDef(
        name="mpcc4",
        dim=3,
        objective=ScalarField(
            lambda w: (w[0] + 1.0) ** 2 + (w[1] - 2.5) ** 2 + (w[2] + 1.0) ** 2,
            lambda w: np.array([2.0 * (w[0] + 1.0), 2.0 * (w[1] - 2.5), 2.0 * (w[2] + 1.0)]),
        ),
        ineq=ineq,
        comp_pairs=pairs,
        box_hint=_box(-5, 5, 3),
        reference=((0.0, 2.5, 0.0), 2.0),
        fused_energy=_kernel_mpcc4,
    )


def mpcc5() -> ProblemDef:
    """min (w1+1)^2 + w2^2 + 10(w3-1)^2 with w1, w3 >= 0 and one exponential pair."""
    ineq, pairs = _exp_pair_fields()
    return ProblemDef(
        name="mpcc5",
        dim=3,
        objective=ScalarField(
            lambda w: (w[0] + 1.0) ** 2 + w[1] ** 2 + 10.0 * (w[2] - 1.0) ** 2,
            lambda w: np.array([2.0 * (w[0] + 1.0), 2.0 * w[1], 20.0 * (w[2] - 1.0)]),
        ),
        ineq=ineq,
        comp_pairs=pairs,
        box_hint=_box(-5, 5, 3),
        reference=((0.0, 2.7102, 0.5366), 10.4923),
        fused_energy=_kernel_mpcc5,
    )


def mpcc6() -> ProblemDef:
    """Five-variable design problem with four complementarity pairs and box bounds."""

    def c1(w):
        return (1.0 + 0.2 * w[4]) * w[0] - (1.0 + 1.333 * w[4]) - 0.333 * w[2] + 2.0 * w[0] * w[3]

    def c1_grad(w):
        return np.array(
            [1.0 + 0.2 * w[4] + 2.0 * w[3], 0.0, -0.333, 2.0 * w[0], 0.2 * w[0] - 1.333]
        )

    def c2(w):
        return (1.0 + 0.1 * w[4]) * w[1] - w[4] + w[2] + 2.0 * w[1] * w[3]

    def c2_grad(w):
        return np.array([0.0, 1.0 + 0.1 * w[4] + 2.0 * w[3], 1.0, 2.0 * w[1], 0.1 * w[1] - 1.0])

    def c3(w):
        return 0.333 * w[0] - w[1] + 1.0 - 0.1 * w[4]

    def c3_grad(w):
        return np.array([0.333, -1.0, 0.0, 0.0, -0.1])

    def c4(w):
        return 9.0 + 0.1 * w[4] - w[0] ** 2 - w[1] ** 2

    def c4_grad(w):
        return np.array([-2.0 * w[0], -2.0 * w[1], 0.0, 0.0, 0.1])

    def coord(i):
        def grad(w, i=i):
            e = np.zeros(5)
            e[i] = 1.0
            return e

        return ScalarField(lambda w, i=i: w[i], grad)

    def neg_coord(i):
        def grad(w, i=i):
            e = np.zeros(5)
            e[i] = -1.0
            return e

        return ScalarField(lambda w, i=i: -w[i], grad)

    return ProblemDef(
        name="mpcc6",
        dim=5,
        objective=ScalarField(
            lambda w: 0.5 * ((w[0] - 3.0) ** 2 + (w[1] - 4.0) ** 2),
            lambda w: np.array([w[0] - 3.0, w[1] - 4.0, 0.0, 0.0, 0.0]),
        ),
        ineq=(
            neg_coord(0),
            neg_coord(1),
            neg_coord(2),
            neg_coord(3),
            neg_coord(4),
            ScalarField(lambda w: w[4] - 10.0, lambda w: np.array([0.0, 0.0, 0.0, 0.0, 1.0])),
        ),
        comp_pairs=(
            (coord(0), ScalarField(c1, c1_grad)),
            (coord(1), ScalarField(c2, c2_grad)),
            (coord(2), ScalarField(c3, c3_grad)),
            (coord(3), ScalarField(c4, c4_grad)),
        ),
        box_hint=_box(0, 10, 5),
        reference=((2.5528, 1.6409, 0.0, 0.0329, 2.0921), 2.8827),
        fused_energy=_kernel_mpcc6,
    )


# ---------------------------------------------------------------------------
# registry and benchmark metadata
# ---------------------------------------------------------------------------

_REGISTRY: dict = {}


def register_problem(problem: ProblemDef) -> None:
    """Add a problem to the registry; re-registering a name replaces it."""
    _REGISTRY[problem.name] = problem


def get_problem(name: str) -> ProblemDef:
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise KeyError(f"unknown problem {name!r}; registered: {known}") from None


def list_problems() -> list:
    return list(_REGISTRY)


for _ctor in (mpcc1, mpcc3, mpcc4, mpcc5, mpcc6):
    register_problem(_ctor())
del _ctor


def benchmark_entries() -> tuple:
    """Benchmark metadata for every built-in problem."""
    xs = lambda *v: tuple(float(x) for x in v)  # noqa: E731
    entries = (
        BenchmarkEntry(
            problem=get_problem("mpcc1"),
            run_settings=(
                RunSetting(beta=1e-4, lam=1e6),
                RunSetting(beta=1e-1, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-2, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-3, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-4, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-3, lam=1e1, x0=(1.5, 1.5)),
                RunSetting(beta=1e-3, lam=1e2, x0=(1.5, 1.5)),
                RunSetting(beta=1e-3, lam=1e3, x0=(1.5, 1.5)),
                RunSetting(beta=1e-3, lam=1e4, x0=(1.5, 1.5)),
                RunSetting(beta=1e-3, lam=1e5, x0=(1.5, 1.5)),
            ),
            reference_rows=(
                ReferenceRow(xs(0, 0), 0.0, "exact solution"),
                ReferenceRow(
                    xs(0.100050000140542, 0.100050000140542), 0.0, "beta sweep, beta=0.1"
                ),
                ReferenceRow(
                    xs(0.0100500000194718, 0.0100500000194718), 0.0, "beta sweep, beta=0.01"
                ),
                ReferenceRow(
                    xs(0.00105000001965199, 0.00105000001965199), 0.0, "beta sweep, beta=0.001"
                ),
                ReferenceRow(
                    xs(0.000150000019335945, 0.000150000019335945), 0.0, "beta sweep, beta=0.0001"
                ),
                ReferenceRow(
                    xs(0.0168105088432284, 0.0168105088432284), 0.0, "lambda sweep, lambda=10"
                ),
                ReferenceRow(
                    xs(0.00599997220798751, 0.00599997220798751), 0.0, "lambda sweep, lambda=100"
                ),
                ReferenceRow(
                    xs(0.00258113797276159, 0.00258113797276159), 0.0, "lambda sweep, lambda=1000"
                ),
                ReferenceRow(
                    xs(0.00149999999698513, 0.00149999999698513), 0.0, "lambda sweep, lambda=10000"
                ),
                ReferenceRow(
                    xs(0.00115811390460986, 0.00115811390460986), 0.0,
                    "lambda sweep, lambda=100000",
                ),
            ),
        ),
        BenchmarkEntry(
            problem=get_problem("mpcc3"),
            run_settings=(
                RunSetting(beta=1e-5, lam=1e6),
                RunSetting(beta=1e-1, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-2, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-3, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-4, lam=1e6, x0=(1.0, 1.0)),
                RunSetting(beta=1e-6, lam=1e2, x0=(1.0, 1.0)),
                RunSetting(beta=1e-6, lam=1e3, x0=(1.0, 1.0)),
                RunSetting(beta=1e-6, lam=1e4, x0=(1.0, 1.0)),
                RunSetting(beta=1e-6, lam=1e5, x0=(1.0, 1.0)),
                RunSetting(beta=1e-6, lam=1e6, x0=(1.0, 1.0)),
            ),
            reference_rows=(
                ReferenceRow(xs(0, 0), 1.25, "exact solution"),
                ReferenceRow(
                    xs(0.0547347728730422, -5.57362581295502e-07),
                    1.14352690697827,
                    "beta sweep, beta=0.1",
                ),
                ReferenceRow(
                    xs(0.00898313645704711, -4.95784188958737e-07),
                    1.23211491961095,
                    "beta sweep, beta=0.01",
                ),
                ReferenceRow(
                    xs(0.00447091291113772, -4.97282434599503e-07),
                    1.24107866052267,
                    "beta sweep, beta=0.001",
                ),
                ReferenceRow(
                    xs(0.00402025441315761, -4.97464725953594e-07),
                    1.2419761510842,
                    "beta sweep, beta=0.0001",
                ),
                ReferenceRow(
                    xs(0.0895849855530089, -0.00445364859562869),
                    1.08332898211196,
                    "lambda sweep, lambda=100",
                ),
                ReferenceRow(
                    xs(0.0401832807892819, -0.000475660458775592),
                    1.17172402118807,
                    "lambda sweep, lambda=1000",
                ),
                ReferenceRow(
                    xs(0.0184902830395593, -4.88662867458115e-05),
                    1.21341019316242,
                    "lambda sweep, lambda=10000",
                ),
                ReferenceRow(
                    xs(0.00856469689824011, -4.94705982203277e-06),
                    1.23294890732077,
                    "lambda sweep, lambda=100000",
                ),
                ReferenceRow(
                    xs(0.00397519417035708, -4.97510345691846e-07),
                    1.24206591133857,
                    "lambda sweep, lambda=1000000",
                ),
            ),
        ),
        BenchmarkEntry(
            problem=get_problem("mpcc4"),
            run_settings=(RunSetting(beta=1e-2, lam=1e6),),
            reference_rows=(
                ReferenceRow(xs(0, 2.5, 0), 2.0, "l1 penalty"),
                ReferenceRow(xs(0, 2.5, 0), 2.0, "lower-order penalty"),
                ReferenceRow(xs(-0.0001, 2.5, -0.0001), 1.9996, "quadratic penalty"),
                ReferenceRow(xs(-0.000002, 2.5, -0.000002), 1.99999, "gradient flow, 10 starts"),
            ),
        ),
        BenchmarkEntry(
            problem=get_problem("mpcc5"),
            run_settings=(RunSetting(beta=1e-2, lam=1e5),),
            reference_rows=(
                ReferenceRow(xs(0, 2.7102, 0.5366), 10.4923, "l1 penalty"),
                ReferenceRow(xs(0, 2.7091, 0.536), 10.4925, "lower-order penalty"),
                ReferenceRow(xs(0, 2.7111, 0.5372), 10.4924, "quadratic penalty"),
                ReferenceRow(
                    xs(-0.000074, 2.709987, 0.536561), 10.491639, "gradient flow, 10 starts"
                ),
            ),
        ),
        BenchmarkEntry(
            problem=get_problem("mpcc6"),
            run_settings=(RunSetting(beta=1e-5, lam=1e4),),
            reference_rows=(
                ReferenceRow(xs(2.5528, 1.6409, 0, 0.0329, 2.0921), 2.8827, "l1 penalty"),
                ReferenceRow(xs(2.5528, 1.6409, 0, 0.0329, 2.092), 2.8827, "l1 penalty"),
                ReferenceRow(xs(2.5528, 1.6409, 0, 0.0329, 2.092), 2.8827, "lower-order penalty"),
                ReferenceRow(xs(2.5528, 1.6409, 0, 0.0328, 2.092), 2.8827, "lower-order penalty"),
                ReferenceRow(xs(2.5528, 1.6409, 0, 0.0329, 2.092), 2.8827, "quadratic penalty"),
                ReferenceRow(
                    xs(2.552739, 1.640964, -0.000039, 0.032896, 2.092187),
                    2.88254,
                    "gradient flow, 10 starts",
                ),
            ),
            comparison_values={"outrata": 3.2077},
        ),
    )
    return entries


def benchmark_entry(name: str) -> BenchmarkEntry:
    for entry in benchmark_entries():
        if entry.problem.name == name:
            return entry
    raise KeyError(f"no benchmark entry for {name!r}")
