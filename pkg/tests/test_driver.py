"""Schedules, multiplier estimation, stationarity classes, and multi-start."""
import json
from types import SimpleNamespace

import numpy as np
import pytest

from mpccflow import (
    DEFAULT_BETAS,
    DEFAULT_LAMBDAS,
    FlowConfig,
    ProblemDef,
    ScalarField,
    Schedule,
    check_mpcc_licq,
    classify_indices,
    classify_stationarity,
    estimate_multipliers,
    get_problem,
    multi_start,
    nlp_beta_feasibility,
    report_to_json,
    sample_start,
    select_best,
    solve,
)


def test_schedule_validation():
    with pytest.raises(ValueError):
        Schedule(betas=())
    with pytest.raises(ValueError):
        Schedule(betas=(1e-1, 0.0))
    with pytest.raises(ValueError):
        Schedule(betas=(1e-2, 1e-1))
    with pytest.raises(ValueError):
        Schedule(lambdas=(1e3, 1e2))
    with pytest.raises(ValueError):
        Schedule(lambdas=(1e2, 1e2))


def test_schedule_stages_zip_padded():
    sch = Schedule(betas=(1e-1, 1e-2), lambdas=(1e2, 1e3, 1e4))
    assert sch.stages() == ((1e-1, 1e2), (1e-2, 1e3), (1e-2, 1e4))
    sch = Schedule(betas=(1e-1, 1e-2, 1e-3), lambdas=(1e2,))
    assert sch.stages() == ((1e-1, 1e2), (1e-2, 1e2), (1e-3, 1e2))
    default = Schedule()
    assert default.betas == DEFAULT_BETAS and default.lambdas == DEFAULT_LAMBDAS
    assert len(default.stages()) == 5
    assert default.stages()[-1] == (1e-4, 1e6)
    single = Schedule.single_stage(1e-2, 1e3)
    assert single.stages() == ((1e-2, 1e3),)


def test_solve_mpcc1_default_schedule():
    rep = solve(get_problem("mpcc1"), Schedule(), np.array([1.0, 1.0]))
    assert rep.final_objective <= 1e-10
    assert abs(rep.final_point[0] - 1.5e-4) <= 1e-4
    assert abs(rep.final_point[0] - rep.final_point[1]) <= 1e-6
    assert rep.terminal_reason in ("equilibrium", "stall")
    assert rep.stationarity == "S"
    assert rep.licq.ok
    assert len(rep.schedule_history) == 5
    assert [st.beta for st in rep.schedule_history] == [1e-1, 1e-2, 1e-3, 1e-4, 1e-4]
    assert [st.lam for st in rep.schedule_history] == [1e2, 1e3, 1e4, 1e5, 1e6]
    assert rep.trajectory is None and rep.wallclock > 0.0


def test_solve_from_rest_point():
    rep = solve(get_problem("mpcc1"), Schedule(), np.zeros(2))
    assert np.array_equal(rep.final_point, [0.0, 0.0])
    assert all(st.terminal_reason == "equilibrium" for st in rep.schedule_history)
    assert all(st.n_accepted == 0 for st in rep.schedule_history)


def test_solve_aborts_after_nonfinite_stage():
    p = ProblemDef(
        name="runaway",
        dim=1,
        objective=ScalarField(lambda w: -float(np.exp(w[0])), lambda w: -np.exp(w)),
    )
    rep = solve(p, Schedule(), np.array([1.0]), FlowConfig(t_end=10.0, grad_tol=1e-300))
    assert rep.terminal_reason == "nonfinite"
    assert len(rep.schedule_history) == 1
    assert rep.stationarity == "none"


@pytest.mark.parametrize("name,w0", [("mpcc1", (1.0, 1.0)), ("mpcc3", (1.0, 1.0))])
def test_stage_nlp_violation_decreases(name, w0):
    p = get_problem(name)
    rep = solve(p, Schedule(), np.array(w0, dtype=float))
    viols = [
        nlp_beta_feasibility(p, st.point, st.beta).max_violation
        for st in rep.schedule_history
    ]
    # tightening the penalty must not lose NLP(beta) feasibility
    for a, b in zip(viols, viols[1:]):
        assert b <= a * 1.01 + 1e-12, viols


def test_nlp_beta_feasibility_values():
    p = get_problem("mpcc1")
    # pq branch of the relaxed row: phi(0.1, 0.2) = 0.02 above the bound
    rec = nlp_beta_feasibility(p, np.array([0.2, 0.3]), beta=0.1)
    assert rec.max_violation == pytest.approx(0.02)
    assert not rec.is_feasible
    # inside the relaxed region: everything holds
    rec = nlp_beta_feasibility(p, np.array([0.05, 0.2]), beta=0.1)
    assert rec.max_violation == 0.0 and rec.is_feasible


def test_sample_start_deterministic_and_in_box():
    p = get_problem("mpcc6")
    a = sample_start(p, 7, 3)
    b = sample_start(p, 7, 3)
    assert np.array_equal(a, b)
    assert a.shape == (5,)
    box = p.box()
    assert np.all(a >= box[:, 0]) and np.all(a <= box[:, 1])
    draws = np.array([sample_start(p, 7, i) for i in range(6)])
    assert len({tuple(row) for row in draws}) == 6
    assert not np.array_equal(sample_start(p, 8, 3), a)


def test_multi_start_deterministic():
    p = get_problem("mpcc1")
    r1 = multi_start(p, Schedule(), 3, root_seed=5)
    r2 = multi_start(p, Schedule(), 3, root_seed=5)
    assert r1.best_index == r2.best_index
    for a, b in zip(r1.reports, r2.reports):
        assert a.to_dict() == b.to_dict()
    assert r1.best is r1.reports[r1.best_index]


def test_multi_start_single_matches_solve():
    p = get_problem("mpcc1")
    res = multi_start(p, Schedule(), 1, root_seed=11)
    direct = solve(p, Schedule(), sample_start(p, 11, 0), seed=11, start_index=0)
    assert res.reports[0].to_dict() == direct.to_dict()
    with pytest.raises(ValueError):
        multi_start(p, Schedule(), 0, root_seed=1)


def test_select_best_rules():
    def fake(viol, obj):
        return SimpleNamespace(
            mpcc_feas=SimpleNamespace(max_violation=viol), final_objective=obj
        )

    reports = [fake(0.0, 3.0), fake(0.0, 1.0), fake(0.0, 1.0), fake(1.0, -5.0)]
    assert select_best(reports, feasible_tol=1e-6) == 1  # ties go to lower index
    assert select_best([fake(1.0, 0.0)], feasible_tol=1e-6) is None
    assert select_best([], feasible_tol=1e-6) is None
    assert select_best(reports, feasible_tol=2.0) == 3


def unconstrained(fn, grad, dim=1, name="toy"):
    return ProblemDef(name=name, dim=dim, objective=ScalarField(fn, grad))


def test_multipliers_single_inequality_exact():
    # f=(w-1)^2 pushed against g: w <= 0; KKT multiplier mu = 2
    p = ProblemDef(
        name="wall",
        dim=1,
        objective=ScalarField(lambda w: float((w[0] - 1.0) ** 2), lambda w: 2.0 * (w - 1.0)),
        ineq=(ScalarField(lambda w: float(w[0]), lambda w: np.ones(1)),),
    )
    est = estimate_multipliers(p, np.zeros(1))
    assert est.mu[0] == pytest.approx(2.0, abs=1e-12)
    assert est.residual == pytest.approx(0.0, abs=1e-12)
    assert not est.rank_deficient


def test_multipliers_nonnegativity_clamp():
    # f=(w+1)^2 pulls away from g: w <= 0; best nonnegative mu is 0, residual 2
    p = ProblemDef(
        name="slack",
        dim=1,
        objective=ScalarField(lambda w: float((w[0] + 1.0) ** 2), lambda w: 2.0 * (w + 1.0)),
        ineq=(ScalarField(lambda w: float(w[0]), lambda w: np.ones(1)),),
    )
    est = estimate_multipliers(p, np.zeros(1))
    assert est.mu[0] == 0.0
    assert est.residual == pytest.approx(2.0, abs=1e-12)


def test_multipliers_biactive_pair():
    # f=(w1-a)^2+(w2-b)^2 with pair (w1,w2) at the origin: eta=-2a, zeta=-2b
    a, b = 1.5, 0.5
    p = ProblemDef(
        name="corner",
        dim=2,
        objective=ScalarField(
            lambda w: float((w[0] - a) ** 2 + (w[1] - b) ** 2),
            lambda w: 2.0 * (w - np.array([a, b])),
        ),
        comp_pairs=(
            (
                ScalarField(lambda w: float(w[0]), lambda w: np.array([1.0, 0.0])),
                ScalarField(lambda w: float(w[1]), lambda w: np.array([0.0, 1.0])),
            ),
        ),
    )
    est = estimate_multipliers(p, np.zeros(2))
    assert est.eta[0] == pytest.approx(-2.0 * a, abs=1e-12)
    assert est.zeta[0] == pytest.approx(-2.0 * b, abs=1e-12)
    assert est.residual == pytest.approx(0.0, abs=1e-12)
    sets = classify_indices(p, np.zeros(2), 1e-6)
    assert classify_stationarity(sets, est.eta, est.zeta) == "C"


def test_multipliers_dependent_columns_pinned():
    # grad g coincides with grad h: the nonneg column carries no new direction,
    # so it is pinned at 0 and the free block absorbs the gradient exactly
    p = ProblemDef(
        name="dup",
        dim=2,
        objective=ScalarField(lambda w: float(w[0]), lambda w: np.array([1.0, 0.0])),
        ineq=(ScalarField(lambda w: float(w[0]), lambda w: np.array([1.0, 0.0])),),
        eq=(ScalarField(lambda w: float(w[0]), lambda w: np.array([1.0, 0.0])),),
    )
    est = estimate_multipliers(p, np.zeros(2))
    assert est.rank_deficient
    assert est.mu[0] == 0.0
    assert est.xi[0] == pytest.approx(-1.0, abs=1e-12)
    assert est.residual == pytest.approx(0.0, abs=1e-10)
    assert np.all(np.abs(est.mu) < 1e6) and np.all(np.abs(est.xi) < 1e6)


def test_multipliers_unconstrained_and_gate():
    p = unconstrained(lambda w: float((w[0] - 2.0) ** 2), lambda w: 2.0 * (w - 2.0))
    est = estimate_multipliers(p, np.array([5.0]))
    assert est.mu.size == 0 and est.eta.size == 0
    assert est.residual == pytest.approx(6.0)
    with pytest.raises(ValueError):
        estimate_multipliers(get_problem("mpcc1"), np.array([1.0, 1.0]))


def test_multipliers_mpcc1_origin():
    est = estimate_multipliers(get_problem("mpcc1"), np.zeros(2))
    assert est.residual == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(est.eta, 0.0) and np.allclose(est.zeta, 0.0)


def test_multipliers_mpcc3_solution():
    p = get_problem("mpcc3")
    rep = solve(p, Schedule(), np.array([1.0, 1.0]))
    assert rep.final_objective == pytest.approx(1.24197616, abs=5e-4)
    est = estimate_multipliers(p, rep.final_point, tol=0.02)
    sets = classify_indices(p, rep.final_point, 0.02)
    assert list(sets.biactive) == [0]
    assert est.residual <= 1e-6
    assert est.eta[0] == pytest.approx(-0.992, abs=0.05)
    assert abs(est.zeta[0]) <= 0.05
    # one strictly negative biactive multiplier: M-stationary, not S
    assert classify_stationarity(sets, est.eta, est.zeta, tol=0.02) == "M"


def _sets(biactive):
    return SimpleNamespace(biactive=tuple(biactive))


def test_classify_examples():
    assert classify_stationarity(_sets([]), np.zeros(0), np.zeros(0)) == "S"
    assert classify_stationarity(_sets([0]), [1.0], [-1.0]) == "W"
    assert classify_stationarity(_sets([0]), [2.0], [0.0]) == "S"
    assert classify_stationarity(_sets([0]), [-1.0], [-1.0]) == "C"
    assert classify_stationarity(_sets([0]), [0.0], [-5.0]) == "M"
    assert classify_stationarity(_sets([0, 1]), [1.0, -1.0], [1.0, -1.0]) == "C"
    assert classify_stationarity(_sets([0, 1]), [1.0, 0.0], [1.0, -1.0]) == "M"
    # sub-tol values count as zero
    assert classify_stationarity(_sets([0]), [5e-7], [5.0]) == "S"
    # residual gate, NaN-safe
    assert classify_stationarity(_sets([]), [], [], residual=2e-6) == "none"
    assert classify_stationarity(_sets([]), [], [], residual=float("nan")) == "none"


def test_classify_chain_property():
    rng = np.random.default_rng(2024)
    tol = 1e-6
    order = {"S": 3, "M": 2, "C": 1, "W": 0}
    grid = np.array([-5.0, -2 * tol, -tol / 2, 0.0, tol / 2, 2 * tol, 5.0])
    for _ in range(2000):
        s = int(rng.integers(1, 5))
        eta = rng.choice(grid, size=s)
        zeta = rng.choice(grid, size=s)
        got = classify_stationarity(_sets(range(s)), eta, zeta, tol=tol)
        sg = [1 if e > tol else (-1 if e < -tol else 0) for e in eta]
        zg = [1 if z > tol else (-1 if z < -tol else 0) for z in zeta]
        p_s = all(a >= 0 and b >= 0 for a, b in zip(sg, zg))
        p_m = all((a > 0 and b > 0) or a == 0 or b == 0 for a, b in zip(sg, zg))
        p_c = all(a * b >= 0 for a, b in zip(sg, zg))
        # the definitions must nest: S => M => C
        assert (not p_s or p_m) and (not p_m or p_c)
        strongest = "S" if p_s else "M" if p_m else "C" if p_c else "W"
        assert got == strongest, (eta, zeta, got, strongest)


def test_licq_cases():
    rec = check_mpcc_licq(get_problem("mpcc1"), np.zeros(2))
    assert rec.ok and rec.rank == 2 and rec.count == 2

    p = unconstrained(lambda w: float(w[0] ** 2), lambda w: 2.0 * w)
    rec = check_mpcc_licq(p, np.array([3.0]))
    assert rec.ok and rec.count == 0

    # same gradient twice can never have full column rank
    g = ScalarField(lambda w: float(w[0]), lambda w: np.array([1.0, 0.0]))
    p = ProblemDef(name="dup2", dim=2,
                   objective=ScalarField(lambda w: 0.0, lambda w: np.zeros(2)),
                   ineq=(g, g))
    rec = check_mpcc_licq(p, np.zeros(2))
    assert not rec.ok and rec.rank == 1 and rec.count == 2

    # more active gradients than dimensions
    g2 = ScalarField(lambda w: float(w[1]), lambda w: np.array([0.0, 1.0]))
    g3 = ScalarField(lambda w: float(w[0] + w[1]), lambda w: np.array([1.0, 1.0]))
    p = ProblemDef(name="over", dim=2,
                   objective=ScalarField(lambda w: 0.0, lambda w: np.zeros(2)),
                   ineq=(g, g2, g3))
    rec = check_mpcc_licq(p, np.zeros(2))
    assert not rec.ok and rec.count == 3 and rec.rank == 2


def test_report_serialization_stable():
    p = get_problem("mpcc1")
    rep = solve(p, Schedule(), np.array([1.0, 1.0]), seed=0, start_index=0)
    d = rep.to_dict()
    assert "wallclock" not in d and "trajectory" not in d
    assert d["licq_ok"] == rep.licq.ok
    assert len(d["schedule_history"]) == 5
    text = report_to_json(rep)
    again = solve(p, Schedule(), np.array([1.0, 1.0]), seed=0, start_index=0)
    assert report_to_json(again) == text
    json.loads(text)  # valid JSON
