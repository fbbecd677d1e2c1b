"""Benchmark registry and transcription checks for the built-in problems."""
import dataclasses

import numpy as np
import pytest

from mpccflow import (
    EnergyParams,
    ProblemDef,
    ScalarField,
    benchmark_entries,
    benchmark_entry,
    energy_and_grad,
    get_problem,
    gradient_consistency,
    list_problems,
    mpcc_feasibility,
    register_problem,
)

NAMES = ["mpcc1", "mpcc3", "mpcc4", "mpcc5", "mpcc6"]


def test_registry_contents():
    assert list_problems() == NAMES
    for name in NAMES:
        p = get_problem(name)
        assert p.name == name
        assert p is get_problem(name)  # registry hands out one instance
    with pytest.raises(KeyError, match="nosuch"):
        get_problem("nosuch")


def test_register_replace_and_cleanup():
    custom = ProblemDef(
        name="custom1",
        dim=1,
        objective=ScalarField(lambda w: float(w[0] ** 2), lambda w: 2.0 * w),
    )
    register_problem(custom)
    try:
        assert get_problem("custom1") is custom
        assert "custom1" in list_problems()
        replacement = dataclasses.replace(custom, dim=1)
        register_problem(replacement)
        assert get_problem("custom1") is replacement
    finally:
        from mpccflow import suite

        suite._REGISTRY.pop("custom1", None)
    assert "custom1" not in list_problems()


def test_problem_shapes():
    expect = {
        "mpcc1": (2, 0, 0, 1),
        "mpcc3": (2, 2, 0, 1),
        "mpcc4": (3, 2, 0, 1),
        "mpcc5": (3, 2, 0, 1),
        "mpcc6": (5, 6, 0, 4),
    }
    for name, (dim, m, l, s) in expect.items():
        p = get_problem(name)
        assert (p.dim, p.n_ineq, p.n_eq, p.n_pairs) == (dim, m, l, s)
        box = p.box()
        assert box.shape == (dim, 2)
        assert np.all(box[:, 0] < box[:, 1])
    assert np.array_equal(get_problem("mpcc6").box(), [[0.0, 10.0]] * 5)


def test_objective_hand_values():
    assert get_problem("mpcc1").objective(np.zeros(2)) == 0.0
    assert get_problem("mpcc1").objective(np.array([1.0, -1.0])) == 4.0
    assert get_problem("mpcc3").objective(np.zeros(2)) == pytest.approx(1.25)
    assert get_problem("mpcc4").objective(np.ones(3)) == pytest.approx(10.25)
    assert get_problem("mpcc5").objective(np.array([0.0, 0.0, 1.0])) == pytest.approx(1.0)


def test_feasibility_hand_points():
    p = get_problem("mpcc1")
    assert mpcc_feasibility(p, np.zeros(2), 1e-6).is_feasible
    assert not mpcc_feasibility(p, np.ones(2), 1e-6).is_feasible


@pytest.mark.parametrize("name", NAMES)
def test_declared_gradients_match_finite_differences(name):
    err = gradient_consistency(get_problem(name), n_points=200, seed=0)
    assert err <= 1e-6, f"{name}: gradient mismatch {err:.3e}"


@pytest.mark.parametrize("name", NAMES)
def test_fused_energy_matches_generic(name):
    p = get_problem(name)
    if p.fused_energy is None:
        pytest.skip("no fused kernel")
    pg = dataclasses.replace(p, fused_energy=None)
    rng = np.random.default_rng(9)
    box = p.box()
    params = EnergyParams(beta=1e-2, lam=1e3)
    for _ in range(25):
        w = box[:, 0] + rng.random(p.dim) * (box[:, 1] - box[:, 0])
        ef, gf = energy_and_grad(p, params, w)
        eg, gg = energy_and_grad(pg, params, w)
        scale = max(1.0, abs(eg))
        assert abs(ef - eg) <= 1e-12 * scale
        assert np.max(np.abs(gf - gg)) <= 1e-12 * max(1.0, np.max(np.abs(gg)))


def test_benchmark_entries_cover_all_problems():
    entries = benchmark_entries()
    assert [e.problem.name for e in entries] == NAMES
    for e in entries:
        assert len(e.run_settings) >= 1
        for rs in e.run_settings:
            assert rs.beta > 0.0 and rs.lam > 0.0
            if rs.x0 is not None:
                assert len(rs.x0) == e.problem.dim
        assert len(e.reference_rows) >= 1
        for row in e.reference_rows:
            assert len(row.point) == e.problem.dim
            assert isinstance(row.source, str) and row.source
    with pytest.raises(KeyError):
        benchmark_entry("nosuch")
    assert benchmark_entry("mpcc4").problem is get_problem("mpcc4")


def test_reference_rows_internally_consistent():
    # each tabulated value must match the objective at its tabulated point
    for e in benchmark_entries():
        for row in e.reference_rows:
            got = e.problem.objective(np.asarray(row.point, dtype=float))
            assert abs(got - row.value) <= 1e-3, (e.problem.name, row.source)


def test_reference_solution_points_near_feasible():
    # sweep rows sit on the relaxed boundary by design; solution rows must be
    # feasible to roughly the resolution they were reported at
    for e in benchmark_entries():
        for row in e.reference_rows:
            if "sweep" in row.source:
                continue
            feas = mpcc_feasibility(e.problem, np.asarray(row.point, dtype=float), 1e-6)
            assert feas.max_violation <= 5e-3, (e.problem.name, row.source)


def test_mpcc6_comparison_value():
    e = benchmark_entry("mpcc6")
    assert e.comparison_values["outrata"] == pytest.approx(3.2077)
    # every tabulated run beats that objective
    for row in e.reference_rows:
        assert row.value < e.comparison_values["outrata"]
