"""Problem containers, feasibility measure, and index classification."""
import numpy as np
import pytest

from mpccflow import (
    ProblemDef,
    ScalarField,
    classify_indices,
    evaluate,
    finite_difference_gradient,
    get_problem,
    mpcc_feasibility,
)


def test_finite_difference_gradient_cubic():
    fd = finite_difference_gradient(lambda w: w[0] ** 3 + 2.0 * w[1], np.array([1.0, 2.0]))
    assert np.allclose(fd, [3.0, 2.0], atol=1e-9)


def test_scalar_field_fallback_matches_analytic():
    f = ScalarField(lambda w: float(w[0] ** 2 * w[1]))
    g = ScalarField(lambda w: float(w[0] ** 2 * w[1]), lambda w: np.array([2 * w[0] * w[1], w[0] ** 2]))
    w = np.array([1.3, -0.7])
    assert np.allclose(f.gradient(w), g.gradient(w), atol=1e-8)
    assert f(w) == g(w)


def test_check_point_shapes():
    p = get_problem("mpcc1")
    assert p.check_point([1, 2]).dtype == float
    with pytest.raises(ValueError):
        p.check_point([1.0, 2.0, 3.0])
    one_d = ProblemDef(name="line", dim=1, objective=ScalarField(lambda w: float(w[0])))
    assert np.array_equal(one_d.check_point(3.0), [3.0])


def test_box_default_and_hint():
    p = ProblemDef(name="p", dim=2, objective=ScalarField(lambda w: 0.0))
    assert np.array_equal(p.box(), [[-5.0, 5.0], [-5.0, 5.0]])
    q = get_problem("mpcc6")
    box = q.box()
    assert box.shape == (5, 2)
    assert np.all(box[:, 0] < box[:, 1])


def test_evaluate_values():
    p = get_problem("mpcc1")
    rec = evaluate(p, np.array([1.0, 1.0]))
    assert rec.f == 0.0 and rec.G[0] == 1.0 and rec.H[0] == 1.0
    rec = evaluate(p, np.array([2.0, 0.0]))
    assert rec.f == 4.0 and rec.G[0] == 2.0 and rec.H[0] == 0.0
    rec3 = evaluate(get_problem("mpcc3"), np.array([0.0, 0.0]))
    assert rec3.f == 1.25 and rec3.G[0] == 0.0 and rec3.H[0] == 0.0


def test_mpcc_feasibility_cases():
    p = get_problem("mpcc1")
    rec = mpcc_feasibility(p, np.array([0.0, 0.0]), tol=1e-8)
    assert rec.is_feasible and rec.max_violation == 0.0
    rec = mpcc_feasibility(p, np.array([1.0, 1.0]), tol=1e-8)
    assert not rec.is_feasible and rec.max_violation == 1.0
    rec = mpcc_feasibility(p, np.array([0.1, 0.1]), tol=1e-8)
    assert not rec.is_feasible
    assert rec.max_violation == pytest.approx(0.01)
    rec = mpcc_feasibility(p, np.array([-0.5, 0.2]), tol=1e-8)
    assert rec.max_violation == pytest.approx(0.5)  # sign violation dominates


def test_classify_indices_bins():
    p = get_problem("mpcc1")
    s = classify_indices(p, np.array([0.0, 0.0]))
    assert s.biactive == (0,) and s.g_zero_h_pos == () and s.g_pos_h_zero == ()
    s = classify_indices(p, np.array([0.0, 1.0]))
    assert s.g_zero_h_pos == (0,) and s.biactive == ()
    s = classify_indices(p, np.array([1.0, 0.0]))
    assert s.g_pos_h_zero == (0,)
    s = classify_indices(p, np.array([-1.0, -1.0]))
    assert s.infeasible == (0,)
    s = classify_indices(p, np.array([1.0, 1.0]))
    assert s.infeasible == (0,)  # complementarity product violated
    with pytest.raises(ValueError):
        classify_indices(p, np.array([0.0, 0.0]), tol=0.0)


def test_classify_indices_mpcc4_mixed_bins():
    s = classify_indices(get_problem("mpcc4"), np.array([0.0, 2.5, 0.0]), tol=1e-4)
    # w1 = 0 with slack -e^0 + 2.5 - e^0 = 0.5 > 0
    assert s.g_zero_h_pos == (0,) and s.biactive == ()
    assert s.active_g == (0, 1)


def test_classify_indices_per_pair_scaling():
    p = ProblemDef(
        name="scaled",
        dim=2,
        objective=ScalarField(lambda w: 0.0, lambda w: np.zeros(2)),
        comp_pairs=(
            (
                ScalarField(lambda w: w[0], lambda w: np.array([1.0, 0.0])),
                ScalarField(lambda w: w[1], lambda w: np.array([0.0, 1.0])),
            ),
        ),
    )
    # |G| = 1e-5 exceeds the plain tol 1e-6, but the pair scale max(1,|G|+|H|) = 1e6
    # widens the bin, so the pair still reads as G = 0, H > 0
    s = classify_indices(p, np.array([1e-5, 1e6]), tol=1e-6)
    assert s.g_zero_h_pos == (0,)


def test_active_g_plain_tolerance():
    s = classify_indices(get_problem("mpcc3"), np.array([1.0, 0.5]))
    assert s.active_g == (0,)
