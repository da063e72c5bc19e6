import numpy as np
import pytest

from ccopkit import Problem, Tolerances, certify_m, check_cc_licq, check_feasible, parse

from helpers import make_problem, well_e1, well_ones

TOL = Tolerances()


def test_feasibility_and_activity_on_sparse_points():
    pr = well_ones()
    ok, act = check_feasible(pr, [1.0, 0.0])
    assert ok and act.I0 == (2,) and act.Q0 == () and act.x_norm0 == 1

    ok, act = check_feasible(pr, [1.0, 1.0])
    assert not ok and act.x_norm0 == 2

    ok, act = check_feasible(pr, [0.0, 0.0])
    assert ok and act.I0 == (1, 2)


def test_feasibility_with_constraints():
    pr = make_problem(2, 1, "x1^2 + x2^2", h=["x1 + x2"], g=["x1 - 1"])
    ok, act = check_feasible(pr, [1.0, -1.0])
    assert not ok  # two nonzeros exceed the budget
    pr2 = make_problem(2, 1, "x1^2 + x2^2", g=["x1"])
    ok, act = check_feasible(pr2, [0.0, 0.5])
    assert ok and act.Q0 == (1,)


def test_cc_licq_coordinate_rows_hold():
    assert check_cc_licq(well_ones(), [0.0, 0.0])
    assert check_cc_licq(well_e1(), [0.0, 0.0])


def test_cc_licq_fails_on_duplicated_direction():
    pr = make_problem(2, 1, "x1^2 + x2^2", h=["x1"])
    assert not check_cc_licq(pr, [0.0, 0.0])


def test_certify_origin_of_two_well_problem():
    cert = certify_m(well_ones(), [0.0, 0.0])
    assert cert.feasible and cert.stationary
    assert cert.gamma == {1: pytest.approx(-2.0), 2: pytest.approx(-2.0)}
    assert all(cert.ndm)
    assert cert.quadratic_index == 0
    assert cert.sparsity_index == 1
    assert cert.m_index == 1


def test_certify_axis_minimizer():
    cert = certify_m(well_ones(), [1.0, 0.0])
    assert cert.stationary and cert.nondegenerate
    assert cert.gamma == {2: pytest.approx(-2.0)}
    assert cert.m_index == 0 and cert.quadratic_index == 0 and cert.sparsity_index == 0


def test_certify_degenerate_zero_multiplier():
    cert = certify_m(well_e1(), [0.0, 0.0])
    assert cert.stationary
    assert cert.gamma == {1: pytest.approx(-2.0), 2: pytest.approx(0.0)}
    assert cert.ndm[0] and cert.ndm[1] and cert.ndm[3]
    assert not cert.ndm[2]
    assert cert.degenerate_reason == "NDM3"
    assert cert.m_index is None


def test_certify_infeasible_gives_diagnostic_certificate():
    cert = certify_m(well_ones(), [1.0, 1.0])
    assert not cert.feasible and not cert.stationary
    assert cert.degenerate_reason == "infeasible"
    assert cert.m_index is None


def test_certify_non_stationary_point():
    cert = certify_m(well_ones(), [0.5, 0.0])
    assert cert.feasible and not cert.stationary
    assert "not stationary" in cert.degenerate_reason


def test_nondegenerate_minimizer_has_active_budget():
    # vanishing M-index forces both index parts to vanish
    for pr in (well_ones(), well_e1()):
        for x in ([1.0, 0.0], [0.0, 1.0]):
            cert = certify_m(pr, x)
            if cert.nondegenerate and cert.m_index == 0:
                assert cert.quadratic_index == 0
                assert cert.sparsity_index == 0
                assert cert.activity.x_norm0 == pr.s


def test_multipliers_stable_under_column_shuffle():
    rng = np.random.default_rng(17)
    pr = make_problem(3, 2, "(x1-1)^2 + 2*(x2-1)^2 + (x3+1)^2 + 0.3*x1*x2", g=["x1 + x2 + x3"])
    cert = certify_m(pr, [1.0, 0.0, 0.0])
    # assemble the certificate's multiplier system independently and permute
    from ccopkit import eval2

    cols, order = [], []
    for q in cert.activity.Q0:
        cols.append(eval2(pr.g[q - 1], np.array([1.0, 0, 0])).gradient)
        order.append(("mu", q))
    for i in cert.activity.I0:
        e = np.zeros(3)
        e[i - 1] = 1.0
        cols.append(e)
        order.append(("gamma", i))
    G = np.array(cols).T
    grad = eval2(pr.f, np.array([1.0, 0, 0])).gradient
    for _ in range(5):
        perm = rng.permutation(len(order))
        sol = np.linalg.lstsq(G[:, perm], grad, rcond=None)[0]
        for slot, p in enumerate(perm):
            kind, idx = order[p]
            reference = cert.mu[idx] if kind == "mu" else cert.gamma[idx]
            assert abs(sol[slot] - reference) <= 1e-9


def test_scaling_objective_scales_multipliers_only():
    base = certify_m(well_ones(), [0.0, 0.0])
    for alpha in (0.5, 1.3, 2.0):
        scaled_problem = make_problem(2, 1, f"({alpha!r})*((x1-1)^2 + (x2-1)^2)")
        scaled = certify_m(scaled_problem, [0.0, 0.0])
        assert scaled.ndm == base.ndm
        assert scaled.m_index == base.m_index
        for i in base.gamma:
            assert scaled.gamma[i] == pytest.approx(alpha * base.gamma[i], rel=1e-12)


def test_problem_validation():
    with pytest.raises(ValueError):
        Problem(2, 2, parse("x1", 2))  # s must stay below n
    with pytest.raises(ValueError):
        Problem(2, 1, parse("x1", 1))  # dimension mismatch
