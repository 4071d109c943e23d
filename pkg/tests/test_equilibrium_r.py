"""Tests for the limited-risk (R) structure equilibrium.

Anchors use the limited-risk preset: m=100, γ0=20, η=1, k=36, τ=0.35,
normal(220, 30), a=5100.
"""
import time

import numpy as np
import pytest

from app.engine import scenario_ops
from app.engine.equilibrium_r import (
    B_MAX,
    agent_effort,
    hq_profit_at,
    hq_profit_r,
    inner_fixed_point,
    inner_fixed_point_grid,
    closed_form_b,
    solve_r,
)
from app.engine.errors import NonConvergence
from app.engine.oracle import oracle_agent_effort
from app.models.scenario import SolverSettings


class TestDecisionAnchors:
    """Incentive intensity and effort at the ends of the Δτ sweep."""

    @pytest.mark.parametrize(
        "tau0,alpha,b_expected,e_expected",
        [
            (0.30, 0.1, 0.87, 6.7),
            (0.05, 0.1, 0.70, 5.4),
            (0.10, 0.1, 0.73, 5.5),
            (0.10, 0.3, 0.59, 5.3),
            (0.10, 0.5, 0.50, 5.1),
        ],
    )
    def test_intensity_and_effort(self, fig6_scenario, tau0, alpha, b_expected, e_expected):
        eq = solve_r(fig6_scenario.with_updates(tau0=tau0, alpha=alpha))
        assert eq.b_star == pytest.approx(b_expected, abs=0.03)
        assert eq.e_star == pytest.approx(e_expected, abs=0.2)
        assert not eq.boundary_b
        assert not eq.effort_clamped


class TestProfitAnchors:
    """HQ profit at Δτ = 0.25 with binding participation."""

    @pytest.mark.parametrize(
        "alpha,beta,expected",
        [
            (0.1, 0.3, 8123.0),
            (0.3, 0.3, 8241.0),
            (0.5, 0.3, 8351.5),
            (0.1, 0.5, 9014.6),
            (0.1, 0.7, 9912.0),
        ],
    )
    def test_profit(self, fig6_scenario, alpha, beta, expected):
        eq = solve_r(fig6_scenario.with_updates(alpha=alpha, beta=beta))
        assert eq.pi_hq == pytest.approx(expected, rel=0.005)

    def test_profit_increasing_in_markup_and_royalty(self, fig6_scenario):
        by_alpha = [solve_r(fig6_scenario.with_updates(alpha=a)).pi_hq for a in (0.1, 0.3, 0.5)]
        by_beta = [solve_r(fig6_scenario.with_updates(beta=b)).pi_hq for b in (0.3, 0.5, 0.7)]
        assert by_alpha[0] < by_alpha[1] < by_alpha[2]
        assert by_beta[0] < by_beta[1] < by_beta[2]


class TestTaxDifferenceResponse:
    """Intensity and effort fall as the tax difference widens."""

    def test_strictly_decreasing(self, fig6_scenario):
        tau0_grid = np.linspace(0.30, 0.05, 11)
        solved = [solve_r(fig6_scenario.with_updates(tau0=float(t))) for t in tau0_grid]
        b = [eq.b_star for eq in solved]
        e = [eq.e_star for eq in solved]
        assert all(later < earlier for earlier, later in zip(b, b[1:]))
        assert all(later < earlier for earlier, later in zip(e, e[1:]))

    def test_royalty_irrelevant_without_tax_difference(self, fig6_scenario):
        flat = fig6_scenario.with_updates(tau0=fig6_scenario.tau)
        low = solve_r(flat.with_updates(beta=0.3)).pi_hq
        high = solve_r(flat.with_updates(beta=0.7)).pi_hq
        assert low == pytest.approx(high, rel=1e-9)


class TestAgentAndContract:
    """Incentive compatibility, participation and the closed-form intensity."""

    def test_agent_effort_formula(self, fig6_scenario):
        e, clamped = agent_effort(fig6_scenario, 0.5, 250.0)
        assert e == pytest.approx(0.5 * 1.1 * 1.0 * 250.0 / 36.0)
        assert not clamped

    def test_agent_effort_clamped_at_ceiling(self, fig6_scenario):
        e, clamped = agent_effort(fig6_scenario.with_updates(k=1.0), 0.9, 400.0)
        assert clamped
        assert e < fig6_scenario.gamma0 / fig6_scenario.eta

    def test_effort_is_agent_best_response(self, fig6_scenario):
        eq = solve_r(fig6_scenario)
        dense, step = oracle_agent_effort(fig6_scenario, eq.b_star)
        assert eq.e_star == pytest.approx(dense, abs=2 * step)

    def test_participation_binds(self, fig6_scenario):
        eq = solve_r(fig6_scenario)
        cost = scenario_ops.effort_cost(fig6_scenario, eq.e_star)
        assert eq.fixed_wage == pytest.approx(fig6_scenario.a - eq.b_star * eq.pi_r + cost)
        assert eq.pi_pc == pytest.approx(fig6_scenario.a)

    def test_fixed_wage_may_be_negative(self, fig6_scenario):
        eq = solve_r(fig6_scenario.with_updates(a=0.0))
        assert eq.fixed_wage < 0

    @pytest.mark.parametrize("tau0", [0.30, 0.10, 0.05])
    def test_closed_form_intensity_residual(self, fig6_scenario, tau0):
        eq = solve_r(fig6_scenario.with_updates(tau0=tau0))
        assert eq.closed_form_b_residual < 1e-3 * max(1.0, eq.b_star)
        assert closed_form_b(fig6_scenario.with_updates(tau0=tau0), eq.y_star) == pytest.approx(eq.b_star, abs=1e-3)


class TestInnerFixedPoint:
    """Damped effort iteration for a given intensity."""

    def test_fixed_point_property(self, fig6_scenario):
        e, y, iterations = inner_fixed_point(fig6_scenario, 0.7)
        target, _ = agent_effort(fig6_scenario, 0.7, y)
        assert e == pytest.approx(target, abs=1e-8)
        assert y == pytest.approx(float(scenario_ops.newsvendor_order(fig6_scenario, e)))
        assert iterations > 0

    def test_warm_start_reaches_same_fixed_point(self, fig6_scenario):
        cold, _, cold_iterations = inner_fixed_point(fig6_scenario, 0.7)
        warm, _, warm_iterations = inner_fixed_point(fig6_scenario, 0.7, e0=cold + 1e-4)
        assert warm == pytest.approx(cold, abs=1e-8)
        assert warm_iterations < cold_iterations

    def test_warm_start_outside_interval_is_clamped(self, fig6_scenario):
        e, _, _ = inner_fixed_point(fig6_scenario, 0.7, e0=-5.0)
        assert e == pytest.approx(inner_fixed_point(fig6_scenario, 0.7)[0], abs=1e-8)

    def test_zero_intensity_zero_effort(self, fig6_scenario):
        e, _, _ = inner_fixed_point(fig6_scenario, 0.0)
        assert e == 0.0

    def test_vectorised_matches_scalar(self, fig6_scenario):
        b = np.array([0.0, 0.3, 0.7, B_MAX])
        e_grid, y_grid = inner_fixed_point_grid(fig6_scenario, b)
        for bi, ei, yi in zip(b, e_grid, y_grid):
            e, y, _ = inner_fixed_point(fig6_scenario, float(bi))
            assert ei == pytest.approx(e, abs=1e-7)
            assert yi == pytest.approx(y, abs=1e-5)

    def test_profit_at_intensity(self, fig6_scenario):
        e, y, _ = inner_fixed_point(fig6_scenario, 0.6)
        assert hq_profit_r(fig6_scenario, 0.6) == pytest.approx(float(hq_profit_at(fig6_scenario, y, e)))

    def test_iteration_cap(self, fig6_scenario):
        capped = fig6_scenario.with_updates(solver=SolverSettings(max_iter=1))
        with pytest.raises(NonConvergence):
            inner_fixed_point(capped, 0.7)

    def test_constant_cost(self, fig6_scenario):
        eq = solve_r(fig6_scenario.with_updates(eta=0.0))
        assert eq.e_star == 0.0


class TestSolveTime:
    """One equilibrium solve stays under 10 ms."""

    @pytest.mark.parametrize("tau0", [0.30, 0.10])
    def test_single_solve_budget(self, fig6_scenario, tau0):
        s = fig6_scenario.with_updates(tau0=tau0)
        solve_r(s)
        timings = []
        for _ in range(5):
            start = time.perf_counter()
            solve_r(s)
            timings.append(time.perf_counter() - start)
        assert min(timings) < 0.010
