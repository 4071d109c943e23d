"""Tests for the commissionaire (C) structure equilibrium.

Anchors use the commissionaire preset: m=100, γ0=20, η=1, k=56, τ=0.35,
normal(220, 30), β=0.3, a=0.
"""
import numpy as np
import pytest
from hypothesis import given, settings as h_settings
from hypothesis import strategies as st

from app.engine import scenario_ops
from app.engine.equilibrium_c import (
    effort_foc_c,
    effort_multiplier,
    hq_profit_c,
    hq_profit_c_grid,
    retail_best_response_c,
    solve_c,
)
from app.engine.errors import NonConvergence
from app.engine.statics import alpha_hat
from app.models.scenario import SolverSettings


class TestEffortAnchors:
    """Effort levels at the two ends of the tax-difference sweep."""

    @pytest.mark.parametrize(
        "alpha,tau0,expected",
        [
            (0.1, 0.30, 4.56),
            (0.1, 0.05, 4.96),
            (0.8, 0.30, 4.54),
            (0.8, 0.05, 4.25),
        ],
    )
    def test_effort(self, fig4_scenario, alpha, tau0, expected):
        eq = solve_c(fig4_scenario.with_updates(alpha=alpha, tau0=tau0))
        assert eq.e_star == pytest.approx(expected, abs=0.05)
        assert not eq.boundary
        assert eq.second_order_ok

    def test_markup_threshold_flips_effort_response(self, fig4_scenario):
        """Below α̂ a wider tax gap raises effort; above α̂ it lowers effort."""
        threshold = alpha_hat(fig4_scenario.beta)
        assert 0.1 < threshold < 0.8
        for alpha, direction in ((0.1, 1.0), (0.8, -1.0)):
            narrow = solve_c(fig4_scenario.with_updates(alpha=alpha, tau0=0.30)).e_star
            wide = solve_c(fig4_scenario.with_updates(alpha=alpha, tau0=0.05)).e_star
            assert direction * (wide - narrow) > 0


class TestFirstOrderCondition:
    """The effort FOC is a diagnostic of the direct maximiser."""

    @pytest.mark.parametrize("alpha,tau0", [(0.1, 0.30), (0.1, 0.05), (0.8, 0.30), (0.8, 0.05)])
    def test_relative_residual_small(self, fig4_scenario, alpha, tau0):
        eq = solve_c(fig4_scenario.with_updates(alpha=alpha, tau0=tau0))
        assert eq.foc_residual < 1e-3

    def test_residual_at_anchor(self, fig4_scenario):
        y = retail_best_response_c(fig4_scenario, 4.56)
        scale = abs(effort_multiplier(fig4_scenario) * fig4_scenario.eta * y)
        assert abs(effort_foc_c(fig4_scenario, 4.56)) < 0.05 * scale

    def test_foc_matches_profit_slope(self, fig4_scenario):
        """The FOC residual is dπ^HQ/de."""
        h = 1e-4
        for e in (2.0, 4.0, 7.0):
            slope = (hq_profit_c(fig4_scenario, e + h) - hq_profit_c(fig4_scenario, e - h)) / (2 * h)
            assert effort_foc_c(fig4_scenario, e) == pytest.approx(slope, rel=1e-4, abs=1e-4)

    def test_multiplier(self, fig4_scenario):
        s = fig4_scenario
        expected = (0.65 * 0.7 + 0.7 * 0.3) * 1.1 - 0.7 * 0.1
        assert effort_multiplier(s) == pytest.approx(expected)


class TestProfitMonotonicity:
    """HQ profit never falls in Δτ, α or β on the preset grids."""

    TAU0_GRID = [0.30, 0.25, 0.20, 0.15, 0.10, 0.05]

    @pytest.mark.parametrize("alpha,beta", [(0.1, 0.3), (0.3, 0.3), (0.5, 0.3), (0.1, 0.5), (0.1, 0.7)])
    def test_nondecreasing_in_tax_difference(self, fig4_scenario, alpha, beta):
        base = fig4_scenario.with_updates(alpha=alpha, beta=beta)
        profits = [solve_c(base.with_updates(tau0=t)).pi_hq for t in self.TAU0_GRID]
        assert all(b >= a - 1e-6 for a, b in zip(profits, profits[1:]))

    @pytest.mark.parametrize("tau0", [0.30, 0.15, 0.05])
    def test_nondecreasing_in_markup(self, fig4_scenario, tau0):
        profits = [solve_c(fig4_scenario.with_updates(alpha=a, tau0=tau0)).pi_hq for a in (0.1, 0.3, 0.5)]
        assert profits[0] <= profits[1] <= profits[2]

    @pytest.mark.parametrize("tau0", [0.30, 0.15, 0.05])
    def test_nondecreasing_in_royalty(self, fig4_scenario, tau0):
        profits = [solve_c(fig4_scenario.with_updates(beta=b, tau0=tau0)).pi_hq for b in (0.3, 0.5, 0.7)]
        assert profits[0] <= profits[1] <= profits[2]

    def test_royalty_irrelevant_without_tax_difference(self, fig4_scenario):
        flat = fig4_scenario.with_updates(tau0=fig4_scenario.tau)
        low = solve_c(flat.with_updates(beta=0.3)).pi_hq
        high = solve_c(flat.with_updates(beta=0.7)).pi_hq
        assert low == pytest.approx(high, rel=1e-9)


class TestSolverBehaviour:
    """Structural properties of solve_c."""

    def test_equilibrium_fields_consistent(self, fig4_scenario):
        eq = solve_c(fig4_scenario)
        assert eq.y_star == pytest.approx(float(scenario_ops.newsvendor_order(fig4_scenario, eq.e_star)))
        assert eq.pi_r == pytest.approx(scenario_ops.retail_profit(fig4_scenario, eq.y_star, eq.e_star))
        assert eq.pi_hq == pytest.approx(hq_profit_c(fig4_scenario, eq.e_star))
        assert set(eq.to_dict()) >= {"y_star", "e_star", "pi_hq", "boundary"}

    def test_vectorised_profit_matches_scalar(self, fig4_scenario):
        grid = np.linspace(0.0, 19.0, 7)
        values = hq_profit_c_grid(fig4_scenario, grid)
        for e, v in zip(grid, values):
            assert v == pytest.approx(hq_profit_c(fig4_scenario, float(e)))

    def test_constant_cost_forces_zero_effort(self, fig4_scenario):
        eq = solve_c(fig4_scenario.with_updates(eta=0.0))
        assert eq.e_star == 0.0
        assert eq.at_lower

    def test_iteration_cap(self, fig4_scenario):
        capped = fig4_scenario.with_updates(solver=SolverSettings(max_iter=1))
        with pytest.raises(NonConvergence):
            solve_c(capped)

    @h_settings(max_examples=40)
    @given(e=st.floats(min_value=0.0, max_value=19.9))
    def test_global_maximum(self, fig4_scenario, e):
        eq = solve_c(fig4_scenario)
        assert hq_profit_c(fig4_scenario, e) <= eq.pi_hq + 1e-9 * abs(eq.pi_hq)
