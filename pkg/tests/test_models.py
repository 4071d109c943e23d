"""Tests for scenario models and derived scenario quantities."""
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from app.engine import demand_kernel, scenario_ops
from app.engine.errors import ArmLengthViolation, InfeasibleScenario
from app.models import DemandDistribution, DemandKind, Scenario, SolverSettings, Structure


def _scenario(**overrides) -> Scenario:
    params = dict(
        m=100.0,
        gamma0=20.0,
        eta=1.0,
        k=56.0,
        tau=0.35,
        tau0=0.30,
        alpha=0.1,
        beta=0.3,
        demand=DemandDistribution.normal(mu=220.0, sigma=30.0),
    )
    params.update(overrides)
    return Scenario(**params)


class TestDemandDistribution:
    """Tests for DemandDistribution validation."""

    def test_normal_valid(self):
        dist = DemandDistribution.normal(mu=220.0, sigma=30.0)
        assert dist.kind is DemandKind.NORMAL
        assert dist.mean == 220.0

    def test_missing_parameter(self):
        with pytest.raises(ValidationError, match="requires 'sigma'"):
            DemandDistribution(kind=DemandKind.NORMAL, mu=220.0)

    def test_foreign_parameter(self):
        with pytest.raises(ValidationError, match="not a uniform parameter"):
            DemandDistribution(kind=DemandKind.UNIFORM, lo=0.0, hi=1.0, rate=2.0)

    def test_uniform_bounds_ordered(self):
        with pytest.raises(ValidationError, match="lo < hi"):
            DemandDistribution.uniform(lo=5.0, hi=5.0)

    @pytest.mark.parametrize("bad", [{"sigma": 0.0}, {"sigma": -1.0}])
    def test_sigma_positive(self, bad):
        with pytest.raises(ValidationError):
            DemandDistribution(kind=DemandKind.NORMAL, mu=1.0, **bad)

    def test_frozen(self):
        dist = DemandDistribution.exponential(rate=0.1)
        with pytest.raises(ValidationError):
            dist.rate = 0.2
        assert dist.mean == pytest.approx(10.0)


class TestScenario:
    """Tests for Scenario invariants."""

    def test_defaults(self):
        s = Scenario(m=100, gamma0=20, eta=1, k=56, tau=0.35, tau0=0.3, demand=DemandDistribution.normal(mu=220, sigma=30))
        assert s.alpha == 0.0 and s.beta == 0.0 and s.a == 0.0
        assert s.solver == SolverSettings()
        assert s.solver.tol == 1e-9 and s.solver.grid_points == 512

    def test_delta_tau_derived(self):
        assert _scenario(tau0=0.10).delta_tau == pytest.approx(0.25)

    def test_tax_order(self):
        with pytest.raises(ValidationError, match="tau0 <= tau"):
            _scenario(tau0=0.40)

    @pytest.mark.parametrize(
        "field,value",
        [("tau", 1.0), ("beta", 1.0), ("alpha", -0.1), ("k", 0.0), ("m", 0.0), ("eta", -1.0), ("a", -5.0)],
    )
    def test_field_ranges(self, field, value):
        with pytest.raises(ValidationError):
            _scenario(**{field: value})

    def test_constant_cost_must_be_profitable(self):
        with pytest.raises(ValidationError, match="constant-cost"):
            _scenario(eta=0.0, alpha=5.0)

    @pytest.mark.parametrize(
        "field,value",
        [("tol", 0.0), ("max_iter", 0), ("grid_points", 8), ("damping", 0.0), ("damping", 1.5)],
    )
    def test_solver_settings_ranges(self, field, value):
        with pytest.raises(ValidationError):
            SolverSettings(**{field: value})

    def test_with_updates_revalidates(self):
        s = _scenario()
        assert s.with_updates(tau0=0.05).tau0 == 0.05
        assert s.tau0 == 0.30
        with pytest.raises(ValidationError):
            s.with_updates(tau0=0.5)

    def test_structure_parse(self):
        assert Structure.parse("c") is Structure.COMMISSIONAIRE
        assert Structure.parse(" R ") is Structure.LIMITED_RISK
        with pytest.raises(ValueError):
            Structure.parse("x")


class TestCostsAndPrices:
    """Unit cost, transfer price, effort cost."""

    def test_unit_cost(self):
        s = _scenario()
        assert scenario_ops.unit_cost(s, 0.0) == 20.0
        assert scenario_ops.unit_cost(s, 4.56) == pytest.approx(15.44)
        assert scenario_ops.unit_cost(_scenario(eta=1.3), 10.0) == pytest.approx(7.0)

    def test_transfer_price(self):
        assert scenario_ops.transfer_price(_scenario(alpha=0.0), 3.0) == pytest.approx(17.0)
        assert scenario_ops.transfer_price(_scenario(alpha=0.1), 4.56) == pytest.approx(16.984)
        assert scenario_ops.transfer_price(_scenario(alpha=0.8), 4.25) == pytest.approx(28.35)

    def test_arm_length_violation(self):
        with pytest.raises(ArmLengthViolation):
            scenario_ops.transfer_price(_scenario(alpha=8.0), 0.0)

    @given(alpha=st.floats(0.0, 3.0), e=st.floats(0.0, 19.0))
    def test_transfer_price_covers_unit_cost(self, alpha, e):
        s = _scenario(alpha=alpha)
        cost = scenario_ops.unit_cost(s, e)
        price = (1.0 + alpha) * cost
        if price <= s.m:
            assert scenario_ops.transfer_price(s, e) >= cost

    def test_effort_cost(self):
        assert scenario_ops.effort_cost(_scenario(), 0.0) == 0.0
        assert scenario_ops.effort_cost(_scenario(k=36.0), 5.5) == pytest.approx(544.5)
        assert scenario_ops.effort_cost(_scenario(k=56.0), 4.96) == pytest.approx(688.8448)


class TestFeasibleEffortInterval:
    """Effort range keeping 0 < γ(e) and T(e) ≤ m."""

    def test_low_markup(self):
        interval = scenario_ops.feasible_effort_interval(_scenario(alpha=0.1))
        assert interval.lo == 0.0
        assert interval.hi == pytest.approx(20.0)
        assert interval.hi < 20.0
        assert not interval.constant_cost

    def test_high_markup_raises_lower_bound(self):
        interval = scenario_ops.feasible_effort_interval(_scenario(alpha=8.0))
        assert interval.lo == pytest.approx(20.0 - 100.0 / 9.0)

    def test_constant_cost(self):
        interval = scenario_ops.feasible_effort_interval(_scenario(eta=0.0))
        assert interval.lo == 0.0 and interval.hi == math.inf
        assert interval.constant_cost

    def test_constant_cost_infeasible(self):
        s = Scenario.model_construct(m=100.0, gamma0=20.0, eta=0.0, alpha=5.0)
        with pytest.raises(InfeasibleScenario):
            scenario_ops.feasible_effort_interval(s)

    def test_clamp(self):
        interval = scenario_ops.EffortInterval(lo=1.0, hi=3.0)
        assert interval.clamp(2.0) == (2.0, False)
        assert interval.clamp(0.0) == (1.0, True)
        assert interval.clamp(5.0) == (3.0, True)


class TestRetailDivision:
    """Newsvendor order and retail profit."""

    def test_zero_order_zero_profit(self):
        assert scenario_ops.retail_profit(_scenario(), 0.0, 4.0) == 0.0

    def test_uniform_closed_form(self):
        s = _scenario(alpha=0.0, eta=0.0, demand=DemandDistribution.uniform(lo=0.0, hi=440.0))
        assert scenario_ops.retail_profit(s, 220.0, 0.0) == pytest.approx(12100.0)

    def test_limited_risk_anchor(self):
        s = _scenario(k=36.0, tau0=0.10)
        assert scenario_ops.retail_profit(s, 249.9, 5.5) == pytest.approx(17756.0, rel=1e-3)

    def test_newsvendor_fractile(self):
        """F(y) equals the critical ratio 1 − T/m."""
        s = _scenario()
        y = scenario_ops.newsvendor_order(s, 4.56)
        assert float(demand_kernel.cdf(s.demand, y)) == pytest.approx(1.0 - 1.1 * 15.44 / 100.0, abs=1e-12)

    def test_newsvendor_zero_when_price_exceeds_margin(self):
        assert scenario_ops.newsvendor_order(_scenario(alpha=8.0), 0.0) == 0.0

    @pytest.mark.parametrize(
        "demand",
        [
            DemandDistribution.normal(mu=220.0, sigma=30.0),
            DemandDistribution.uniform(lo=100.0, hi=340.0),
            DemandDistribution.exponential(rate=1.0 / 220.0),
        ],
    )
    def test_scalar_order_matches_vectorised(self, demand):
        s = _scenario(demand=demand)
        for e in (0.0, 2.5, 7.0, 15.0):
            expected = float(scenario_ops.newsvendor_order(s, e))
            assert scenario_ops.newsvendor_order_scalar(s, e) == pytest.approx(expected, rel=1e-12, abs=1e-9)
        assert scenario_ops.newsvendor_order_scalar(_scenario(alpha=8.0, demand=demand), 0.0) == 0.0

    def test_newsvendor_vectorised(self):
        e = np.array([0.0, 5.0, 10.0])
        y = scenario_ops.newsvendor_order(_scenario(), e)
        assert y.shape == (3,)
        assert np.all(np.diff(y) > 0)

    def test_retail_profit_concave_in_order(self):
        s = _scenario()
        ys = np.linspace(50.0, 400.0, 101)
        profits = np.array([scenario_ops.retail_profit(s, float(y), 4.0) for y in ys])
        assert np.all(np.diff(profits, 2) <= 1e-9)

    def test_newsvendor_maximises_retail_profit(self):
        s = _scenario()
        y_star = float(scenario_ops.newsvendor_order(s, 4.0))
        best = scenario_ops.retail_profit(s, y_star, 4.0)
        for y in (y_star - 5.0, y_star - 0.5, y_star + 0.5, y_star + 5.0):
            assert scenario_ops.retail_profit(s, y, 4.0) <= best
