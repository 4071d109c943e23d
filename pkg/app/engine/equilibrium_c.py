"""Commissionaire (C) structure: HQ mandates effort, retail orders last.

HQ objective
------------
  π^HQ = (1 − τ)[(1 − β)π^R − ½ke²] + (1 − τ0)[βπ^R − a + αγ(e)y]

with y = y(e) the retail division's newsvendor response. HQ maximises over
the feasible effort interval by grid prescan + golden section. The
first-order condition

  Nηy + (1−τ0)αγ0·y' − [(1−τ0)(αη·y' + k) − (τ−τ0)k]·e = 0,
  N  = [(1−τ)(1−β) + (1−τ0)β](1+α) − (1−τ0)α,   y' = (1+α)η / (m f(y))

is only reported as a diagnostic residual.
"""
import math

import numpy as np
import structlog

from app.engine import demand_kernel, scenario_ops
from app.engine.errors import DensityVanishes
from app.engine.search import grid_golden_max
from app.models.results import EquilibriumC
from app.models.scenario import Scenario

logger = structlog.get_logger(__name__)

_DENSITY_FLOOR = 1e-15
_CERTIFICATE_STEP = 1e-4
_CERTIFICATE_SLACK = 1e-9


def effort_multiplier(s: Scenario) -> float:
    """N = [(1−τ)(1−β) + (1−τ0)β](1+α) − (1−τ0)α."""
    return (
        ((1.0 - s.tau) * (1.0 - s.beta) + (1.0 - s.tau0) * s.beta) * (1.0 + s.alpha)
        - (1.0 - s.tau0) * s.alpha
    )


def retail_best_response_c(s: Scenario, e: float) -> float:
    """Newsvendor order y = F⁻¹(1 − (1+α)γ(e)/m) at effort ``e``."""
    interval = scenario_ops.feasible_effort_interval(s)
    e, _ = interval.clamp(e)
    ratio = float(scenario_ops.critical_ratio(s, e))
    if ratio <= 0.0:
        return max(demand_kernel.support(s.demand)[0], 0.0)
    return max(demand_kernel.quantile(s.demand, min(ratio, 1.0)), 0.0)


def effort_foc_c(s: Scenario, e: float) -> float:
    """Residual of HQ's effort first-order condition at ``e``.

    Raises:
        DensityVanishes: f(y(e)) below 1e-15.
    """
    numerator, denominator = _foc_terms(s, e)
    return numerator - denominator * e


def _foc_terms(s: Scenario, e: float) -> tuple[float, float]:
    y = retail_best_response_c(s, e)
    if s.eta == 0:
        dy_de = 0.0
    else:
        density = float(demand_kernel.pdf(s.demand, y))
        if density < _DENSITY_FLOOR:
            raise DensityVanishes(f"f(y={y:.6g}) = {density:.3e}")
        dy_de = (1.0 + s.alpha) * s.eta / (s.m * density)
    high_minus_gap = (1.0 - s.tau0) * s.k - (s.tau - s.tau0) * s.k
    assert math.isclose(high_minus_gap, (1.0 - s.tau) * s.k, rel_tol=1e-12, abs_tol=1e-12)
    numerator = (
        effort_multiplier(s) * s.eta * y
        + (1.0 - s.tau0) * s.alpha * s.gamma0 * dy_de
    )
    denominator = (1.0 - s.tau0) * (s.alpha * s.eta * dy_de + s.k) - (s.tau - s.tau0) * s.k
    return numerator, denominator


def hq_profit_c(s: Scenario, e: float) -> float:
    """HQ after-tax profit with the retail response embedded."""
    return float(hq_profit_c_grid(s, np.asarray(e, dtype=float)))


def hq_profit_c_grid(s: Scenario, e: np.ndarray) -> np.ndarray:
    """Vectorised :func:`hq_profit_c` over an effort array."""
    y = scenario_ops.newsvendor_order(s, e)
    pi_r = scenario_ops.retail_profit_at(s, y, e)
    gamma = scenario_ops.unit_cost(s, e)
    high = (1.0 - s.tau) * ((1.0 - s.beta) * pi_r - scenario_ops.effort_cost(s, e))
    low = (1.0 - s.tau0) * (s.beta * pi_r - s.a + s.alpha * gamma * y)
    return high + low


def solve_c(s: Scenario) -> EquilibriumC:
    """Global maximiser of HQ profit over the feasible effort interval.

    Raises:
        InfeasibleScenario: empty effort interval.
        NonConvergence: golden-section refinement exceeded ``max_iter``.
    """
    interval = scenario_ops.feasible_effort_interval(s)
    settings = s.solver

    if interval.constant_cost:
        # η = 0: effort cannot lower cost, so any effort is pure expense
        e_star, iterations, at_lower, at_upper = 0.0, 0, True, False
    else:
        grid = np.linspace(interval.lo, interval.hi, settings.grid_points)
        result = grid_golden_max(
            lambda e: hq_profit_c(s, e),
            grid,
            hq_profit_c_grid(s, grid),
            settings.tol,
            settings.max_iter,
        )
        e_star, iterations = result.x, result.iterations
        at_lower, at_upper = result.at_lower, result.at_upper

    y_star = float(scenario_ops.newsvendor_order(s, e_star))
    pi_r = float(scenario_ops.retail_profit_at(s, y_star, e_star))
    pi_hq = hq_profit_c(s, e_star)

    equilibrium = EquilibriumC(
        y_star=y_star,
        e_star=e_star,
        pi_r=pi_r,
        pi_hq=pi_hq,
        foc_residual=_relative_foc_residual(s, e_star),
        second_order_ok=_local_max_certificate(s, e_star, pi_hq, interval),
        iterations=iterations,
        at_lower=at_lower,
        at_upper=at_upper,
    )
    logger.debug("equilibrium_c_solved", **equilibrium.to_dict())
    return equilibrium


def _relative_foc_residual(s: Scenario, e: float) -> float:
    try:
        numerator, denominator = _foc_terms(s, e)
    except DensityVanishes:
        return math.nan
    return abs(numerator - denominator * e) / max(abs(numerator), 1.0)


def _local_max_certificate(
    s: Scenario,
    e_star: float,
    pi_star: float,
    interval: scenario_ops.EffortInterval,
) -> bool:
    h = _CERTIFICATE_STEP * max(1.0, e_star)
    slack = _CERTIFICATE_SLACK * max(1.0, abs(pi_star))
    for candidate in (e_star - h, e_star + h):
        candidate, clamped = interval.clamp(candidate)
        if clamped and candidate == e_star:
            continue
        if hq_profit_c(s, candidate) > pi_star + slack:
            return False
    return True
