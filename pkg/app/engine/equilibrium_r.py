"""Limited-risk (R) structure: HQ sets incentive intensity b, the agent picks
effort, retail orders last.

Move sequence (solved backwards)
--------------------------------
  retail:  y(e) = F⁻¹(1 − (1+α)γ(e)/m)
  agent:   e = b(1+α)ηy / k                 (IC; envelope over y)
  HQ:      max_b π^HQ with participation binding:
           π^HQ = (1−τ)(1−β)π^R + (1−τ0)[βπ^R − a − ½ke² + αγ(e)y]

The fixed wage a − bπ^R + ½ke² leaves the agent exactly at the
reservation wage, so effort cost is reimbursed inside the low-tax bracket.
The closed-form intensity

  b* = [N g(y) + (1−τ0)α] / [(1−τ0)(1+α) g(y)]

is a diagnostic only; direct maximisation over b is the solver of record.
"""
import math
from typing import Optional

import numpy as np
import structlog

from app.engine import demand_kernel, scenario_ops
from app.engine.demand_kernel import ArrayLike
from app.engine.equilibrium_c import effort_multiplier
from app.engine.errors import EquilibriumError, NonConvergence, TailDegenerate
from app.engine.search import SearchResult, grid_golden_max
from app.models.results import EquilibriumR
from app.models.scenario import Scenario

logger = structlog.get_logger(__name__)

B_MAX = 1.0 - 1e-6
_DIVERGENCE_STREAK = 50


def agent_effort(s: Scenario, b: float, y: float) -> tuple[float, bool]:
    """Agent's effort b(1+α)ηy/k clamped to the feasible interval.

    Returns:
        (effort, clamped)
    """
    interval = scenario_ops.feasible_effort_interval(s)
    return interval.clamp(b * (1.0 + s.alpha) * s.eta * y / s.k)


def inner_fixed_point(s: Scenario, b: float, e0: Optional[float] = None) -> tuple[float, float, int]:
    """Damped iteration e ← (1−λ)e + λ·agent_effort(b, y(e)).

    Starts from ``e0`` (clamped into the feasible interval) or the lower
    effort bound.

    Returns:
        (effort, order quantity, iterations)

    Raises:
        NonConvergence: ``max_iter`` exceeded or |Δe| grew for 50 steps in a row.
    """
    interval = scenario_ops.feasible_effort_interval(s)
    settings = s.solver
    damping, tol = settings.damping, settings.tol
    lo, hi = interval.lo, interval.hi
    scale = b * (1.0 + s.alpha) * s.eta / s.k
    e, _ = interval.clamp(interval.lo if e0 is None else e0)
    previous_step = math.inf
    growing = 0
    for iteration in range(1, settings.max_iter + 1):
        y = scenario_ops.newsvendor_order_scalar(s, e)
        target = min(max(scale * y, lo), hi)
        e_next = (1.0 - damping) * e + damping * target
        step = abs(e_next - e)
        e = e_next
        if step < tol:
            return e, scenario_ops.newsvendor_order_scalar(s, e), iteration
        growing = growing + 1 if step > previous_step else 0
        if growing >= _DIVERGENCE_STREAK:
            raise NonConvergence(
                f"effort iteration diverging at b={b:.6g} (|de|={step:.3e})",
                iterations=iteration,
            )
        previous_step = step
    raise NonConvergence(
        f"effort iteration did not converge at b={b:.6g} within {settings.max_iter} steps",
        iterations=settings.max_iter,
    )


def inner_fixed_point_grid(s: Scenario, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`inner_fixed_point` over an intensity array."""
    interval = scenario_ops.feasible_effort_interval(s)
    settings = s.solver
    damping = settings.damping
    scale = (1.0 + s.alpha) * s.eta / s.k
    e = np.full_like(b, interval.clamp(0.0)[0], dtype=float)
    for _ in range(settings.max_iter):
        y = scenario_ops.newsvendor_order(s, e)
        target = np.clip(b * scale * y, interval.lo, interval.hi)
        e_next = (1.0 - damping) * e + damping * target
        step = np.max(np.abs(e_next - e))
        e = e_next
        if step < settings.tol:
            return e, scenario_ops.newsvendor_order(s, e)
    raise NonConvergence(
        f"vectorised effort iteration did not converge within {settings.max_iter} steps",
        iterations=settings.max_iter,
    )


def closed_form_b(s: Scenario, y: float) -> float:
    """Closed-form intensity [N g(y) + (1−τ0)α] / [(1−τ0)(1+α) g(y)]."""
    g = demand_kernel.gfr(s.demand, y)
    if g <= 0:
        raise TailDegenerate(f"g({y}) = {g} is not positive")
    return (effort_multiplier(s) * g + (1.0 - s.tau0) * s.alpha) / (
        (1.0 - s.tau0) * (1.0 + s.alpha) * g
    )


def hq_profit_at(s: Scenario, y: ArrayLike, e: ArrayLike) -> ArrayLike:
    """HQ profit at (y, e) with the agent's participation binding (vectorised)."""
    pi_r = scenario_ops.retail_profit_at(s, y, e)
    gamma = scenario_ops.unit_cost(s, e)
    high = (1.0 - s.tau) * (1.0 - s.beta) * pi_r
    low = (1.0 - s.tau0) * (
        s.beta * pi_r - s.a - scenario_ops.effort_cost(s, e) + s.alpha * gamma * y
    )
    return high + low


def hq_profit_r(s: Scenario, b: float, e0: Optional[float] = None) -> float:
    """HQ profit when offering intensity ``b``; ``e0`` warm-starts the effort iteration."""
    e, y, _ = inner_fixed_point(s, b, e0)
    return float(hq_profit_at(s, y, e))


def solve_r(s: Scenario) -> EquilibriumR:
    """Maximise HQ profit over b in [0, 1 − 1e-6].

    Raises:
        InfeasibleScenario: empty effort interval.
        NonConvergence: inner or outer iteration failed.
    """
    interval = scenario_ops.feasible_effort_interval(s)
    settings = s.solver

    if interval.constant_cost:
        # η = 0: effort is zero for every b, so HQ profit is flat in b
        search = SearchResult(x=0.0, value=math.nan, iterations=0, at_lower=True, at_upper=False)
        warm_start: Optional[float] = None
    else:
        grid = np.linspace(0.0, B_MAX, settings.grid_points)
        e_grid, y_grid = inner_fixed_point_grid(s, grid)
        search = grid_golden_max(
            lambda b: hq_profit_r(s, b, float(np.interp(b, grid, e_grid))),
            grid,
            hq_profit_at(s, y_grid, e_grid),
            settings.tol,
            settings.max_iter,
        )
        warm_start = float(np.interp(search.x, grid, e_grid))
    b_star = search.x
    e_star, y_star, inner_iterations = inner_fixed_point(s, b_star, warm_start)
    pi_r = float(scenario_ops.retail_profit_at(s, y_star, e_star))
    cost = float(scenario_ops.effort_cost(s, e_star))
    fixed_wage = s.a - b_star * pi_r + cost
    _, clamped = agent_effort(s, b_star, y_star)

    try:
        residual = abs(closed_form_b(s, y_star) - b_star)
    except EquilibriumError:
        residual = math.nan

    equilibrium = EquilibriumR(
        y_star=y_star,
        e_star=e_star,
        b_star=b_star,
        pi_r=pi_r,
        pi_pc=fixed_wage + b_star * pi_r - cost,
        pi_hq=float(hq_profit_at(s, y_star, e_star)),
        fixed_wage=fixed_wage,
        closed_form_b_residual=residual,
        boundary_b=search.boundary,
        iterations=search.iterations + inner_iterations,
        effort_clamped=clamped,
    )
    logger.debug("equilibrium_r_solved", **equilibrium.to_dict())
    return equilibrium
