"""Dense-grid brute-force optimisers used as ground truth for the solvers.

Nothing here calls into the solvers' search or fixed-point code: the retail
response, profits and argmax are re-derived in straight-line numpy. Only the
demand kernel's closed forms are shared.
"""
from typing import NamedTuple, Optional

import numpy as np
import structlog

from app.engine import demand_kernel
from app.engine.errors import InfeasibleScenario
from app.models.scenario import Scenario

logger = structlog.get_logger(__name__)

MIN_C_GRID = 1000
MIN_R_GRID = 500


class OracleC(NamedTuple):
    e: float
    y: float
    pi_hq: float
    step: float  # grid resolution in e


class OracleR(NamedTuple):
    b: float
    e: float
    y: float
    pi_hq: float
    b_step: float
    e_step: float


def _effort_bounds(s: Scenario) -> tuple[float, float]:
    """Feasible effort range, recomputed independently of the solvers."""
    markup = 1.0 + s.alpha
    if s.eta == 0:
        if markup * s.gamma0 >= s.m:
            raise InfeasibleScenario("constant transfer price is not below m")
        return 0.0, 0.0
    lo = max(0.0, (s.gamma0 - s.m / markup) / s.eta)
    hi = s.gamma0 / s.eta * (1.0 - 1e-9)
    if lo >= hi:
        raise InfeasibleScenario(f"empty effort interval [{lo:.6g}, {hi:.6g})")
    return lo, hi


def _order_and_retail_profit(s: Scenario, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gamma = s.gamma0 - s.eta * e
    price = (1.0 + s.alpha) * gamma
    ratio = 1.0 - price / s.m
    inside = ratio > 0.0
    y = np.where(inside, demand_kernel.quantile_unchecked(s.demand, np.where(inside, ratio, 0.5)), 0.0)
    y = np.maximum(y, 0.0)
    sales = demand_kernel.expected_sales_unchecked(s.demand, y)
    return y, s.m * sales - price * y


def oracle_solve_c(s: Scenario, e_grid_size: int = MIN_C_GRID) -> OracleC:
    """Argmax of the C-structure HQ profit over cell midpoints of the effort range."""
    if e_grid_size < MIN_C_GRID:
        raise ValueError(f"e_grid_size must be >= {MIN_C_GRID}")
    lo, hi = _effort_bounds(s)
    if hi == lo:
        e = np.zeros(1)
        step = 0.0
    else:
        edges = np.linspace(lo, hi, e_grid_size + 1)
        e = 0.5 * (edges[:-1] + edges[1:])
        step = edges[1] - edges[0]
    y, pi_r = _order_and_retail_profit(s, e)
    gamma = s.gamma0 - s.eta * e
    pi_hq = (1.0 - s.tau) * ((1.0 - s.beta) * pi_r - 0.5 * s.k * e**2) + (1.0 - s.tau0) * (
        s.beta * pi_r - s.a + s.alpha * gamma * y
    )
    best = int(np.argmax(pi_hq))
    result = OracleC(e=float(e[best]), y=float(y[best]), pi_hq=float(pi_hq[best]), step=float(step))
    logger.debug("oracle_c_solved", **result._asdict())
    return result


def oracle_agent_effort(
    s: Scenario,
    b: float,
    e_grid_size: int = 10_000,
    y: Optional[float] = None,
) -> tuple[float, float]:
    """Agent's payoff argmax a + bπ^R − ½ke² on a dense effort grid.

    With ``y`` given the order is held fixed; otherwise the retail response
    y(e) is used.

    Returns:
        (effort, grid step)
    """
    lo, hi = _effort_bounds(s)
    e = np.linspace(lo, hi, e_grid_size) if hi > lo else np.zeros(1)
    if y is None:
        _, pi_r = _order_and_retail_profit(s, e)
    else:
        price = (1.0 + s.alpha) * (s.gamma0 - s.eta * e)
        pi_r = s.m * demand_kernel.expected_sales_unchecked(s.demand, y) - price * y
    payoff = s.a + b * pi_r - 0.5 * s.k * e**2
    step = float(e[1] - e[0]) if len(e) > 1 else 0.0
    return float(e[int(np.argmax(payoff))]), step


def oracle_solve_r(
    s: Scenario,
    b_grid_size: int = MIN_R_GRID,
    e_grid_size: int = MIN_R_GRID,
) -> OracleR:
    """Outer argmax over b of HQ profit at the agent's grid-optimal effort."""
    if b_grid_size < MIN_R_GRID or e_grid_size < MIN_R_GRID:
        raise ValueError(f"grid sizes must be >= {MIN_R_GRID}")
    lo, hi = _effort_bounds(s)
    e = np.linspace(lo, hi, e_grid_size) if hi > lo else np.zeros(1)
    b = np.arange(b_grid_size) / b_grid_size
    y, pi_r = _order_and_retail_profit(s, e)

    # agent payoff table: rows b, columns e
    payoff = s.a + np.outer(b, pi_r) - 0.5 * s.k * e**2
    choice = np.argmax(payoff, axis=1)
    e_b, y_b, pi_r_b = e[choice], y[choice], pi_r[choice]

    gamma = s.gamma0 - s.eta * e_b
    pi_hq = (1.0 - s.tau) * (1.0 - s.beta) * pi_r_b + (1.0 - s.tau0) * (
        s.beta * pi_r_b - s.a - 0.5 * s.k * e_b**2 + s.alpha * gamma * y_b
    )
    best = int(np.argmax(pi_hq))
    result = OracleR(
        b=float(b[best]),
        e=float(e_b[best]),
        y=float(y_b[best]),
        pi_hq=float(pi_hq[best]),
        b_step=1.0 / b_grid_size,
        e_step=float(e[1] - e[0]) if len(e) > 1 else 0.0,
    )
    logger.debug("oracle_r_solved", **result._asdict())
    return result
