"""Derived scenario quantities: unit cost, transfer price, retail profit.

  γ(e)  = γ0 − η·e                    (raw-material cost after effort)
  T(e)  = (1 + α)·γ(e)                 (cost-plus transfer price)
  c(e)  = ½·k·e²                       (effort cost)
  π^R   = m·s(y) − T(e)·y              (retail division profit)
  y(e)  = max(0, F⁻¹(1 − T(e)/m))      (newsvendor critical fractile)

Feasibility requires γ(e) > 0 and γ(e) ≤ T(e) ≤ m.
"""
import math
from dataclasses import dataclass

import numpy as np

from app.engine import demand_kernel
from app.engine.demand_kernel import ArrayLike
from app.engine.errors import ArmLengthViolation, InfeasibleScenario
from app.models.scenario import Scenario

# relative gap keeping γ(e_hi) strictly positive
_UPPER_EPSILON = 1e-9


@dataclass(frozen=True)
class EffortInterval:
    """Feasible effort range [lo, hi).

    ``constant_cost`` marks the η = 0 degeneracy: hi is +inf and effort has
    no effect on cost, so solvers force e = 0.
    """

    lo: float
    hi: float
    constant_cost: bool = False

    def clamp(self, e: float) -> tuple[float, bool]:
        """Clamp ``e`` into the interval; second item flags a clamp."""
        if e < self.lo:
            return self.lo, True
        if e > self.hi:
            return self.hi, True
        return e, False


def unit_cost(s: Scenario, e: ArrayLike) -> ArrayLike:
    """γ(e) = γ0 − ηe; negative values signal infeasible effort."""
    return s.gamma0 - s.eta * e


def transfer_price(s: Scenario, e: float) -> float:
    """T = (1 + α)γ(e).

    Raises:
        ArmLengthViolation: T exceeds the retail price m.
    """
    price = (1.0 + s.alpha) * unit_cost(s, e)
    if price > s.m:
        raise ArmLengthViolation(
            f"transfer price {price:.6g} exceeds retail price {s.m:.6g} "
            f"(alpha={s.alpha}, e={e})"
        )
    return price


def effort_cost(s: Scenario, e: ArrayLike) -> ArrayLike:
    """c(e) = ½ke²."""
    return 0.5 * s.k * e * e


def retail_profit(s: Scenario, y: float, e: float) -> float:
    """π^R = m·s(y) − T(e)·y."""
    return s.m * demand_kernel.expected_sales(s.demand, y) - transfer_price(s, e) * y


def feasible_effort_interval(s: Scenario) -> EffortInterval:
    """Effort values keeping 0 < γ(e) and T(e) ≤ m.

    Raises:
        InfeasibleScenario: the interval is empty.
    """
    markup = 1.0 + s.alpha
    if s.eta == 0:
        if markup * s.gamma0 >= s.m:
            raise InfeasibleScenario(
                f"constant transfer price {markup * s.gamma0:.6g} >= m={s.m:.6g}"
            )
        return EffortInterval(lo=0.0, hi=math.inf, constant_cost=True)
    lo = max(0.0, (s.gamma0 - s.m / markup) / s.eta)
    ceiling = s.gamma0 / s.eta
    hi = ceiling - _UPPER_EPSILON * ceiling
    if lo >= hi:
        raise InfeasibleScenario(f"empty effort interval [{lo:.6g}, {hi:.6g})")
    return EffortInterval(lo=lo, hi=hi)


# ── newsvendor response shared by both structures ────────────────────────────

def critical_ratio(s: Scenario, e: ArrayLike) -> ArrayLike:
    """1 − T(e)/m, the no-stock-out probability the retail division targets."""
    return 1.0 - (1.0 + s.alpha) * unit_cost(s, e) / s.m


def newsvendor_order(s: Scenario, e: ArrayLike) -> ArrayLike:
    """Retail order y(e) = max(0, F⁻¹(critical ratio)), vectorised.

    A ratio at or below zero (T ≥ m) means ordering nothing.
    """
    ratio = np.asarray(critical_ratio(s, e), dtype=float)
    inside = (ratio > 0.0) & (ratio < 1.0)
    safe = np.where(inside, ratio, 0.5)
    y = np.where(inside, demand_kernel.quantile_unchecked(s.demand, safe), 0.0)
    y = np.where(ratio >= 1.0, demand_kernel.support(s.demand)[1], y)
    y = np.maximum(y, 0.0)
    return y[()] if y.ndim == 0 else y


def retail_profit_at(s: Scenario, y: ArrayLike, e: ArrayLike) -> ArrayLike:
    """Vectorised π^R without the arm's-length check (callers stay feasible)."""
    price = (1.0 + s.alpha) * unit_cost(s, e)
    return s.m * demand_kernel.expected_sales_unchecked(s.demand, y) - price * y


def newsvendor_order_scalar(s: Scenario, e: float) -> float:
    """Float-only :func:`newsvendor_order` for the effort iteration."""
    ratio = 1.0 - (1.0 + s.alpha) * (s.gamma0 - s.eta * e) / s.m
    if ratio <= 0.0:
        return 0.0
    if ratio >= 1.0:
        return max(demand_kernel.support(s.demand)[1], 0.0)
    return max(demand_kernel.quantile_scalar(s.demand, ratio), 0.0)
