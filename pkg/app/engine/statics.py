"""Comparative statics on re-solved equilibria.

All derivatives are total derivatives: each side of a finite difference is
solved from scratch, so decision responses are included.

  sensitivity          central difference, h = rel_step·max(1, |param|)
  alpha_hat            markup threshold β/(1−β) for the C-structure effort
  dtau_turning_point   Δτ where R-structure HQ profit turns from falling to rising
  dominance_boundary   (α, β) curve where ∂π^HQ/∂α = ∂π^HQ/∂β
"""
from typing import Callable, Iterable, Optional, Union

import numpy as np
import structlog
from pydantic import ValidationError
from scipy.optimize import brentq

from app.engine.equilibrium_c import solve_c
from app.engine.equilibrium_r import solve_r
from app.engine.errors import (
    EquilibriumError,
    FeasibilityLoss,
    MultipleTurningPoints,
    NoTurningPoint,
    RootNotBracketed,
)
from app.models.enums import SWEEP_ATTRIBUTES, Metric, Structure, SweepParam
from app.models.results import (
    BoundaryCurve,
    BoundaryPoint,
    EquilibriumC,
    EquilibriumR,
    Sensitivity,
    ThresholdResult,
)
from app.models.scenario import Scenario

logger = structlog.get_logger(__name__)

DEFAULT_REL_STEP = 1e-4
TURNING_GRID_POINTS = 26
TURNING_EDGE = 0.01
TURNING_WIDTH = 1e-4
BOUNDARY_BETA_RANGE = (0.01, 0.95)
BOUNDARY_SCAN_POINTS = 8

Equilibrium = Union[EquilibriumC, EquilibriumR]


def solve(s: Scenario, structure: Structure) -> Equilibrium:
    """Dispatch to the structure's solver."""
    if structure is Structure.COMMISSIONAIRE:
        return solve_c(s)
    return solve_r(s)


def metric_value(equilibrium: Equilibrium, metric: Metric) -> float:
    """Read a differentiable quantity off a solved equilibrium."""
    if metric is Metric.E:
        return equilibrium.e_star
    if metric is Metric.Y:
        return equilibrium.y_star
    if metric is Metric.PI_HQ:
        return equilibrium.pi_hq
    if not isinstance(equilibrium, EquilibriumR):
        raise ValueError("metric 'b' exists only for the limited-risk structure")
    return equilibrium.b_star


def _perturbed_solve(s: Scenario, structure: Structure, attribute: str, value: float) -> Equilibrium:
    try:
        return solve(s.with_updates(**{attribute: value}), structure)
    except ValidationError as exc:
        raise FeasibilityLoss(f"{attribute}={value:.9g} breaks scenario invariants") from exc
    except EquilibriumError as exc:
        raise FeasibilityLoss(f"{attribute}={value:.9g}: {exc}") from exc


def sensitivity(
    s: Scenario,
    structure: Structure,
    param: SweepParam,
    metric: Metric,
    rel_step: float = DEFAULT_REL_STEP,
) -> Sensitivity:
    """Central finite difference of ``metric`` with respect to ``param``.

    Raises:
        FeasibilityLoss: either perturbed scenario fails to solve.
    """
    attribute = SWEEP_ATTRIBUTES[param]
    base = getattr(s, attribute)
    h = rel_step * max(1.0, abs(base))
    minus = metric_value(_perturbed_solve(s, structure, attribute, base - h), metric)
    plus = metric_value(_perturbed_solve(s, structure, attribute, base + h), metric)
    return Sensitivity(estimate=(plus - minus) / (2.0 * h), value_minus=minus, value_plus=plus, step=h)


def alpha_hat(beta: float) -> float:
    """Markup threshold β/(1−β) below which a larger tax gap raises C-structure effort."""
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta={beta} not in [0, 1)")
    return beta / (1.0 - beta)


# ── tax-difference turning point ─────────────────────────────────────────────

def _sign(value: float) -> int:
    return int(np.sign(value))


def dtau_turning_point(
    s: Scenario,
    structure: Structure = Structure.LIMITED_RISK,
    grid_points: int = TURNING_GRID_POINTS,
) -> ThresholdResult:
    """Locate the Δτ at which HQ profit switches between falling and rising.

    τ stays fixed; Δτ moves through τ0 = τ − Δτ.

    Raises:
        NoTurningPoint: profit differences never change sign.
        MultipleTurningPoints: more than one sign change on the grid.
    """
    gaps = np.linspace(TURNING_EDGE, s.tau - TURNING_EDGE, grid_points)
    if gaps[-1] <= gaps[0]:
        raise NoTurningPoint(f"tau={s.tau} leaves no room for a tax-difference scan")

    def profit(gap: float) -> float:
        return _perturbed_solve(s, structure, "tau0", s.tau - gap).pi_hq

    profits = np.array([profit(g) for g in gaps])
    signs = [_sign(d) for d in np.diff(profits)]
    changes = _sign_changes(signs)
    logger.info(
        "turning_point_scan",
        structure=structure.value,
        sign_changes=len(changes),
        profit_min=float(profits.min()),
        profit_max=float(profits.max()),
    )
    if not changes:
        raise NoTurningPoint(f"HQ profit is monotone in the tax difference ({structure.value})")
    if len(changes) > 1:
        locations = [float(gaps[j]) for _, j in changes]
        raise MultipleTurningPoints(
            f"{len(changes)} sign changes of HQ profit differences at {locations}",
            locations=locations,
        )

    first, last = changes[0]
    lo, hi = float(gaps[first]), float(gaps[last + 1])

    def slope_sign(gap: float) -> int:
        # dπ/dΔτ = −dπ/dτ0
        shifted = s.with_updates(tau0=s.tau - gap)
        return -_sign(sensitivity(shifted, structure, SweepParam.TAU0, Metric.PI_HQ).estimate)

    left_sign, right_sign = slope_sign(lo), slope_sign(hi)
    if left_sign == right_sign or 0 in (left_sign, right_sign):
        raise NoTurningPoint(f"no derivative sign change confirmed in [{lo:.6g}, {hi:.6g}]")

    while hi - lo > TURNING_WIDTH:
        mid = 0.5 * (lo + hi)
        mid_sign = slope_sign(mid)
        if mid_sign == left_sign:
            lo = mid
        else:
            hi = mid

    if slope_sign(lo) == slope_sign(hi):
        raise NoTurningPoint(f"sign change lost during bisection in [{lo:.6g}, {hi:.6g}]")

    result = ThresholdResult(
        location=0.5 * (lo + hi),
        bracket=(lo, hi),
        metric="pi_hq",
        left_sign=left_sign,
        right_sign=right_sign,
    )
    logger.info("turning_point_found", structure=structure.value, **result.to_dict())
    return result


def _sign_changes(signs: list[int]) -> list[tuple[int, int]]:
    """Pairs (i, j) of difference indices where the sign flips from i to j.

    Zero differences are skipped, so the extremum lies in
    [grid[i], grid[j + 1]].
    """
    changes = []
    previous_index, previous_sign = None, 0
    for i, sign in enumerate(signs):
        if sign == 0:
            continue
        if previous_sign and sign != previous_sign:
            changes.append((previous_index, i))
        previous_index, previous_sign = i, sign
    return changes


# ── markup vs royalty dominance ──────────────────────────────────────────────

def dominance_gap(s: Scenario, structure: Structure) -> float:
    """∂π^HQ/∂α − ∂π^HQ/∂β; positive means the markup dominates."""
    by_alpha = sensitivity(s, structure, SweepParam.ALPHA, Metric.PI_HQ).estimate
    by_beta = sensitivity(s, structure, SweepParam.BETA, Metric.PI_HQ).estimate
    return by_alpha - by_beta


def dominance_boundary(
    s: Scenario,
    structure: Structure,
    alpha_grid: Iterable[float],
    beta_range: tuple[float, float] = BOUNDARY_BETA_RANGE,
) -> BoundaryCurve:
    """Royalty level where the markup and royalty derivatives coincide, per α.

    Below the curve the markup derivative dominates, above it the royalty
    derivative. Missing roots become gaps carrying the error message.
    """
    curve = BoundaryCurve(structure=structure, tau0=s.tau0)
    for alpha in alpha_grid:
        try:
            beta = _boundary_root(
                lambda beta: dominance_gap(s.with_updates(alpha=alpha, beta=beta), structure),
                beta_range,
            )
            curve.points.append(BoundaryPoint(alpha=float(alpha), beta=beta))
        except (EquilibriumError, ValidationError) as exc:
            curve.points.append(BoundaryPoint(alpha=float(alpha), beta=None, error=str(exc)))
    logger.info(
        "dominance_boundary_computed",
        structure=structure.value,
        tau0=s.tau0,
        points=len(curve.points),
        gaps=len(curve.gaps),
    )
    return curve


def _boundary_root(func: Callable[[float], float], beta_range: tuple[float, float]) -> float:
    """First bracketed root of ``func`` on a coarse β scan, refined by Brent's method.

    Raises:
        RootNotBracketed: no sign change on the scan.
    """
    betas = np.linspace(beta_range[0], beta_range[1], BOUNDARY_SCAN_POINTS)
    values = [func(float(b)) for b in betas]
    for left, right, f_left, f_right in zip(betas, betas[1:], values, values[1:]):
        if f_left == 0.0:
            return float(left)
        if np.sign(f_left) != np.sign(f_right):
            return float(brentq(func, left, right, xtol=1e-6))
    raise RootNotBracketed(
        f"markup-minus-royalty derivative keeps sign {_sign(values[0])} on "
        f"beta in [{beta_range[0]}, {beta_range[1]}]"
    )


def dominant_instrument(s: Scenario, structure: Structure) -> Optional[str]:
    """'markup' or 'royalty' by the sign of :func:`dominance_gap`; None on a tie."""
    gap = dominance_gap(s, structure)
    if gap > 0:
        return "markup"
    if gap < 0:
        return "royalty"
    return None
