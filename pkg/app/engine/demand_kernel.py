"""Demand kernel: IGFR demand distributions for the newsvendor retail division.

Formulas
--------
  F(d)  cumulative probability, f(d) density, F̄(d) = 1 − F(d)
  g(d)  = d·f(d) / F̄(d)                (generalized failure rate)
  s(y)  = E[min(D, y)] = y − ∫_{-∞}^{y} F(d) dd   (expected sales)

Closed forms
------------
  normal:      s(y) = y − [(y − μ)Φ(z) + σ0·φ(z)],  z = (y − μ)/σ0
  uniform:     s(y) = y − (y − lo)² / (2(hi − lo))   on [lo, hi]
  exponential: s(y) = (1 − e^{−λy}) / λ

Normal demand is not truncated at zero; at μ=220, σ0=30 the negative mass
is about 1e-13.

Every function accepts a scalar or a numpy array for the demand level
unless it documents otherwise. Distributions are frozen pydantic models,
so all functions here are pure.
"""
import math
from typing import Callable, Union

import numpy as np
import structlog
from scipy.special import ndtr, ndtri

from app.engine.errors import (
    InvalidProbability,
    NegativeOrder,
    NormalUnboundedQuantile,
    TailDegenerate,
)
from app.models.enums import DemandKind
from app.models.scenario import DemandDistribution

logger = structlog.get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_TAIL_FLOOR = 1e-12
_SIMPSON_TOL = 1e-9
_SIMPSON_MAX_DEPTH = 50
# F(μ − 15σ) < 1e-50, so quadrature starts there for normal demand
_NORMAL_LOWER_SIGMAS = 15.0


# ── density / cumulative ─────────────────────────────────────────────────────

def pdf(dist: DemandDistribution, d: ArrayLike) -> ArrayLike:
    """Density f(d)."""
    d = np.asarray(d, dtype=float)
    if dist.kind is DemandKind.NORMAL:
        z = (d - dist.mu) / dist.sigma
        out = np.exp(-0.5 * z * z) * _INV_SQRT_2PI / dist.sigma
    elif dist.kind is DemandKind.UNIFORM:
        inside = (d >= dist.lo) & (d <= dist.hi)
        out = np.where(inside, 1.0 / (dist.hi - dist.lo), 0.0)
    else:
        out = np.where(d >= 0, dist.rate * np.exp(-dist.rate * np.maximum(d, 0.0)), 0.0)
    return out[()] if out.ndim == 0 else out


def cdf(dist: DemandDistribution, d: ArrayLike) -> ArrayLike:
    """Cumulative probability F(d)."""
    d = np.asarray(d, dtype=float)
    if dist.kind is DemandKind.NORMAL:
        out = ndtr((d - dist.mu) / dist.sigma)
    elif dist.kind is DemandKind.UNIFORM:
        out = np.clip((d - dist.lo) / (dist.hi - dist.lo), 0.0, 1.0)
    else:
        out = np.where(d > 0, -np.expm1(-dist.rate * np.maximum(d, 0.0)), 0.0)
    return out[()] if out.ndim == 0 else out


def survival(dist: DemandDistribution, d: ArrayLike) -> ArrayLike:
    """F̄(d) = 1 − F(d), evaluated without cancellation in the upper tail."""
    d = np.asarray(d, dtype=float)
    if dist.kind is DemandKind.NORMAL:
        out = ndtr((dist.mu - d) / dist.sigma)
    elif dist.kind is DemandKind.UNIFORM:
        out = np.clip((dist.hi - d) / (dist.hi - dist.lo), 0.0, 1.0)
    else:
        out = np.where(d > 0, np.exp(-dist.rate * np.maximum(d, 0.0)), 1.0)
    return out[()] if out.ndim == 0 else out


def support(dist: DemandDistribution) -> tuple[float, float]:
    """Support infimum and supremum (±inf where unbounded)."""
    if dist.kind is DemandKind.NORMAL:
        return -math.inf, math.inf
    if dist.kind is DemandKind.UNIFORM:
        return dist.lo, dist.hi
    return 0.0, math.inf


# ── quantile ─────────────────────────────────────────────────────────────────

def quantile(dist: DemandDistribution, p: float) -> float:
    """Demand level y with F(y) = p.

    Raises:
        InvalidProbability: p outside [0, 1].
        NormalUnboundedQuantile: p in {0, 1} for normal demand.
    """
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise InvalidProbability(f"probability {p!r} not in [0, 1]")
    if p in (0.0, 1.0):
        if dist.kind is DemandKind.NORMAL:
            raise NormalUnboundedQuantile(f"normal quantile at p={p} is unbounded")
        lo, hi = support(dist)
        return lo if p == 0.0 else hi
    return float(quantile_unchecked(dist, p))


def quantile_unchecked(dist: DemandDistribution, p: ArrayLike) -> ArrayLike:
    """Vectorised quantile for p strictly inside (0, 1); no validation.

    The Gaussian branch starts from ``ndtri`` and applies one Newton step on
    Φ, which keeps |Φ(z) − p| at rounding level across the p-grid.
    """
    p = np.asarray(p, dtype=float)
    if dist.kind is DemandKind.NORMAL:
        z = ndtri(p)
        phi = np.exp(-0.5 * z * z) * _INV_SQRT_2PI
        z = z - (ndtr(z) - p) / np.where(phi > 0, phi, 1.0)
        out = dist.mu + dist.sigma * z
    elif dist.kind is DemandKind.UNIFORM:
        out = dist.lo + p * (dist.hi - dist.lo)
    else:
        out = -np.log1p(-p) / dist.rate
    return out[()] if out.ndim == 0 else out


def quantile_scalar(dist: DemandDistribution, p: float) -> float:
    """Float-only :func:`quantile_unchecked` for tight solver loops."""
    if dist.kind is DemandKind.NORMAL:
        z = float(ndtri(p))
        phi = math.exp(-0.5 * z * z) * _INV_SQRT_2PI
        if phi > 0.0:
            z -= (float(ndtr(z)) - p) / phi
        return dist.mu + dist.sigma * z
    if dist.kind is DemandKind.UNIFORM:
        return dist.lo + p * (dist.hi - dist.lo)
    return -math.log1p(-p) / dist.rate


# ── generalized failure rate ─────────────────────────────────────────────────

def gfr(dist: DemandDistribution, y: float) -> float:
    """Generalized failure rate g(y) = y·f(y) / (1 − F(y)).

    Raises:
        TailDegenerate: 1 − F(y) below 1e-12.
    """
    tail = float(survival(dist, y))
    if tail < _TAIL_FLOOR:
        raise TailDegenerate(f"1 - F({y}) = {tail:.3e} is below {_TAIL_FLOOR}")
    return y * float(pdf(dist, y)) / tail


# ── expected sales ───────────────────────────────────────────────────────────

def expected_sales(dist: DemandDistribution, y: float) -> float:
    """E[min(D, y)] for order quantity y.

    Raises:
        NegativeOrder: y < 0.
    """
    if y < 0:
        raise NegativeOrder(f"order quantity {y} is negative")
    if y == 0:
        return 0.0
    return float(expected_sales_unchecked(dist, y))


def expected_sales_unchecked(dist: DemandDistribution, y: ArrayLike) -> ArrayLike:
    """Vectorised closed-form expected sales; y assumed nonnegative."""
    y = np.asarray(y, dtype=float)
    if dist.kind is DemandKind.NORMAL:
        z = (y - dist.mu) / dist.sigma
        phi = np.exp(-0.5 * z * z) * _INV_SQRT_2PI
        out = y - ((y - dist.mu) * ndtr(z) + dist.sigma * phi)
        out = np.where(y == 0, 0.0, out)
    elif dist.kind is DemandKind.UNIFORM:
        width = dist.hi - dist.lo
        clipped = np.clip(y, dist.lo, dist.hi)
        out = np.where(
            y <= dist.lo,
            y,
            clipped - (clipped - dist.lo) ** 2 / (2.0 * width),
        )
    else:
        out = -np.expm1(-dist.rate * y) / dist.rate
    return out[()] if out.ndim == 0 else out


def expected_sales_quadrature(dist: DemandDistribution, y: float) -> float:
    """Expected sales by adaptive Simpson on y − ∫ F(d) dd.

    Used when no closed form applies and as an independent check of the
    closed forms.
    """
    if y < 0:
        raise NegativeOrder(f"order quantity {y} is negative")
    if dist.kind is DemandKind.NORMAL:
        lower = dist.mu - _NORMAL_LOWER_SIGMAS * dist.sigma
    else:
        lower = support(dist)[0]
    if y <= lower:
        return y
    integral = adaptive_simpson(lambda d: float(cdf(dist, d)), lower, y, _SIMPSON_TOL)
    return y - integral


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float = _SIMPSON_TOL,
    max_depth: int = _SIMPSON_MAX_DEPTH,
) -> float:
    """Adaptive Simpson quadrature of ``func`` on [a, b] to absolute ``tol``."""
    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    # explicit stack: (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, tol, max_depth)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        mid = 0.5 * (a + b)
        lm, rm = 0.5 * (a + mid), 0.5 * (mid + b)
        flm, frm = func(lm), func(rm)
        left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        else:
            stack.append((a, mid, fa, flm, fm, left, 0.5 * eps, depth - 1))
            stack.append((mid, b, fm, frm, fb, right, 0.5 * eps, depth - 1))
    return total
