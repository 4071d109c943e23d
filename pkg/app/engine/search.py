"""Scalar maximisation: coarse grid prescan followed by golden-section refinement.

The prescan guards against multiple local maxima; golden section then
narrows the best bracketing cell(s) down to ``tol``.
"""
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from app.engine.errors import NonConvergence

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1 / phi
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0  # 1 / phi^2


@dataclass(frozen=True)
class SearchResult:
    """Maximiser of a scalar objective on [lo, hi]."""

    x: float
    value: float
    iterations: int
    at_lower: bool
    at_upper: bool

    @property
    def boundary(self) -> bool:
        return self.at_lower or self.at_upper


def golden_section_max(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_iter: int,
) -> tuple[float, float, int]:
    """Maximise a unimodal ``func`` on [a, b] until the bracket is below ``tol``.

    Returns:
        (x, func(x), iterations)

    Raises:
        NonConvergence: bracket still wider than ``tol`` after ``max_iter`` steps.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    fc, fd = func(c), func(d)
    iterations = 0
    while h > tol:
        # bracket cannot shrink further in floating point
        if h <= 4.0 * np.finfo(float).eps * max(1.0, abs(a), abs(b)):
            break
        if iterations >= max_iter:
            raise NonConvergence(
                f"golden section bracket {h:.3e} > tol {tol:.1e} "
                f"after {iterations} steps",
                iterations=iterations,
            )
        iterations += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = func(d)
    if fc >= fd:
        return c, fc, iterations
    return d, fd, iterations


def grid_golden_max(
    func: Callable[[float], float],
    grid: np.ndarray,
    grid_values: np.ndarray,
    tol: float,
    max_iter: int,
) -> SearchResult:
    """Refine the best cells of a prescanned grid with golden section.

    ``grid_values`` are ``func`` evaluated on ``grid`` (callers usually
    vectorise that pass). Cells tying with the best value within ``tol``
    (relative) are all refined; the larger refined objective wins and an
    exact tie keeps the smaller x.
    """
    lo, hi = float(grid[0]), float(grid[-1])
    best_value = float(np.max(grid_values))
    scale = max(1.0, abs(best_value))
    candidates = np.flatnonzero(grid_values >= best_value - tol * scale)

    best_x = float(grid[candidates[0]])
    best_fx = float(grid_values[candidates[0]])
    total_iterations = 0
    for index in candidates:
        left = float(grid[max(index - 1, 0)])
        right = float(grid[min(index + 1, len(grid) - 1)])
        x, fx, iterations = golden_section_max(func, left, right, tol, max_iter)
        total_iterations += iterations
        grid_x, grid_fx = float(grid[index]), float(grid_values[index])
        if grid_fx > fx:
            x, fx = grid_x, grid_fx
        if fx > best_fx or (fx == best_fx and x < best_x):
            best_x, best_fx = x, fx

    edge = tol * max(1.0, hi - lo)
    return SearchResult(
        x=best_x,
        value=best_fx,
        iterations=total_iterations,
        at_lower=best_x - lo <= edge,
        at_upper=hi - best_x <= edge,
    )
