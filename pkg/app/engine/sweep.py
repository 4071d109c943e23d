"""Parameter sweeps over re-solved equilibria.

Each point is an independent solve. Points run on a thread pool when
``jobs > 1`` and results come back in input order; a point that fails
yields a ``converged=False`` row instead of aborting the sweep.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable

import numpy as np
import structlog
from pydantic import ValidationError

from app.engine.errors import EquilibriumError
from app.engine.statics import solve
from app.models.enums import SWEEP_ATTRIBUTES, Structure, SweepParam
from app.models.results import EquilibriumC, SweepRecord
from app.models.scenario import Scenario

logger = structlog.get_logger(__name__)


def sweep_values(start: float, stop: float, steps: int) -> list[float]:
    """``steps`` evenly spaced values from ``start`` to ``stop`` inclusive."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [float(start)]
    return [float(v) for v in np.linspace(start, stop, steps)]


def solve_point(s: Scenario, structure: Structure, param: SweepParam, value: float) -> SweepRecord:
    """Solve one sweep point; failures become blank, unconverged rows."""
    attribute = SWEEP_ATTRIBUTES[param]
    try:
        equilibrium = solve(s.with_updates(**{attribute: value}), structure)
    except (EquilibriumError, ValidationError) as exc:
        logger.warning(
            "sweep_point_failed",
            structure=structure.value,
            param=param.value,
            value=value,
            error=type(exc).__name__,
            detail=str(exc).splitlines()[0],
        )
        return SweepRecord.failed(structure, param.value, value)

    if isinstance(equilibrium, EquilibriumC):
        return SweepRecord(
            structure=structure.value,
            param_name=param.value,
            param_value=value,
            y=equilibrium.y_star,
            e=equilibrium.e_star,
            pi_r=equilibrium.pi_r,
            pi_hq=equilibrium.pi_hq,
            foc_residual=equilibrium.foc_residual,
            boundary_flag=equilibrium.boundary,
            converged=True,
            iterations=equilibrium.iterations,
        )
    return SweepRecord(
        structure=structure.value,
        param_name=param.value,
        param_value=value,
        y=equilibrium.y_star,
        e=equilibrium.e_star,
        b=equilibrium.b_star,
        pi_r=equilibrium.pi_r,
        pi_pc=equilibrium.pi_pc,
        pi_hq=equilibrium.pi_hq,
        foc_residual=equilibrium.closed_form_b_residual,
        boundary_flag=equilibrium.boundary_b,
        converged=True,
        iterations=equilibrium.iterations,
    )


def run_sweep(
    s: Scenario,
    structure: Structure,
    param: SweepParam,
    values: Iterable[float],
    jobs: int = 1,
) -> list[SweepRecord]:
    """Solve every value of ``param`` and return rows in sweep order."""
    values = list(values)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda v: solve_point(s, structure, param, v), values))
    else:
        records = [solve_point(s, structure, param, v) for v in values]
    logger.info(
        "sweep_completed",
        structure=structure.value,
        param=param.value,
        points=len(records),
        failed=sum(not r.converged for r in records),
    )
    return records
