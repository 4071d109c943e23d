"""Verification suite behind the ``verify`` command.

Compares both solvers against the dense-grid oracles on seeded random
scenarios and re-checks the algebraic invariances. Every failure message
carries the full scenario for triage.
"""
import math
from dataclasses import dataclass, field

import numpy as np
import structlog
from pydantic import ValidationError

from app.engine import demand_kernel
from app.engine.equilibrium_c import hq_profit_c, solve_c
from app.engine.equilibrium_r import hq_profit_at, hq_profit_r, inner_fixed_point, solve_r
from app.engine.errors import EquilibriumError
from app.engine.oracle import oracle_solve_c, oracle_solve_r
from app.models.enums import DemandKind
from app.models.scenario import DemandDistribution, Scenario

logger = structlog.get_logger(__name__)

PROFIT_RTOL = 1e-3
FLAT_RTOL = 1e-5
_STEP_SLACK = 1e-7


@dataclass
class VerificationReport:
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, passed: bool, message: str) -> None:
        self.checks += 1
        if not passed:
            self.failures.append(message)


_DEMAND_FAMILIES = tuple(DemandKind)


def _random_demand(rng: np.random.Generator) -> DemandDistribution:
    family = _DEMAND_FAMILIES[int(rng.integers(len(_DEMAND_FAMILIES)))]
    if family is DemandKind.NORMAL:
        return DemandDistribution.normal(mu=rng.uniform(150.0, 250.0), sigma=rng.uniform(20.0, 40.0))
    if family is DemandKind.UNIFORM:
        lo = rng.uniform(50.0, 150.0)
        return DemandDistribution.uniform(lo=lo, hi=lo + rng.uniform(100.0, 200.0))
    return DemandDistribution.exponential(rate=1.0 / rng.uniform(20.0, 60.0))


def random_scenario(rng: np.random.Generator) -> Scenario:
    """Draw a feasible scenario, demand family included, whose effort stays interior.

    Draws are rejected when they fail validation or when even full incentives
    could push effort close to the zero-cost ceiling γ0/η at the 99.9%
    demand quantile.
    """
    while True:
        tau = rng.uniform(0.2, 0.4)
        params = dict(
            m=rng.uniform(80.0, 120.0),
            gamma0=rng.uniform(15.0, 25.0),
            eta=rng.uniform(0.5, 1.2),
            k=rng.uniform(40.0, 90.0),
            tau=tau,
            tau0=rng.uniform(0.0, tau),
            alpha=rng.uniform(0.0, 0.6),
            beta=rng.uniform(0.0, 0.7),
            a=rng.uniform(0.0, 3000.0),
        )
        demand = _random_demand(rng)
        high_demand = demand_kernel.quantile(demand, 0.999)
        ceiling = params["gamma0"] / params["eta"]
        reach = (1.0 + params["alpha"]) * params["eta"] * high_demand / ((1.0 - tau) * params["k"])
        if reach >= 0.6 * ceiling:
            continue
        try:
            return Scenario(demand=demand, **params)
        except ValidationError as exc:
            logger.debug("random_scenario_rejected", reason=str(exc))


def check_oracle_c(s: Scenario, report: VerificationReport, e_grid_size: int = 1000) -> None:
    """Solver effort within one oracle grid step, or an equally good objective."""
    solved = solve_c(s)
    oracle = oracle_solve_c(s, e_grid_size)
    close = abs(solved.e_star - oracle.e) <= oracle.step + _STEP_SLACK
    flat = hq_profit_c(s, oracle.e) >= solved.pi_hq - FLAT_RTOL * max(1.0, abs(solved.pi_hq))
    report.record(
        close or flat,
        f"C effort {solved.e_star:.6g} vs oracle {oracle.e:.6g} (step {oracle.step:.3g}) for {s!r}",
    )
    report.record(
        solved.pi_hq >= oracle.pi_hq - PROFIT_RTOL * max(1.0, abs(oracle.pi_hq)),
        f"C profit {solved.pi_hq:.9g} below oracle {oracle.pi_hq:.9g} for {s!r}",
    )


def check_oracle_r(s: Scenario, report: VerificationReport, grid_size: int = 500) -> None:
    """Solver effort within one oracle e-step, intensity within the b-width of
    one e-cell, agent effort at the oracle's b within one e-step, profits
    within tolerance.

    The oracle's b is only resolved to the set of intensities that induce the
    same grid effort, so the b tolerance is that set's width.
    """
    solved = solve_r(s)
    oracle = oracle_solve_r(s, grid_size, grid_size)
    scale = max(1.0, abs(solved.pi_hq))
    close_e = abs(solved.e_star - oracle.e) <= oracle.e_step + _STEP_SLACK
    flat_e = hq_profit_at(s, solved.y_star, solved.e_star) >= oracle.pi_hq - FLAT_RTOL * scale
    report.record(
        close_e or flat_e,
        f"R effort {solved.e_star:.6g} vs oracle {oracle.e:.6g} (step {oracle.e_step:.3g}) for {s!r}",
    )
    marginal = (1.0 + s.alpha) * s.eta * max(oracle.y, 1e-12)
    b_width = 2.0 * oracle.e_step * s.k / marginal + oracle.b_step
    close_b = abs(solved.b_star - oracle.b) <= b_width + _STEP_SLACK
    flat_b = hq_profit_r(s, oracle.b) >= solved.pi_hq - FLAT_RTOL * scale
    report.record(
        close_b or flat_b or s.eta == 0,
        f"R intensity {solved.b_star:.6g} vs oracle {oracle.b:.6g} (width {b_width:.3g}) for {s!r}",
    )
    e_at_oracle_b, _, _ = inner_fixed_point(s, oracle.b)
    report.record(
        abs(e_at_oracle_b - oracle.e) <= oracle.e_step + _STEP_SLACK,
        f"R agent effort {e_at_oracle_b:.6g} vs oracle {oracle.e:.6g} at b={oracle.b:.4g} for {s!r}",
    )
    report.record(
        abs(solved.pi_hq - oracle.pi_hq) <= PROFIT_RTOL * scale,
        f"R profit {solved.pi_hq:.9g} vs oracle {oracle.pi_hq:.9g} for {s!r}",
    )


def check_beta_invariance(s: Scenario, report: VerificationReport) -> None:
    """With τ = τ0 the royalty only moves profit between equally taxed brackets."""
    flat = s.with_updates(tau0=s.tau)
    for solver, label in ((solve_c, "C"), (solve_r, "R")):
        low = solver(flat.with_updates(beta=0.3)).pi_hq
        high = solver(flat.with_updates(beta=0.7)).pi_hq
        report.record(
            math.isclose(low, high, rel_tol=1e-9, abs_tol=1e-9),
            f"{label} profit depends on beta at zero tax difference ({low!r} vs {high!r}) for {flat!r}",
        )


def check_kernel(s: Scenario, report: VerificationReport) -> None:
    """Quantile round trip and closed-form vs quadrature expected sales."""
    for p in (1e-6, 0.1, 0.5, 0.9, 1 - 1e-6):
        y = demand_kernel.quantile(s.demand, p)
        report.record(
            abs(float(demand_kernel.cdf(s.demand, y)) - p) <= 1e-9,
            f"quantile round trip failed at p={p} for {s.demand!r}",
        )
    y = demand_kernel.quantile(s.demand, 0.8)
    closed = demand_kernel.expected_sales(s.demand, y)
    numeric = demand_kernel.expected_sales_quadrature(s.demand, y)
    report.record(
        math.isclose(closed, numeric, rel_tol=1e-8),
        f"expected sales closed form {closed!r} vs quadrature {numeric!r} for {s.demand!r}",
    )


def run_verification(scenarios: int = 100, seed: int = 7) -> VerificationReport:
    """Run oracle equivalence and invariant checks on seeded random scenarios."""
    rng = np.random.default_rng(seed)
    report = VerificationReport()
    for index in range(scenarios):
        s = random_scenario(rng)
        try:
            check_oracle_c(s, report)
            check_oracle_r(s, report)
            if index % 10 == 0:
                check_beta_invariance(s, report)
                check_kernel(s, report)
        except EquilibriumError as exc:
            report.record(False, f"{type(exc).__name__}: {exc} for {s!r}")
    logger.info(
        "verification_completed",
        scenarios=scenarios,
        checks=report.checks,
        failures=len(report.failures),
    )
    return report
