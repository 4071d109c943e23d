"""Profit decomposition and side-by-side comparison of the two structures."""
from typing import Union

import structlog

from app.engine import scenario_ops
from app.engine.equilibrium_c import solve_c
from app.engine.equilibrium_r import solve_r
from app.models.enums import Structure
from app.models.results import EquilibriumC, EquilibriumR, ProfitBreakdown, StructureComparison
from app.models.scenario import Scenario

logger = structlog.get_logger(__name__)


def profit_breakdown(
    s: Scenario,
    structure: Structure,
    equilibrium: Union[EquilibriumC, EquilibriumR],
) -> ProfitBreakdown:
    """Split HQ profit into its high-tax (retail) and low-tax (procurement) brackets.

    Under C the effort cost is deducted in the high-tax bracket; under R it is
    reimbursed to the agent through the fixed wage, i.e. in the low-tax one.
    """
    y, e, pi_r = equilibrium.y_star, equilibrium.e_star, equilibrium.pi_r
    royalty = s.beta * pi_r
    markup_income = s.alpha * float(scenario_ops.unit_cost(s, e)) * y
    cost = float(scenario_ops.effort_cost(s, e))

    if structure is Structure.COMMISSIONAIRE:
        payout = s.a
        high = (1.0 - s.tau) * ((1.0 - s.beta) * pi_r - cost)
        low = (1.0 - s.tau0) * (royalty - payout + markup_income)
    else:
        payout = s.a + cost
        high = (1.0 - s.tau) * (1.0 - s.beta) * pi_r
        low = (1.0 - s.tau0) * (royalty - payout + markup_income)

    return ProfitBreakdown(
        structure=structure,
        retail_profit=pi_r,
        royalty_transfer=royalty,
        markup_income=markup_income,
        effort_cost=cost,
        agent_payout=payout,
        high_bracket=high,
        low_bracket=low,
    )


def compare_structures(s: Scenario) -> StructureComparison:
    """Solve both structures on the same scenario."""
    comparison = StructureComparison(commissionaire=solve_c(s), limited_risk=solve_r(s))
    logger.info(
        "structures_compared",
        order_gap=comparison.order_gap,
        effort_gap=comparison.effort_gap,
        profit_gap=comparison.profit_gap,
    )
    return comparison
