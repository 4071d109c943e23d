"""Pydantic scenario models and result records."""

# Enums
from app.models.enums import (
    DemandKind,
    Metric,
    Structure,
    SweepParam,
    SWEEP_ATTRIBUTES,
)

# Scenario inputs
from app.models.scenario import (
    DemandDistribution,
    Scenario,
    SolverSettings,
)

# Results
from app.models.results import (
    BoundaryCurve,
    BoundaryPoint,
    EquilibriumC,
    EquilibriumR,
    ProfitBreakdown,
    Sensitivity,
    StructureComparison,
    SweepRecord,
    ThresholdResult,
)

__all__ = [
    "DemandKind",
    "Metric",
    "Structure",
    "SweepParam",
    "SWEEP_ATTRIBUTES",
    "DemandDistribution",
    "Scenario",
    "SolverSettings",
    "BoundaryCurve",
    "BoundaryPoint",
    "EquilibriumC",
    "EquilibriumR",
    "ProfitBreakdown",
    "Sensitivity",
    "StructureComparison",
    "SweepRecord",
    "ThresholdResult",
]
