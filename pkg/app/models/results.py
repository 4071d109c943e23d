"""Result containers produced by the equilibrium engine.

Plain dataclasses with ``to_dict()`` (floats only) for logging and JSON
output.
"""
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

from .enums import Structure


@dataclass(frozen=True)
class EquilibriumC:
    """Commissionaire-structure equilibrium (HQ mandates effort)."""

    y_star: float
    e_star: float
    pi_r: float
    pi_hq: float
    foc_residual: float  # |effort FOC| / FOC numerator scale
    second_order_ok: bool  # local-max certificate at e* ± 1e-4·max(1, e*)
    iterations: int
    at_lower: bool = False  # e* on the lower effort bound
    at_upper: bool = False  # e* on the upper effort bound

    @property
    def boundary(self) -> bool:
        return self.at_lower or self.at_upper

    def to_dict(self) -> dict:
        return {**asdict(self), "boundary": self.boundary}


@dataclass(frozen=True)
class EquilibriumR:
    """Limited-risk equilibrium (agent chooses effort under S = w0 + bπ^R)."""

    y_star: float
    e_star: float
    b_star: float
    pi_r: float
    pi_pc: float  # agent payoff at binding participation (= a)
    pi_hq: float
    fixed_wage: float  # may be negative (franchise fee)
    closed_form_b_residual: float  # |closed-form b* − b_star|
    boundary_b: bool
    iterations: int
    effort_clamped: bool = False

    @property
    def boundary(self) -> bool:
        return self.boundary_b

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ProfitBreakdown:
    """HQ after-tax profit split into its high-tax and low-tax brackets.

    high_bracket + low_bracket == pi_hq.
    """

    structure: Structure
    retail_profit: float
    royalty_transfer: float  # β·π^R booked in the low-tax region
    markup_income: float  # α·γ(e)·y booked in the low-tax region
    effort_cost: float
    agent_payout: float  # a under C; a + ½ke² under R (binding participation)
    high_bracket: float  # after-tax profit taxed at τ
    low_bracket: float  # after-tax profit taxed at τ0

    @property
    def pi_hq(self) -> float:
        return self.high_bracket + self.low_bracket

    def to_dict(self) -> dict:
        data = asdict(self)
        data["structure"] = self.structure.value
        data["pi_hq"] = self.pi_hq
        return data


@dataclass(frozen=True)
class StructureComparison:
    """Both equilibria solved on the same scenario."""

    commissionaire: EquilibriumC
    limited_risk: EquilibriumR

    @property
    def order_gap(self) -> float:
        return self.commissionaire.y_star - self.limited_risk.y_star

    @property
    def effort_gap(self) -> float:
        return self.commissionaire.e_star - self.limited_risk.e_star

    @property
    def profit_gap(self) -> float:
        return self.commissionaire.pi_hq - self.limited_risk.pi_hq

    def to_dict(self) -> dict:
        return {
            "C": self.commissionaire.to_dict(),
            "R": self.limited_risk.to_dict(),
            "order_gap": self.order_gap,
            "effort_gap": self.effort_gap,
            "profit_gap": self.profit_gap,
        }


@dataclass(frozen=True)
class Sensitivity:
    """Central finite difference of a re-solved equilibrium quantity."""

    estimate: float
    value_minus: float
    value_plus: float
    step: float


@dataclass(frozen=True)
class ThresholdResult:
    """Detected sign change of a differentiated quantity."""

    location: float
    bracket: tuple[float, float]
    metric: str
    left_sign: int
    right_sign: int

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "bracket_lo": self.bracket[0],
            "bracket_hi": self.bracket[1],
            "metric": self.metric,
            "left_sign": self.left_sign,
            "right_sign": self.right_sign,
        }


@dataclass(frozen=True)
class BoundaryPoint:
    """One α of a dominance boundary; ``beta`` is None for a gap."""

    alpha: float
    beta: Optional[float]
    error: Optional[str] = None

    @property
    def is_gap(self) -> bool:
        return self.beta is None


@dataclass
class SweepRecord:
    """One row of a parameter sweep.

    Rows with ``converged=False`` carry no decision values.
    """

    structure: str
    param_name: str
    param_value: float
    y: Optional[float] = None
    e: Optional[float] = None
    b: Optional[float] = None
    pi_r: Optional[float] = None
    pi_pc: Optional[float] = None
    pi_hq: Optional[float] = None
    foc_residual: Optional[float] = None
    boundary_flag: bool = False
    converged: bool = False
    iterations: int = 0

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def failed(cls, structure: Structure, param_name: str, param_value: float) -> "SweepRecord":
        return cls(structure=structure.value, param_name=param_name, param_value=param_value)


@dataclass
class BoundaryCurve:
    """Dominance boundary for one structure and scenario."""

    structure: Structure
    tau0: float
    points: list[BoundaryPoint] = field(default_factory=list)

    @property
    def gaps(self) -> list[float]:
        return [p.alpha for p in self.points if p.is_gap]
