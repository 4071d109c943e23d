"""Scenario pydantic models: demand, solver settings and economic parameters."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .enums import DemandKind


class DemandDistribution(BaseModel):
    """Demand family and its parameters.

    normal uses ``mu``/``sigma``, uniform uses ``lo``/``hi`` and exponential
    uses ``rate``. Parameters of other families must be left unset.
    """
    model_config = ConfigDict(frozen=True)

    kind: DemandKind
    mu: Optional[float] = Field(default=None, description="Normal mean (units)")
    sigma: Optional[float] = Field(default=None, gt=0, description="Normal std dev")
    lo: Optional[float] = Field(default=None, ge=0, description="Uniform lower bound")
    hi: Optional[float] = Field(default=None, description="Uniform upper bound")
    rate: Optional[float] = Field(default=None, gt=0, description="Exponential rate")

    @model_validator(mode="after")
    def check_family_parameters(self) -> "DemandDistribution":
        """Each family needs exactly its own parameters."""
        required = {
            DemandKind.NORMAL: ("mu", "sigma"),
            DemandKind.UNIFORM: ("lo", "hi"),
            DemandKind.EXPONENTIAL: ("rate",),
        }[self.kind]
        for name in required:
            if getattr(self, name) is None:
                raise ValueError(f"{self.kind.value} demand requires '{name}'")
        for name in ("mu", "sigma", "lo", "hi", "rate"):
            if name not in required and getattr(self, name) is not None:
                raise ValueError(f"'{name}' is not a {self.kind.value} parameter")
        if self.kind is DemandKind.UNIFORM and not self.lo < self.hi:
            raise ValueError("lo < hi")
        return self

    @classmethod
    def normal(cls, mu: float, sigma: float) -> "DemandDistribution":
        return cls(kind=DemandKind.NORMAL, mu=mu, sigma=sigma)

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "DemandDistribution":
        return cls(kind=DemandKind.UNIFORM, lo=lo, hi=hi)

    @classmethod
    def exponential(cls, rate: float) -> "DemandDistribution":
        return cls(kind=DemandKind.EXPONENTIAL, rate=rate)

    @property
    def mean(self) -> float:
        if self.kind is DemandKind.NORMAL:
            return self.mu
        if self.kind is DemandKind.UNIFORM:
            return 0.5 * (self.lo + self.hi)
        return 1.0 / self.rate


class SolverSettings(BaseModel):
    """Numerical controls shared by every solver."""
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=1e-9, gt=0, description="Convergence tolerance")
    max_iter: int = Field(default=10000, ge=1, description="Iteration cap")
    grid_points: int = Field(default=512, ge=16, description="Coarse-scan resolution")
    damping: float = Field(default=0.5, gt=0, le=1, description="Fixed-point damping")


class Scenario(BaseModel):
    """Full parameterisation of the multinational's supply chain.

    The tax difference is derived (``tau - tau0``) and never stored.
    """
    model_config = ConfigDict(frozen=True)

    # Market
    m: float = Field(..., gt=0, description="Retail price (currency/unit)")
    gamma0: float = Field(..., gt=0, description="Initial raw-material price")
    eta: float = Field(..., ge=0, description="Effort effectiveness")
    k: float = Field(..., gt=0, description="Effort cost coefficient")
    # Tax
    tau: float = Field(..., ge=0, lt=1, description="Retail (high) tax rate")
    tau0: float = Field(..., ge=0, lt=1, description="Procurement (low) tax rate")
    # Policy
    alpha: float = Field(default=0.0, ge=0, description="Cost-plus markup")
    beta: float = Field(default=0.0, ge=0, lt=1, description="Royalty fraction")
    # Agent
    a: float = Field(default=0.0, ge=0, description="Reservation wage")

    demand: DemandDistribution
    solver: SolverSettings = Field(default_factory=SolverSettings)

    @model_validator(mode="after")
    def check_invariants(self) -> "Scenario":
        """Tax ordering and a nonempty feasible effort interval."""
        if self.tau0 > self.tau:
            raise ValueError("tau0 <= tau")
        markup_cost = (1.0 + self.alpha) * self.gamma0
        if self.eta == 0 and markup_cost >= self.m:
            raise ValueError("(1+alpha)*gamma0 < m (constant-cost scenario)")
        return self

    @property
    def delta_tau(self) -> float:
        return self.tau - self.tau0

    def with_updates(self, **changes) -> "Scenario":
        """Return a re-validated copy with ``changes`` applied."""
        data = self.model_dump()
        data.update(changes)
        return Scenario.model_validate(data)
