"""Enumeration types for the tax-efficient supply chain engine."""
from enum import Enum


class DemandKind(str, Enum):
    """Supported demand families (all satisfy IGFR)."""
    NORMAL = "normal"
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"


class Structure(str, Enum):
    """Operational structures of the multinational firm."""
    COMMISSIONAIRE = "C"  # HQ mandates effort and bears its cost
    LIMITED_RISK = "R"  # agent chooses effort under a linear contract

    @classmethod
    def parse(cls, raw: str) -> "Structure":
        """Accept 'c', 'C', 'r', 'R' (CLI spelling is case-insensitive)."""
        return cls(raw.strip().upper())


class SweepParam(str, Enum):
    """Scenario parameters that sweeps and sensitivities may perturb."""
    TAU0 = "tau0"
    ALPHA = "alpha"
    BETA = "beta"
    K = "k"
    ETA = "eta"
    M = "m"


class Metric(str, Enum):
    """Equilibrium quantities a sensitivity can differentiate."""
    E = "e"
    B = "b"
    Y = "y"
    PI_HQ = "pi_hq"


# Scenario attribute backing each sweepable parameter
SWEEP_ATTRIBUTES: dict[SweepParam, str] = {
    SweepParam.TAU0: "tau0",
    SweepParam.ALPHA: "alpha",
    SweepParam.BETA: "beta",
    SweepParam.K: "k",
    SweepParam.ETA: "eta",
    SweepParam.M: "m",
}
