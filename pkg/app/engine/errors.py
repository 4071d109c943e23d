"""Exception hierarchy for the equilibrium engine.

Every error carries the CLI exit code it maps to, so the command layer can
translate failures without a lookup table.
"""
from typing import Optional


class EquilibriumError(Exception):
    """Base class for all engine failures."""

    exit_code: int = 1


class OutputError(EquilibriumError):
    """Result file could not be written."""


# ── exit 2: infeasible inputs ────────────────────────────────────────────────

class ScenarioError(EquilibriumError):
    exit_code = 2


class InfeasibleScenario(ScenarioError):
    """Empty feasible effort interval or violated arm's-length bound."""


class ArmLengthViolation(ScenarioError):
    """Transfer price exceeds the retail price."""


class FeasibilityLoss(ScenarioError):
    """A perturbed re-solve left the feasible region."""


class NegativeOrder(ScenarioError):
    pass


class InvalidProbability(ScenarioError):
    pass


class NormalUnboundedQuantile(ScenarioError):
    """Normal demand has no finite quantile at p = 0 or p = 1."""


class TailDegenerate(ScenarioError):
    """Survival probability too small to evaluate the failure rate."""


class DensityVanishes(ScenarioError):
    pass


# ── exit 3 ───────────────────────────────────────────────────────────────────

class NonConvergence(EquilibriumError):
    exit_code = 3

    def __init__(self, message: str, iterations: int = 0) -> None:
        super().__init__(message)
        self.iterations = iterations


# ── exit 4: configuration ────────────────────────────────────────────────────

class ConfigError(EquilibriumError):
    exit_code = 4


class ConfigParseError(ConfigError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line = line


class UnknownKey(ConfigError):
    pass


class InvariantViolation(ConfigError):
    """A parsed scenario breaks a model invariant (message names it)."""


# ── exit 5: threshold / boundary detection ───────────────────────────────────

class DetectionError(EquilibriumError):
    exit_code = 5


class NoTurningPoint(DetectionError):
    pass


class MultipleTurningPoints(DetectionError):
    def __init__(self, message: str, locations: Optional[list[float]] = None) -> None:
        super().__init__(message)
        self.locations = locations or []


class RootNotBracketed(DetectionError):
    pass
