"""Pytest fixtures and configuration."""
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings as h_settings

from app.models.scenario import DemandDistribution, Scenario

CONFIGS_DIR = Path(__file__).resolve().parent.parent / "configs"

# ── Hypothesis configuration ──────────────────────────────────────────────────
h_settings.register_profile(
    "ci",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
h_settings.load_profile("ci")


@pytest.fixture
def configs_dir() -> Path:
    """Committed preset configs."""
    return CONFIGS_DIR


@pytest.fixture
def normal_demand() -> DemandDistribution:
    """Demand used by every preset: normal(220, 30)."""
    return DemandDistribution.normal(mu=220.0, sigma=30.0)


@pytest.fixture
def fig4_scenario(normal_demand) -> Scenario:
    """Commissionaire preset at Δτ = 0.05, α = 0.1, β = 0.3."""
    return Scenario(
        m=100.0,
        gamma0=20.0,
        eta=1.0,
        k=56.0,
        tau=0.35,
        tau0=0.30,
        alpha=0.1,
        beta=0.3,
        a=0.0,
        demand=normal_demand,
    )


@pytest.fixture
def fig6_scenario(normal_demand) -> Scenario:
    """Limited-risk preset at Δτ = 0.25, α = 0.1, β = 0.3, a = 5100."""
    return Scenario(
        m=100.0,
        gamma0=20.0,
        eta=1.0,
        k=36.0,
        tau=0.35,
        tau0=0.10,
        alpha=0.1,
        beta=0.3,
        a=5100.0,
        demand=normal_demand,
    )


@pytest.fixture
def fig8a_scenario(normal_demand) -> Scenario:
    """Dominance preset for the commissionaire structure at τ0 = 0.2."""
    return Scenario(
        m=100.0,
        gamma0=55.0,
        eta=1.3,
        k=56.0,
        tau=0.35,
        tau0=0.20,
        alpha=0.6,
        beta=0.12,
        a=0.0,
        demand=normal_demand,
    )
