"""Figure reproduction presets.

Each preset names a committed INI file under ``configs/`` and the curves to
emit. Sweep figures vary τ0 from 0.30 down to 0.05 at fixed τ; the boundary
figure computes dominance curves for several τ0 values.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import structlog

from app.cli.config_io import parse_config
from app.cli.csv_io import write_boundary_csv, write_csv
from app.config import get_settings
from app.engine.statics import dominance_boundary
from app.engine.sweep import run_sweep, sweep_values
from app.models.enums import Structure, SweepParam

logger = structlog.get_logger(__name__)

TAU0_FROM = 0.30
TAU0_TO = 0.05
TAU0_STEPS = 26

# (alpha, beta) baselines: markup curves at β=0.3, royalty curves at α=0.1
_MARKUP_CURVES = [(0.1, 0.3), (0.3, 0.3), (0.5, 0.3)]
_ROYALTY_CURVES = [(0.1, 0.5), (0.1, 0.7)]
_FIG4_MARKUP_CURVES = [(0.1, 0.3), (0.3, 0.3), (0.8, 0.3)]

BOUNDARY_ALPHAS = [round(0.1 * i, 1) for i in range(1, 10)]


@dataclass(frozen=True)
class SweepPreset:
    name: str
    config: str
    structure: Structure
    curves: list[tuple[float, float]]


@dataclass(frozen=True)
class BoundaryPreset:
    name: str
    configs: dict[Structure, str]
    tau0_values: dict[Structure, list[float]]
    alphas: list[float] = field(default_factory=lambda: list(BOUNDARY_ALPHAS))


PRESETS: dict[str, object] = {
    "fig4": SweepPreset("fig4", "fig4.ini", Structure.COMMISSIONAIRE, _FIG4_MARKUP_CURVES + _ROYALTY_CURVES),
    "fig5": SweepPreset("fig5", "fig5.ini", Structure.COMMISSIONAIRE, _MARKUP_CURVES + _ROYALTY_CURVES),
    "fig6": SweepPreset("fig6", "fig6.ini", Structure.LIMITED_RISK, _MARKUP_CURVES + _ROYALTY_CURVES),
    "fig7": SweepPreset("fig7", "fig7.ini", Structure.LIMITED_RISK, _MARKUP_CURVES + _ROYALTY_CURVES),
    "fig8": BoundaryPreset(
        "fig8",
        configs={Structure.COMMISSIONAIRE: "fig8a.ini", Structure.LIMITED_RISK: "fig8b.ini"},
        tau0_values={
            Structure.COMMISSIONAIRE: [0.21, 0.20, 0.19],
            Structure.LIMITED_RISK: [0.30, 0.20, 0.10],
        },
    ),
}


def curve_filename(name: str, structure: Structure, alpha: float, beta: float) -> str:
    return f"{name}_{structure.value}_alpha{alpha:g}_beta{beta:g}.csv"


def reproduce(name: str, out_dir: Path, jobs: int = 1, presets_dir: Optional[Path] = None) -> list[Path]:
    """Run a figure preset and write its CSV files into ``out_dir``."""
    preset = PRESETS[name]
    presets_dir = presets_dir or get_settings().presets_dir
    out_dir = Path(out_dir)
    written: list[Path] = []

    if isinstance(preset, SweepPreset):
        base = parse_config(presets_dir / preset.config)
        values = sweep_values(TAU0_FROM, TAU0_TO, TAU0_STEPS)
        for alpha, beta in preset.curves:
            scenario = base.with_updates(alpha=alpha, beta=beta)
            records = run_sweep(scenario, preset.structure, SweepParam.TAU0, values, jobs=jobs)
            path = out_dir / curve_filename(name, preset.structure, alpha, beta)
            write_csv(records, path)
            written.append(path)
    else:
        for structure, config in preset.configs.items():
            base = parse_config(presets_dir / config)
            curves = [
                dominance_boundary(base.with_updates(tau0=tau0), structure, preset.alphas)
                for tau0 in preset.tau0_values[structure]
            ]
            path = out_dir / f"{name}_{structure.value}_boundary.csv"
            write_boundary_csv(curves, path)
            written.append(path)

    logger.info("figure_reproduced", figure=name, files=[str(p) for p in written])
    return written
