"""INI scenario files.

Schema
------
  [demand]  kind = normal|uniform|exponential, mu, sigma | lo, hi | rate
  [market]  m, gamma0, eta, k
  [tax]     tau, tau0
  [policy]  alpha, beta
  [agent]   reservation
  [solver]  tol, max_iter, grid_points, damping

[demand], [market] and [tax] are required; the other sections and their
keys fall back to model defaults. Unknown sections or keys are errors.
"""
import configparser
import re
from pathlib import Path
from typing import Iterable, Optional, Union

import structlog
from pydantic import ValidationError

from app.engine.errors import ConfigParseError, InvariantViolation, UnknownKey
from app.models.scenario import Scenario

logger = structlog.get_logger(__name__)

# section -> {ini key: (model field, converter)}
SCHEMA: dict[str, dict[str, tuple[str, type]]] = {
    "demand": {
        "kind": ("kind", str),
        "mu": ("mu", float),
        "sigma": ("sigma", float),
        "lo": ("lo", float),
        "hi": ("hi", float),
        "rate": ("rate", float),
    },
    "market": {
        "m": ("m", float),
        "gamma0": ("gamma0", float),
        "eta": ("eta", float),
        "k": ("k", float),
    },
    "tax": {"tau": ("tau", float), "tau0": ("tau0", float)},
    "policy": {"alpha": ("alpha", float), "beta": ("beta", float)},
    "agent": {"reservation": ("a", float)},
    "solver": {
        "tol": ("tol", float),
        "max_iter": ("max_iter", int),
        "grid_points": ("grid_points", int),
        "damping": ("damping", float),
    },
}
REQUIRED_SECTIONS = ("demand", "market", "tax")

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s]+)\s*[=:]")


def _line_index(text: str) -> dict[tuple[str, str], int]:
    """Map (section, key) to its 1-based line number."""
    index: dict[tuple[str, str], int] = {}
    section = None
    for number, line in enumerate(text.splitlines(), start=1):
        header = _SECTION_RE.match(line)
        if header:
            section = header.group(1).strip().lower()
            continue
        key = _KEY_RE.match(line)
        if key and section is not None:
            index[(section, key.group(1).lower())] = number
    return index


def parse_overrides(pairs: Iterable[str]) -> dict[tuple[str, str], str]:
    """Parse ``section.key=value`` strings."""
    overrides: dict[tuple[str, str], str] = {}
    for pair in pairs:
        target, sep, value = pair.partition("=")
        section, dot, key = target.strip().partition(".")
        if not sep or not dot or not section or not key:
            raise ConfigParseError(f"override '{pair}' is not of the form section.key=value")
        overrides[(section.lower(), key.lower())] = value.strip()
    return overrides


def parse_config_text(
    text: str,
    overrides: Optional[Iterable[str]] = None,
    source: str = "<string>",
) -> Scenario:
    """Build a validated :class:`Scenario` from INI text plus overrides."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigParseError("missing section header", line=exc.lineno) from exc
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigParseError("malformed line", line=line) from exc
    except configparser.DuplicateSectionError as exc:
        raise ConfigParseError(f"duplicate section [{exc.section}]", line=exc.lineno) from exc
    except configparser.DuplicateOptionError as exc:
        raise ConfigParseError(f"duplicate key '{exc.option}'", line=exc.lineno) from exc

    lines = _line_index(text)
    raw: dict[tuple[str, str], str] = {}
    for section in parser.sections():
        if section.lower() not in SCHEMA:
            raise UnknownKey(f"unknown section [{section}]")
        for key, value in parser.items(section):
            raw[(section.lower(), key.lower())] = value
    for (section, key), value in parse_overrides(overrides or []).items():
        raw[(section, key)] = value
        lines.pop((section, key), None)

    present = {section for section, _ in raw}
    for section in REQUIRED_SECTIONS:
        if section not in present:
            raise ConfigParseError(f"missing required section [{section}]")

    fields: dict[str, dict[str, object]] = {"demand": {}, "solver": {}, "scenario": {}}
    for (section, key), value in raw.items():
        spec = SCHEMA.get(section, {}).get(key)
        if spec is None:
            raise UnknownKey(f"unknown key '{section}.{key}'")
        name, convert = spec
        try:
            converted = convert(value)
        except ValueError as exc:
            raise ConfigParseError(
                f"{section}.{key}: cannot read '{value}' as {convert.__name__}",
                line=lines.get((section, key)),
            ) from exc
        bucket = section if section in ("demand", "solver") else "scenario"
        fields[bucket][name] = converted

    try:
        scenario = Scenario.model_validate(
            {**fields["scenario"], "demand": fields["demand"], "solver": fields["solver"]}
        )
    except ValidationError as exc:
        messages = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'scenario'}: {err['msg']}"
            for err in exc.errors()
        )
        raise InvariantViolation(messages) from exc

    logger.debug("config_parsed", source=source, delta_tau=scenario.delta_tau)
    return scenario


def parse_config(path: Union[str, Path], overrides: Optional[Iterable[str]] = None) -> Scenario:
    """Read and validate a scenario INI file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_config_text(text, overrides, source=str(path))
