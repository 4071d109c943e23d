"""CSV output for sweeps and boundary curves.

Contract: header row of field names, comma separated, decimal point, 9
significant digits, LF line endings, booleans as ``true``/``false``, blank
cells for missing values, rows in sweep order.
"""
import csv
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

from app.engine.errors import OutputError
from app.models.results import BoundaryCurve, SweepRecord

BOUNDARY_FIELDS = ["structure", "tau0", "alpha", "beta", "status"]


def format_cell(value: Any) -> str:
    """Render one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _write_rows(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc


def write_csv(records: Sequence[SweepRecord], path: Union[str, Path]) -> None:
    """Write sweep rows; unconverged rows keep only their identifying cells."""
    if not records:
        raise ValueError("no records to write")
    header = SweepRecord.field_names()
    _write_rows(path, header, ([getattr(r, name) for name in header] for r in records))


def write_boundary_csv(curves: Sequence[BoundaryCurve], path: Union[str, Path]) -> None:
    """Write one row per (curve, α); gaps have a blank beta and the error as status."""
    rows = []
    for curve in curves:
        for point in curve.points:
            status = "ok" if point.beta is not None else f"gap: {point.error}"
            rows.append([curve.structure.value, curve.tau0, point.alpha, point.beta, status])
    _write_rows(path, BOUNDARY_FIELDS, rows)


def read_csv(path: Union[str, Path]) -> list[dict[str, str]]:
    """Read a CSV written by this module back into string dictionaries."""
    with Path(path).open(newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))
