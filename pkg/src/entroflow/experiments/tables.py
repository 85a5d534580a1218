"""Result tables with fixed schemas and byte-stable serialisation.

Every experiment emits one or more tables whose column sets are declared
here; writers refuse anything that drifts from the declaration.  Floats are
rendered with Python's shortest round-trip repr so that identical runs
produce identical bytes, and all run-dependent context (config echo, tool
version, measured noise floors, timestamp) lives in a sibling metadata JSON
file rather than in the table itself.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

SCHEMAS: dict[str, tuple[str, ...]] = {
    "n3-decomposition": ("convention", "beta", "norm_S", "norm_A", "ratio",
                         "residual_Sa", "residual_AgradH"),
    "n3-sweep": ("beta", "norm_S", "norm_A", "ratio"),
    "n3-trajectories": ("tau", "theta_1", "theta_2", "theta_3", "theta_12",
                        "theta_13", "theta_23", "H", "sum_h", "I", "nu", "mode"),
    "cw-magnetization": ("beta", "m_abs"),
    "cw-scaling": ("n", "beta_over_betac", "dI_dm", "dH_dm", "dSum_dm"),
    "oscillator-jacobi": ("theta_xx", "theta_pp", "theta_xp", "max_violation",
                          "normalized_violation", "nonzero_triplets"),
}


class SchemaError(ValueError):
    """A table's columns or row widths do not match the declared schema."""


@dataclass
class ResultTable:
    schema: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        declared = SCHEMAS.get(self.schema)
        if declared is not None and tuple(self.columns) != declared:
            raise SchemaError(
                f"columns for {self.schema!r} must be {declared}, got {tuple(self.columns)}")

    def append(self, *values):
        if len(values) != len(self.columns):
            raise SchemaError(
                f"row width {len(values)} != {len(self.columns)} columns "
                f"for schema {self.schema!r}")
        self.rows.append(tuple(values))


def format_cell(value) -> str:
    """Shortest round-trip text for a cell value."""
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return value
    if hasattr(value, "item"):      # numpy scalar
        return format_cell(value.item())
    raise TypeError(f"unsupported cell type {type(value).__name__}")


def write_table(table: ResultTable, path: Path, fmt: str = "csv") -> Path:
    """Write the table as CSV (header mandatory) or JSON; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(table.columns)
            for row in table.rows:
                writer.writerow([format_cell(v) for v in row])
    elif fmt == "json":
        doc = {
            "schema": table.schema,
            "columns": list(table.columns),
            "rows": [[_json_cell(v) for v in row] for row in table.rows],
        }
        path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    return path


def _json_cell(value):
    if value is None:
        return None
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None   # JSON has no NaN/inf
    return value


def config_digest(resolved: dict[str, object]) -> str:
    """Stable hash of a fully-resolved config mapping."""
    lines = "".join(f"{k}={format_cell(v) if not isinstance(v, (list, tuple)) else v!r}\n"
                    for k, v in sorted(resolved.items()))
    return hashlib.sha256(lines.encode()).hexdigest()[:16]


def write_metadata(meta: dict, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(meta, sort_keys=True, indent=2, default=str) + "\n")
    return path
