"""Schema-checked readers for the experiment output files.

The file formats are the only interface to the core package: CSVs start
with `# schema: <name>` and `# config: <json>` comment lines, JSON
documents carry a top-level "schema" key.  A wrong or missing schema tag
raises SchemaError instead of producing a silently wrong figure.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

SCHEMAS = {
    "sweep": "haarfisher-sweep-v1",
    "hist": "haarfisher-hist-v1",
    "ccdf": "haarfisher-ccdf-v1",
    "tailfit": "haarfisher-tailfit-v1",
}


class SchemaError(ValueError):
    """Input file does not carry the expected schema tag or shape."""


def read_csv(path, schema_key: str) -> tuple[dict, list[str], np.ndarray]:
    """Read a schema-tagged CSV into (config, column names, float matrix)."""
    expected = SCHEMAS[schema_key]
    lines = Path(path).read_text().splitlines()
    if len(lines) < 3 or not lines[0].startswith("# schema: "):
        raise SchemaError(f"{path}: missing schema line (expected {expected})")
    found = lines[0].removeprefix("# schema: ").strip()
    if found != expected:
        raise SchemaError(f"{path}: schema {found!r} does not match expected {expected!r}")
    if not lines[1].startswith("# config: "):
        raise SchemaError(f"{path}: missing config line")
    config = json.loads(lines[1].removeprefix("# config: "))
    columns = [c.strip() for c in lines[2].split(",")]
    rows = [line.split(",") for line in lines[3:] if line.strip()]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    try:
        data = np.asarray(rows, dtype=float)
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric data row ({exc})") from exc
    if data.shape[1] != len(columns):
        raise SchemaError(f"{path}: {data.shape[1]} columns of data vs header {columns}")
    return config, columns, data


def column(columns: list[str], data: np.ndarray, name: str) -> np.ndarray:
    if name not in columns:
        raise SchemaError(f"missing column {name!r}; have {columns}")
    return data[:, columns.index(name)]


def read_json(path, schema_key: str) -> dict:
    expected = SCHEMAS[schema_key]
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    found = doc.get("schema")
    if found != expected:
        raise SchemaError(f"{path}: schema {found!r} does not match expected {expected!r}")
    return doc


def fits_by_dimension(tailfit_doc: dict) -> dict[int, dict]:
    fits = tailfit_doc.get("fits")
    if not isinstance(fits, list) or not fits:
        raise SchemaError("tailfit document has no fits")
    out = {}
    for fit in fits:
        for key in ("n", "c_regression", "c_adjusted", "regression_intercept"):
            if key not in fit:
                raise SchemaError(f"tail fit entry missing {key!r}")
        out[int(fit["n"])] = fit
    return out
