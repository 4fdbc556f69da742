"""Machine-readable output formats.

CSV files start with two comment lines, `# schema: <name>` and
`# config: <json>`, followed by a header row; floats are emitted with 17
significant digits so re-parsing is lossless.  JSON documents carry the
same `schema` and `config` keys, plus a `timing` block that consumers
must ignore when comparing runs.
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
    "estimate": "haarfisher-estimate-v1",
    "bounds": "haarfisher-bounds-v1",
    "per_sample": "haarfisher-per-sample-v1",
}


def fmt(x) -> str:
    """One CSV cell: floats at 17 significant digits, everything else
    via str."""
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def info_matrix_to_dict(matrix: np.ndarray, kind: str, metadata: dict | None = None) -> dict:
    """Serializable form of an information matrix: side length, row-major
    entries, the kind tag ("qfim" | "cfim" | "variance") and free-form
    metadata."""
    matrix = np.asarray(matrix, dtype=float)
    return {
        "m": int(matrix.shape[0]),
        "entries": [float(v) for v in matrix.ravel()],
        "kind": kind,
        "metadata": _jsonable(metadata or {}),
    }


def info_matrix_from_dict(doc: dict) -> np.ndarray:
    m = int(doc["m"])
    entries = np.asarray(doc["entries"], dtype=float)
    if entries.size != m * m:
        raise ValueError(f"entry count {entries.size} does not match m={m}")
    return entries.reshape(m, m)


def write_csv(path, columns: list[str], rows, schema_key: str, config: dict) -> None:
    """Write rows (iterables matching `columns`) with schema and config
    comment lines."""
    path = Path(path)
    lines = [f"# schema: {SCHEMAS[schema_key]}",
             f"# config: {json.dumps(_jsonable(config), sort_keys=True)}",
             ",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_json(path, schema_key: str, payload: dict) -> None:
    doc = {"schema": SCHEMAS[schema_key], **_jsonable(payload)}
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def estimation_report_payload(report, config: dict) -> dict:
    """JSON payload for an estimation run; matrices in information-matrix
    form, per-sample errors as a flat list."""
    meta = {"master_seed": report.master_seed, "prob_floor": report.prob_floor,
            "min_prob": report.min_prob, "total_skipped": report.total_skipped}
    return {
        "config": config,
        "n": report.n,
        "m": report.m,
        "k_samples": report.k_samples,
        "master_seed": report.master_seed,
        "theta": [float(v) for v in report.theta],
        "qfim": info_matrix_to_dict(report.qfim, "qfim", meta),
        "mean_cfim": info_matrix_to_dict(report.mean_cfim, "cfim", meta),
        "empirical_variance": info_matrix_to_dict(report.empirical_variance, "variance", meta),
        "predicted_variance": info_matrix_to_dict(report.predicted_variance, "variance", meta),
        "rel_err_max": report.rel_err_max,
        "rel_err_frob": report.rel_err_frob,
        "per_sample_rel_frob": [float(v) for v in report.per_sample_rel_frob],
    }


def tailfit_payload(fit) -> dict:
    return {
        "n": fit.n,
        "m": fit.m,
        "num_samples": fit.num_samples,
        "c_regression": fit.c_regression,
        "c_adjusted": fit.c_adjusted,
        "r_squared": fit.r_squared,
        "percentile_cutoff": fit.percentile_cutoff,
        "regression_band": list(fit.regression_band),
        "regression_range": list(fit.regression_range),
        "regression_intercept": fit.regression_intercept,
    }
