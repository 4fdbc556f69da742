"""Fixture files matching the writer side's schemas."""

import json

import numpy as np
import pytest

SWEEP_SCHEMA = "haarfisher-sweep-v1"
HIST_SCHEMA = "haarfisher-hist-v1"
CCDF_SCHEMA = "haarfisher-ccdf-v1"
TAILFIT_SCHEMA = "haarfisher-tailfit-v1"


def csv_text(schema, config, header, rows):
    lines = [f"# schema: {schema}", f"# config: {json.dumps(config)}", ",".join(header)]
    lines += [",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row)
              for row in rows]
    return "\n".join(lines) + "\n"


@pytest.fixture
def sweep_csv(tmp_path):
    rows = [[20, 0.46, 2.08, 0.16, 100, 1], [40, 0.35, 2.21, 0.11, 100, 1],
            [80, 0.25, 2.25, 0.08, 100, 1], [160, 0.18, 2.31, 0.06, 100, 1]]
    path = tmp_path / "sweep.csv"
    path.write_text(csv_text(SWEEP_SCHEMA, {"trials": 100},
                             ["N", "mean_rel", "scaled", "std_rel", "trials", "seed"], rows))
    return path


@pytest.fixture
def hist_csv(tmp_path):
    rows = []
    for n in (20, 160):
        for i in range(3):
            rows.append([n, 0.2 * i, 0.2 * (i + 1), 10 * (3 - i)])
    path = tmp_path / "hist.csv"
    path.write_text(csv_text(HIST_SCHEMA, {"bins": 3},
                             ["N", "bin_left", "bin_right", "count"], rows))
    return path


def ccdf_rows(n, c, size=60):
    # synthetic but internally consistent: ccdf = exp(-c n t^2)
    t = np.linspace(0.05, 1.2, size)
    p = np.exp(-c * n * t ** 2)
    rows = [[n, float(ti), float(pi)] for ti, pi in zip(t, p)]
    rows.append([n, 1.3, 0.0])
    return rows


@pytest.fixture
def ccdf_csv(tmp_path):
    path = tmp_path / "ccdf.csv"
    path.write_text(csv_text(CCDF_SCHEMA, {"samples": 1000}, ["N", "t", "ccdf"],
                             ccdf_rows(20, 0.15)))
    return path


@pytest.fixture
def ccdf_csv_two_dims(tmp_path):
    path = tmp_path / "ccdf2.csv"
    path.write_text(csv_text(CCDF_SCHEMA, {"samples": 1000}, ["N", "t", "ccdf"],
                             ccdf_rows(20, 0.15) + ccdf_rows(160, 0.14)))
    return path


def fit_entry(n, c_reg, c_adj):
    return {"n": n, "m": 10, "num_samples": 1000, "c_regression": c_reg,
            "c_adjusted": c_adj, "r_squared": 0.97, "percentile_cutoff": 99.99,
            "regression_band": [1e-4, 0.5], "regression_range": [0.2, 1.0],
            "regression_intercept": 0.05, "seed": 7}


def tailfit_text(entries):
    return json.dumps({"schema": TAILFIT_SCHEMA, "fits": entries, "master_seed": 1})


@pytest.fixture
def tailfit_json(tmp_path):
    path = tmp_path / "tailfit.json"
    path.write_text(tailfit_text([fit_entry(20, 0.15, 0.001), fit_entry(160, 0.14, 0.001)]))
    return path
