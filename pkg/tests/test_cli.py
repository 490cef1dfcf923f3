import json
import os
import sys

import numpy as np
import pandas as pd
import pytest

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app.errors import MirrorStepError
from app.main import EXIT_NO_OUTPUT, EXIT_OK, EXIT_USAGE, FORSAKEN_BUDGET, FORSAKEN_BUDGET_SLOW, main


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_spec(tmp_path, spec, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec), encoding="utf-8")
    return str(path)


def test_hphard_single_algorithm_with_gap_oracle(tmp_path):
    out = tmp_path / "summary.json"
    code = main(["hphard", "--n", "2", "--m", "1", "--seed", "3", "--alg", "2",
                 "--verify-gap", "--out", str(out)])
    assert code == EXIT_OK
    record = _load(out)
    assert record["algorithm"] == 2
    assert record["I"] + record["J"] == record["iterations"]
    assert len(record["feasibility"]) == 1
    if record["estimate"] is not None:
        assert record["gap_oracle"] <= record["estimate"] + 1e-6


def test_verify_gap_rejects_large_dimension(tmp_path):
    code = main(["hphard", "--n", "4", "--m", "1", "--alg", "2", "--verify-gap",
                 "--out", str(tmp_path / "s.json")])
    assert code == EXIT_USAGE
    assert not (tmp_path / "s.json").exists()


def test_bad_arguments_are_usage_errors():
    assert main(["hphard", "--alg", "9"]) == EXIT_USAGE
    assert main(["hphard", "--eps", "0"]) == EXIT_USAGE
    assert main(["nope"]) == EXIT_USAGE
    assert main(["forsaken", "--alg", "all"]) == EXIT_USAGE


def test_hphard_all_algorithms_ordered(tmp_path):
    out = tmp_path / "all.json"
    code = main(["hphard", "--n", "5", "--m", "3", "--seed", "2", "--criterion", "2",
                 "--eps", "0.1", "--out", str(out)])
    assert code == EXIT_OK
    records = _load(out)
    assert [r["algorithm"] for r in records] == [1, 2, 3, 4, 5, 6, 7]
    for r in records:
        assert r["termination"] == "Criterion2"
        assert r["estimate"] is not None
        assert r["witness_distance"] >= 0.0
        assert "gap_oracle" not in r


def test_hphard_runs_are_reproducible(tmp_path):
    argv = ["hphard", "--n", "8", "--m", "4", "--seed", "5", "--alg", "3", "--criterion", "1"]
    assert main(argv + ["--out", str(tmp_path / "a.json")]) == EXIT_OK
    assert main(argv + ["--out", str(tmp_path / "b.json")]) == EXIT_OK
    a, b = _load(tmp_path / "a.json"), _load(tmp_path / "b.json")
    a.pop("wall_time_s")
    b.pop("wall_time_s")
    assert a == b


def test_forsaken_trace(tmp_path):
    out = tmp_path / "forsaken.json"
    code = main(["forsaken", "--max-iter", "200", "--trace-dir", str(tmp_path), "--out", str(out)])
    assert code == EXIT_OK
    record = _load(out)
    assert record["termination"] == "MaxIter"
    assert record["estimate"] is None
    assert record["criterion"] is None

    frame = pd.read_csv(tmp_path / "forsaken_alg2.csv")
    assert len(frame) == 201
    assert frame.iloc[0]["step_type"] == "productive"
    assert frame.iloc[0]["g_value"] == -1.0
    assert frame.iloc[-1]["step_type"] == "final"
    assert np.all(np.hypot(frame["x0"], frame["x1"]) <= 1.2 + 1e-9)


def test_custom_bad_schema(tmp_path):
    bad = _write_spec(tmp_path, {"kind": "custom", "n": 2, "operator": {"type": "cubic"}})
    assert main(["custom", bad, "--alg", "1"]) == EXIT_USAGE
    assert main(["custom", str(tmp_path / "missing.json"), "--alg", "1"]) == EXIT_USAGE
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert main(["custom", str(broken), "--alg", "1"]) == EXIT_USAGE


def test_custom_quadratic_reaches_witness(tmp_path):
    spec = _write_spec(tmp_path, {
        "kind": "custom", "n": 1, "start": [0.5], "witness": [0.0],
        "operator": {"type": "quadratic", "matrix": [[1.0]]},
    })
    out = tmp_path / "q.json"
    assert main(["custom", spec, "--alg", "2", "--verify-gap", "--out", str(out)]) == EXIT_OK
    record = _load(out)
    assert record["termination"] == "Criterion1"
    # gap(x) >= x^2 / 4 for F(x) = x on [-1, 1]
    assert record["witness_distance"] <= 2.0 * np.sqrt(record["estimate"]) + 1e-6
    assert record["gap_oracle"] <= record["estimate"] + 1e-6


def test_custom_without_productive_steps_exits_3(tmp_path):
    spec = _write_spec(tmp_path, {
        "kind": "custom", "n": 2,
        "operator": {"type": "affine", "matrix": [[1.0, 0.0], [0.0, 1.0]]},
        "constraints": {"a": [[1.0, 0.0]], "b": [-2.0]},
    })
    out = tmp_path / "none.json"
    assert main(["custom", spec, "--alg", "2", "--max-iter", "50", "--out", str(out)]) == EXIT_NO_OUTPUT
    record = _load(out)
    assert record["termination"] == "NoProductiveSteps"
    assert record["estimate"] is None
    assert record["I"] == 0 and record["J"] == 50


@pytest.mark.parametrize("alg", [2, 3, 4, 5, 6])
def test_forsaken_default_budgets(tmp_path, alg):
    out = tmp_path / "forsaken.json"
    code = main(["forsaken", "--alg", str(alg), "--trace-dir", str(tmp_path), "--out", str(out)])
    assert code == EXIT_OK
    budget = FORSAKEN_BUDGET_SLOW if alg == 6 else FORSAKEN_BUDGET
    record = _load(out)
    assert record["iterations"] == budget
    assert record["termination"] == "MaxIter"

    frame = pd.read_csv(tmp_path / f"forsaken_alg{alg}.csv")
    assert len(frame) == budget + 1
    assert np.all(np.isfinite(frame[["x0", "x1"]].to_numpy()))
    assert np.all(np.hypot(frame["x0"], frame["x1"]) <= 1.2 + 1e-9)


def test_custom_simplex_start_on_boundary_is_a_usage_error(tmp_path):
    spec = _write_spec(tmp_path, {
        "kind": "custom", "n": 3, "geometry": "entropy", "start": [1.0, 0.0, 0.0],
        "operator": {"type": "affine", "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
    })
    assert main(["custom", spec, "--alg", "2", "--out", str(tmp_path / "s.json")]) == EXIT_USAGE
    assert not (tmp_path / "s.json").exists()


def test_mirror_step_failure_exits_3(tmp_path, monkeypatch):
    def failing_solve(problem, config):
        raise MirrorStepError("mirror step left the feasible set")

    monkeypatch.setattr("app.main.solve", failing_solve)
    out = tmp_path / "m.json"
    assert main(["hphard", "--n", "3", "--m", "1", "--alg", "2", "--out", str(out)]) == EXIT_NO_OUTPUT
    record = _load(out)
    assert record["termination"] == "MirrorStepError"
    assert record["estimate"] is None
