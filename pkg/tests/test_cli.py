import json
import shlex
import sys
from pathlib import Path

import pytest

from toy_components import (
    DATA_DIR,
    TOY_SOLVER_BIASED,
    TOY_SOLVER_CRASH,
    TOY_SOLVER_OK,
    TOY_TEST_ALWAYS_TRUE,
    TOY_TEST_NONBOOL,
    TOY_TEST_OK,
)
from solverpool.cli import main, parse_config_file


def _run(argv):
    return main(argv)


def _write_toy_fixtures(root: Path):
    (root / "solvers").mkdir(parents=True)
    (root / "instances").mkdir()
    (root / "tests").mkdir()
    (root / "solvers" / "exact.py").write_bytes(TOY_SOLVER_OK)
    (root / "solvers" / "biased.py").write_bytes(TOY_SOLVER_BIASED)
    (root / "solvers" / "crash.py").write_bytes(TOY_SOLVER_CRASH)
    for k, (value, feasible) in enumerate(
        [(3.0, True), (8.0, True), (5.0, False), (2.0, True), (9.0, True)]
    ):
        (root / "instances" / f"i{k}.json").write_text(
            json.dumps({"value": value, "feasible": feasible})
        )
    (root / "tests" / "t_ok.py").write_bytes(TOY_TEST_OK)
    (root / "tests" / "t_true.py").write_bytes(TOY_TEST_ALWAYS_TRUE)
    (root / "tests" / "t_maybe.py").write_bytes(TOY_TEST_NONBOOL)


def _runner_flag():
    return f"{shlex.quote(sys.executable)} {shlex.quote(str(DATA_DIR / 'toyrunner.py'))}"


def test_run_synthetic_deterministic(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    base = [
        "run",
        "--source",
        "synthetic",
        "--seed",
        "3",
        "--n-solvers",
        "12",
        "--n-instances",
        "16",
        "--n-tests",
        "6",
    ]
    assert _run(base + ["--out", str(out_a)]) == 0
    assert _run(base + ["--out", str(out_b)]) == 0
    for name in ("theta.json", "selection.json"):
        assert (out_a / "results" / name).read_bytes() == (
            out_b / "results" / name
        ).read_bytes()


def test_stage_decomposition_matches_run(tmp_path):
    common = [
        "--source",
        "synthetic",
        "--seed",
        "5",
        "--n-solvers",
        "10",
        "--n-instances",
        "12",
        "--n-tests",
        "5",
    ]
    out_run = tmp_path / "whole"
    assert _run(["run"] + common + ["--out", str(out_run)]) == 0
    out_stage = tmp_path / "staged"
    for stage in ("generate", "evaluate", "filter", "characterize", "select"):
        assert _run(["stage", stage] + common + ["--out", str(out_stage)]) == 0
    for name in ("components.json", "raw.jsonl", "filtered.json", "theta.json",
                 "selection.json"):
        assert (out_run / "results" / name).read_bytes() == (
            out_stage / "results" / name
        ).read_bytes(), name


def test_stage_missing_prerequisite_errors(tmp_path, capsys):
    rc = _run(
        ["stage", "filter", "--source", "synthetic", "--out", str(tmp_path / "x")]
    )
    assert rc == 2
    assert "missing artifact" in capsys.readouterr().err


def test_run_fixtures_selects_exact_toy_solver(tmp_path):
    fixtures = tmp_path / "fixtures"
    _write_toy_fixtures(fixtures)
    out = tmp_path / "out"
    rc = _run(
        [
            "run",
            "--source",
            "fixtures",
            "--fixtures-dir",
            str(fixtures),
            "--runner-cmd",
            _runner_flag(),
            "--solver-timeout",
            "10",
            "--test-timeout",
            "10",
            "--out",
            str(out),
            "--seed",
            "0",
        ]
    )
    assert rc == 0
    selection = json.loads((out / "results" / "selection.json").read_text())
    assert selection["chosen"] == "exact.py"
    # Crashing solver and the non-boolean test must have been filtered out.
    filtered = json.loads((out / "results" / "filtered.json").read_text())
    assert "crash.py" not in filtered["keep_solvers"]
    assert "t_maybe.py" not in filtered["keep_tests"]
    assert (out / "results" / "selected_solver.py").read_bytes() == TOY_SOLVER_OK


def test_select_auto_penalties_recorded(tmp_path):
    out = tmp_path / "out"
    assert (
        _run(
            [
                "run",
                "--source",
                "synthetic",
                "--seed",
                "1",
                "--n-solvers",
                "8",
                "--n-instances",
                "10",
                "--n-tests",
                "4",
                "--p-miss",
                "auto",
                "--p-fail",
                "auto",
                "--out",
                str(out),
            ]
        )
        == 0
    )
    doc = json.loads((out / "results" / "selection.json").read_text())
    assert doc["p_miss"] == pytest.approx(10 * doc["z_max"])
    assert doc["p_fail"] == pytest.approx(10 * doc["z_max"])


def test_characterize_respects_max_iters(tmp_path):
    out = tmp_path / "out"
    assert (
        _run(
            [
                "run",
                "--source",
                "synthetic",
                "--seed",
                "2",
                "--n-solvers",
                "8",
                "--n-instances",
                "10",
                "--n-tests",
                "4",
                "--max-iters",
                "100",
                "--out",
                str(out),
            ]
        )
        == 0
    )
    doc = json.loads((out / "results" / "theta.json").read_text())
    assert doc["diagnostics"]["iterations"] <= 100


def test_config_file_and_flag_override(tmp_path):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(
        "source = synthetic\n"
        "seed = 9\n"
        "n-solvers = 6  # inline comment\n"
        "n-instances = 8\n"
        "n-tests = 3\n"
        f"out = {tmp_path / 'from_file'}\n"
    )
    parsed = parse_config_file(cfg_path)
    assert parsed["n-solvers"] == "6"
    assert _run(["run", "--config", str(cfg_path)]) == 0
    assert (tmp_path / "from_file" / "results" / "selection.json").is_file()
    # Flag overrides the file value.
    assert (
        _run(["run", "--config", str(cfg_path), "--out", str(tmp_path / "flag_out")])
        == 0
    )
    assert (tmp_path / "flag_out" / "results" / "selection.json").is_file()


def test_bench_grid_rows(tmp_path):
    out = tmp_path / "bench"
    rc = _run(
        [
            "bench",
            "--source",
            "synthetic",
            "--seed",
            "4",
            "--n-solvers",
            "10",
            "--n-instances",
            "12",
            "--n-tests",
            "4",
            "--reps",
            "5",
            "--grid",
            "1,2,4,8",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    lines = (out / "results" / "bench.csv").read_text().strip().splitlines()
    assert len(lines) == 5  # header + 4 grid rows
    assert lines[1].split(",")[0] == "1"


def test_bench_missing_precomputed_errors(tmp_path, capsys):
    rc = _run(
        [
            "bench",
            "--source",
            "fixtures",
            "--fixtures-dir",
            str(tmp_path),
            "--out",
            str(tmp_path / "nope"),
        ]
    )
    assert rc == 2
    assert "no precomputed results" in capsys.readouterr().err


def test_unknown_config_key_errors(tmp_path, capsys):
    cfg_path = tmp_path / "bad.cfg"
    cfg_path.write_text("bogus-key = 1\n")
    rc = _run(["run", "--config", str(cfg_path), "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "unknown config key" in capsys.readouterr().err


def test_out_flag_required(capsys):
    rc = _run(["run", "--source", "synthetic"])
    assert rc == 2
    assert "--out is required" in capsys.readouterr().err

def test_run_empty_selection_exits_nonzero(tmp_path, capsys):
    # A corpus where every triple is non-interpretable: the filter cannot
    # keep a nonempty cube, so the run must fail loudly.
    fixtures = tmp_path / "fixtures"
    (fixtures / "solvers").mkdir(parents=True)
    (fixtures / "instances").mkdir()
    (fixtures / "tests").mkdir()
    (fixtures / "solvers" / "crash.py").write_bytes(TOY_SOLVER_CRASH)
    (fixtures / "instances" / "i0.json").write_text('{"value": 1.0}')
    (fixtures / "tests" / "t.py").write_bytes(TOY_TEST_OK)
    rc = _run(
        [
            "run",
            "--source",
            "fixtures",
            "--fixtures-dir",
            str(fixtures),
            "--runner-cmd",
            _runner_flag(),
            "--out",
            str(tmp_path / "out"),
        ]
    )
    assert rc == 2
    assert "empty selection" in capsys.readouterr().err
