#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Testes da configuração de runs, relatórios, cache e tabelas de referência
"""

import importlib.util
import math
from dataclasses import fields
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from core.cache_manager import CacheManager
from core.report_writer import SCHEMA_HEADER, ReportWriter
from pipeline.progress_tracker import ProgressTracker
from pipeline.solve_report import REPORT_COLUMNS, SolveReport
from problems.reference_values import TABLES, compare_with_reference, reference_table, reference_value
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError
from utils.run_config import RunConfig, load_run_file

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="module")
def cli():
    """Entrada de linha de comando da raiz (carregada pelo caminho)"""
    spec = importlib.util.spec_from_file_location("dual_cli", ROOT / "main.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="module")
def orchestrator_module():
    """src/main.py carregado pelo caminho (RunOrchestrator)"""
    spec = importlib.util.spec_from_file_location("dual_orchestrator", ROOT / "src" / "main.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def _row(level, obj):
    row = {column: math.nan for column in REPORT_COLUMNS}
    row.update(mesh=f"2^-{level}", algorithm="dual_frcg", iter=9, obj=obj, reldis=6.42e-3)
    return row


# ------------------------------------------------------------------
# RunConfig
# ------------------------------------------------------------------


def test_run_config_defaults():
    run = RunConfig("example1", 1e-3, 4, "frcg")
    assert run.N == 16
    assert run.name == "example1-frcg-l4-g1e-03"
    assert "name" not in run.cache_key_fields()


def test_example3_forces_single_step():
    assert RunConfig("example3", 1e-4, 4, "ssn").N == 1
    with pytest.raises(ConfigurationError):
        RunConfig("example3", 1e-4, 4, "ssn", N=4)


@pytest.mark.parametrize(
    "kwargs, field",
    [
        ({"gamma": 0.0}, "gamma"),
        ({"gamma": -1e-3}, "gamma"),
        ({"level": 0}, "level"),
        ({"level": 9}, "level"),
        ({"solver": "admm"}, "solver"),
        ({"problem": "example7"}, "problem"),
        ({"c": 1.5}, "c"),
        ({"inner_solver": "amg"}, "inner_solver"),
    ],
)
def test_run_config_validation(kwargs, field):
    base = {"problem": "example1", "gamma": 1e-3, "level": 4, "solver": "frcg"}
    with pytest.raises(ConfigurationError) as info:
        RunConfig(**{**base, **kwargs})
    assert info.value.field == field


def test_run_file_with_runs_list(tmp_path):
    path = tmp_path / "runs.yaml"
    path.write_text(
        "runs:\n"
        "  - problem: example1\n    gamma: 1e-3\n    level: 3\n    solver: frcg\n"
        "  - problem: example2\n    gamma: 1.0e-6\n    level: 3\n    solver: ssn\n    N: 4\n",
        encoding="utf-8",
    )
    runs = load_run_file(path)
    assert [run.problem for run in runs] == ["example1", "example2"]
    assert runs[0].gamma == pytest.approx(1e-3)
    assert runs[1].N == 4


def test_run_file_flat_mapping_and_errors(tmp_path):
    flat = tmp_path / "flat.yaml"
    flat.write_text("problem: example3\ngamma: 1e-4\nlevel: 4\nsolver: ssn\n", encoding="utf-8")
    assert load_run_file(flat)[0].N == 1

    unknown = tmp_path / "unknown.yaml"
    unknown.write_text("problem: example1\ngamma: 1e-3\nlevel: 4\nsolver: frcg\nomega: 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError) as info:
        load_run_file(unknown)
    assert info.value.field == "omega"

    missing = tmp_path / "missing.yaml"
    missing.write_text("problem: example1\nlevel: 4\nsolver: frcg\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_run_file(missing)

    with pytest.raises(ConfigurationError):
        load_run_file(tmp_path / "nope.yaml")


# ------------------------------------------------------------------
# ReportWriter
# ------------------------------------------------------------------


def test_report_has_schema_header_and_fixed_columns(tmp_path):
    writer = ReportWriter(tmp_path)
    path = writer.write_report([_row(4, 3.28e-4)], "table1.csv")
    lines = path.read_text(encoding="utf-8").splitlines()

    assert lines[0] == SCHEMA_HEADER
    assert lines[1] == ",".join(REPORT_COLUMNS)
    assert "3.280000e-04" in lines[2]
    assert list(ReportWriter.load_table(path).columns) == REPORT_COLUMNS


def test_empty_report_is_header_only(tmp_path):
    path = ReportWriter(tmp_path).write_report([], "empty.csv")
    assert path.read_text(encoding="utf-8").splitlines() == [SCHEMA_HEADER, ",".join(REPORT_COLUMNS)]


def test_report_output_is_deterministic(tmp_path):
    writer = ReportWriter(tmp_path)
    rows = [_row(4, 3.28e-4), _row(5, 3.15e-4)]
    first = writer.write_report(rows, "a.csv").read_bytes()
    second = writer.write_report(rows, "b.csv").read_bytes()
    assert first == second


def test_field_dump(tmp_path):
    coordinates = np.array([[0.25, 0.25], [0.5, 0.5]])
    path = ReportWriter(tmp_path).write_field_dump(np.ones((2, 2)), coordinates, "u.txt", np.array([6, 12]))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 5
    assert lines[4].split()[:2] == ["1", "12"]


# ------------------------------------------------------------------
# Cache
# ------------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    cache = CacheManager(tmp_path)
    key = RunConfig("example1", 1e-3, 4, "frcg").cache_key_fields()
    row = _row(4, np.float64(3.28e-4))

    assert cache.load_row(key) is None
    assert cache.save_row(key, row)
    assert cache.is_cached(key)

    loaded = cache.load_row(key)
    assert loaded["obj"] == pytest.approx(3.28e-4)
    assert math.isnan(loaded["err_u"])
    assert cache.clear_cache() == 1


def test_cache_key_ignores_output_fields():
    a = RunConfig("example1", 1e-3, 4, "frcg", name="a", output="a.csv")
    b = RunConfig("example1", 1e-3, 4, "frcg", name="b")
    assert CacheManager.generate_cache_key(a.cache_key_fields()) == CacheManager.generate_cache_key(
        b.cache_key_fields()
    )


def test_cache_key_tracks_resolved_settings():
    run = RunConfig("example1", 1e-3, 4, "frcg")
    assert "resolved" not in run.cache_key_fields()
    loose = run.cache_key_fields({"inner_tol": 1e-8, "multigrid": {"max_cycles": 30}})
    tight = run.cache_key_fields({"inner_tol": 1e-11, "multigrid": {"max_cycles": 30}})
    assert CacheManager.generate_cache_key(loose) != CacheManager.generate_cache_key(tight)


def test_seed_defaults_to_verification_config_and_stays_out_of_key():
    default = RunConfig("example1", 1e-3, 4, "frcg")
    assert default.seed == config_manager.get_verification_config()["seed"]
    other = RunConfig("example1", 1e-3, 4, "frcg", seed=123)
    assert other.seed == 123
    assert default.cache_key_fields() == other.cache_key_fields()
    assert RunConfig.from_mapping({"problem": "example1", "gamma": 1e-3, "level": 2, "solver": "ssn", "seed": 5}).seed == 5


def test_resolved_settings_reach_the_cache_key(orchestrator_module, tmp_path):
    orchestrator = orchestrator_module.RunOrchestrator(use_cache=False, output_dir=tmp_path)
    loose = RunConfig("example1", 1e-3, 4, "frcg", tol=1e-3)
    tight = RunConfig("example1", 1e-3, 4, "frcg", tol=1e-6)

    settings = orchestrator.resolved_settings(loose)
    assert set(settings) == {"solver_config", "multigrid", "inner_tol", "inner_solver", "metrics_version"}
    assert settings["solver_config"]["tol"] == 1e-3
    assert settings["multigrid"]["max_cycles"] == config_manager.get_multigrid_config()["max_cycles"]
    assert settings["metrics_version"] == orchestrator_module.METRICS_VERSION

    keys = [
        CacheManager.generate_cache_key(run.cache_key_fields(orchestrator.resolved_settings(run))) for run in (loose, tight)
    ]
    assert keys[0] != keys[1]


def test_disabled_cache(tmp_path):
    cache = CacheManager(tmp_path, enabled=False)
    assert not cache.save_row({"a": 1}, {"b": 2})
    assert cache.load_row({"a": 1}) is None


# ------------------------------------------------------------------
# Referências publicadas e CLI
# ------------------------------------------------------------------


def test_reference_tables():
    assert set(TABLES) == set(range(1, 8))
    assert reference_value(1, 4, "obj") == pytest.approx(3.28e-4)
    assert reference_value(1, 4, "iter", algorithm="inexact_admm") == 26
    assert reference_value(7, 4, "err_u") == pytest.approx(3.37e-4)
    assert reference_value(7, 4, "err_u", algorithm="ssn") == pytest.approx(3.44e-4)
    assert math.isnan(reference_value(1, 3, "obj"))
    assert len(reference_table(9)) == 0


def test_compare_with_reference():
    report = pd.DataFrame([_row(4, 3.608e-4)], columns=REPORT_COLUMNS)
    deviations = compare_with_reference(report, 1).set_index("metric")
    assert deviations.loc["obj", "relative_deviation"] == pytest.approx(0.1)
    assert deviations.loc["reldis", "relative_deviation"] == pytest.approx(0.0)
    assert "err_u" not in deviations.index


@pytest.mark.parametrize("text, expected", [("4-6", [4, 5, 6]), ("5,7", [5, 7]), ("", []), (None, None)])
def test_parse_levels(cli, text, expected):
    assert cli.parse_levels(text) == expected


def test_reference_only_algorithm_runs_no_solve(cli, tmp_path):
    code = cli.main(["--no-cache", "--output-dir", str(tmp_path), "table", "1", "--algorithm", "inexact_admm"])
    assert code == cli.EXIT_OK
    frame = ReportWriter.load_table(tmp_path / "table1_inexact_admm_reference.csv")
    assert set(frame["algorithm"]) == {"inexact_admm"}
    assert len(frame) == 5


def test_empty_level_list_writes_header_only(cli, tmp_path):
    code = cli.main(["--no-cache", "--output-dir", str(tmp_path), "table", "3", "--levels", ""])
    assert code == cli.EXIT_OK
    lines = (tmp_path / "table3.csv").read_text(encoding="utf-8").splitlines()
    assert lines == [SCHEMA_HEADER, ",".join(REPORT_COLUMNS)]


def test_invalid_run_file_exits_with_config_error(cli, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("problem: example1\ngamma: -1\nlevel: 4\nsolver: frcg\n", encoding="utf-8")
    assert cli.main(["--no-cache", "--output-dir", str(tmp_path), "solve", str(bad)]) == cli.EXIT_CONFIG_ERROR


def test_unknown_table_exits_with_config_error(cli, tmp_path):
    assert cli.main(["--no-cache", "--output-dir", str(tmp_path), "table", "9"]) == cli.EXIT_CONFIG_ERROR


def test_verify_config_passes_each_run_seed(cli, monkeypatch, tmp_path):
    import main as orchestration

    calls = []

    def record(self, level, N, seed=None):
        calls.append((level, N, seed))
        return cli.EXIT_OK, pd.DataFrame({"check": ["gradient_fd"], "passed": [True]})

    monkeypatch.setattr(orchestration.RunOrchestrator, "run_verify", record)
    path = tmp_path / "runs.yaml"
    path.write_text(
        "runs:\n"
        "  - {problem: example1, gamma: 1.0e-3, level: 5, solver: frcg, seed: 13}\n"
        "  - {problem: example2, gamma: 1.0e-3, level: 2, solver: ssn}\n",
        encoding="utf-8",
    )

    code = cli.main(["--no-cache", "--output-dir", str(tmp_path), "verify", "--config", str(path)])
    assert code == cli.EXIT_OK
    assert calls == [(3, 8, 13), (2, 4, config_manager.get_verification_config()["seed"])]


def test_report_and_tracker_carry_only_consumed_fields():
    names = {f.name for f in fields(SolveReport)}
    assert "message" not in names
    assert {"history", "sweeps", "obj", "reldis", "err_u", "err_y"} <= names

    tracker = ProgressTracker("dual_frcg", ["objective", "gradient_norm"])
    tracker.record(0, objective=1.0, gradient_norm=2.0, ignored=3.0)
    tracker.count_event("restarts")
    assert not hasattr(tracker, "column") and not hasattr(tracker, "last")
    assert list(tracker.to_dataframe().columns) == ["iteration", "objective", "gradient_norm"]
    assert tracker.get_statistics()["events"] == {"restarts": 1}
