"""
Tests for configuration, run logs, the stats dashboard and error mapping
"""
import json
import unittest

import pytest

from src.config import DEFAULT_CONFIG, get_config, load_config, reload_config
from src.exceptions import (
    ConfigurationError,
    CopForgeError,
    IncludeNotFoundError,
    ProofReplayError,
    SearchTimeout,
    TPTPSyntaxError,
    exit_code_for,
    handle_exception,
)
from src.run_log import RunEventType, RunLevel, RunLogger, list_run_logs, load_run_log
from src.stats import StatsDashboard


class TestConfig:
    """Defaults, YAML files and environment overrides"""

    @pytest.fixture(autouse=True)
    def clean_env(self, monkeypatch):
        for name in ["COPFORGE_CONFIG", "COPFORGE_INCLUDE", "COPFORGE_TIMEOUT", "COPFORGE_SEED",
                     "COPFORGE_RUNS_DIR", "COPFORGE_LOG_LEVEL"]:
            monkeypatch.delenv(name, raising=False)

    def test_defaults(self, tmp_path):
        config = load_config(tmp_path / "missing.yaml")
        assert config.search == DEFAULT_CONFIG["search"]
        assert config.search is not DEFAULT_CONFIG["search"]
        assert config.mcps["iterations"] == "inf"

    def test_yaml_is_merged(self, tmp_path):
        path = tmp_path / "copforge.yaml"
        path.write_text("search:\n  cut: true\n  lim_max: 6\nmcps:\n  cp: 0.5\nunknown:\n  x: 1\n")
        config = load_config(path)
        assert config.search["cut"] is True
        assert config.search["lim_max"] == 6
        assert config.search["backend"] == "stream"
        assert config.mcps["cp"] == 0.5
        assert not hasattr(config, "unknown")

    def test_config_path_from_environment(self, tmp_path, monkeypatch):
        path = tmp_path / "other.yaml"
        path.write_text("preprocess:\n  definitional: true\n")
        monkeypatch.setenv("COPFORGE_CONFIG", str(path))
        assert load_config().preprocess["definitional"] is True

    def test_environment_overrides(self, tmp_path, monkeypatch):
        monkeypatch.setenv("COPFORGE_INCLUDE", f"{tmp_path}/a:{tmp_path}/b")
        monkeypatch.setenv("COPFORGE_TIMEOUT", "2.5")
        monkeypatch.setenv("COPFORGE_SEED", "42")
        monkeypatch.setenv("COPFORGE_RUNS_DIR", str(tmp_path / "runs"))
        monkeypatch.setenv("COPFORGE_LOG_LEVEL", "debug")
        config = load_config(tmp_path / "missing.yaml")
        assert config.paths["include_dirs"] == [f"{tmp_path}/a", f"{tmp_path}/b"]
        assert config.search["timeout"] == 2.5
        assert config.mcps["seed"] == 42
        assert config.paths["runs_dir"] == str(tmp_path / "runs")
        assert config.logging["level"] == "DEBUG"

    def test_global_instance(self, tmp_path, monkeypatch):
        monkeypatch.setenv("COPFORGE_CONFIG", str(tmp_path / "missing.yaml"))
        first = reload_config()
        assert get_config() is first
        monkeypatch.setenv("COPFORGE_TIMEOUT", "7")
        assert get_config().search["timeout"] == first.search["timeout"]
        assert reload_config().search["timeout"] == 7.0


class TestRunLogger(unittest.TestCase):
    """JSONL run logs"""

    def test_levels_filter_events(self):
        logger = RunLogger("r1", "p.p", "WARNING")
        self.assertIsNone(logger.log_level(1))
        self.assertIsNotNone(logger.log_timeout(10))
        self.assertEqual([e.event_type for e in logger.events], [RunEventType.TIMEOUT.value])

    def test_depth_is_recorded(self):
        logger = RunLogger("r2", "p.p", RunLevel.DEBUG)
        logger.log_level(3)
        event = logger.log_proof(3, 12, "clausal")
        self.assertEqual(event.depth, 3)
        self.assertEqual(event.details["inferences"], 12)

    def test_save_and_load(self):
        import tempfile
        from pathlib import Path

        logger = RunLogger("r3")
        logger.log_run_start("p.p", {"cut": True})
        logger.log_certification(False, "bad node")
        logger.log_run_end("Theorem", {"inferences": 5})
        with tempfile.TemporaryDirectory() as tmp:
            path = logger.save(Path(tmp))
            lines = path.read_text().splitlines()
            self.assertEqual(len(lines), 3)
            self.assertEqual(json.loads(lines[0])["details"]["options"], {"cut": True})
            events = load_run_log(path)
            self.assertEqual(events[1].event_type, RunEventType.CERT_FAILED.value)
            self.assertEqual(events[2].details["status"], "Theorem")
            self.assertEqual(list_run_logs(Path(tmp))[0]["event_count"], 3)
        self.assertIsNone(load_run_log("/nonexistent/run.jsonl"))

    def test_training_event(self):
        logger = RunLogger("r5")
        event = logger.log_training("train.tsv", 4)
        self.assertEqual(event.event_type, RunEventType.TRAINING.value)
        self.assertEqual(event.details, {"path": "train.tsv", "contrapositives": 4})

    def test_summary(self):
        logger = RunLogger("r4")
        logger.log_run_start("p.p")
        logger.log_error("boom")
        summary = logger.get_summary()
        self.assertEqual(summary["total_events"], 2)
        self.assertEqual(summary["events_by_level"]["ERROR"], 1)


class TestStatsDashboard:
    """Aggregates over saved runs"""

    def write_run(self, directory, run_id, problem, status, inferences, certified=False):
        logger = RunLogger(run_id)
        logger.log_run_start(problem)
        if certified:
            logger.log_certification(True)
        logger.log_run_end(status, {"inferences": inferences, "depth": 2})
        logger.save(directory)

    def test_totals_and_hardest(self, tmp_path):
        self.write_run(tmp_path, "a", "x/pel01.p", "Theorem", 10, certified=True)
        self.write_run(tmp_path, "b", "x/pel01.p", "Timeout", 500)
        self.write_run(tmp_path, "c", "x/pel05.p", "Theorem", 40)
        dashboard = StatsDashboard(tmp_path)
        totals = dashboard.get_total_stats()
        assert totals["total_runs"] == 3
        assert totals["total_problems"] == 2
        assert totals["solved"] == 2
        assert totals["status_distribution"] == {"Theorem": 2, "Timeout": 1}
        assert totals["certified"] == 1
        assert [h["problem"] for h in dashboard.get_hardest()] == ["x/pel05.p", "x/pel01.p"]

    def test_problem_stats(self, tmp_path):
        self.write_run(tmp_path, "a", "x/pel01.p", "Theorem", 10)
        self.write_run(tmp_path, "b", "y/pel01.p", "Theorem", 4)
        stats = StatsDashboard(tmp_path).get_problem_stats("pel01.p")
        assert stats["total_runs"] == 2
        assert stats["fewest_inferences"] == 4
        assert "error" in StatsDashboard(tmp_path).get_problem_stats("nope.p")

    def test_empty_directory(self, tmp_path):
        assert StatsDashboard(tmp_path / "none").get_total_stats()["total_runs"] == 0


class TestErrors(unittest.TestCase):
    """Exception payloads and exit codes"""

    def test_to_dict(self):
        e = IncludeNotFoundError("no such include", {"searched": ["a"]})
        self.assertEqual(handle_exception(e), {
            "error": "IncludeNotFoundError", "message": "no such include", "details": {"searched": ["a"]},
        })

    def test_syntax_error_carries_position(self):
        e = TPTPSyntaxError("unexpected token", 3, 7)
        self.assertEqual(e.details, {"line": 3, "column": 7})
        self.assertIn("line 3", e.message)

    def test_stdlib_errors(self):
        data = handle_exception(FileNotFoundError("x.p"))
        self.assertEqual(data["error"], "FileNotFoundError")
        self.assertTrue(data["message"].startswith("File not found"))

    def test_exit_codes(self):
        self.assertEqual(exit_code_for(SearchTimeout("t")), 1)
        self.assertEqual(exit_code_for(ProofReplayError("r")), 1)
        self.assertEqual(exit_code_for(ConfigurationError("c")), 2)
        self.assertEqual(exit_code_for(CopForgeError("x")), 2)
        self.assertEqual(exit_code_for(OSError("io")), 2)


if __name__ == "__main__":
    unittest.main()
