"""
Tests for the copforge command line
"""
from pathlib import Path

import pytest

from src.cli import build_config, build_parser, main
from src.lk import load as load_lk, save as save_lk
from src.lk.formulas import BOT_L
from src.formula import Atom
from src.prover import MCPS_GUIDANCE, NO_GUIDANCE, NONCLAUSAL

CORPUS = Path(__file__).resolve().parent.parent / "src" / "corpus"
EXAMPLE = str(CORPUS / "nested_axiom.p")


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    """Runs write their logs under tmp_path and ignore any local config file"""
    monkeypatch.setenv("COPFORGE_CONFIG", str(tmp_path / "absent.yaml"))
    monkeypatch.setenv("COPFORGE_RUNS_DIR", str(tmp_path / "runs"))
    monkeypatch.delenv("COPFORGE_INCLUDE", raising=False)
    monkeypatch.delenv("COPFORGE_TIMEOUT", raising=False)
    return tmp_path


class TestProve:
    def test_theorem(self, capsys, isolated):
        assert main(["prove", EXAMPLE]) == 0
        out = capsys.readouterr().out
        assert "% SZS status Theorem for nested_axiom" in out
        assert "inferences=" in out
        assert list((isolated / "runs").glob("*.jsonl"))

    @pytest.mark.parametrize("flags", [["--cut", "--conj"], ["--nonclausal"]])
    def test_running_example_file(self, capsys, flags):
        assert main(["prove", str(CORPUS / "example1.p"), *flags]) == 0
        assert "% SZS status Theorem for example1" in capsys.readouterr().out

    def test_verbose_prints_the_proof(self, capsys):
        assert main(["prove", EXAMPLE, "-v"]) == 0
        out = capsys.readouterr().out
        assert "% SZS output start Proof" in out
        assert "start" in out

    def test_not_a_theorem(self, capsys, isolated):
        problem = isolated / "open.p"
        problem.write_text("fof(a, axiom, p).\nfof(c, conjecture, q).\n")
        assert main(["prove", str(problem)]) == 1
        assert "% SZS status GaveUp for open" in capsys.readouterr().out

    def test_nonclausal_and_strategies(self, capsys):
        assert main(["prove", EXAMPLE, "--nonclausal"]) == 0
        assert main(["prove", EXAMPLE, "--strategy", "clausal+cut+conj"]) == 0
        assert main(["prove", EXAMPLE, "--mcps", "--timeout", "30"]) == 0
        assert main(["prove", EXAMPLE, "--mcps-tuned", "--timeout", "30"]) == 0
        assert capsys.readouterr().out.count("SZS status Theorem") == 4

    def test_certify_and_check(self, capsys, isolated):
        lk_file = isolated / "nested_axiom.lk"
        assert main(["prove", EXAMPLE, "--lk-out", str(lk_file)]) == 0
        assert "LK proof ok" in capsys.readouterr().out
        assert main(["check", str(lk_file)]) == 0
        assert "✅" in capsys.readouterr().out

    def test_tampered_lk_file(self, capsys, isolated):
        lk_file = isolated / "nested_axiom.lk"
        main(["prove", EXAMPLE, "--lk-out", str(lk_file)])
        lk = load_lk(lk_file)
        node = next(n for n in lk.root.walk() if n.rule == BOT_L)
        node.principal = Atom("tampered")
        save_lk(lk, lk_file)
        capsys.readouterr()
        assert main(["check", str(lk_file)]) == 1
        assert "LK violation" in capsys.readouterr().out

    def test_archive_certify_and_train(self, capsys, isolated):
        proofs = isolated / "proofs"
        for name in ["nested_axiom.p", "pel05.p", "syllogism.p"]:
            assert main(["prove", str(CORPUS / name), "--save-proof", str(proofs)]) == 0
        saved = sorted(proofs.glob("*.json"))
        assert len(saved) == 3
        assert main(["certify", str(saved[0])]) == 0
        assert "LK proof ok" in capsys.readouterr().out

        train = isolated / "train.tsv"
        assert main(["train", str(proofs), "--out", str(train)]) == 0
        assert train.exists()
        assert main(["prove", EXAMPLE, "--train-in", str(train)]) == 0
        assert main(["prove", EXAMPLE, "--mcps", "--mcps-prob", "nb", "--train-in", str(train), "--timeout", "30"]) == 0

    def test_train_out_accumulates(self, isolated):
        train = isolated / "train.tsv"
        assert main(["prove", EXAMPLE, "--train-out", str(train)]) == 0
        first = train.read_text()
        assert main(["prove", str(CORPUS / "pel05.p"), "--train-out", str(train)]) == 0
        assert "problems\t2" in train.read_text()
        assert "problems\t1" in first


class TestErrors:
    def test_missing_file(self, capsys):
        assert main(["prove", "/nonexistent/problem.p"]) == 2
        assert "❌" in capsys.readouterr().err

    def test_syntax_error(self, capsys, isolated):
        bad = isolated / "bad.p"
        bad.write_text("fof(a, axiom, p &).\n")
        assert main(["prove", str(bad)]) == 2
        assert "TPTPSyntaxError" in capsys.readouterr().err

    def test_unknown_strategy(self, capsys):
        assert main(["prove", EXAMPLE, "--strategy", "nope"]) == 2
        assert "Unknown strategy" in capsys.readouterr().err

    def test_conflicting_options(self):
        assert main(["prove", EXAMPLE, "--nonclausal", "--definitional"]) == 2

    def test_no_command(self, capsys):
        assert main([]) == 2

    def test_bad_training_file(self, isolated):
        assert main(["prove", EXAMPLE, "--train-in", str(isolated / "none.tsv")]) == 2


class TestOtherCommands:
    def test_matrix(self, capsys):
        assert main(["matrix", EXAMPLE]) == 0
        out = capsys.readouterr().out.strip()
        assert out.startswith("[[") and out.endswith("]]")

    def test_skolem_report(self, capsys):
        assert main(["skolem-report", "--max-n", "3"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n,delta,naive_inside_out,consistent,bound"
        assert len(lines) == 4

    def test_strategies(self, capsys):
        assert main(["strategies"]) == 0
        out = capsys.readouterr().out
        for name in ["clausal+cut+conj", "nonclausal+cut+lifted", "mcps-tuned", "nb-guided"]:
            assert name in out

    def test_stats_after_runs(self, capsys):
        main(["prove", EXAMPLE])
        capsys.readouterr()
        assert main(["stats"]) == 0
        assert main(["stats", "--problem", "nested_axiom"]) == 0

    def test_sweep_csv(self, capsys, isolated):
        out = isolated / "sweep.csv"
        code = main([
            "sweep", "--generate", "3", "--grid", "search.cut=false,true", "--out", str(out), "--timeout", "20",
        ])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("config,problems,solved")
        assert len(lines) == 3
        assert lines[1].startswith("cut=false,3,")


class TestBuildConfig:
    def parse(self, *argv):
        return build_parser().parse_args(["prove", EXAMPLE, *argv])

    def test_flags_override_presets(self):
        config, guidance = build_config(self.parse("--strategy", "clausal+cut+conj", "--no-cut", "--lim-max", "5"))
        assert config.search["cut"] is False
        assert config.search["conj"] is True
        assert config.search["lim_max"] == 5
        assert guidance == NO_GUIDANCE

    def test_tuned_alias(self):
        config, guidance = build_config(self.parse("--mcps-tuned"))
        assert guidance == MCPS_GUIDANCE
        assert config.mcps["iterations"] == 27
        assert config.mcps["reward"] == "closability"

    def test_nonclausal_flag(self):
        config, _ = build_config(self.parse("--nonclausal", "--beta-order", "lifted"))
        assert config.search["engine"] == NONCLAUSAL
        assert config.search["beta_order"] == "lifted"

    def test_environment_timeout(self, monkeypatch):
        monkeypatch.setenv("COPFORGE_TIMEOUT", "3.5")
        config, _ = build_config(self.parse())
        assert config.search["timeout"] == 3.5
