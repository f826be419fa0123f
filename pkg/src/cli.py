"""
CLI for copforge
Proves TPTP problems, certifies and checks proofs, trains guidance data and
runs parameter sweeps.
"""
from __future__ import annotations

import argparse
import csv
import sys
from datetime import datetime
from pathlib import Path

from .archive import archive_proof, list_proofs, load_proof, rebuild, save_proof
from .config import Config, load_config
from .exceptions import ConfigurationError, CopForgeError, exit_code_for, handle_exception
from .generators.random_problems import ProblemGenerator
from .guidance.nb import TrainDB, extract_training
from .lk import certify, check_lk, load as load_lk, save as save_lk
from .matrix import ClausalMatrix, format_lit
from .proof import EXT, LEMMA, RED, ProofNode
from .prover import (
    CLAUSAL, MCPS_GUIDANCE, NB_GUIDANCE, NO_GUIDANCE, NONCLAUSAL,
    ProverSettings, build_matrix, prepare, prove_problem,
)
from .run_log import RunLogger
from .skolem import skolem_growth
from .stats import StatsDashboard, print_dashboard
from .strategies import STRATEGY_PRESETS, get_strategy, list_strategies
from .sweep import expand_grid, parse_axes, run_sweep, summarize, to_csv
from .tptp import load_problem

# flag dest -> (config section, key)
_OVERRIDES = {
    "cut": ("search", "cut"),
    "conj": ("search", "conj"),
    "backend": ("search", "backend"),
    "lim_start": ("search", "lim_start"),
    "lim_max": ("search", "lim_max"),
    "timeout": ("search", "timeout"),
    "regularity": ("search", "regularity"),
    "lemmata": ("search", "lemmata"),
    "beta_order": ("search", "beta_order"),
    "definitional": ("preprocess", "definitional"),
    "eq_axioms": ("preprocess", "eq_axioms"),
    "nb_sigma1": ("guidance", "sigma1"),
    "nb_sigma2": ("guidance", "sigma2"),
    "nb_sigma3": ("guidance", "sigma3"),
    "nb_mu": ("guidance", "mu"),
    "mcps_iterations": ("mcps", "iterations"),
    "mcps_smax": ("mcps", "s_max"),
    "mcps_cp": ("mcps", "cp"),
    "mcps_prob": ("mcps", "prob"),
    "mcps_reward": ("mcps", "reward"),
    "mcps_expand": ("mcps", "expand"),
    "seed": ("mcps", "seed"),
}


def build_config(args) -> tuple[Config, str]:
    """Config file, then strategy preset, then explicit flags"""
    config = load_config(getattr(args, "config", None))
    guidance = NO_GUIDANCE

    strategy = getattr(args, "strategy", None)
    if getattr(args, "mcps_tuned", False):
        strategy = "mcps-tuned"
    if strategy:
        if strategy.lower() not in STRATEGY_PRESETS:
            raise ConfigurationError(f"Unknown strategy: {strategy}", {"strategies": list(STRATEGY_PRESETS)})
        preset = get_strategy(strategy)
        config = preset.apply(config)
        guidance = preset.guidance

    for dest, (section, key) in _OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is not None:
            getattr(config, section)[key] = value

    if getattr(args, "nonclausal", False):
        config.search["engine"] = NONCLAUSAL
    if getattr(args, "include_dir", None):
        config.paths["include_dirs"] = list(args.include_dir) + list(config.paths.get("include_dirs", []))

    if getattr(args, "mcps", False):
        guidance = MCPS_GUIDANCE
    elif getattr(args, "train_in", None) and guidance == NO_GUIDANCE:
        guidance = NB_GUIDANCE
    return config, guidance


def build_settings(args) -> tuple[Config, ProverSettings]:
    config, guidance = build_config(args)
    settings = ProverSettings.from_config(config, guidance)
    if getattr(args, "train_in", None):
        settings.train_db = TrainDB.load(args.train_in)
    if getattr(args, "train_out", None) and settings.engine != CLAUSAL:
        raise ConfigurationError("training data is extracted from clausal proofs only")
    return config, settings


def _print_proof(node: ProofNode, matrix, sigma, indent: int = 0) -> None:
    syms = matrix.syms
    label = node.rule
    if node.lit is not None:
        label += " " + format_lit(sigma.resolve_lit(node.lit), syms)
    if node.rule == EXT and isinstance(matrix, ClausalMatrix):
        label += f"  [clause {node.clause}, literal {node.pos}]"
    elif node.rule == RED:
        label += f"  [path {node.path_index}]"
    elif node.rule == LEMMA:
        label += "  [lemma]"
    print("  " * indent + label)
    for child in node.children:
        _print_proof(child, matrix, sigma, indent + 1)


def cmd_prove(args):
    """Prove a problem"""
    config, settings = build_settings(args)
    problem = load_problem(args.file, config.paths.get("include_dirs", []))
    name = Path(args.file).stem

    run_id = f"{name}_{datetime.now().strftime('%Y%m%d_%H%M%S_%f')}"
    logger = RunLogger(run_id, str(args.file), config.logging.get("level", "INFO"))
    attempt = prove_problem(problem, settings, logger)
    result = attempt.result

    print(f"% SZS status {result.status} for {name}")
    print(f"% {result.stats.line()}")

    code = 0 if result.proved else 1
    if result.proved:
        proof = result.proof
        if args.verbose:
            print("% SZS output start Proof")
            _print_proof(proof.root, attempt.matrix, proof.psubst())
            print("% SZS output end Proof")

        if args.save_proof:
            record = archive_proof(problem, settings, proof, attempt.matrix)
            path = save_proof(record, args.save_proof)
            print(f"% proof saved to {path}")

        if args.certify or args.lk_out:
            lk, report = certify(proof, attempt.matrix, name)
            logger.log_certification(report.ok, report.line())
            print(f"% {report.line()}")
            if args.lk_out:
                print(f"% LK proof saved to {save_lk(lk, args.lk_out)}")
            if not report:
                code = 1

        if args.train_out:
            delta = extract_training(proof, attempt.matrix, result.stats.attempts)
            out = Path(args.train_out)
            db = TrainDB.load(out).merge(delta) if out.exists() else delta
            db.save(out)
            logger.log_training(out, len(delta.contras))
            print(f"% training data saved to {out}")

    if config.logging.get("run_log", True):
        logger.save(Path(config.paths.get("runs_dir", ".runs")))
    return code


def cmd_certify(args):
    """Certify an archived proof through LK"""
    if args.list:
        config = load_config(args.config)
        proofs = list_proofs(args.dir or config.paths.get("proofs_dir", ".proofs"), limit=args.limit)
        print("\n🗂️  Archived Proofs")
        print("-" * 60)
        for p in proofs:
            print(f"  {p['proof_id']:40} [{p['engine']:10}] {p['problem']}")
        return 0

    if not args.proof_file:
        raise ConfigurationError("certify needs a proof file or --list")

    record = load_proof(args.proof_file)
    matrix, proof = rebuild(record)
    lk, report = certify(proof, matrix, record.problem_name)

    print(f"\n🔏 Certify: {record.problem_name} ({record.engine})")
    print("-" * 60)
    print(f"  LK nodes: {lk.size()}")
    for rule, count in sorted(lk.rule_counts().items()):
        print(f"    {rule:8} {count}")
    print(f"  {report.line()}")
    if args.out:
        print(f"  Saved: {save_lk(lk, args.out)}")
    return 0 if report else 1


def cmd_check(args):
    """Check an LK proof file"""
    lk = load_lk(args.lk_file)
    report = check_lk(lk)
    print(f"\n✅ Check: {args.lk_file}" if report else f"\n❌ Check: {args.lk_file}")
    print("-" * 60)
    print(f"  {report.line()}")
    return 0 if report else 1


def cmd_train(args):
    """Extract training data from a directory of archived proofs"""
    directory = Path(args.proof_dir)
    if not directory.is_dir():
        raise FileNotFoundError(f"Not a directory: {directory}")

    db = TrainDB.load(args.merge) if args.merge else TrainDB()
    used = skipped = 0
    print(f"\n🧠 Training from {directory}")
    print("-" * 60)
    for path in sorted(directory.glob("*.json")):
        try:
            matrix, proof = rebuild(load_proof(path))
        except CopForgeError as e:
            print(f"  skip {path.name}: {e.message}")
            skipped += 1
            continue
        if not isinstance(matrix, ClausalMatrix):
            print(f"  skip {path.name}: nonclausal proof")
            skipped += 1
            continue
        db.merge(extract_training(proof, matrix))
        used += 1

    db.save(args.out)
    print(f"  Proofs used: {used} | skipped: {skipped}")
    print(f"  Contrapositives: {len(db.contras)} | symbols: {len(db.df)}")
    print(f"  Saved: {args.out}")
    return 0


def cmd_sweep(args):
    """Run a parameter grid over a corpus"""
    _, base = build_settings(args)
    if args.corpus:
        paths = sorted(Path(args.corpus).glob("*.p"))
        if not paths:
            raise FileNotFoundError(f"No .p files in {args.corpus}")
        problems = [load_problem(p) for p in paths]
    else:
        problems = ProblemGenerator(args.corpus_seed).mini_corpus(args.generate)

    points = expand_grid(base, parse_axes(args.grid or []))
    rows = summarize(run_sweep(points, problems, workers=args.workers))
    text = to_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"📈 {len(rows)} grid points x {len(problems)} problems -> {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_matrix(args):
    """Print a problem's matrix"""
    config, settings = build_settings(args)
    problem = load_problem(args.file, config.paths.get("include_dirs", []))
    matrix = build_matrix(prepare(problem, settings), settings)
    print(matrix.dump())
    return 0


def cmd_skolem_report(args):
    """Skolem output sizes on the exponential family"""
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "delta", "naive_inside_out", "consistent", "bound"])
    for n in range(1, args.max_n + 1):
        g = skolem_growth(n)
        writer.writerow([g["n"], g["delta"], g["naive_inside_out"], g["consistent"], g["bound"]])
    return 0


def cmd_strategies(args):
    """Show strategy presets"""
    print("\n⚙️  Strategy Presets")
    print("-" * 60)
    for s in list_strategies():
        print(f"\n{s['display_name']} ({s['name']}):")
        print(f"  {s['description']}")
        print(f"  Engine: {s['engine']} | Guidance: {s['guidance']}")
    return 0


def cmd_stats(args):
    """Show run statistics"""
    config = load_config(args.config)
    runs_dir = config.paths.get("runs_dir", ".runs")
    if args.problem:
        stats = StatsDashboard(runs_dir).get_problem_stats(args.problem)
        print(f"\n📊 {args.problem}")
        print("-" * 60)
        for key, value in stats.items():
            print(f"  {key}: {value}")
        return 0
    print_dashboard(runs_dir)
    return 0


def _add_prover_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--strategy", help="Strategy preset name")
    p.add_argument("--include-dir", action="append", help="Include search directory (repeatable)")

    pre = p.add_argument_group("preprocessing")
    pre.add_argument("--definitional", action=argparse.BooleanOptionalAction, default=None)
    pre.add_argument("--eq-axioms", action=argparse.BooleanOptionalAction, default=None)

    search = p.add_argument_group("search")
    search.add_argument("--nonclausal", action="store_true", help="Nonclausal engine")
    search.add_argument("--cut", action=argparse.BooleanOptionalAction, default=None)
    search.add_argument("--conj", action=argparse.BooleanOptionalAction, default=None)
    search.add_argument("--regularity", action=argparse.BooleanOptionalAction, default=None)
    search.add_argument("--lemmata", action=argparse.BooleanOptionalAction, default=None)
    search.add_argument("--backend", choices=["stream", "cps"])
    search.add_argument("--beta-order", choices=["plain", "lifted"])
    search.add_argument("--lim-start", type=int)
    search.add_argument("--lim-max", type=int)
    search.add_argument("--timeout", type=float, help="Seconds")

    nb = p.add_argument_group("naive Bayes guidance")
    nb.add_argument("--train-in", help="Training data for guided search")
    nb.add_argument("--nb-sigma1", type=float)
    nb.add_argument("--nb-sigma2", type=float)
    nb.add_argument("--nb-sigma3", type=float)
    nb.add_argument("--nb-mu", type=float)

    mc = p.add_argument_group("Monte Carlo guidance")
    mc.add_argument("--mcps", action="store_true", help="Monte Carlo proof search")
    mc.add_argument("--mcps-tuned", action="store_true", help="Tuned Monte Carlo preset")
    mc.add_argument("--mcps-iterations", help="N or inf")
    mc.add_argument("--mcps-smax", type=int)
    mc.add_argument("--mcps-cp", type=float)
    mc.add_argument("--mcps-prob", choices=["uniform", "open", "nb"])
    mc.add_argument("--mcps-reward", choices=["ratio", "weight", "closability", "random"])
    mc.add_argument("--mcps-expand", choices=["default", "min-branch", "min-depth"])
    mc.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copforge",
        description="Connection tableaux prover with proof certification",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # Prove command
    prove_parser = subparsers.add_parser("prove", help="Prove a TPTP problem")
    prove_parser.add_argument("file", help="TPTP problem file")
    _add_prover_flags(prove_parser)
    prove_parser.add_argument("--save-proof", metavar="DIR", help="Archive the proof in DIR")
    prove_parser.add_argument("--certify", action="store_true", help="Certify the proof through LK")
    prove_parser.add_argument("--lk-out", metavar="FILE", help="Write the LK proof (implies --certify)")
    prove_parser.add_argument("--train-out", metavar="FILE", help="Add this proof to training data")
    prove_parser.add_argument("-v", "--verbose", action="store_true", help="Print the proof")
    prove_parser.set_defaults(func=cmd_prove)

    # Certify command
    cert_parser = subparsers.add_parser("certify", help="Certify an archived proof")
    cert_parser.add_argument("proof_file", nargs="?", help="Archived proof (JSON)")
    cert_parser.add_argument("--out", help="Write the LK proof here")
    cert_parser.add_argument("--list", action="store_true", help="List archived proofs")
    cert_parser.add_argument("--dir", help="Proof archive directory")
    cert_parser.add_argument("--limit", type=int, default=20)
    cert_parser.add_argument("--config", help="YAML config file")
    cert_parser.set_defaults(func=cmd_certify)

    # Check command
    check_parser = subparsers.add_parser("check", help="Check an LK proof file")
    check_parser.add_argument("lk_file")
    check_parser.set_defaults(func=cmd_check)

    # Train command
    train_parser = subparsers.add_parser("train", help="Extract training data from archived proofs")
    train_parser.add_argument("proof_dir")
    train_parser.add_argument("--out", required=True, help="Training data file")
    train_parser.add_argument("--merge", help="Existing training data to extend")
    train_parser.set_defaults(func=cmd_train)

    # Sweep command
    sweep_parser = subparsers.add_parser("sweep", help="Run a parameter grid")
    _add_prover_flags(sweep_parser)
    sweep_parser.add_argument("--grid", action="append", help="section.key=v1,v2,... (repeatable)")
    sweep_parser.add_argument("--corpus", help="Directory of .p files")
    sweep_parser.add_argument("--generate", type=int, default=50, help="Generated corpus size")
    sweep_parser.add_argument("--corpus-seed", type=int, default=0)
    sweep_parser.add_argument("--workers", type=int, default=1)
    sweep_parser.add_argument("--out", help="CSV output file")
    sweep_parser.set_defaults(func=cmd_sweep)

    # Matrix command
    matrix_parser = subparsers.add_parser("matrix", help="Print a problem's matrix")
    matrix_parser.add_argument("file")
    _add_prover_flags(matrix_parser)
    matrix_parser.set_defaults(func=cmd_matrix)

    # Skolem report
    skolem_parser = subparsers.add_parser("skolem-report", help="Skolem size growth report")
    skolem_parser.add_argument("--max-n", type=int, default=8)
    skolem_parser.set_defaults(func=cmd_skolem_report)

    # Strategies command
    strat_parser = subparsers.add_parser("strategies", help="Show strategy presets")
    strat_parser.set_defaults(func=cmd_strategies)

    # Stats command
    stats_parser = subparsers.add_parser("stats", help="Show run statistics")
    stats_parser.add_argument("--problem", help="Statistics for one problem")
    stats_parser.add_argument("--config", help="YAML config file")
    stats_parser.set_defaults(func=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 2

    try:
        return args.func(args) or 0
    except (CopForgeError, OSError, ValueError, RecursionError) as e:
        error = handle_exception(e)
        print(f"❌ {error['error']}: {error['message']}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
