"""
Proof Archive for copforge
Keeps found proofs on disk together with the problem text and the options
needed to rebuild their matrix, so they can be certified later.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from datetime import datetime
from pathlib import Path
from typing import Any

from .exceptions import ProofReplayError
from .matrix import ClausalMatrix, NCMatrix
from .proof import Proof, proof_from_dict, proof_to_dict
from .prover import NONCLAUSAL, ProverSettings, build_matrix, prepare
from .search import SearchOptions
from .symbols import SymTable
from .tptp import Problem, format_problem, parse_problem

FORMAT_VERSION = 1


@dataclass
class ArchivedProof:
    """Self-contained record of one proof"""
    proof_id: str
    problem_name: str
    problem_text: str
    engine: str
    options: dict[str, Any]
    symbols: list[list]
    proof: dict[str, Any]
    created_at: str
    status: str = "Theorem"
    version: int = FORMAT_VERSION

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def load_proof(self) -> Proof:
        return proof_from_dict(self.proof)


def symbol_table(syms: SymTable | None) -> list[list]:
    if syms is None:
        return []
    return [[sym, syms.kind(sym), syms.name(sym), syms.arity(sym)] for sym in syms.symbols()]


def archive_proof(
    problem: Problem,
    settings: ProverSettings,
    proof: Proof,
    matrix: ClausalMatrix | NCMatrix,
    proof_id: str | None = None,
) -> ArchivedProof:
    stem = Path(problem.source).stem if problem.source else "problem"
    return ArchivedProof(
        proof_id=proof_id or f"{stem}_{datetime.now().strftime('%Y%m%d_%H%M%S_%f')}",
        problem_name=stem,
        problem_text=format_problem(problem),
        engine=settings.engine,
        options={
            "eq_axioms": settings.eq_axioms,
            "definitional": settings.definitional,
            "skolem_size_check": settings.skolem_size_check,
            "beta_order": settings.search.beta_order,
        },
        symbols=symbol_table(matrix.syms),
        proof=proof_to_dict(proof),
        created_at=datetime.now().isoformat(),
    )


def save_proof(record: ArchivedProof, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{record.proof_id}.json"
    path.write_text(json.dumps(record.to_dict(), indent=2), encoding="utf-8")
    return path


def load_proof(path: str | Path) -> ArchivedProof:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Proof file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        return ArchivedProof(**data)
    except (json.JSONDecodeError, TypeError) as e:
        raise ProofReplayError(f"Malformed proof file {path}: {e}", {"path": str(path)}) from e


def rebuild(record: ArchivedProof) -> tuple[ClausalMatrix | NCMatrix, Proof]:
    """Re-run preprocessing on the stored problem and check the symbols line up"""
    opts = record.options
    settings = ProverSettings(
        engine=record.engine,
        definitional=opts.get("definitional", False),
        eq_axioms=opts.get("eq_axioms", True),
        skolem_size_check=opts.get("skolem_size_check", True),
        search=SearchOptions(beta_order=opts.get("beta_order", "plain")),
    )
    problem = parse_problem(record.problem_text, record.problem_name)
    matrix = build_matrix(prepare(problem, settings), settings)
    if record.symbols and symbol_table(matrix.syms) != [list(s) for s in record.symbols]:
        raise ProofReplayError(
            "Rebuilt matrix uses different symbols than the archived proof",
            {"proof_id": record.proof_id},
        )
    proof = record.load_proof()
    if (proof.engine == NONCLAUSAL) != isinstance(matrix, NCMatrix):
        raise ProofReplayError("Proof engine does not match the archived options", {"engine": proof.engine})
    return matrix, proof


def list_proofs(directory: str | Path, limit: int = 20) -> list[dict[str, Any]]:
    """List archived proofs, newest first"""
    directory = Path(directory)
    if not directory.exists():
        return []
    out = []
    for f in sorted(directory.glob("*.json"), key=lambda p: p.stat().st_mtime, reverse=True)[:limit]:
        try:
            data = json.loads(f.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            continue
        out.append({
            "proof_id": data.get("proof_id", f.stem),
            "problem": data.get("problem_name"),
            "engine": data.get("engine"),
            "created_at": data.get("created_at"),
            "file": f.name,
        })
    return out
