"""
Proof certification through LK.
"""
from ..matrix import ClausalMatrix, NCMatrix
from ..proof import Proof
from .checker import LKReport, check_lk
from .formulas import ALL_L, AND_L, BOT_L, CONTRACT_L, OR_L, LKNode, LKProof
from .sexpr import dumps, load, loads, save
from .translate import TProof, matrix_formula, reformulate, to_lk


def certify(proof: Proof, matrix: ClausalMatrix | NCMatrix, problem: str | None = None) -> tuple[LKProof, LKReport]:
    """Translate a connection proof and check the result from the matrix formula"""
    lk = to_lk(reformulate(proof), matrix, problem)
    return lk, check_lk(lk, (matrix_formula(matrix),))


__all__ = [
    "AND_L", "OR_L", "ALL_L", "BOT_L", "CONTRACT_L",
    "LKNode", "LKProof", "LKReport", "TProof",
    "reformulate", "to_lk", "check_lk", "certify", "matrix_formula",
    "dumps", "loads", "save", "load",
]
