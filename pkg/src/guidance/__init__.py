"""
Internal guidance: Naive Bayes contrapositive ordering and Monte-Carlo proof search.
"""
from .mcps import (
    MCAdvisor, MCNode, MCParams, MCState, MCTree, mcts_iterate, prove_monte_carlo, prove_with_advisor,
)
from .nb import FeatureTracker, NBGuide, NBParams, TrainDB, extract_training, nb_score, prove_guided

__all__ = [
    "FeatureTracker", "NBGuide", "NBParams", "TrainDB", "extract_training", "nb_score", "prove_guided",
    "MCAdvisor", "MCNode", "MCParams", "MCState", "MCTree", "mcts_iterate",
    "prove_monte_carlo", "prove_with_advisor",
]
