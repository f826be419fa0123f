"""
Version info for copforge
"""
__version__ = "0.4.1"
__author__ = "copforge developers"
__description__ = "copforge - connection tableaux prover with guidance and LK certification"
__license__ = "MIT"
__url__ = "https://github.com/copforge/copforge"

# Version scheme: MAJOR.MINOR.PATCH
# - MAJOR: Incompatible proof/TrainDB file format changes
# - MINOR: New calculi, guidance modes or subcommands
# - PATCH: Bug fixes
