"""Exact analysis of leadership (commitment) games for bimatrix games.

All arithmetic is over :class:`fractions.Fraction`; nothing is rounded.
"""

from .classify import classify
from .commitment import alpha_high, alpha_low, commitment_values, leader_report
from .equilibria import iesds, maximin, nash_equilibria, saddle_points, twisted_equilibria, verify_cce
from .game import Game, MixedStrategy, Player, degenerate_for, load_game, loads_game
from .trd import TrdSpec, build_trd, solve_trd
from .two_by_two import analyze_2x2

__version__ = "0.1.0"

__all__ = [
    "Game",
    "MixedStrategy",
    "Player",
    "load_game",
    "loads_game",
    "degenerate_for",
    "maximin",
    "nash_equilibria",
    "twisted_equilibria",
    "saddle_points",
    "iesds",
    "verify_cce",
    "alpha_low",
    "alpha_high",
    "commitment_values",
    "leader_report",
    "classify",
    "analyze_2x2",
    "TrdSpec",
    "build_trd",
    "solve_trd",
]
