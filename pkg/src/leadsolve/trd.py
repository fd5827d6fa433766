"""Traveler's Dilemma.

Both players claim an amount in ``{2, ..., M}``.  Equal claims are paid
as claimed; otherwise both receive the lower claim, with a reward of 2
for the lower claimant and a penalty of 2 for the higher one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .commitment import LeaderReport, leader_report
from .equilibria import (
    CceCheck,
    CorrelatedDistribution,
    EliminationResult,
    NashEquilibrium,
    NashSet,
    _profile,
    iesds,
    saddle_points,
    verify_cce,
)
from .game import Game, Player

__all__ = ["TrdSpec", "TrdCapacityError", "TrdSolution", "build_trd", "solve_trd", "iesds", "MAX_CAPACITY"]

MIN_CLAIM = 2
BONUS = 2
MAX_CAPACITY = 200


class TrdCapacityError(ValueError):
    pass


@dataclass(frozen=True)
class TrdSpec:
    max_claim: int = 100

    def __post_init__(self):
        if isinstance(self.max_claim, bool) or not isinstance(self.max_claim, int):
            raise TypeError("max_claim must be an integer")
        if self.max_claim < MIN_CLAIM + 1:
            raise ValueError(f"max_claim must be at least {MIN_CLAIM + 1}, got {self.max_claim}")

    @property
    def claims(self) -> Tuple[int, ...]:
        return tuple(range(MIN_CLAIM, self.max_claim + 1))

    def index(self, claim: int) -> int:
        if not MIN_CLAIM <= claim <= self.max_claim:
            raise ValueError(f"claim {claim} outside {MIN_CLAIM}..{self.max_claim}")
        return claim - MIN_CLAIM


def _pay(i: int, j: int) -> int:
    if i < j:
        return i + BONUS
    if i > j:
        return j - BONUS
    return i


def build_trd(spec: TrdSpec) -> Game:
    claims = spec.claims
    A = tuple(tuple(Fraction(_pay(i, j)) for j in claims) for i in claims)
    B = tuple(zip(*A))
    labels = tuple(str(c) for c in claims)
    return Game(A, B, labels, labels, name=f"TrD({spec.max_claim})")


@dataclass(frozen=True)
class TrdSolution:
    spec: TrdSpec
    game: Game
    leader: LeaderReport
    nash: NashSet
    elimination: EliminationResult
    saddle: Tuple[NashEquilibrium, ...]
    twisted: NashSet
    asc: bool
    cce: Tuple[Tuple[str, CceCheck], ...]


def _point_mass(game: Game, row: int, col: int) -> NashEquilibrium:
    x = [Fraction(0)] * game.m
    y = [Fraction(0)] * game.n
    x[row] = Fraction(1)
    y[col] = Fraction(1)
    return _profile(game, x, y)


def _diagonal(spec: TrdSpec, weights) -> CorrelatedDistribution:
    n = len(spec.claims)
    return CorrelatedDistribution.from_points(
        (n, n), {(spec.index(c), spec.index(c)): Fraction(w) for c, w in weights}
    )


def cce_checks(spec: TrdSpec, game: Game):
    """The three diagonal distributions discussed for the game, where they exist."""
    M = spec.max_claim
    out = []
    if M - 2 >= MIN_CLAIM:
        out.append((f"1/2({M},{M}) + 1/2({M - 2},{M - 2})",
                    verify_cce(game, _diagonal(spec, [(M, Fraction(1, 2)), (M - 2, Fraction(1, 2))]))))
    if M - 3 >= MIN_CLAIM:
        out.append((f"1/2({M},{M}) + 1/2({M - 3},{M - 3})",
                    verify_cce(game, _diagonal(spec, [(M, Fraction(1, 2)), (M - 3, Fraction(1, 2))]))))
    out.append((f"({M},{M})", verify_cce(game, _diagonal(spec, [(M, 1)]))))
    return tuple(out)


def solve_trd(spec: TrdSpec, leader: Player = Player.I, capacity: int = MAX_CAPACITY) -> TrdSolution:
    """Equilibrium and leadership analysis of the Traveler's Dilemma.

    Nash and twisted equilibria come from iterated strong dominance (each
    collapses to a single profile); the commitment values are computed on
    the full game.
    """
    if spec.max_claim > capacity:
        raise TrdCapacityError(f"max_claim {spec.max_claim} exceeds capacity {capacity}")
    game = build_trd(spec)
    red = iesds(game)
    if (red.game.m, red.game.n) != (1, 1):
        raise AssertionError("iterated dominance did not reach a single profile")
    nash = NashSet((_point_mass(game, red.rows[0], red.cols[0]),), complete=True,
                   note="solved by iterated strong dominance")
    tw = iesds(game.twisted())
    if (tw.game.m, tw.game.n) != (1, 1):
        raise AssertionError("twisted game not solved by iterated dominance")
    twisted = NashSet((_point_mass(game, tw.rows[0], tw.cols[0]),), complete=True,
                      note="solved by iterated strong dominance")
    saddle = tuple(saddle_points(game, nash=nash, twisted=twisted))
    asc = bool(saddle) and nash.payoff_pairs == twisted.payoff_pairs
    report = leader_report(game, leader, nash=nash, check_degeneracy=False)
    return TrdSolution(spec, game, report, nash, red, saddle, twisted, asc, cce_checks(spec, game))
