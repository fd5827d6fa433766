"""Closed-form analysis of 2x2 bimatrix games.

Entries are named row by row: ``A = [[a1, a2], [a3, a4]]`` and likewise
for ``B``.  Everything here is computed from explicit formulas over the
three candidate points ``s1``, ``x^d``, ``s2`` of the leader's segment,
independently of the LP machinery, so it can serve as an oracle for it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .commitment import alpha_low
from .equilibria import NashSet, is_equilibrium_strategy, nash_equilibria
from .game import Game, MixedStrategy, Player, best_reply_region, compute_D, payoff_equivalent_class

__all__ = [
    "TwoByTwoError",
    "Equalizer",
    "Relation",
    "CaseLabel",
    "FollowerVerdict",
    "ClosedFormCommitment",
    "OutsideReport",
    "FollowerReport",
    "CaseReport",
    "TwoByTwoReport",
    "equalizers",
    "beta_d",
    "degenerate_2x2",
    "closed_form_nash",
    "closed_form_commitment",
    "closed_form_maximin",
    "outside_conditions",
    "case_split",
    "generic_relation",
    "follower_comparison",
    "analyze_2x2",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class TwoByTwoError(ValueError):
    pass


def _require(game: Game) -> None:
    if game.shape != (2, 2):
        raise TwoByTwoError(f"expected a 2x2 game, got {game.m}x{game.n}")


def _flat(M) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    return M[0][0], M[0][1], M[1][0], M[1][1]


def _view(game: Game, leader: Player) -> Game:
    return game if Player(leader) is Player.I else game.swapped()


@dataclass(frozen=True)
class Equalizer:
    weight: Fraction  # probability of the second pure strategy
    strategy: MixedStrategy


def _ratio(num: Fraction, den: Fraction) -> Optional[Fraction]:
    if den == 0:
        return None
    r = num / den
    return r if 0 <= r <= 1 else None


def equalizers(game: Game) -> Tuple[Optional[Equalizer], Optional[Equalizer]]:
    """``x^d`` (I equalizes II's payoffs) and ``y^c`` (II equalizes I's payoffs)."""
    _require(game)
    a1, a2, a3, a4 = _flat(game.A)
    b1, b2, b3, b4 = _flat(game.B)
    d = _ratio(b1 - b2, b1 - b2 + b4 - b3)
    c = _ratio(a1 - a3, a1 - a2 + a4 - a3)
    xd = Equalizer(d, MixedStrategy(Player.I, (1 - d, d))) if d is not None else None
    yc = Equalizer(c, MixedStrategy(Player.II, (1 - c, c))) if c is not None else None
    return xd, yc


def beta_d(game: Game) -> Optional[Fraction]:
    """Player II's payoff against ``x^d``: ``det(B) / (b1 + b4 - b2 - b3)``."""
    _require(game)
    b1, b2, b3, b4 = _flat(game.B)
    if equalizers(game)[0] is None:
        return None
    return (b1 * b4 - b2 * b3) / (b1 + b4 - b2 - b3)


def degenerate_2x2(game: Game, who: Player) -> bool:
    """A pure strategy of ``who`` leaves the opponent indifferent."""
    _require(game)
    if Player(who) is Player.I:
        b1, b2, b3, b4 = _flat(game.B)
        return b1 == b2 or b3 == b4
    a1, a2, a3, a4 = _flat(game.A)
    return a1 == a3 or a2 == a4


# ---------------------------------------------------------------------------
# equilibria and commitment by formula


def closed_form_nash(game: Game) -> Optional[List[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]]:
    """All Nash equilibria of a non-degenerate game; ``None`` if degenerate."""
    _require(game)
    if degenerate_2x2(game, Player.I) or degenerate_2x2(game, Player.II):
        return None
    A, B = game.A, game.B
    out = []
    for i in range(2):
        for j in range(2):
            if A[i][j] > A[1 - i][j] and B[i][j] > B[i][1 - j]:
                x = (ONE, ZERO) if i == 0 else (ZERO, ONE)
                y = (ONE, ZERO) if j == 0 else (ZERO, ONE)
                out.append((x, y))
    xd, yc = equalizers(game)
    if xd and yc and 0 < xd.weight < 1 and 0 < yc.weight < 1:
        out.append((xd.strategy.weights, yc.strategy.weights))
    return sorted(out)


def _alpha(g: Game, p: Fraction, j: int) -> Fraction:
    return (1 - p) * g.A[0][j] + p * g.A[1][j]


def _gap(g: Game, p: Fraction) -> Fraction:
    """``beta(x(p), first column) - beta(x(p), second column)``."""
    b1, b2, b3, b4 = _flat(g.B)
    return (1 - p) * (b1 - b2) + p * (b3 - b4)


@dataclass(frozen=True)
class ClosedFormCommitment:
    alphaL: Fraction
    alphaH: Fraction
    # attaining (leader strategy weights, follower reply) pairs
    witnessesL: Tuple[Tuple[Tuple[Fraction, Fraction], int], ...]
    witnessesH: Tuple[Tuple[Tuple[Fraction, Fraction], int], ...]


def _best(cands):
    top = max(v for v, _, _ in cands)
    return top, tuple(sorted({((1 - p, p), j) for v, p, j in cands if v == top}))


def closed_form_commitment(game: Game, leader: Player = Player.I) -> ClosedFormCommitment:
    """Commitment values by evaluating payoffs at ``s1``, ``x^d``, ``s2``."""
    _require(game)
    g = _view(game, leader)
    b1, b2, b3, b4 = _flat(g.B)
    xd, _ = equalizers(g)
    points = [ZERO, ONE] + ([xd.weight] if xd else [])
    high = [(_alpha(g, p, j), p, j) for j in range(2) for p in points
            if (_gap(g, p) >= 0 if j == 0 else _gap(g, p) <= 0)]
    if b1 == b2 and b3 == b4:
        # equivalent replies: the follower picks the worse one for the leader
        a1, a2, a3, a4 = _flat(g.A)
        cross = _ratio(a1 - a2, a1 - a2 + a4 - a3)
        pts = [ZERO, ONE] + ([cross] if cross is not None else [])
        low = []
        for p in pts:
            vals = [_alpha(g, p, 0), _alpha(g, p, 1)]
            j = 0 if vals[0] <= vals[1] else 1
            low.append((vals[j], p, j))
    else:
        gaps = (_gap(g, ZERO), _gap(g, ONE))
        full = {0: max(gaps) > 0, 1: min(gaps) < 0}
        low = [(v, p, j) for v, p, j in high if full[j]]
    aL, wL = _best(low)
    aH, wH = _best(high)
    return ClosedFormCommitment(aL, aH, wL, wH)


def closed_form_maximin(game: Game, who: Player = Player.I) -> Fraction:
    """Safety level: the best of the two pure rows and the crossing point."""
    _require(game)
    g = _view(game, who)
    a1, a2, a3, a4 = _flat(g.A)
    pts = [ZERO, ONE]
    cross = _ratio(a1 - a2, a1 - a2 + a4 - a3)
    if cross is not None:
        pts.append(cross)
    return max(min(_alpha(g, p, 0), _alpha(g, p, 1)) for p in pts)


# ---------------------------------------------------------------------------
# conditions for commitment strategies outside the equilibrium set


class Relation(enum.Enum):
    SUBSET = "Subset"
    EQUAL = "Equal"
    EXISTS_OUTSIDE = "ExistsOutside"


@dataclass(frozen=True)
class OutsideReport:
    leader: Player
    degenerate: bool
    ell1: bool
    ell2: bool  # false when no equilibrium payoff is available in closed form
    conclusion: Relation
    nash_payoff: Optional[Fraction]  # leader payoff used in ell2
    branch: str


def _dominated_row(g: Game) -> Optional[int]:
    a1, a2, a3, a4 = _flat(g.A)
    if a3 > a1 and a4 > a2:
        return 0
    if a1 > a3 and a2 > a4:
        return 1
    return None


def _unique_nash_after_dominance(g: Game, dominated: int) -> Tuple[int, int]:
    row = 1 - dominated
    b = g.B[row]
    return row, 0 if b[0] > b[1] else 1


def outside_conditions(game: Game, leader: Player = Player.I) -> OutsideReport:
    """Conditions under which a commitment-optimal strategy lies outside NE(X)."""
    _require(game)
    leader = Player(leader)
    g = _view(game, leader)
    xd, _ = equalizers(g)
    if degenerate_2x2(g, Player.I):
        return OutsideReport(leader, True, _dominated_row(g) is not None, False, Relation.SUBSET, None,
                             "degenerate for the leader")
    dominated = _dominated_row(g)
    ell1 = dominated is not None
    if ell1:
        i, j = _unique_nash_after_dominance(g, dominated)
        alpha_n = g.A[i][j]
    else:
        profiles = closed_form_nash(g)
        # follower-degenerate games have a continuum of equilibria; ell2 is
        # only decisive together with ell1, so it is left unset there
        alpha_n = None if profiles is None else max(
            sum(x[r] * y[c] * g.A[r][c] for r in range(2) for c in range(2)) for x, y in profiles)
    ell2 = (xd is not None and alpha_n is not None
            and max(_alpha(g, xd.weight, 0), _alpha(g, xd.weight, 1)) >= alpha_n)
    conclusion = Relation.EXISTS_OUTSIDE if ell1 and ell2 else Relation.SUBSET
    branch = "dominated leader strategy" if ell1 else "no dominated leader strategy"
    return OutsideReport(leader, False, ell1, ell2, conclusion, alpha_n, branch)


def _secured(g: Game, x, j: int) -> Fraction:
    return min(sum(xi * g.A[i][k] for i, xi in enumerate(x)) for k in payoff_equivalent_class(g, j))


def generic_relation(
    game: Game,
    leader: Player = Player.I,
    nash: Optional[NashSet] = None,
    alpha_l: Optional[Fraction] = None,
) -> Relation:
    """Relation between the commitment-optimal set and NE(X), by LP.

    Uses region vertices and equilibrium membership instead of the
    formulas above, so it works as a second route for the 2x2 case.
    ``nash`` and ``alpha_l`` may be passed in when already known.
    """
    g = _view(game, leader)
    D = sorted(compute_D(g, cross_check=False))
    aL = alpha_l if alpha_l is not None else alpha_low(g, Player.I, D=frozenset(D))[0]
    regions = {j: best_reply_region(g, j) for j in D}
    optimal = {tuple(x) for j in D for x in regions[j].vertices if _secured(g, x, j) == aL}
    if any(not is_equilibrium_strategy(g, Player.I, x) for x in optimal):
        return Relation.EXISTS_OUTSIDE
    nash = nash if nash is not None else nash_equilibria(game)
    for e in nash.equilibria:
        x = (e.x if Player(leader) is Player.I else e.y).weights
        if not any(regions[j].contains(x) and _secured(g, x, j) == aL for j in D):
            return Relation.SUBSET
    return Relation.EQUAL


class CaseLabel(enum.Enum):
    A = "A"
    B_I = "B_i"
    B_II = "B_ii"
    B_III = "B_iii"


@dataclass(frozen=True)
class CaseReport:
    case: CaseLabel
    relation: Dict[Player, Relation]
    conditions: Dict[Player, OutsideReport]
    note: str = ""
    verified: Optional[bool] = None


def _agrees(closed: Relation, generic: Relation) -> bool:
    if closed is Relation.SUBSET:
        return generic is not Relation.EXISTS_OUTSIDE
    return closed is generic


def case_split(game: Game, verify: bool = True) -> CaseReport:
    """Case split for a 2x2 game, optionally checked against both leadership games."""
    report = _case(game)
    if not verify:
        return report
    nash = nash_equilibria(game)
    ok = all(_agrees(report.relation[p], generic_relation(game, p, nash)) for p in (Player.I, Player.II))
    return CaseReport(report.case, report.relation, report.conditions, report.note, ok)


def _case(game: Game) -> CaseReport:
    _require(game)
    conditions = {p: outside_conditions(game, p) for p in (Player.I, Player.II)}
    deg_i = degenerate_2x2(game, Player.I)
    deg_ii = degenerate_2x2(game, Player.II)
    if deg_i or deg_ii:
        note = "degenerate for both players" if deg_i and deg_ii else ""
        rel = {p: Relation.SUBSET for p in conditions}
        return CaseReport(CaseLabel.A, rel, conditions, note)
    out_i = conditions[Player.I].conclusion is Relation.EXISTS_OUTSIDE
    out_ii = conditions[Player.II].conclusion is Relation.EXISTS_OUTSIDE
    if out_i and out_ii:
        raise AssertionError("both leaders commit outside the equilibrium set in a 2x2 game")
    if out_i:
        return CaseReport(CaseLabel.B_I, {Player.I: Relation.EXISTS_OUTSIDE, Player.II: Relation.EQUAL}, conditions)
    if out_ii:
        return CaseReport(CaseLabel.B_II, {Player.I: Relation.EQUAL, Player.II: Relation.EXISTS_OUTSIDE}, conditions)
    return CaseReport(CaseLabel.B_III, {Player.I: Relation.SUBSET, Player.II: Relation.SUBSET}, conditions)


# ---------------------------------------------------------------------------
# follower payoffs


class FollowerVerdict(enum.Enum):
    WORSE = "FollowerWorse"
    NOT_WORSE = "FollowerNotWorse"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class FollowerReport:
    leader: Player
    verdict: FollowerVerdict
    reason: str = ""
    beta_F: Optional[Fraction] = None
    beta_N: Optional[Fraction] = None
    v_follower: Optional[Fraction] = None
    unique: Optional[bool] = None
    # original index of each canonical row / column
    row_order: Tuple[int, int] = (0, 1)
    col_order: Tuple[int, int] = (0, 1)
    biconditional: Optional[bool] = None


def _permute(g: Game, rows, cols) -> Game:
    return g.restrict(rows, cols)


def follower_comparison(game: Game, leader: Player = Player.I) -> FollowerReport:
    """Is the follower worse off than at the unique Nash equilibrium?"""
    _require(game)
    leader = Player(leader)
    if degenerate_2x2(game, Player.I) or degenerate_2x2(game, Player.II):
        return FollowerReport(leader, FollowerVerdict.NOT_APPLICABLE, "degenerate game")
    lem = outside_conditions(game, leader)
    if not (lem.ell1 and lem.ell2):
        return FollowerReport(leader, FollowerVerdict.NOT_APPLICABLE, "conditions ell1 and ell2 do not both hold")
    g = _view(game, leader)
    # rows: the dominated strategy first; columns: b1 > b2 and b3 < b4
    rows = (0, 1) if _dominated_row(g) == 0 else (1, 0)
    h = _permute(g, rows, (0, 1))
    cols = (0, 1) if h.B[0][0] > h.B[0][1] else (1, 0)
    h = _permute(g, rows, cols)
    b1, b2, b3, b4 = _flat(h.B)
    assert b1 > b2 and b3 < b4
    bd = beta_d(h)
    v = min(b1, bd, b4)
    beta_n = b4
    beta_f = bd
    xd, _ = equalizers(h)
    a_n = h.A[1][1]
    unique = max(_alpha(h, xd.weight, 0), _alpha(h, xd.weight, 1)) > a_n
    worse = beta_f < beta_n
    return FollowerReport(
        leader,
        FollowerVerdict.WORSE if worse else FollowerVerdict.NOT_WORSE,
        "",
        beta_f,
        beta_n,
        v,
        unique,
        rows,
        cols,
        worse == (v < beta_n),
    )


# ---------------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class TwoByTwoReport:
    d: Optional[Fraction]
    c: Optional[Fraction]
    x_d: Optional[MixedStrategy]
    y_c: Optional[MixedStrategy]
    beta_d: Optional[Fraction]
    commitment: Dict[Player, ClosedFormCommitment]
    conditions: Dict[Player, OutsideReport]
    split: CaseReport
    follower: Dict[Player, FollowerReport]
    nash: Optional[List[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]]


def analyze_2x2(game: Game, verify: bool = True) -> TwoByTwoReport:
    """Every closed-form quantity at once; ``verify`` adds the LP cross-check of the case split."""
    _require(game)
    xd, yc = equalizers(game)
    split = case_split(game, verify)
    players = (Player.I, Player.II)
    return TwoByTwoReport(
        d=xd.weight if xd else None,
        c=yc.weight if yc else None,
        x_d=xd.strategy if xd else None,
        y_c=yc.strategy if yc else None,
        beta_d=beta_d(game),
        commitment={p: closed_form_commitment(game, p) for p in players},
        conditions=split.conditions,
        split=split,
        follower={p: follower_comparison(game, p) for p in players},
        nash=closed_form_nash(game),
    )
