"""Leadership (commitment) games.

The leader commits to a mixed strategy, the follower observes it and
replies with a pure best reply.  ``alpha_low`` is the leader payoff when
ties among payoff-equivalent replies are broken against the leader
(the commitment value); ``alpha_high`` is the payoff when every tie is
broken in the leader's favour.  Player II as leader is handled by
swapping roles, so there is a single code path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .equilibria import NashSet, is_nash, maximin, nash_equilibria
from .game import (
    DEFAULT_ENUM_BOUND,
    BestReplyRegion,
    Game,
    MixedStrategy,
    Player,
    compute_D,
    degenerate_for,
    pure_best_replies,
)
from .lp import Constraint, LinearProgram, Relation, solve_lp
from .ratmath import dot, mat_vec, vec_mat

__all__ = [
    "CommitmentWitness",
    "HighWitness",
    "DegeneracyStatus",
    "LeaderReport",
    "PureCommitmentVerdict",
    "PureCommitmentCheck",
    "MixedImprovement",
    "leader_view",
    "alpha_high",
    "alpha_low",
    "commitment_values",
    "leader_report",
    "check_pure_commitment_nash",
    "completely_mixed_improvement",
]


@dataclass(frozen=True)
class CommitmentWitness:
    """A commitment-optimal strategy with the reply it induces.

    ``tie`` is set when ``x`` has several pure best replies; the follower
    is then only induced to play ``follower_reply`` by an arbitrarily small
    perturbation of ``x``, while the reported value stays exact.
    """

    x: MixedStrategy
    follower_reply: int
    leader_payoff: Fraction
    follower_payoff: Fraction
    tie: bool


@dataclass(frozen=True)
class HighWitness:
    x: MixedStrategy
    column: int
    leader_payoff: Fraction


def leader_view(game: Game, leader: Player) -> Game:
    """The game with the leader as row player."""
    return game if Player(leader) is Player.I else game.swapped()


def _as_leader(leader: Player, weights) -> MixedStrategy:
    return MixedStrategy(Player(leader), tuple(weights))


def _region_lp(region: BestReplyRegion, objective_cols, maximize_min: bool) -> LinearProgram:
    """LP over ``X(j)``; either ``max A[:, j] x`` or ``max t, t <= A[:, k] x``."""
    g = region.game
    m = g.m
    zero = Fraction(0)
    if not maximize_min:
        (j,) = objective_cols
        return LinearProgram(g.A_T[j], region.polytope.constraints)
    cons = [Constraint(c.coeffs + (zero,), c.relation, c.rhs) for c in region.polytope.constraints]
    for k in objective_cols:
        cons.append(Constraint(g.A_T[k] + (Fraction(-1),), Relation.GE, zero))
    return LinearProgram((zero,) * m + (Fraction(1),), tuple(cons), free=frozenset({m}))


class _ColumnLps:
    """Memoized per-column LPs of a leader-view game.

    For a singleton equivalence class the lower and upper programs
    coincide, so one solve serves both values.
    """

    def __init__(self, g: Game):
        self.g = g
        self._high = {}

    def high(self, j: int):
        if j not in self._high:
            self._high[j] = solve_lp(_region_lp(BestReplyRegion(self.g, j), (j,), False))
        return self._high[j]

    def low(self, region: BestReplyRegion):
        E = sorted(region.equivalents)
        if len(E) == 1:
            return self.high(E[0])
        return solve_lp(_region_lp(region, E, True))


def _alpha_high(g: Game, leader: Player, lps: _ColumnLps):
    best: Optional[Fraction] = None
    found: List[HighWitness] = []
    for j in range(g.n):
        out = lps.high(j)
        if not out.optimal:
            continue
        w = HighWitness(_as_leader(leader, out.vertex), j, out.value)
        if best is None or out.value > best:
            best, found = out.value, [w]
        elif out.value == best:
            found.append(w)
    return best, found


def _alpha_low(g: Game, leader: Player, lps: _ColumnLps, D):
    best: Optional[Fraction] = None
    found: List[CommitmentWitness] = []
    seen = set()
    for j in sorted(D):
        region = BestReplyRegion(g, j)
        if region.equivalents in seen:
            continue
        seen.add(region.equivalents)
        out = lps.low(region)
        if not out.optimal:
            continue
        x = out.vertex[: g.m]
        value = out.value
        if best is not None and value < best:
            continue
        Ax = vec_mat(x, g.A)
        jF = min(region.equivalents, key=lambda k: (Ax[k], k))
        assert Ax[jF] == value
        replies = _best_replies(g, x)
        w = CommitmentWitness(_as_leader(leader, x), jF, value, vec_mat(x, g.B)[jF], len(replies) > 1)
        if best is None or value > best:
            best, found = value, [w]
        else:
            found.append(w)
    return best, found


def alpha_high(game: Game, leader: Player = Player.I) -> Tuple[Fraction, List[HighWitness]]:
    """Best leader payoff when the follower breaks ties in the leader's favour."""
    g = leader_view(game, leader)
    return _alpha_high(g, Player(leader), _ColumnLps(g))


def alpha_low(
    game: Game, leader: Player = Player.I, D=None
) -> Tuple[Fraction, List[CommitmentWitness]]:
    """Commitment value and one optimal strategy per attaining reply class.

    Only replies with a full-dimensional region take part; among
    payoff-equivalent replies the follower picks the one worst for the
    leader, which becomes ``follower_reply``.
    """
    g = leader_view(game, leader)
    return _alpha_low(g, Player(leader), _ColumnLps(g), compute_D(g) if D is None else D)


def commitment_values(game: Game, leader: Player = Player.I, D=None):
    """``(alpha_low(...), alpha_high(...))`` sharing the per-column LPs."""
    leader = Player(leader)
    g = leader_view(game, leader)
    lps = _ColumnLps(g)
    low = _alpha_low(g, leader, lps, compute_D(g) if D is None else D)
    return low, _alpha_high(g, leader, lps)


def _best_replies(g: Game, x) -> frozenset:
    return pure_best_replies(g, MixedStrategy(Player.I, tuple(x)))


class DegeneracyStatus(enum.Enum):
    NON_DEGENERATE = "NonDegenerateForLeader"
    DEGENERATE = "DegenerateForLeader"
    UNCHECKED = "Unchecked"


@dataclass(frozen=True)
class LeaderReport:
    leader: Player
    v_leader: Fraction
    alphaL: Fraction
    alphaH: Fraction
    witnessesL: Tuple[CommitmentWitness, ...]
    witnessesH: Tuple[HighWitness, ...]
    nash_l: Optional[Fraction]
    nash_h: Optional[Fraction]
    nash_complete: bool
    degeneracy: DegeneracyStatus
    chain_ok: bool
    maximin_strategy: MixedStrategy

    @property
    def chain(self) -> str:
        """The bound chain as a one-line string of exact values."""
        parts = [f"v={self.v_leader}"]
        if self.nash_l is not None:
            parts += [f"l={self.nash_l}", f"h={self.nash_h}"]
        if self.degeneracy is DegeneracyStatus.NON_DEGENERATE:
            parts.append(f"alphaL=alphaH={self.alphaL}")
            return " <= ".join(parts)
        tail = f"alphaH={self.alphaH}; alphaL={self.alphaL}"
        return " <= ".join(parts + [tail])


def _leader_nash(nash: NashSet, leader: Player):
    vals = [e.alpha if leader is Player.I else e.beta for e in nash.equilibria]
    if not vals:
        return None, None
    return min(vals), max(vals)


def _chain_ok(v, l, h, aL, aH, status) -> bool:
    ok = v <= aL <= aH
    if l is not None:
        ok = ok and v <= l <= h <= aH and l <= aL
    if status is DegeneracyStatus.NON_DEGENERATE:
        ok = ok and aL == aH
        if h is not None:
            ok = ok and h <= aL
    return ok


def leader_report(
    game: Game,
    leader: Player = Player.I,
    bound: int = DEFAULT_ENUM_BOUND,
    nash: Optional[NashSet] = None,
    check_degeneracy: bool = True,
) -> LeaderReport:
    """Maximin value, commitment values, Nash bounds and the bound chain."""
    leader = Player(leader)
    g = leader_view(game, leader)
    mm = maximin(g, Player.I)
    (aL, wL), (aH, wH) = commitment_values(game, leader)
    if nash is None:
        nash = nash_equilibria(game, bound)
    l, h = _leader_nash(nash, leader)
    status = DegeneracyStatus.UNCHECKED
    if check_degeneracy:
        deg = degenerate_for(g, Player.I, bound)
        if deg.checked:
            status = DegeneracyStatus.DEGENERATE if deg.degenerate else DegeneracyStatus.NON_DEGENERATE
    return LeaderReport(
        leader=leader,
        v_leader=mm.value,
        alphaL=aL,
        alphaH=aH,
        witnessesL=tuple(wL),
        witnessesH=tuple(wH),
        nash_l=l,
        nash_h=h,
        nash_complete=nash.complete,
        degeneracy=status,
        chain_ok=_chain_ok(mm.value, l, h, aL, aH, status),
        maximin_strategy=_as_leader(leader, mm.strategy.weights),
    )


# ---------------------------------------------------------------------------
# pure commitment strategies and Nash equilibria


class PureCommitmentVerdict(enum.Enum):
    CONFIRMED = "Confirmed"
    NOT_APPLICABLE = "NotApplicable"
    NO_PURE_WITNESS = "NoPureWitness"
    VIOLATED = "Violated"


@dataclass(frozen=True)
class PureCommitmentCheck:
    verdict: PureCommitmentVerdict
    # (leader pure strategy, follower reply, forms a Nash equilibrium)
    pairs: Tuple[Tuple[int, int, bool], ...]
    degeneracy: DegeneracyStatus


def _pure_commitment_pairs(g: Game, aL: Fraction, D) -> List[Tuple[int, int]]:
    """Every pure leader strategy that attains ``aL``, with its induced reply."""
    pairs = []
    for i in range(g.m):
        x = [Fraction(0)] * g.m
        x[i] = Fraction(1)
        for j in sorted(D):
            region = BestReplyRegion(g, j)
            if not region.contains(x):
                continue
            E = sorted(region.equivalents)
            jF = min(E, key=lambda k: (g.A[i][k], k))
            if g.A[i][jF] == aL:
                pairs.append((i, jF))
                break
    return pairs


def check_pure_commitment_nash(
    game: Game, leader: Player = Player.I, bound: int = DEFAULT_ENUM_BOUND
) -> PureCommitmentCheck:
    """Does a pure commitment-optimal strategy form a Nash equilibrium with its reply?"""
    leader = Player(leader)
    g = leader_view(game, leader)
    D = compute_D(g)
    aL, _ = alpha_low(game, leader, D=D)
    pairs = []
    for i, j in _pure_commitment_pairs(g, aL, D):
        x = [Fraction(0)] * g.m
        y = [Fraction(0)] * g.n
        x[i], y[j] = Fraction(1), Fraction(1)
        pairs.append((i, j, is_nash(g, x, y)))
    deg = degenerate_for(g, Player.I, bound)
    status = (
        DegeneracyStatus.UNCHECKED
        if not deg.checked
        else DegeneracyStatus.DEGENERATE if deg.degenerate else DegeneracyStatus.NON_DEGENERATE
    )
    if status is not DegeneracyStatus.NON_DEGENERATE:
        verdict = PureCommitmentVerdict.NOT_APPLICABLE
    elif not pairs:
        verdict = PureCommitmentVerdict.NO_PURE_WITNESS
    elif all(ok for _, _, ok in pairs):
        verdict = PureCommitmentVerdict.CONFIRMED
    else:
        verdict = PureCommitmentVerdict.VIOLATED
    return PureCommitmentCheck(verdict, tuple(pairs), status)


# ---------------------------------------------------------------------------
# completely mixed equilibria


@dataclass(frozen=True)
class MixedImprovement:
    """Outcome of :func:`completely_mixed_improvement`.

    ``applicable`` is false when the game is degenerate, has no completely
    mixed equilibrium, or its equilibrium strategy is maximin.  Otherwise
    ``reply`` is a pure reply with ``improved > alpha_nash`` and ``holds``
    records ``alphaL >= improved > alpha_nash``.
    """

    applicable: bool
    reason: str
    alpha_nash: Optional[Fraction] = None
    beta_nash: Optional[Fraction] = None
    reply: Optional[int] = None
    improved: Optional[Fraction] = None
    follower_at_reply: Optional[Fraction] = None
    alphaL: Optional[Fraction] = None
    holds: Optional[bool] = None


def completely_mixed_improvement(
    game: Game, leader: Player = Player.I, bound: int = DEFAULT_ENUM_BOUND
) -> MixedImprovement:
    """Improvement over a completely mixed equilibrium by commitment."""
    leader = Player(leader)
    g = leader_view(game, leader)
    deg = degenerate_for(g, Player.I, bound)
    other = degenerate_for(g, Player.II, bound)
    if not (deg.checked and other.checked):
        return MixedImprovement(False, "degeneracy not checked")
    if deg.degenerate or other.degenerate:
        return MixedImprovement(False, "degenerate game")
    nash = nash_equilibria(g, bound)
    mixed = [e for e in nash if len(e.x.support) == g.m and len(e.y.support) == g.n]
    if not mixed:
        return MixedImprovement(False, "no completely mixed equilibrium")
    e = mixed[0]
    x = e.x.weights
    Ax = vec_mat(x, g.A)
    v = maximin(g, Player.I).value
    if min(Ax) >= v:
        return MixedImprovement(False, "equilibrium strategy is maximin", e.alpha, e.beta)
    j1 = max(range(g.n), key=lambda j: (Ax[j], -j))
    aL, _ = alpha_low(g, Player.I)
    return MixedImprovement(
        True,
        "",
        alpha_nash=e.alpha,
        beta_nash=e.beta,
        reply=j1,
        improved=Ax[j1],
        follower_at_reply=vec_mat(x, g.B)[j1],
        alphaL=aL,
        holds=Ax[j1] > e.alpha and aL >= Ax[j1],
    )
