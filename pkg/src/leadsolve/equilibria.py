"""Equilibria of the simultaneous-move game.

Maximin values, Nash equilibria (support enumeration, with vertex
enumeration of the best-response polytopes for degenerate games),
twisted equilibria, saddle points, coarse correlated equilibrium checks
and iterated elimination of strongly dominated strategies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .game import (
    DEFAULT_ENUM_BOUND,
    Dominance,
    Game,
    MixedStrategy,
    Player,
    _solve,
    degenerate_for,
    dominance_check,
    payoff,
    simplex_constraint,
)
from .lp import Constraint, LinearProgram, Relation, solve_lp
from .ratmath import RatMatrix, dot, mat_vec, matrix, vec_mat

__all__ = [
    "MaximinResult",
    "NashEquilibrium",
    "NashSet",
    "CorrelatedDistribution",
    "CceCheck",
    "EliminationResult",
    "maximin",
    "nash_support_enumeration",
    "extreme_equilibria",
    "nash_equilibria",
    "twisted_equilibria",
    "saddle_points",
    "is_saddle_point",
    "is_nash",
    "is_equilibrium_strategy",
    "verify_cce",
    "iesds",
]


@dataclass(frozen=True)
class MaximinResult:
    value: Fraction
    strategy: MixedStrategy


def maximin(game: Game, who: Player = Player.I) -> MaximinResult:
    """Safety level ``max_x min_j x^T A e_j`` (or the analogue for player II)."""
    who = Player(who)
    M = game.A if who is Player.I else game.B_T
    size, opp = len(M), len(M[0])
    zero = Fraction(0)
    cons = [
        Constraint(tuple(M[i][j] for i in range(size)) + (Fraction(-1),), Relation.GE, zero)
        for j in range(opp)
    ]
    cons.append(Constraint((Fraction(1),) * size + (zero,), Relation.EQ, Fraction(1)))
    out = solve_lp(
        LinearProgram((zero,) * size + (Fraction(1),), tuple(cons), free=frozenset({size}))
    )
    return MaximinResult(out.value, MixedStrategy(who, out.vertex[:size]))


# ---------------------------------------------------------------------------
# Nash equilibria


@dataclass(frozen=True)
class NashEquilibrium:
    x: MixedStrategy
    y: MixedStrategy
    alpha: Fraction
    beta: Fraction

    @property
    def profile(self):
        return self.x.weights, self.y.weights


def _profile(game: Game, x, y) -> NashEquilibrium:
    xs = MixedStrategy(Player.I, tuple(x))
    ys = MixedStrategy(Player.II, tuple(y))
    return NashEquilibrium(xs, ys, payoff(game, xs, ys, Player.I), payoff(game, xs, ys, Player.II))


def is_nash(game: Game, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """Exact check that neither player has a profitable pure deviation."""
    Ay = mat_vec(game.A, y)
    xB = vec_mat(x, game.B)
    return dot(x, Ay) == max(Ay) and dot(xB, y) == max(xB)


def is_equilibrium_strategy(game: Game, who: Player, s: Sequence[Fraction]) -> bool:
    """Is ``s`` a component of some Nash equilibrium (membership in NE(X) or NE(Y))?

    Feasibility LP over the opponent's strategy: it must be supported on
    best replies to ``s`` and make every strategy in the support of ``s``
    a best reply.
    """
    g = game if Player(who) is Player.I else game.swapped()
    s = tuple(getattr(s, "weights", s))
    sB = vec_mat(s, g.B)
    top = max(sB)
    n = g.n
    zero = Fraction(0)
    cons = [Constraint((Fraction(1),) * n, Relation.EQ, Fraction(1))]
    for j in range(n):
        if sB[j] < top:
            unit = [zero] * n
            unit[j] = Fraction(1)
            cons.append(Constraint(tuple(unit), Relation.EQ, zero))
    for i in range(g.m):
        if s[i]:
            for k in range(g.m):
                if k != i:
                    row = tuple(a - b for a, b in zip(g.A[i], g.A[k]))
                    cons.append(Constraint(row, Relation.GE, zero))
    return solve_lp(LinearProgram((zero,) * n, tuple(cons))).optimal


@dataclass(frozen=True)
class NashSet:
    """Equilibria found for a game.

    ``complete`` is true only when the list provably contains every
    equilibrium (non-degenerate support enumeration, or a game solved by
    iterated dominance).  For degenerate games the list holds the extreme
    equilibria; ``lowest``/``highest`` are then taken over those vertices.
    ``checked`` is false when the size bound prevented any computation.
    """

    equilibria: Tuple[NashEquilibrium, ...]
    complete: bool
    checked: bool = True
    note: str = ""

    @property
    def lowest(self) -> Optional[Fraction]:
        return min((e.alpha for e in self.equilibria), default=None)

    @property
    def highest(self) -> Optional[Fraction]:
        return max((e.alpha for e in self.equilibria), default=None)

    # short aliases
    l = lowest
    h = highest

    @property
    def payoff_pairs(self) -> FrozenSet[Tuple[Fraction, Fraction]]:
        return frozenset((e.alpha, e.beta) for e in self.equilibria)

    @property
    def ne_x(self) -> Tuple[MixedStrategy, ...]:
        return tuple(dict.fromkeys(e.x for e in self.equilibria))

    @property
    def ne_y(self) -> Tuple[MixedStrategy, ...]:
        return tuple(dict.fromkeys(e.y for e in self.equilibria))

    def __len__(self):
        return len(self.equilibria)

    def __iter__(self):
        return iter(self.equilibria)

    def contains_profile(self, x, y) -> bool:
        x, y = tuple(x), tuple(y)
        return any(e.x.weights == x and e.y.weights == y for e in self.equilibria)


def _indifference(M: RatMatrix, rows: Sequence[int], cols: Sequence[int]):
    """Mixture on ``cols`` equalizing ``M[i] @ y`` over ``i in rows``.

    Returns ``(y_cols, value)`` or ``None`` when the system is singular.
    """
    k = len(rows)
    system = [[M[i][j] for j in cols] + [Fraction(-1)] for i in rows]
    system.append([Fraction(1)] * k + [Fraction(0)])
    rhs = [Fraction(0)] * k + [Fraction(1)]
    sol = _solve(system, rhs)
    if sol is None:
        return None
    return sol[:k], sol[k]


def _support_enumeration(game: Game) -> List[NashEquilibrium]:
    m, n = game.m, game.n
    found: Dict[tuple, NashEquilibrium] = {}
    for k in range(1, min(m, n) + 1):
        for S in itertools.combinations(range(m), k):
            for T in itertools.combinations(range(n), k):
                ys = _indifference(game.A, S, T)
                if ys is None or any(v < 0 for v in ys[0]):
                    continue
                xs = _indifference(game.B_T, T, S)
                if xs is None or any(v < 0 for v in xs[0]):
                    continue
                x = [Fraction(0)] * m
                y = [Fraction(0)] * n
                for i, v in zip(S, xs[0]):
                    x[i] = v
                for j, v in zip(T, ys[0]):
                    y[j] = v
                if not is_nash(game, x, y):
                    continue
                key = (tuple(x), tuple(y))
                if key not in found:
                    found[key] = _profile(game, x, y)
    return [found[k] for k in sorted(found)]


def _polytope_vertices(M: RatMatrix) -> List[Tuple[Tuple[Fraction, ...], FrozenSet[int]]]:
    """Vertices of ``{z >= 0 : M z <= 1}`` with their tight-row sets.

    ``M`` is ``r x d`` with positive entries, so the polytope is bounded.
    Returns ``(z, tight)`` where ``tight`` holds ``("z", k)`` style labels
    encoded as ints: ``k`` for ``z_k = 0`` and ``d + i`` for row ``i`` tight.
    """
    r, d = len(M), len(M[0])
    rows: List[Tuple[Tuple[Fraction, ...], Fraction]] = []
    for k in range(d):
        unit = [Fraction(0)] * d
        unit[k] = Fraction(1)
        rows.append((tuple(unit), Fraction(0)))
    for i in range(r):
        rows.append((M[i], Fraction(1)))
    out = {}
    for combo in itertools.combinations(range(len(rows)), d):
        z = _solve([list(rows[c][0]) for c in combo], [rows[c][1] for c in combo])
        if z is None or z in out or any(v < 0 for v in z):
            continue
        vals = mat_vec(M, z)
        if any(v > 1 for v in vals):
            continue
        tight = frozenset([k for k in range(d) if z[k] == 0] + [d + i for i in range(r) if vals[i] == 1])
        out[z] = tight
    return sorted(out.items())


def extreme_equilibria(game: Game) -> List[NashEquilibrium]:
    """All extreme equilibria via completely labeled vertex pairs.

    Valid for degenerate games too.  Payoffs are shifted to be positive,
    which does not change best replies.
    """
    m, n = game.m, game.n
    lo_a = min(v for row in game.A for v in row)
    lo_b = min(v for row in game.B for v in row)
    Ap = tuple(tuple(v - lo_a + 1 for v in row) for row in game.A)
    Bp = tuple(tuple(v - lo_b + 1 for v in row) for row in game.B)
    BpT = tuple(zip(*Bp))
    # P = {x >= 0 : Bp^T x <= 1}; labels: row i if x_i = 0, column m+j if tight
    P = [(x, frozenset(t if t < m else t for t in tight)) for x, tight in _polytope_vertices(BpT)]
    # Q = {y >= 0 : Ap y <= 1}; y_j = 0 -> label m+j, row i tight -> label i
    Q = []
    for y, tight in _polytope_vertices(Ap):
        labels = frozenset((m + t) if t < n else (t - n) for t in tight)
        Q.append((y, labels))
    everything = frozenset(range(m + n))
    found = {}
    for x, lx in P:
        if not any(x):
            continue
        for y, ly in Q:
            if not any(y) or (lx | ly) != everything:
                continue
            sx, sy = sum(x), sum(y)
            xn = tuple(v / sx for v in x)
            yn = tuple(v / sy for v in y)
            if (xn, yn) not in found:
                found[(xn, yn)] = _profile(game, xn, yn)
    return [found[k] for k in sorted(found)]


def nash_support_enumeration(game: Game, bound: int = DEFAULT_ENUM_BOUND) -> NashSet:
    """Nash equilibria of ``game`` by exact support enumeration.

    Non-degenerate games yield the complete (finite) equilibrium set.
    Degenerate games yield their extreme equilibria, flagged incomplete.
    """
    if game.m + game.n > bound:
        return NashSet((), complete=False, checked=False, note=f"m+n exceeds enumeration bound {bound}")
    deg_i = degenerate_for(game, Player.I, bound)
    deg_ii = degenerate_for(game, Player.II, bound)
    if deg_i.degenerate or deg_ii.degenerate:
        eq = extreme_equilibria(game)
        return NashSet(
            tuple(eq),
            complete=False,
            note="degenerate game: extreme equilibria only; components not parameterized",
        )
    return NashSet(tuple(_support_enumeration(game)), complete=True)


def nash_equilibria(game: Game, bound: int = DEFAULT_ENUM_BOUND) -> NashSet:
    """Like :func:`nash_support_enumeration`, falling back to iesds for big games.

    A game that iterated strong dominance reduces to a single profile has
    that profile as its unique equilibrium, which settles it completely.
    """
    if game.m + game.n <= bound:
        return nash_support_enumeration(game, bound)
    red = iesds(game)
    if red.game.m == 1 and red.game.n == 1:
        x = [Fraction(0)] * game.m
        y = [Fraction(0)] * game.n
        x[red.rows[0]] = Fraction(1)
        y[red.cols[0]] = Fraction(1)
        return NashSet((_profile(game, x, y),), complete=True, note="solved by iterated strong dominance")
    return NashSet((), complete=False, checked=False, note=f"m+n exceeds enumeration bound {bound}")


def twisted_equilibria(game: Game, bound: int = DEFAULT_ENUM_BOUND) -> NashSet:
    """Nash equilibria of ``(-B, -A)`` with payoffs reported in ``game``."""
    raw = nash_equilibria(game.twisted(), bound)
    eq = tuple(_profile(game, e.x.weights, e.y.weights) for e in raw.equilibria)
    return NashSet(eq, raw.complete, raw.checked, raw.note)


def is_saddle_point(game: Game, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """The four saddle inequalities, checked against all pure deviations."""
    Ay = mat_vec(game.A, y)
    xA = vec_mat(x, game.A)
    xB = vec_mat(x, game.B)
    By = mat_vec(game.B, y)
    a = dot(x, Ay)
    b = dot(xB, y)
    return max(Ay) <= a <= min(xA) and max(xB) <= b <= min(By)


def saddle_points(
    game: Game, bound: int = DEFAULT_ENUM_BOUND, nash: Optional[NashSet] = None,
    twisted: Optional[NashSet] = None,
) -> List[NashEquilibrium]:
    """Profiles that are both Nash and twisted equilibria."""
    ne = nash if nash is not None else nash_equilibria(game, bound)
    te = twisted if twisted is not None else twisted_equilibria(game, bound)
    te_profiles = {e.profile for e in te.equilibria}
    out = [e for e in ne.equilibria if e.profile in te_profiles]
    for e in out:
        if not is_saddle_point(game, *e.profile):
            raise AssertionError(f"profile {e.profile} fails the saddle inequalities")
    return out


# ---------------------------------------------------------------------------
# coarse correlated equilibria


@dataclass(frozen=True)
class CorrelatedDistribution:
    weights: RatMatrix

    def __post_init__(self):
        w = matrix(self.weights)
        if any(v < 0 for row in w for v in row):
            raise ValueError("negative probability in correlated distribution")
        total = sum((v for row in w for v in row), Fraction(0))
        if total != 1:
            raise ValueError(f"correlated distribution sums to {total}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_points(cls, shape: Tuple[int, int], points: Dict[Tuple[int, int], Fraction]):
        m, n = shape
        w = [[Fraction(0)] * n for _ in range(m)]
        for (i, j), p in points.items():
            w[i][j] = Fraction(p)
        return cls(tuple(tuple(r) for r in w))


@dataclass(frozen=True)
class CceCheck:
    """Result of :func:`verify_cce`.

    ``worst`` maps each player to ``(strategy index, gain)`` for the most
    profitable committed deviation; the distribution is a CCE iff every
    gain is ``<= 0``.
    """

    passed: bool
    expected: Tuple[Fraction, Fraction]
    worst: Dict[Player, Tuple[int, Fraction]]


def verify_cce(game: Game, z: CorrelatedDistribution) -> CceCheck:
    w = z.weights
    if (len(w), len(w[0])) != game.shape:
        raise ValueError("distribution shape does not match the game")
    m, n = game.shape
    ea = sum((w[i][j] * game.A[i][j] for i in range(m) for j in range(n) if w[i][j]), Fraction(0))
    eb = sum((w[i][j] * game.B[i][j] for i in range(m) for j in range(n) if w[i][j]), Fraction(0))
    col_marg = [sum((w[i][j] for i in range(m)), Fraction(0)) for j in range(n)]
    row_marg = [sum(w[i], Fraction(0)) for i in range(m)]
    dev_a = mat_vec(game.A, col_marg)
    dev_b = vec_mat(row_marg, game.B)
    best_i = max(range(m), key=lambda i: (dev_a[i], -i))
    best_j = max(range(n), key=lambda j: (dev_b[j], -j))
    worst = {Player.I: (best_i, dev_a[best_i] - ea), Player.II: (best_j, dev_b[best_j] - eb)}
    return CceCheck(all(g <= 0 for _, g in worst.values()), (ea, eb), worst)


# ---------------------------------------------------------------------------
# iterated elimination of strongly dominated strategies


@dataclass(frozen=True)
class EliminationResult:
    game: Game
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    # per round: (rows removed, columns removed), as original indices
    rounds: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]


def _pure_best_replies(M: RatMatrix, alive, other) -> frozenset:
    """Own strategies that are a best reply to some surviving pure opposing strategy."""
    out = set()
    for t in other:
        top = max(M[o][t] for o in alive)
        out.update(o for o in alive if M[o][t] == top)
    return frozenset(out)


def _dominated(game: Game, who: Player, s: int, rows, cols, replies) -> bool:
    alive, other, M = (rows, cols, game.A) if who is Player.I else (cols, rows, game.B_T)
    if len(alive) == 1:
        return False
    # a best reply to some pure opposing strategy is never strongly dominated
    if s in replies:
        return False
    if any(all(M[o][t] > M[s][t] for t in other) for o in alive if o != s):
        return True
    sub = game.restrict(rows, cols)
    return dominance_check(sub, who, alive.index(s), weak=False).kind is Dominance.STRONG


def _round_replies(game: Game, rows, cols):
    return {
        Player.I: _pure_best_replies(game.A, rows, cols),
        Player.II: _pure_best_replies(game.B_T, cols, rows),
    }


def iesds(game: Game, reverse: bool = False) -> EliminationResult:
    """Iterated elimination of pure strategies strongly dominated by mixtures.

    By default each round tests every surviving strategy of both players
    against the survivors at the start of the round (lowest index first)
    and removes all dominated ones together.  With ``reverse`` the scan
    runs from the highest index down and removes one strategy at a time;
    the surviving game is the same either way.
    """
    rows = list(range(game.m))
    cols = list(range(game.n))
    rounds = []
    while True:
        if reverse:
            hit = None
            replies = _round_replies(game, rows, cols)
            for who, alive in ((Player.II, cols), (Player.I, rows)):
                for s in sorted(alive, reverse=True):
                    if _dominated(game, who, s, rows, cols, replies[who]):
                        hit = (who, s)
                        break
                if hit:
                    break
            if hit is None:
                break
            who, s = hit
            (rows if who is Player.I else cols).remove(s)
            rounds.append(((s,), ()) if who is Player.I else ((), (s,)))
            continue
        replies = _round_replies(game, rows, cols)
        dead_rows = tuple(s for s in rows if _dominated(game, Player.I, s, rows, cols, replies[Player.I]))
        dead_cols = tuple(s for s in cols if _dominated(game, Player.II, s, rows, cols, replies[Player.II]))
        if not dead_rows and not dead_cols:
            break
        rows = [s for s in rows if s not in dead_rows]
        cols = [s for s in cols if s not in dead_cols]
        rounds.append((dead_rows, dead_cols))
    return EliminationResult(game.restrict(rows, cols), tuple(rows), tuple(cols), tuple(rounds))
