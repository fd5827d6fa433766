"""Membership tests for classes of games that generalize zero-sum games.

Covers the pointwise and existence conditions under which commitment
values coincide with the maximin value, weak unilateral competitiveness
(wuc), almost strict competitiveness (asc) and a-cooperativeness.
Every negative verdict carries a witness that can be re-checked by
direct substitution.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .commitment import alpha_high, leader_view
from .equilibria import (
    NashSet,
    maximin,
    nash_equilibria,
    saddle_points,
    twisted_equilibria,
)
from .game import (
    DEFAULT_ENUM_BOUND,
    BestReplyRegion,
    Game,
    MixedStrategy,
    Player,
    pure_best_replies,
    simplex_constraint,
)
from .lp import Constraint, LinearProgram, Relation, solve_lp
from .ratmath import dot, mat_vec, vec_mat

__all__ = [
    "SufficientConditions",
    "WucVerdict",
    "WucWitness",
    "WucResult",
    "Verdict",
    "AscResult",
    "AcoopResult",
    "ClassificationReport",
    "check_sufficient_conditions",
    "classify_wuc",
    "classify_asc",
    "classify_acoop",
    "classify",
    "DEFAULT_SEED",
    "COND7_MAX_COLUMNS",
]

DEFAULT_SEED = 20240917
COND7_MAX_COLUMNS = 10
ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# small LP helpers


def _strictly_feasible(
    dim: int,
    equal: Sequence[Sequence[Fraction]] = (),
    strict: Sequence[Sequence[Fraction]] = (),
    weak: Sequence[Tuple[Sequence[Fraction], Fraction]] = (),
) -> Optional[Tuple[Fraction, ...]]:
    """A simplex point with ``a.z = 0`` (equal), ``a.z > 0`` (strict), ``a.z >= b`` (weak).

    Maximizes a common margin on the strict rows; ``None`` if it is not positive.
    """
    pad = (ZERO,)
    cons = [Constraint(simplex_constraint(dim).coeffs + pad, Relation.EQ, ONE)]
    cons += [Constraint(tuple(a) + pad, Relation.EQ, ZERO) for a in equal]
    cons += [Constraint(tuple(a) + (-ONE,), Relation.GE, ZERO) for a in strict]
    cons += [Constraint(tuple(a) + pad, Relation.GE, b) for a, b in weak]
    cons.append(Constraint((ZERO,) * dim + (ONE,), Relation.LE, ONE))
    out = solve_lp(LinearProgram((ZERO,) * dim + (ONE,), tuple(cons)))
    if not out.optimal or out.value <= 0:
        return None
    return out.vertex[:dim]


def _diff(u: Sequence[Fraction], v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(a - b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# sufficient conditions


@dataclass(frozen=True)
class SufficientConditions:
    """Conditions for one leader.

    ``pointwise_min``: at every x the best best-reply payoff equals the worst payoff.
    ``existence``: some x guarantees at least the highest leader payoff.
    ``pointwise_max``: at every x some best reply gives the leader his best payoff
    (``None`` when too many columns to enumerate reply sets).
    ``constant_on_replies``: the highest payoff is attained at an x where the
    leader's payoff is constant over the follower's best replies.
    """

    leader: Player
    pointwise_min: bool
    existence: bool
    pointwise_max: Optional[bool]
    constant_on_replies: bool
    # (x, k) refuting pointwise_max, if any
    pointwise_max_witness: Optional[Tuple[Tuple[Fraction, ...], int]] = None

    # condition labels
    @property
    def cond5(self) -> bool:
        return self.pointwise_min

    @property
    def cond6(self) -> bool:
        return self.existence

    @property
    def cond7(self) -> Optional[bool]:
        return self.pointwise_max

    @property
    def cond_alt(self) -> bool:
        return self.constant_on_replies


def _pointwise_min(g: Game) -> bool:
    for j in range(g.n):
        region = BestReplyRegion(g, j)
        for k in range(g.n):
            if k == j:
                continue
            obj = _diff(g.A_T[j], g.A_T[k])
            out = solve_lp(LinearProgram(obj, region.polytope.constraints))
            if out.optimal and out.value > 0:
                return False
    return True


def _existence(g: Game, alpha_h: Fraction) -> bool:
    """Feasibility of ``x in X(j)`` with ``min_k alpha(x, k) >= alpha_h`` for some j."""
    found = False
    for j in range(g.n):
        region = BestReplyRegion(g, j)
        cons = region.polytope.constraints + tuple(
            Constraint(g.A_T[k], Relation.GE, alpha_h) for k in range(g.n)
        )
        if solve_lp(LinearProgram((ZERO,) * g.m, cons)).optimal:
            found = True
            break
    # second route: the same statement is v_A >= alpha_H
    if found != (maximin(g, Player.I).value >= alpha_h):
        raise AssertionError("existence condition disagrees with the maximin comparison")
    return found


def _reply_cells(g: Game, max_columns: int):
    """Yield ``(K, equal_rows, strict_rows)`` describing ``{x : BR(x) = K}``."""
    if g.n > max_columns:
        return None
    cols = range(g.n)

    def gen():
        for size in range(1, g.n + 1):
            for K in itertools.combinations(cols, size):
                first = K[0]
                eq = [_diff(g.B_T[first], g.B_T[k]) for k in K[1:]]
                strict = [_diff(g.B_T[first], g.B_T[l]) for l in cols if l not in K]
                yield K, eq, strict

    return gen()


def _pointwise_max(g: Game, max_columns: int):
    """Exact test: no x and k with ``alpha(x, k) > alpha(x, j)`` for all ``j in BR(x)``."""
    cells = _reply_cells(g, max_columns)
    if cells is None:
        return None, None
    for K, eq, strict in cells:
        for k in range(g.n):
            if k in K:
                continue
            beats = [_diff(g.A_T[k], g.A_T[j]) for j in K]
            x = _strictly_feasible(g.m, eq, strict + beats)
            if x is not None:
                return False, (x, k)
    return True, None


def _constant_on_replies(g: Game, alpha_h: Fraction, witnesses, max_columns: int) -> bool:
    for w in witnesses:
        x = MixedStrategy(Player.I, w.x.weights)
        Ax = vec_mat(x.weights, g.A)
        if len({Ax[j] for j in pure_best_replies(g, x)}) == 1:
            return True
    cells = _reply_cells(g, max_columns)
    if cells is None:
        return False
    # exact search: an x with BR(x) = K and alpha(x, k) = alpha_h on all of K
    for K, eq, strict in cells:
        weak = []
        for k in K:
            weak.append((g.A_T[k], alpha_h))
            weak.append((tuple(-a for a in g.A_T[k]), -alpha_h))
        if _strictly_feasible(g.m, eq, strict, weak) is not None:
            return True
    return False


def check_sufficient_conditions(
    game: Game, leader: Player = Player.I, max_columns: int = COND7_MAX_COLUMNS
) -> SufficientConditions:
    leader = Player(leader)
    g = leader_view(game, leader)
    alpha_h, wit = alpha_high(g, Player.I)
    pmax, pmax_w = _pointwise_max(g, max_columns)
    return SufficientConditions(
        leader=leader,
        pointwise_min=_pointwise_min(g),
        existence=_existence(g, alpha_h),
        pointwise_max=pmax,
        constant_on_replies=_constant_on_replies(g, alpha_h, wit, max_columns),
        pointwise_max_witness=pmax_w,
    )


# ---------------------------------------------------------------------------
# weak unilateral competitiveness


class WucVerdict(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class WucWitness:
    """A violated implication.

    ``side`` is the deviating player: for ``Player.I`` the strategies
    ``first``/``second`` are x1, x2 and ``fixed`` is y; for ``Player.II``
    they are y1, y2 and x.  ``clause`` is ``"strict"`` (the deviator gains
    strictly and so does the opponent) or ``"equal"`` (the deviator is
    indifferent but the opponent is not).
    """

    side: Player
    first: MixedStrategy
    second: MixedStrategy
    fixed: MixedStrategy
    clause: str

    def payoffs(self, game: Game):
        """``(own gain, opponent gain)`` of ``first`` over ``second``."""
        if self.side is Player.I:
            y = self.fixed.weights
            Ay, By = mat_vec(game.A, y), mat_vec(game.B, y)
            x1, x2 = self.first.weights, self.second.weights
            return dot(x1, Ay) - dot(x2, Ay), dot(x1, By) - dot(x2, By)
        x = self.fixed.weights
        xA, xB = vec_mat(x, game.A), vec_mat(x, game.B)
        y1, y2 = self.first.weights, self.second.weights
        return dot(xB, y1) - dot(xB, y2), dot(xA, y1) - dot(xA, y2)

    def verify(self, game: Game) -> bool:
        own, opp = self.payoffs(game)
        if self.clause == "strict":
            return own > 0 and opp > 0
        return own == 0 and opp != 0


@dataclass(frozen=True)
class WucResult:
    verdict: WucVerdict
    witness: Optional[WucWitness] = None
    method: str = ""


def _violation(own: Fraction, opp: Fraction) -> Optional[str]:
    if own > 0 and opp > 0:
        return "strict"
    if own == 0 and opp != 0:
        return "equal"
    return None


def _pure(owner: Player, size: int, i: int) -> MixedStrategy:
    return MixedStrategy.pure(owner, size, i)


def _scan_pure(g: Game, side: Player) -> Optional[WucWitness]:
    """x-side scan of the leader-view game ``g`` (rows deviate, column fixed)."""
    other = side.other
    for j in range(g.n):
        for i1 in range(g.m):
            for i2 in range(g.m):
                if i1 == i2:
                    continue
                clause = _violation(g.A[i1][j] - g.A[i2][j], g.B[i1][j] - g.B[i2][j])
                if clause:
                    return WucWitness(side, _pure(side, g.m, i1), _pure(side, g.m, i2),
                                      _pure(other, g.n, j), clause)
    return None


def _random_mixture(rng: random.Random, size: int) -> Tuple[Fraction, ...]:
    raw = [rng.randint(0, 6) for _ in range(size)]
    if not any(raw):
        raw[rng.randrange(size)] = 1
    total = sum(raw)
    return tuple(Fraction(v, total) for v in raw)


def _scan_sampled(g: Game, side: Player, rng: random.Random, samples: int) -> Optional[WucWitness]:
    other = side.other
    for _ in range(samples):
        x1, x2 = _random_mixture(rng, g.m), _random_mixture(rng, g.m)
        y = _random_mixture(rng, g.n)
        Ay, By = mat_vec(g.A, y), mat_vec(g.B, y)
        own = dot(x1, Ay) - dot(x2, Ay)
        opp = dot(x1, By) - dot(x2, By)
        clause = _violation(own, opp) or _violation(-own, -opp)
        if clause:
            if _violation(own, opp) is None:
                x1, x2 = x2, x1
            return WucWitness(side, MixedStrategy(side, x1), MixedStrategy(side, x2),
                              MixedStrategy(other, y), clause)
    return None


def _project(M) -> List[List[Fraction]]:
    """Rows of ``M`` minus their column means: the zero-sum direction component."""
    m = len(M)
    means = [sum((M[i][j] for i in range(m)), ZERO) / m for j in range(len(M[0]))]
    return [[M[i][j] - means[j] for j in range(len(M[0]))] for i in range(m)]


def _apply(P, y) -> List[Fraction]:
    return [dot(row, y) for row in P]


def _parallel(u, w) -> bool:
    return all(u[a] * w[b] == u[b] * w[a] for a in range(len(u)) for b in range(a + 1, len(u)))


def _deviation_witness(g: Game, side: Player, y, d, clause) -> WucWitness:
    m = g.m
    big = max(abs(v) for v in d)
    x2 = tuple(Fraction(1, m) for _ in range(m))
    x1 = tuple(a + v / (m * big) for a, v in zip(x2, d))
    return WucWitness(side, MixedStrategy(side, x1), MixedStrategy(side, x2),
                      MixedStrategy(side.other, tuple(y)), clause)


def _exact_side(g: Game, side: Player) -> Tuple[WucVerdict, Optional[WucWitness]]:
    """Decide the x-side implications of ``g`` exactly.

    For fixed y the implications hold for all x1, x2 iff the zero-sum
    components ``u = P A y`` and ``w = P B y`` satisfy ``w = c u`` with
    ``c <= 0`` (and ``w = 0`` when ``u = 0``).
    """
    m, n = g.m, g.n
    U, W = _project(g.A), _project(g.B)
    # u(y) and w(y) parallel for all y: every 2x2 minor is an identically zero quadratic form
    identity = True
    for a in range(m):
        for b in range(a + 1, m):
            for p in range(n):
                for q in range(p, n):
                    s = U[a][p] * W[b][q] - U[b][p] * W[a][q]
                    s += U[a][q] * W[b][p] - U[b][q] * W[a][p]
                    if s:
                        identity = False
    if not identity:
        # the nonzero form is nonzero at a pure point or a midpoint of two
        points = [tuple(ONE if k == j else ZERO for k in range(n)) for j in range(n)]
        points += [
            tuple(Fraction(1, 2) if k in (p, q) else ZERO for k in range(n))
            for p in range(n) for q in range(p + 1, n)
        ]
        for y in points:
            u, w = _apply(U, y), _apply(W, y)
            if not _parallel(u, w):
                uu = dot(u, u)
                d = [a - dot(w, u) / uu * b for a, b in zip(w, u)] if uu else list(w)
                return WucVerdict.NO, _deviation_witness(g, side, y, d, "equal")
        return WucVerdict.UNKNOWN, None

    U_zero = all(v == 0 for row in U for v in row)
    W_zero = all(v == 0 for row in W for v in row)
    if W_zero:
        return WucVerdict.YES, None
    if U_zero:
        j = next(j for j in range(n) if any(W[i][j] for i in range(m)))
        y = tuple(ONE if k == j else ZERO for k in range(n))
        return WucVerdict.NO, _deviation_witness(g, side, y, _apply(W, y), "equal")
    a, j = next((a, j) for a in range(m) for j in range(n) if U[a][j])
    c = W[a][j] / U[a][j]
    if all(W[i][k] == c * U[i][k] for i in range(m) for k in range(n)):
        if c <= 0:
            return WucVerdict.YES, None
        y = tuple(ONE if k == j else ZERO for k in range(n))
        return WucVerdict.NO, _deviation_witness(g, side, y, _apply(U, y), "strict")

    # otherwise both maps have rank one with a common image line v
    cols = [[U[i][k] for i in range(m)] for k in range(n)] + [[W[i][k] for i in range(m)] for k in range(n)]
    v = next(col for col in cols if any(col))
    piv = next(i for i in range(m) if v[i])
    coef = []
    for col in cols:
        t = col[piv] / v[piv]
        if any(col[i] != t * v[i] for i in range(m)):
            return WucVerdict.UNKNOWN, None
        coef.append(t)
    f, h = coef[:n], coef[n:]
    neg_f = [-t for t in f]
    neg_h = [-t for t in h]
    for eq, strict, d, clause in (
        ((), (f, h), v, "strict"),
        ((), (neg_f, neg_h), [-t for t in v], "strict"),
        ((f,), (h,), v, "equal"),
        ((f,), (neg_h,), v, "equal"),
    ):
        y = _strictly_feasible(n, eq, strict)
        if y is not None:
            return WucVerdict.NO, _deviation_witness(g, side, y, d, clause)
    return WucVerdict.YES, None


def classify_wuc(game: Game, seed: int = DEFAULT_SEED, samples: int = 64) -> WucResult:
    """Three-stage wuc decision: pure scan, seeded mixed sampling, exact test."""
    views = ((Player.I, game), (Player.II, game.swapped()))
    for side, g in views:
        w = _scan_pure(g, side)
        if w:
            return WucResult(WucVerdict.NO, w, "pure scan")
    rng = random.Random(seed)
    for side, g in views:
        w = _scan_sampled(g, side, rng, samples)
        if w:
            return WucResult(WucVerdict.NO, w, "sampled mixed triples")
    unknown = False
    for side, g in views:
        verdict, w = _exact_side(g, side)
        if verdict is WucVerdict.NO:
            return WucResult(WucVerdict.NO, w, "exact structural test")
        unknown |= verdict is WucVerdict.UNKNOWN
    if unknown:
        return WucResult(WucVerdict.UNKNOWN, None, "structural test inconclusive")
    return WucResult(WucVerdict.YES, None, "exact structural test")


# ---------------------------------------------------------------------------
# asc and a-cooperative games


class Verdict(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"
    UNCHECKED = "Unchecked"


@dataclass(frozen=True)
class AscResult:
    verdict: Verdict
    reason: str
    nash_payoffs: frozenset = frozenset()
    twisted_payoffs: frozenset = frozenset()


def classify_asc(
    game: Game,
    bound: int = DEFAULT_ENUM_BOUND,
    nash: Optional[NashSet] = None,
    twisted: Optional[NashSet] = None,
) -> AscResult:
    """Saddle point exists and Nash and twisted payoff sets coincide.

    For incomplete (degenerate) enumerations the vertex payoffs still
    decide the question when each set is a single pair: a bilinear payoff
    constant on the extreme equilibria of a face is constant on the face.
    """
    nash = nash if nash is not None else nash_equilibria(game, bound)
    twisted = twisted if twisted is not None else twisted_equilibria(game, bound)
    if not nash.checked or not twisted.checked:
        return AscResult(Verdict.UNCHECKED, "equilibrium enumeration not available")
    ne, te = nash.payoff_pairs, twisted.payoff_pairs
    saddle = saddle_points(game, bound, nash, twisted)
    complete = nash.complete and twisted.complete
    if complete:
        if not saddle:
            return AscResult(Verdict.NO, "no saddle point", ne, te)
        if ne != te:
            return AscResult(Verdict.NO, "Nash and twisted payoff sets differ", ne, te)
        return AscResult(Verdict.YES, "complete enumeration", ne, te)
    # asc forces a single Nash payoff pair, equal to the single twisted pair
    if len(ne) > 1 or len(te) > 1:
        return AscResult(Verdict.NO, "equilibrium payoffs are not constant", ne, te)
    if ne != te:
        return AscResult(Verdict.NO, "Nash and twisted payoff pairs differ", ne, te)
    if saddle:
        return AscResult(Verdict.YES, "constant payoffs over extreme equilibria, saddle point found", ne, te)
    return AscResult(Verdict.UNCHECKED, "no extreme saddle point found in an incomplete enumeration", ne, te)


@dataclass(frozen=True)
class AcoopResult:
    verdict: Verdict
    reason: str
    # per twisted payoff pair: "optimal", "dominated by (i, j)" or "unresolved"
    certificates: Tuple[Tuple[Tuple[Fraction, Fraction], str], ...] = ()


def _hull_surplus(game: Game, u: Fraction, v: Fraction) -> Fraction:
    """Max ``(a - u) + (b - v)`` over the hull of pure payoff pairs with ``a >= u, b >= v``."""
    cells = [(i, j) for i in range(game.m) for j in range(game.n)]
    a = tuple(game.A[i][j] for i, j in cells)
    b = tuple(game.B[i][j] for i, j in cells)
    cons = (
        Constraint((ONE,) * len(cells), Relation.EQ, ONE),
        Constraint(a, Relation.GE, u),
        Constraint(b, Relation.GE, v),
    )
    out = solve_lp(LinearProgram(tuple(x + y for x, y in zip(a, b)), cons))
    return out.value - u - v


def classify_acoop(
    game: Game, bound: int = DEFAULT_ENUM_BOUND, twisted: Optional[NashSet] = None
) -> AcoopResult:
    """Is some twisted equilibrium Pareto-optimal?"""
    twisted = twisted if twisted is not None else twisted_equilibria(game, bound)
    if not twisted.checked:
        return AcoopResult(Verdict.UNCHECKED, "equilibrium enumeration not available")
    certs = []
    any_optimal = False
    all_dominated = True
    for u, v in sorted(twisted.payoff_pairs):
        if _hull_surplus(game, u, v) == 0:
            certs.append(((u, v), "optimal"))
            any_optimal = True
            continue
        dom = next(
            ((i, j) for i in range(game.m) for j in range(game.n)
             if game.A[i][j] >= u and game.B[i][j] >= v and (game.A[i][j] > u or game.B[i][j] > v)),
            None,
        )
        if dom is None:
            certs.append(((u, v), "unresolved"))
            all_dominated = False
        else:
            certs.append(((u, v), f"dominated by {dom}"))
    certs = tuple(certs)
    if any_optimal:
        return AcoopResult(Verdict.YES, "Pareto-optimal twisted equilibrium", certs)
    if all_dominated and twisted.complete and certs:
        return AcoopResult(Verdict.NO, "every twisted equilibrium is dominated by a pure profile", certs)
    return AcoopResult(Verdict.UNKNOWN, "no certificate resolves the twisted equilibria", certs)


# ---------------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class ClassificationReport:
    conditions: Dict[Player, SufficientConditions]
    wuc: WucResult
    asc: AscResult
    acoop: AcoopResult
    notes: Tuple[str, ...] = ()


def classify(
    game: Game,
    bound: int = DEFAULT_ENUM_BOUND,
    seed: int = DEFAULT_SEED,
    max_columns: int = COND7_MAX_COLUMNS,
) -> ClassificationReport:
    nash = nash_equilibria(game, bound)
    twisted = twisted_equilibria(game, bound)
    conditions = {p: check_sufficient_conditions(game, p, max_columns) for p in (Player.I, Player.II)}
    notes = []
    for p, c in conditions.items():
        if c.pointwise_max is None:
            notes.append(f"pointwise max condition for leader {p.value} not checked: too many replies")
    if not nash.complete or not twisted.complete:
        notes.append("equilibrium lists hold extreme equilibria only (degenerate game)")
    return ClassificationReport(
        conditions,
        classify_wuc(game, seed),
        classify_asc(game, bound, nash, twisted),
        classify_acoop(game, bound, twisted),
        tuple(notes),
    )
