"""Bimatrix games and their best-reply geometry."""

from __future__ import annotations

import enum
import itertools
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import IO, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .lp import (
    Constraint,
    LinearProgram,
    Polytope,
    Relation,
    relative_interior_witness,
    solve_lp,
)
from .ratmath import (
    RatMatrix,
    RatVector,
    RationalParseError,
    dot,
    mat_vec,
    matrix,
    render,
    to_rational,
    transpose,
    vec_mat,
)

__all__ = [
    "Player",
    "Game",
    "GameFormatError",
    "MixedStrategy",
    "BestReplyRegion",
    "Dominance",
    "DominanceResult",
    "Degeneracy",
    "DCharacterizationWarning",
    "DEFAULT_ENUM_BOUND",
    "load_game",
    "loads_game",
    "game_to_dict",
    "payoff",
    "pure_best_replies",
    "best_reply_region",
    "payoff_equivalent_class",
    "compute_D",
    "weakly_undominated_columns",
    "dominance_check",
    "degenerate_for",
    "degenerate",
    "simplex_constraint",
]

DEFAULT_ENUM_BOUND = 16


class Player(str, enum.Enum):
    I = "I"
    II = "II"

    @property
    def other(self) -> "Player":
        return Player.II if self is Player.I else Player.I


class GameFormatError(ValueError):
    """Raised by :func:`load_game` for malformed game documents."""


@dataclass(frozen=True)
class Game:
    """An ``m x n`` bimatrix game ``(A, B)``.

    Player I picks rows and receives ``A``; player II picks columns and
    receives ``B``.  Pure strategies are addressed by 0-based index; the
    labels are only for display.
    """

    A: RatMatrix
    B: RatMatrix
    row_labels: Tuple[str, ...] = ()
    col_labels: Tuple[str, ...] = ()
    name: Optional[str] = None

    def __post_init__(self):
        A = matrix(self.A)
        B = matrix(self.B)
        if not A or not A[0]:
            raise ValueError("a game needs at least one row and one column")
        if (len(A), len(A[0])) != (len(B), len(B[0]) if B else 0):
            raise ValueError(
                f"dimension mismatch: A is {len(A)}x{len(A[0])}, "
                f"B is {len(B)}x{len(B[0]) if B else 0}"
            )
        m, n = len(A), len(A[0])
        rows = tuple(str(r) for r in self.row_labels) or tuple(str(i + 1) for i in range(m))
        cols = tuple(str(c) for c in self.col_labels) or tuple(
            str(m + j + 1) for j in range(n)
        )
        if len(rows) != m or len(cols) != n:
            raise ValueError(
                f"label count mismatch: {len(rows)} row and {len(cols)} column labels "
                f"for a {m}x{n} game"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.m, self.n

    @cached_property
    def A_T(self) -> RatMatrix:
        return transpose(self.A)

    @cached_property
    def B_T(self) -> RatMatrix:
        return transpose(self.B)

    def swapped(self) -> "Game":
        """Exchange the players' roles so player II becomes the row player."""
        return Game(
            self.B_T, self.A_T, self.col_labels, self.row_labels, self.name
        )

    def twisted(self) -> "Game":
        """The game with payoffs ``(-B, -A)`` over the same strategy sets."""
        neg = lambda M: tuple(tuple(-v for v in row) for row in M)
        return Game(neg(self.B), neg(self.A), self.row_labels, self.col_labels, self.name)

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "Game":
        rows, cols = list(rows), list(cols)
        return Game(
            tuple(tuple(self.A[i][j] for j in cols) for i in rows),
            tuple(tuple(self.B[i][j] for j in cols) for i in rows),
            tuple(self.row_labels[i] for i in rows),
            tuple(self.col_labels[j] for j in cols),
            self.name,
        )

    def payoffs_of(self, who: "Player") -> RatMatrix:
        return self.A if Player(who) is Player.I else self.B

    def strategies_of(self, who: "Player") -> int:
        return self.m if Player(who) is Player.I else self.n

    def labels_of(self, who: "Player") -> Tuple[str, ...]:
        return self.row_labels if Player(who) is Player.I else self.col_labels

    def is_zero_sum(self) -> bool:
        return all(a == -b for ra, rb in zip(self.A, self.B) for a, b in zip(ra, rb))


# ---------------------------------------------------------------------------
# game documents


def _parse_matrix(doc: dict, key: str) -> RatMatrix:
    if key not in doc:
        raise GameFormatError(f"missing field {key!r}")
    raw = doc[key]
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise GameFormatError(f"field {key!r} must be a non-empty array of arrays")
    rows = []
    for i, row in enumerate(raw):
        parsed = []
        for j, tok in enumerate(row):
            if isinstance(tok, bool) or not isinstance(tok, (int, str)):
                raise GameFormatError(
                    f"{key}[{i}][{j}]: expected an integer or rational string, got {tok!r}"
                )
            try:
                parsed.append(to_rational(tok))
            except RationalParseError as exc:
                raise GameFormatError(f"{key}[{i}][{j}]: {exc}") from exc
        rows.append(tuple(parsed))
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise GameFormatError(f"field {key!r} is ragged: row lengths {sorted(widths)}")
    return tuple(rows)


def game_from_dict(doc: dict) -> Game:
    if not isinstance(doc, dict):
        raise GameFormatError("a game document must be an object")
    A = _parse_matrix(doc, "A")
    B = _parse_matrix(doc, "B")
    if (len(A), len(A[0])) != (len(B), len(B[0])):
        raise GameFormatError(
            f"dimension mismatch: A is {len(A)}x{len(A[0])}, B is {len(B)}x{len(B[0])}"
        )
    try:
        return Game(A, B, tuple(doc.get("rows") or ()), tuple(doc.get("cols") or ()), doc.get("name"))
    except ValueError as exc:
        raise GameFormatError(str(exc)) from exc


def loads_game(text: Union[str, bytes]) -> Game:
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise GameFormatError(f"not a valid JSON document: {exc}") from exc
    return game_from_dict(doc)


def load_game(source: Union[IO, str, bytes]) -> Game:
    """Read a game document from a file object or its raw content."""
    if hasattr(source, "read"):
        source = source.read()
    return loads_game(source)


def game_to_dict(game: Game) -> dict:
    return {
        "name": game.name,
        "rows": list(game.row_labels),
        "cols": list(game.col_labels),
        "A": [[render(v) for v in row] for row in game.A],
        "B": [[render(v) for v in row] for row in game.B],
    }


# ---------------------------------------------------------------------------
# strategies and payoffs


@dataclass(frozen=True)
class MixedStrategy:
    owner: Player
    weights: RatVector

    def __post_init__(self):
        object.__setattr__(self, "owner", Player(self.owner))
        w = tuple(to_rational(v) for v in self.weights)
        if not w:
            raise ValueError("empty strategy")
        if any(v < 0 for v in w):
            raise ValueError(f"negative probability in {w}")
        if sum(w) != 1:
            raise ValueError(f"probabilities sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def pure(cls, owner: Player, size: int, index: int) -> "MixedStrategy":
        w = [Fraction(0)] * size
        w[index] = Fraction(1)
        return cls(owner, tuple(w))

    @classmethod
    def uniform(cls, owner: Player, size: int) -> "MixedStrategy":
        return cls(owner, (Fraction(1, size),) * size)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.weights) if v)

    @property
    def is_pure(self) -> bool:
        return len(self.support) == 1

    def __len__(self) -> int:
        return len(self.weights)


def _check(game: Game, x: MixedStrategy, y: MixedStrategy) -> None:
    if x.owner is not Player.I or y.owner is not Player.II:
        raise ValueError("payoff expects a strategy of player I and one of player II")
    if len(x) != game.m or len(y) != game.n:
        raise ValueError(
            f"strategy sizes {len(x)}/{len(y)} do not match the {game.m}x{game.n} game"
        )


def payoff(game: Game, x: MixedStrategy, y: MixedStrategy, who: Player) -> Fraction:
    """``x^T A y`` for player I, ``x^T B y`` for player II."""
    _check(game, x, y)
    M = game.payoffs_of(who)
    return dot(vec_mat(x.weights, M), y.weights)


def reply_payoffs(game: Game, against: MixedStrategy) -> RatVector:
    """Payoff of each pure reply of the opponent of ``against.owner``."""
    if against.owner is Player.I:
        if len(against) != game.m:
            raise ValueError("strategy size does not match the game")
        return vec_mat(against.weights, game.B)
    if len(against) != game.n:
        raise ValueError("strategy size does not match the game")
    return mat_vec(game.A, against.weights)


def pure_best_replies(game: Game, against: MixedStrategy) -> FrozenSet[int]:
    """Indices of the opponent's pure strategies maximizing their payoff."""
    vals = reply_payoffs(game, against)
    top = max(vals)
    return frozenset(k for k, v in enumerate(vals) if v == top)


# ---------------------------------------------------------------------------
# best-reply regions


def simplex_constraint(dim: int) -> Constraint:
    return Constraint((Fraction(1),) * dim, Relation.EQ, Fraction(1))


def payoff_equivalent_class(game: Game, j: int) -> FrozenSet[int]:
    """Columns whose ``B`` column equals column ``j`` (``j`` included)."""
    col = game.B_T[j]
    return frozenset(k for k in range(game.n) if game.B_T[k] == col)


def _region_rows(game: Game, j: int) -> List[Tuple[int, Constraint]]:
    """``x @ (B[:, j] - B[:, k]) >= 0`` for each ``k != j``."""
    Bj = game.B_T[j]
    rows = []
    for k in range(game.n):
        if k != j:
            Bk = game.B_T[k]
            rows.append((k, Constraint(tuple(a - b for a, b in zip(Bj, Bk)), Relation.GE, Fraction(0))))
    return rows


def _enumerate_vertices(poly: Polytope, n_eq: int) -> List[RatVector]:
    """Vertices by exhaustive choice of tight rows (small polytopes only).

    ``poly.constraints[:n_eq]`` must be the (independent) equality rows.
    """
    d = poly.dim
    ineq = [c.coeffs for c in poly.constraints[n_eq:]]
    rhs = [c.rhs for c in poly.constraints[n_eq:]]
    for i in range(d):
        unit = [Fraction(0)] * d
        unit[i] = Fraction(1)
        ineq.append(tuple(unit))
        rhs.append(Fraction(0))
    eq = [(c.coeffs, c.rhs) for c in poly.constraints[:n_eq]]
    found = []
    seen = set()
    for combo in itertools.combinations(range(len(ineq)), d - n_eq):
        rows = [list(c) for c, _ in eq] + [list(ineq[k]) for k in combo]
        b = [r for _, r in eq] + [rhs[k] for k in combo]
        x = _solve(rows, b)
        if x is None or x in seen:
            continue
        if poly.contains(x):
            seen.add(x)
            found.append(x)
    found.sort()
    return found


def _solve(rows: List[List[Fraction]], b: List[Fraction]) -> Optional[RatVector]:
    """Unique solution of a square system, or ``None`` if singular."""
    n = len(rows)
    aug = [r + [v] for r, v in zip(rows, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        prow = [v / pv for v in aug[col]]
        aug[col] = prow
        for r in range(n):
            f = aug[r][col]
            if r != col and f:
                aug[r] = [a - f * p for a, p in zip(aug[r], prow)]
    return tuple(row[-1] for row in aug)


class BestReplyRegion:
    """The set ``X(j)`` of leader mixtures against which column ``j`` is a best reply."""

    def __init__(self, game: Game, j: int):
        self.game = game
        self.column = j
        rows = _region_rows(game, j)
        self.equivalents = payoff_equivalent_class(game, j)
        self.polytope = Polytope(
            game.m, (simplex_constraint(game.m),) + tuple(c for _, c in rows)
        )
        self._against = tuple(k for k, _ in rows)
        self.strict_rows = frozenset(
            t + 1 for t, k in enumerate(self._against) if k not in self.equivalents
        )

    def __repr__(self):
        return f"BestReplyRegion(column={self.column}, full_dimensional={self.full_dimensional})"

    def contains(self, x: Sequence[Fraction]) -> bool:
        return self.polytope.contains(tuple(x))

    @cached_property
    def interior_witness(self) -> Optional[Tuple[RatVector, Fraction]]:
        return relative_interior_witness(self.polytope, self.strict_rows)

    @property
    def full_dimensional(self) -> bool:
        return self.interior_witness is not None

    @cached_property
    def empty(self) -> bool:
        lp = LinearProgram((Fraction(0),) * self.game.m, self.polytope.constraints)
        return not solve_lp(lp).optimal

    @cached_property
    def vertices(self) -> List[RatVector]:
        """Vertices of the region (``C(j)`` for two-row games), sorted."""
        return _enumerate_vertices(self.polytope, 1)


def best_reply_region(game: Game, j: int) -> BestReplyRegion:
    if not 0 <= j < game.n:
        raise IndexError(f"column {j} out of range for a game with {game.n} columns")
    return BestReplyRegion(game, j)


class DCharacterizationWarning(UserWarning):
    """Interior-witness and weak-dominance characterizations of ``D`` disagree."""


def compute_D(game: Game, cross_check: bool = True) -> FrozenSet[int]:
    """Columns whose best-reply region has nonempty interior.

    With ``cross_check`` the set is compared against the weakly
    undominated columns and a :class:`DCharacterizationWarning` is issued
    if they differ; the interior characterization is returned either way.
    """
    D = frozenset(
        j
        for j in range(game.n)
        if _strict_best_reply_somewhere(game, j) or best_reply_region(game, j).full_dimensional
    )
    if cross_check:
        other = weakly_undominated_columns(game)
        if other != D:
            warnings.warn(
                f"interior test gives D={sorted(D)} but weakly undominated columns are "
                f"{sorted(other)}",
                DCharacterizationWarning,
                stacklevel=2,
            )
    return D


def weakly_undominated_columns(game: Game) -> FrozenSet[int]:
    out = set()
    for j in range(game.n):
        if _strict_best_reply_somewhere(game, j):
            out.add(j)
        elif dominance_check(game, Player.II, j).kind is Dominance.NONE:
            out.add(j)
    return frozenset(out)


def _strict_best_reply_somewhere(game: Game, j: int) -> bool:
    """Column ``j`` beats every non-equivalent column at some pure row.

    Such a column cannot be weakly dominated and its best-reply region is
    full-dimensional, so either LP can be skipped.
    """
    eq = payoff_equivalent_class(game, j)
    for i in range(game.m):
        row = game.B[i]
        if all(row[j] > row[k] for k in range(game.n) if k not in eq):
            return True
    return False


# ---------------------------------------------------------------------------
# dominance


class Dominance(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    NONE = "none"


@dataclass(frozen=True)
class DominanceResult:
    kind: Dominance
    witness: Optional[MixedStrategy] = None


def dominance_check(game: Game, who: Player, s: int, weak: bool = True) -> DominanceResult:
    """Is pure strategy ``s`` of ``who`` dominated by a mixture of its other strategies?

    With ``weak=False`` only strong dominance is tested.
    """
    who = Player(who)
    M = game.A if who is Player.I else game.B_T  # rows are own strategies
    size = len(M)
    if not 0 <= s < size:
        raise IndexError(f"strategy {s} out of range")
    others = [k for k in range(size) if k != s]
    if not others:
        return DominanceResult(Dominance.NONE)
    n_opp = len(M[0])
    target = M[s]
    k = len(others)

    # rows are written against M[s] (the weights sum to one) so every rhs is 0
    gain = [[M[o][t] - target[t] for o in others] for t in range(n_opp)]

    # strong: max eps s.t. sum_k p_k (M[k][t] - M[s][t]) >= eps for every t
    cons = [Constraint(tuple(gain[t]) + (Fraction(-1),), Relation.GE, Fraction(0)) for t in range(n_opp)]
    cons.append(Constraint((Fraction(1),) * k + (Fraction(0),), Relation.EQ, Fraction(1)))
    cons.append(Constraint((Fraction(0),) * k + (Fraction(1),), Relation.LE, Fraction(1)))
    out = solve_lp(
        LinearProgram((Fraction(0),) * k + (Fraction(1),), tuple(cons), free=frozenset({k}))
    )
    if out.optimal and out.value > 0:
        return DominanceResult(Dominance.STRONG, _embed(who, size, others, out.vertex[:k]))
    if not weak:
        return DominanceResult(Dominance.NONE)

    # weak: max total gain subject to no loss anywhere
    cons = [Constraint(tuple(gain[t]), Relation.GE, Fraction(0)) for t in range(n_opp)]
    cons.append(Constraint((Fraction(1),) * k, Relation.EQ, Fraction(1)))
    obj = tuple(sum((gain[t][c] for t in range(n_opp)), Fraction(0)) for c in range(k))
    out = solve_lp(LinearProgram(obj, tuple(cons)))
    if out.optimal and out.value > 0:
        return DominanceResult(Dominance.WEAK, _embed(who, size, others, out.vertex))
    return DominanceResult(Dominance.NONE)


def _embed(who: Player, size: int, idx: Sequence[int], w: Sequence[Fraction]) -> MixedStrategy:
    full = [Fraction(0)] * size
    for i, v in zip(idx, w):
        full[i] = v
    return MixedStrategy(who, tuple(full))


# ---------------------------------------------------------------------------
# degeneracy


@dataclass(frozen=True)
class Degeneracy:
    """Outcome of the degeneracy scan for one player.

    ``degenerate`` is ``None`` when the game exceeded the enumeration
    bound and was not checked.
    """

    player: Player
    degenerate: Optional[bool]
    witness: Optional[Tuple[MixedStrategy, FrozenSet[int]]] = None

    @property
    def checked(self) -> bool:
        return self.degenerate is not None


def degenerate_for(game: Game, who: Player = Player.I, bound: int = DEFAULT_ENUM_BOUND) -> Degeneracy:
    """Does some mixed strategy of ``who`` have more pure best replies than its support size?

    Tries every support ``S`` and reply set ``K`` with ``|K| = |S| + 1``
    and asks an LP whether some ``x`` supported in ``S`` makes all of
    ``K`` best replies.
    """
    who = Player(who)
    if game.m + game.n > bound:
        return Degeneracy(who, None)
    g = game if who is Player.I else game.swapped()
    m, n = g.m, g.n
    BT = g.B_T
    for size in range(1, min(m, n - 1) + 1):
        for S in itertools.combinations(range(m), size):
            for K in itertools.combinations(range(n), size + 1):
                x = _common_best_reply_point(BT, m, n, S, K)
                if x is not None:
                    strat = MixedStrategy(who, x)
                    replies = pure_best_replies(g, MixedStrategy(Player.I, x))
                    return Degeneracy(who, True, (strat, replies))
    return Degeneracy(who, False)


def _common_best_reply_point(BT, m, n, S, K) -> Optional[RatVector]:
    k0 = K[0]
    cons = [simplex_constraint(m)]
    for i in range(m):
        if i not in S:
            unit = [Fraction(0)] * m
            unit[i] = Fraction(1)
            cons.append(Constraint(tuple(unit), Relation.EQ, Fraction(0)))
    for k in K[1:]:
        cons.append(Constraint(tuple(a - b for a, b in zip(BT[k], BT[k0])), Relation.EQ, Fraction(0)))
    for l in range(n):
        if l not in K:
            cons.append(Constraint(tuple(a - b for a, b in zip(BT[k0], BT[l])), Relation.GE, Fraction(0)))
    out = solve_lp(LinearProgram((Fraction(0),) * m, tuple(cons)))
    return out.vertex if out.optimal else None


def degenerate(game: Game, bound: int = DEFAULT_ENUM_BOUND) -> Optional[bool]:
    """``True``/``False`` for the whole game, ``None`` if either side was unchecked."""
    a = degenerate_for(game, Player.I, bound)
    if a.degenerate:
        return True
    b = degenerate_for(game, Player.II, bound)
    if b.degenerate:
        return True
    if not (a.checked and b.checked):
        return None
    return False
