"""Exact rational linear programming.

Two-phase primal simplex.  The default pivoting prices by the most
negative reduced cost and resolves ratio ties lexicographically, with a
permanent switch to Bland's rule if degenerate pivots ever pile up; pure
Bland pivoting is available as ``rule="bland"``.  The tableau is kept
as rows of Python integers, each row with its own positive denominator
that is gcd-reduced after every pivot, so no rounding ever happens and
the pivot sequence is fully deterministic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .ratmath import RatVector, dot, to_rational

__all__ = [
    "Relation",
    "Constraint",
    "LinearProgram",
    "LpStatus",
    "LpOutcome",
    "Polytope",
    "LpStructureError",
    "solve_lp",
    "is_feasible_point",
    "certify_optimal",
    "relative_interior_witness",
]


class LpStructureError(ValueError):
    """Malformed linear program (dimension mismatch, bad relation)."""


class Relation(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True)
class Constraint:
    coeffs: RatVector
    relation: Relation
    rhs: Fraction

    @classmethod
    def make(cls, coeffs: Iterable, relation, rhs) -> "Constraint":
        return cls(tuple(to_rational(c) for c in coeffs), Relation(relation), to_rational(rhs))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = dot(self.coeffs, x)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        """Signed slack; nonnegative iff an inequality holds."""
        lhs = dot(self.coeffs, x)
        if self.relation is Relation.GE:
            return lhs - self.rhs
        return self.rhs - lhs


@dataclass(frozen=True)
class LinearProgram:
    """``max/min objective @ x`` subject to ``constraints``.

    Variables are nonnegative unless their index is listed in ``free``.
    """

    objective: RatVector
    constraints: Tuple[Constraint, ...]
    maximize: bool = True
    free: frozenset = frozenset()

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def validate(self) -> None:
        n = self.n_vars
        for k, con in enumerate(self.constraints):
            if len(con.coeffs) != n:
                raise LpStructureError(
                    f"constraint {k} has {len(con.coeffs)} coefficients, expected {n}"
                )
            if not isinstance(con.relation, Relation):
                raise LpStructureError(f"constraint {k}: unknown relation {con.relation!r}")
        bad = [i for i in self.free if not 0 <= i < n]
        if bad:
            raise LpStructureError(f"free variable indices out of range: {bad}")


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: Optional[Fraction] = None
    vertex: Optional[RatVector] = None
    basis: Optional[Tuple[int, ...]] = field(default=None, repr=False, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


@dataclass(frozen=True)
class Polytope:
    """H-representation over nonnegative variables.

    For strategy polytopes the simplex equality ``sum(x) == 1`` is one of
    the ``constraints``; nonnegativity is implicit.
    """

    dim: int
    constraints: Tuple[Constraint, ...]

    def contains(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.dim and all(v >= 0 for v in x) and all(
            c.holds(x) for c in self.constraints
        )


# ---------------------------------------------------------------------------
# standard form


@dataclass
class _StandardForm:
    n_struct: int  # structural columns after splitting free variables
    columns_of: List[Tuple[int, Optional[int]]]  # original var -> (pos col, neg col)
    rows: List[List[int]]  # integer coefficients incl. slack/artificial, rhs last
    basis: List[int]
    n_cols: int
    first_artificial: int
    objective: List[int]  # scaled integer objective over all columns (max sense)
    obj_scale: int


def _lcm_den(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        d = v.denominator
        if d != 1:
            out = out * d // math.gcd(out, d)
    return out


def _standard_form(lp: LinearProgram) -> _StandardForm:
    columns_of: List[Tuple[int, Optional[int]]] = []
    n_struct = 0
    for i in range(lp.n_vars):
        columns_of.append((n_struct, None))
        n_struct += 1
    for i in sorted(lp.free):
        columns_of[i] = (columns_of[i][0], n_struct)
        n_struct += 1

    normalized = []
    for con in lp.constraints:
        coeffs = [Fraction(0)] * n_struct
        for i, a in enumerate(con.coeffs):
            if a:
                pos, neg = columns_of[i]
                coeffs[pos] = a
                if neg is not None:
                    coeffs[neg] = -a
        rel, rhs = con.relation, con.rhs
        # a zero-rhs ">=" row flips to "<=" and starts with its slack basic
        if rhs < 0 or (rhs == 0 and rel is Relation.GE):
            coeffs = [-a for a in coeffs]
            rhs = -rhs
            rel = {Relation.LE: Relation.GE, Relation.GE: Relation.LE}.get(rel, rel)
        scale = _lcm_den(coeffs + [rhs])
        normalized.append(([int(a * scale) for a in coeffs], rel, int(rhs * scale)))

    n_slack = sum(1 for _, rel, _ in normalized if rel is not Relation.EQ)
    n_art = sum(1 for _, rel, _ in normalized if rel is not Relation.LE)
    first_slack = n_struct
    first_art = n_struct + n_slack
    n_cols = first_art + n_art

    rows: List[List[int]] = []
    basis: List[int] = []
    s = first_slack
    a = first_art
    for coeffs, rel, rhs in normalized:
        row = coeffs + [0] * (n_cols - n_struct) + [rhs]
        if rel is Relation.LE:
            row[s] = 1
            basis.append(s)
            s += 1
        elif rel is Relation.GE:
            row[s] = -1
            s += 1
            row[a] = 1
            basis.append(a)
            a += 1
        else:
            row[a] = 1
            basis.append(a)
            a += 1
        rows.append(row)

    c = [Fraction(0)] * n_struct
    sign = 1 if lp.maximize else -1
    for i, v in enumerate(lp.objective):
        pos, neg = columns_of[i]
        c[pos] = sign * v
        if neg is not None:
            c[neg] = -sign * v
    obj_scale = _lcm_den(c)
    objective = [int(v * obj_scale) for v in c] + [0] * (n_cols - n_struct)
    return _StandardForm(
        n_struct, columns_of, rows, basis, n_cols, first_art, objective, obj_scale
    )


# ---------------------------------------------------------------------------
# tableau


class _Tableau:
    """Rows of integers with per-row positive denominators.

    Row ``i`` represents ``nums[i] / dens[i]``; the last entry is the rhs.
    ``z`` is the reduced-cost row ``c_B B^-1 A - c`` with the objective
    value in its last entry.
    """

    def __init__(self, rows: List[List[int]], basis: List[int]):
        self.nums = [list(r) for r in rows]
        self.dens = [1] * len(rows)
        self.basis = list(basis)
        self.origin = list(basis)
        self.z: List[int] = []
        self.zden = 1

    @staticmethod
    def _reduce(nums: List[int], den: int) -> Tuple[List[int], int]:
        if den < 0:
            nums = [-v for v in nums]
            den = -den
        if den == 1:
            return nums, den
        g = math.gcd(den, *nums)
        if g > 1:
            nums = [v // g for v in nums]
            den //= g
        return nums, den

    def pivot(self, r: int, c: int) -> None:
        prow = self.nums[r]
        p = prow[c]
        prow, pden = self._reduce(prow, p)
        self.nums[r], self.dens[r] = prow, pden
        p = prow[c]  # == pden after reduction
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(len(self.nums)):
            if i == r:
                continue
            q = self.nums[i][c]
            if q:
                self.nums[i], self.dens[i] = self._combine(self.nums[i], self.dens[i], q, prow, p, nz)
        q = self.z[c]
        if q:
            self.z, self.zden = self._combine(self.z, self.zden, q, prow, p, nz)
        self.basis[r] = c

    def _combine(self, row, den, q, prow, p, nz):
        new = [v * p for v in row]
        for j in nz:
            new[j] -= q * prow[j]
        return self._reduce(new, den * p)

    def entering(self, allowed: int, bland: bool) -> Optional[int]:
        z = self.z
        if bland:
            for j in range(allowed):
                if z[j] < 0:
                    return j
            return None
        best = None
        lowest = 0
        for j in range(allowed):
            if z[j] < lowest:
                best, lowest = j, z[j]
        return best

    def leaving(self, c: int, bland: bool) -> Optional[int]:
        ties: List[int] = []
        best_num = best_den = 0
        for i, row in enumerate(self.nums):
            a = row[c]
            if a <= 0:
                continue
            rhs = row[-1]
            if not ties:
                ties, best_num, best_den = [i], rhs, a
                continue
            lhs_cmp = rhs * best_den
            rhs_cmp = best_num * a
            if lhs_cmp < rhs_cmp:
                ties, best_num, best_den = [i], rhs, a
            elif lhs_cmp == rhs_cmp:
                ties.append(i)
        if len(ties) <= 1 or bland:
            return min(ties, key=lambda i: self.basis[i]) if ties else None
        # lexicographic ratio test over the rows of B^-1
        for k in self.origin:
            best: List[int] = []
            bn = bd = 0
            for i in ties:
                num, den = self.nums[i][k], self.nums[i][c]
                if not best or num * bd < bn * den:
                    best, bn, bd = [i], num, den
                elif num * bd == bn * den:
                    best.append(i)
            ties = best
            if len(ties) == 1:
                break
        return min(ties, key=lambda i: self.basis[i])

    def run(self, allowed: int, rule: str) -> bool:
        """Pivot to optimality over columns ``< allowed``; False if unbounded.

        ``rule="lex"`` prices by the most negative reduced cost and breaks
        ratio ties lexicographically; should a long run of degenerate
        pivots still occur it falls back to Bland's rule for good.
        ``rule="bland"`` uses Bland's rule throughout.
        """
        bland = rule == "bland"
        streak = 0
        limit = 2 * len(self.z)
        while True:
            c = self.entering(allowed, bland)
            if c is None:
                return True
            r = self.leaving(c, bland)
            if r is None:
                return False
            streak = streak + 1 if self.nums[r][-1] == 0 else 0
            if streak > limit:
                bland = True
            self.pivot(r, c)

    def set_objective(self, cost: List[int]) -> None:
        """Install the reduced-cost row for maximizing ``cost @ x``."""
        den = 1
        for i, b in enumerate(self.basis):
            if cost[b]:
                d = self.dens[i]
                den = den * d // math.gcd(den, d)
        width = len(cost) + 1
        z = [-v * den for v in cost] + [0]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                f = cb * (den // self.dens[i])
                row = self.nums[i]
                for j in range(width):
                    if row[j]:
                        z[j] += f * row[j]
        self.z, self.zden = self._reduce(z, den)

    def value(self, i: int) -> Fraction:
        return Fraction(self.nums[i][-1], self.dens[i])

PIVOT_RULES = ("lex", "bland")


def solve_lp(lp: LinearProgram, rule: str = "lex") -> LpOutcome:
    """Solve ``lp`` exactly; optimal outcomes carry a basic feasible vertex.

    The pivot sequence depends only on the input, so repeated solves
    return the same vertex.
    """
    if rule not in PIVOT_RULES:
        raise ValueError(f"unknown pivot rule {rule!r}; expected one of {PIVOT_RULES}")
    lp.validate()
    sf = _standard_form(lp)
    tab = _Tableau(sf.rows, sf.basis)
    first_art = sf.first_artificial

    if sf.n_cols > first_art:
        phase1 = [0] * first_art + [-1] * (sf.n_cols - first_art)
        tab.set_objective(phase1)
        tab.run(sf.n_cols, rule)
        if tab.z[-1] < 0:
            return LpOutcome(LpStatus.INFEASIBLE)
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(tab.nums):
            if tab.basis[i] >= first_art:
                row = tab.nums[i]
                col = next((j for j in range(first_art) if row[j]), None)
                if col is None:
                    del tab.nums[i], tab.dens[i], tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1

    tab.set_objective(sf.objective)
    # artificial columns stay in the tableau for the lexicographic test
    if not tab.run(first_art, rule):
        return LpOutcome(LpStatus.UNBOUNDED)

    x_std = [Fraction(0)] * sf.n_struct
    for i, b in enumerate(tab.basis):
        if b < sf.n_struct:
            x_std[b] = tab.value(i)
    vertex = tuple(
        x_std[pos] - (x_std[neg] if neg is not None else 0) for pos, neg in sf.columns_of
    )
    value = dot(lp.objective, vertex)
    return LpOutcome(LpStatus.OPTIMAL, value, vertex, tuple(tab.basis))


def is_feasible_point(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    """Substitute ``x`` into every constraint and sign restriction."""
    if len(x) != lp.n_vars:
        return False
    if any(x[i] < 0 for i in range(lp.n_vars) if i not in lp.free):
        return False
    return all(c.holds(x) for c in lp.constraints)


def _solve_square(mat: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    n = len(mat)
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]


def certify_optimal(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Re-derive optimality of ``outcome`` from its basis alone.

    Solves ``B x_B = b`` and ``B^T y = c_B`` from scratch with fraction
    arithmetic, then checks primal feasibility and that no nonbasic
    column has a positive reduced cost (no improving edge).
    """
    if not outcome.optimal or outcome.basis is None:
        return False
    sf = _standard_form(lp)
    # phase 1 may have deleted redundant rows; keep the rows the final basis spans
    struct_and_slack = sf.first_artificial
    basis = list(outcome.basis)
    rows = [[Fraction(v) for v in r[:struct_and_slack]] for r in sf.rows]
    b = [Fraction(r[-1]) for r in sf.rows]
    cost = [Fraction(v) for v in sf.objective[:struct_and_slack]]
    k = len(basis)
    # choose k independent rows supporting the basis
    chosen: List[int] = []
    for i in range(len(rows)):
        trial = chosen + [i]
        if _rank([[rows[r][c] for c in basis] for r in trial]) == len(trial):
            chosen = trial
        if len(chosen) == k:
            break
    if len(chosen) != k:
        return False
    bmat = [[rows[r][c] for c in basis] for r in chosen]
    xb = _solve_square(bmat, [b[r] for r in chosen])
    if xb is None or any(v < 0 for v in xb):
        return False
    x_full = [Fraction(0)] * struct_and_slack
    for c, v in zip(basis, xb):
        x_full[c] = v
    # every original row must hold, including dropped redundant ones
    for r, row in enumerate(rows):
        if sum((a * v for a, v in zip(row, x_full) if a), Fraction(0)) != b[r]:
            return False
    bt = [[bmat[r][c] for r in range(k)] for c in range(k)]
    y = _solve_square(bt, [cost[c] for c in basis])
    if y is None:
        return False
    for j in range(struct_and_slack):
        reduced = cost[j] - sum((y[t] * rows[r][j] for t, r in enumerate(chosen)), Fraction(0))
        if reduced > 0:
            return False
    return True


def _rank(mat: List[List[Fraction]]) -> int:
    m = [list(r) for r in mat]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def relative_interior_witness(
    poly: Polytope, strict_rows: Iterable[int]
) -> Optional[Tuple[RatVector, Fraction]]:
    """Point of ``poly`` maximizing a common slack ``s``.

    Every coordinate and every inequality row listed in ``strict_rows``
    must exceed its bound by at least ``s``.  Returns ``(x, s)`` for the
    largest achievable ``s``, or ``None`` when that maximum is not positive.
    """
    strict = set(strict_rows)
    n = poly.dim
    # substitute x = z + s * 1 with z >= 0, so coordinate bounds need no rows
    cons: List[Constraint] = []
    for k, con in enumerate(poly.constraints):
        shift = sum(con.coeffs, Fraction(0))
        if k in strict:
            if con.relation is Relation.EQ:
                raise LpStructureError(f"row {k} is an equality and cannot be strict")
            shift += 1 if con.relation is Relation.LE else -1
        cons.append(Constraint(con.coeffs + (shift,), con.relation, con.rhs))
    # s is capped so the program stays bounded even without a simplex row
    cons.append(Constraint((Fraction(0),) * n + (Fraction(1),), Relation.LE, Fraction(1)))
    objective = (Fraction(0),) * n + (Fraction(1),)
    out = solve_lp(LinearProgram(objective, tuple(cons), maximize=True))
    if not out.optimal or out.value <= 0:
        return None
    s_val = out.value
    return tuple(z + s_val for z in out.vertex[:n]), s_val
