"""Brute-force reference computations for the test suite.

Nothing here imports the LP or enumeration code of the package: points
are found by solving every square subsystem of tight constraints with
plain Fraction elimination and keeping the feasible solutions.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from leadsolve.game import Game

F = Fraction


def solve(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of a square system, or None if singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def vertices(dim: int, eqs, les) -> List[Tuple[Fraction, ...]]:
    """Vertices of ``{x >= 0 : a.x = b for eqs, a.x <= b for les}``."""
    cands = [(list(a), b) for a, b in les]
    for i in range(dim):
        unit = [F(0)] * dim
        unit[i] = F(-1)
        cands.append((unit, F(0)))
    need = dim - len(eqs)
    out = set()
    for pick in itertools.combinations(range(len(cands)), need):
        rows = [list(a) for a, _ in eqs] + [cands[k][0] for k in pick]
        rhs = [b for _, b in eqs] + [cands[k][1] for k in pick]
        x = solve(rows, rhs)
        if x is None:
            continue
        if any(v < 0 for v in x):
            continue
        if all(sum(a_ * x_ for a_, x_ in zip(a, x)) <= b for a, b in les):
            out.add(tuple(x))
    return sorted(out)


def affine_rank(points) -> int:
    if not points:
        return -1
    base = points[0]
    rows = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    rank = 0
    cols = len(base)
    for c in range(cols):
        p = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _simplex(m):
    return [([F(1)] * m, F(1))]


def _col(M, x, j):
    return sum(x[i] * M[i][j] for i in range(len(x)))


def region_rows(B, j, cols=None):
    """``x . B[:, k] <= x . B[:, j]`` for every other column ``k``."""
    m, n = len(B), len(B[0])
    cols = range(n) if cols is None else cols
    return [([B[i][k] - B[i][j] for i in range(m)], F(0)) for k in cols if k != j]


def brute_alpha(game: Game) -> Tuple[Fraction, Fraction]:
    """``(alpha^L, alpha^H)`` for leader I by vertex enumeration."""
    A, B = game.A, game.B
    m, n = game.shape
    high = None
    low = None
    for j in range(n):
        verts = vertices(m, _simplex(m), region_rows(B, j))
        if not verts:
            continue
        best = max(_col(A, v, j) for v in verts)
        high = best if high is None else max(high, best)
        if affine_rank(verts) < m - 1:
            continue
        E = [k for k in range(n) if all(B[i][k] == B[i][j] for i in range(m))]
        for k in E:
            # the follower's pick inside E is the leader's worst column
            cell = region_rows(B, j) + [([A[i][k] - A[i][q] for i in range(m)], F(0)) for q in E if q != k]
            for v in vertices(m, _simplex(m), cell):
                val = _col(A, v, k)
                low = val if low is None else max(low, val)
    return low, high


def brute_maximin(M) -> Fraction:
    """Row player's safety level in the matrix game ``M``."""
    m, n = len(M), len(M[0])
    best = None
    for k in range(n):
        cell = [([M[i][k] - M[i][q] for i in range(m)], F(0)) for q in range(n) if q != k]
        for v in vertices(m, _simplex(m), cell):
            val = _col(M, v, k)
            best = val if best is None else max(best, val)
    return best


def brute_lp_max(c, les, dim):
    """Max of ``c.x`` over a bounded polytope given by ``<=`` rows and ``x >= 0``."""
    verts = vertices(dim, [], les)
    if not verts:
        return None
    return max(sum(a * b for a, b in zip(c, v)) for v in verts)


def brute_nash(game: Game):
    """Nash equilibria of a non-degenerate game by equal-size support pairs."""
    A, B = game.A, game.B
    m, n = game.shape
    out = set()
    for k in range(1, min(m, n) + 1):
        for S in itertools.combinations(range(m), k):
            for T in itertools.combinations(range(n), k):
                # y on T equalizes A over rows in S; x on S equalizes B over columns in T
                y = _equalizer([[A[i][j] for j in T] for i in S])
                x = _equalizer([[B[i][j] for i in S] for j in T])
                if y is None or x is None:
                    continue
                xf = [F(0)] * m
                yf = [F(0)] * n
                for i, v in zip(S, x):
                    xf[i] = v
                for j, v in zip(T, y):
                    yf[j] = v
                if is_nash(game, xf, yf):
                    out.add((tuple(xf), tuple(yf)))
    return sorted(out)


def _equalizer(M):
    """Positive probability vector ``p`` with ``M p`` constant, if unique."""
    k = len(M)
    rows = [[a - b for a, b in zip(M[r], M[0])] + [F(0)] for r in range(1, k)]
    # unknowns: p_1..p_k, all rows equal to the first; plus sum = 1
    rows = [r[:k] for r in rows] + [[F(1)] * k]
    rhs = [F(0)] * (k - 1) + [F(1)]
    p = solve(rows, rhs)
    if p is None or any(v <= 0 for v in p):
        return None
    return p


def is_nash(game: Game, x, y) -> bool:
    m, n = game.shape
    Ay = [sum(game.A[i][j] * y[j] for j in range(n)) for i in range(m)]
    xB = [sum(x[i] * game.B[i][j] for i in range(m)) for j in range(n)]
    va = sum(a * b for a, b in zip(x, Ay))
    vb = sum(a * b for a, b in zip(xB, y))
    return va == max(Ay) and vb == max(xB)


def random_game(rng: random.Random, m: int, n: int, lo: int = -9, hi: int = 9) -> Game:
    A = tuple(tuple(F(rng.randint(lo, hi)) for _ in range(n)) for _ in range(m))
    B = tuple(tuple(F(rng.randint(lo, hi)) for _ in range(n)) for _ in range(m))
    rows = tuple(f"s{i + 1}" for i in range(m))
    cols = tuple(f"t{m + j + 1}" for j in range(n))
    return Game(A, B, rows, cols)


def game(A: Sequence[Sequence], B: Sequence[Sequence]) -> Game:
    m, n = len(A), len(A[0])
    return Game(
        tuple(tuple(F(v) for v in r) for r in A),
        tuple(tuple(F(v) for v in r) for r in B),
        tuple(f"s{i + 1}" for i in range(m)),
        tuple(f"t{m + j + 1}" for j in range(n)),
    )


def brute_extreme_equilibria(game: Game):
    """Extreme equilibria from completely labeled vertex pairs of the best-response polytopes."""
    m, n = game.shape
    low = min(min(min(r) for r in game.A), min(min(r) for r in game.B))
    shift = 1 - low
    A = [[a + shift for a in r] for r in game.A]
    B = [[b + shift for b in r] for r in game.B]
    P = vertices(m, [], [([B[i][j] for i in range(m)], F(1)) for j in range(n)])
    Q = vertices(n, [], [(A[i], F(1)) for i in range(m)])
    out = set()
    for x in P:
        if not any(x):
            continue
        for y in Q:
            if not any(y):
                continue
            ok = all(x[i] == 0 or sum(A[i][j] * y[j] for j in range(n)) == 1 for i in range(m)) and all(
                y[j] == 0 or sum(x[i] * B[i][j] for i in range(m)) == 1 for j in range(n)
            )
            if ok:
                sx, sy = sum(x), sum(y)
                out.add((tuple(v / sx for v in x), tuple(v / sy for v in y)))
    return sorted(out)
