from fractions import Fraction as F

import pytest

from leadsolve.commitment import commitment_values
from leadsolve.equilibria import iesds
from leadsolve.game import Player
from leadsolve.trd import TrdCapacityError, TrdSpec, build_trd, solve_trd
from oracles import brute_alpha


def test_spec_validation():
    with pytest.raises(ValueError):
        TrdSpec(2)
    with pytest.raises(TypeError):
        TrdSpec(10.0)
    with pytest.raises(TypeError):
        TrdSpec(True)
    assert TrdSpec(5).claims == (2, 3, 4, 5)
    with pytest.raises(ValueError):
        TrdSpec(5).index(6)


def test_payoffs():
    g = build_trd(TrdSpec(10))
    s = TrdSpec(10)
    assert g.A[s.index(5)][s.index(5)] == 5
    assert g.A[s.index(4)][s.index(7)] == 6
    assert g.A[s.index(7)][s.index(4)] == 2
    assert g.B == tuple(zip(*g.A))
    assert g.shape == (9, 9)


def test_capacity():
    with pytest.raises(TrdCapacityError):
        solve_trd(TrdSpec(300))
    with pytest.raises(TrdCapacityError):
        solve_trd(TrdSpec(30), capacity=20)


@pytest.mark.parametrize("M", [5, 6, 7])
def test_small_instances_match_vertex_oracle(M):
    g = build_trd(TrdSpec(M))
    (aL, _), (aH, _) = commitment_values(g, Player.I)
    assert (aL, aH) == brute_alpha(g)


@pytest.mark.parametrize("M", [5, 8, 13, 20])
def test_commitment_on_three_top_claims(M):
    g = build_trd(TrdSpec(M))
    (aL, (w, *_)), (aH, _) = commitment_values(g, Player.I)
    assert aL == aH == F(3 * M - 5, 3)
    assert [g.row_labels[i] for i in w.x.support] == [str(M - 3), str(M - 1), str(M)]
    assert g.col_labels[w.follower_reply] == str(M - 1)


def test_iesds_reaches_lowest_claim():
    red = iesds(build_trd(TrdSpec(12)))
    assert (red.rows, red.cols) == ((0,), (0,))
    # the highest claim goes first, one claim per player per round
    assert red.rounds[0] == ((10,), (10,))
    assert len(red.rounds) == 10


def test_solve_small():
    sol = solve_trd(TrdSpec(10))
    assert sol.leader.alphaL == F(25, 3)
    assert [(e.x.support, e.y.support) for e in sol.saddle] == [((0,), (0,))]
    assert sol.asc
    assert [c.passed for _, c in sol.cce] == [True, True, False]
    assert sol.cce[0][1].expected == (9, 9)
    assert sol.cce[2][1].worst[Player.I] == (7, 1)


def test_leader_two_is_symmetric():
    a = solve_trd(TrdSpec(8), Player.I).leader
    b = solve_trd(TrdSpec(8), Player.II).leader
    assert (a.alphaL, a.alphaH) == (b.alphaL, b.alphaH)
