import random
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from conftest import load
from leadsolve.classify import (
    Verdict,
    WucVerdict,
    check_sufficient_conditions,
    classify,
    classify_acoop,
    classify_asc,
    classify_wuc,
)
from leadsolve.game import Game, Player
from oracles import game, random_game

PRISONERS = game([[3, 0], [5, 1]], [[3, 5], [0, 1]])


def test_existence_without_pointwise():
    c = check_sufficient_conditions(load("relaxed-condition"), Player.I)
    assert c.cond6 and not c.cond5


def test_pointwise_max_on_common_interest_example():
    c = check_sufficient_conditions(load("common-interest-degenerate"), Player.I)
    assert c.cond7


def test_constant_on_replies():
    c = check_sufficient_conditions(load("constant-on-replies"), Player.I)
    assert c.cond_alt


def test_pointwise_max_skipped_for_many_columns():
    g = random_game(random.Random(2), 2, 11)
    c = check_sufficient_conditions(g, Player.I)
    assert c.cond7 is None


def test_matching_pennies_all_yes():
    rep = classify(load("matching-pennies"))
    assert rep.wuc.verdict is WucVerdict.YES
    assert rep.asc.verdict is Verdict.YES
    assert rep.acoop.verdict is Verdict.YES


def test_prisoners_dilemma():
    # every unilateral gain hurts the opponent
    assert classify_wuc(PRISONERS).verdict is WucVerdict.YES
    assert classify_asc(PRISONERS).verdict is Verdict.YES
    assert classify_acoop(PRISONERS).verdict is Verdict.NO


def test_wuc_witness_verifies():
    g = load("4132")
    r = classify_wuc(g)
    assert r.verdict is WucVerdict.NO
    assert r.witness.verify(g)


def test_wuc_needs_mixed_strategies():
    # no pure pair violates the definition, but a mixed deviation does
    g = game([[1, 0], [0, 1]], [[-1, 0], [0, -2]])
    r = classify_wuc(g, samples=0)
    assert r.verdict is WucVerdict.NO and r.witness.verify(g)


def test_negative_multiple_is_wuc():
    g = game([[1, -2, 3], [0, 4, -1]], [[-2, 4, -6], [0, -8, 2]])
    assert classify_wuc(g).verdict is WucVerdict.YES


def test_classification_deterministic_for_seed():
    g = random_game(random.Random(4), 3, 3)
    a, b = classify(g, seed=7), classify(g, seed=7)
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_every_no_witness_verifies(seed):
    rng = random.Random(seed)
    g = random_game(rng, rng.randint(2, 3), rng.randint(2, 3), -2, 2)
    r = classify_wuc(g, seed=seed)
    if r.verdict is WucVerdict.NO:
        assert r.witness.verify(g)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=F(1, 3), max_value=4), st.integers(-3, 3))
def test_competitive_transforms_classify_yes(seed, a, c):
    rng = random.Random(seed)
    base = random_game(rng, rng.randint(2, 3), rng.randint(2, 3))
    B = tuple(tuple(-a * v + c for v in r) for r in base.A)
    g = Game(base.A, B)
    assert classify_wuc(g).verdict is WucVerdict.YES
