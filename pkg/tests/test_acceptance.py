"""Acceptance suite.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion (see conftest.py).
"""

import json
import random
import time
import warnings
from fractions import Fraction as F

import pytest

from conftest import GAMES, load
from leadsolve.classify import Verdict, WucVerdict, classify, classify_wuc
from leadsolve.cli import run
from leadsolve.commitment import (
    DegeneracyStatus,
    PureCommitmentVerdict,
    check_pure_commitment_nash,
    commitment_values,
    completely_mixed_improvement,
    leader_report,
)
from leadsolve.equilibria import is_equilibrium_strategy, is_nash, maximin, nash_equilibria
from leadsolve.game import Dominance, Game, Player, dominance_check
from leadsolve.two_by_two import FollowerVerdict, CaseLabel, Relation, analyze_2x2, generic_relation
from oracles import brute_alpha, random_game

C1 = pytest.mark.criterion(1, "worked-example regression suite")
C2 = pytest.mark.criterion(2, "Traveler's Dilemma, 99x99")
C3 = pytest.mark.criterion(3, "bound chain on 1,000 random games")
C4 = pytest.mark.criterion(4, "pure commitment and completely mixed improvement")
C5 = pytest.mark.criterion(5, "closed-form 2x2 and vertex oracle equivalence")
C6 = pytest.mark.criterion(6, "classifier soundness")
C7 = pytest.mark.criterion(7, "monotonicity under appended strategies")


def cli(capsys, *argv):
    code = run(list(argv) + ["--json"])
    out = capsys.readouterr()
    assert code == 0, out.err
    return json.loads(out.out)


def analyze(capsys, name, leader="I"):
    return cli(capsys, "analyze", str(GAMES / f"{name}.game"), "--leader", leader)


# ---------------------------------------------------------------------------
# criterion 1


@C1
def test_three_by_three_two_witnesses(capsys):
    doc = analyze(capsys, "commitment-3x3")
    assert doc["alphaL"] == doc["alphaH"] == "7/2"
    assert {w["jF_label"] for w in doc["witnessesL"]} == {"t4", "t6"}


@C1
def test_degenerate_three_by_two(capsys):
    doc = analyze(capsys, "degenerate-3x2")
    eqs = {(tuple(e["x"]), tuple(e["y"])): (e["alpha"], e["beta"]) for e in doc["nash"]["equilibria"]}
    assert eqs[(("0", "4/5", "1/5"), ("6/7", "1/7"))] == ("3/7", "7/5")
    assert doc["alphaL"] == "2"
    assert any(w["x"] == ["1", "0", "0"] and w["jF_label"] == "t5" for w in doc["witnessesL"])
    g = load("degenerate-3x2")
    assert not is_nash(g, (1, 0, 0), (1, 0))


@C1
def test_existence_condition_without_pointwise(capsys):
    doc = cli(capsys, "classify", str(GAMES / "relaxed-condition.game"))
    c = doc["conditions"]["I"]
    assert c["existence"] and not c["pointwise_min"]


@C1
@pytest.mark.parametrize("name, values", [("common-interest-degenerate", ("-1", "2")), ("constant-on-replies", ("3", "3"))])
def test_condition_examples_values(capsys, name, values):
    doc = analyze(capsys, name)
    assert (doc["alphaL"], doc["alphaH"]) == values


@C1
def test_commitment_beats_unique_equilibrium(capsys):
    doc = analyze(capsys, "commitment-beats-nash")
    (e,) = doc["nash"]["equilibria"]
    assert (e["x"], e["y"], e["alpha"], e["beta"]) == (["0", "1"], ["0", "1"], "0", "0")
    (w,) = doc["witnessesL"]
    assert w["x"] == ["1/2", "1/2"] and w["jF_label"] == "t3"
    assert (w["leader_payoff"], w["follower_payoff"]) == ("5/2", "1/2")


@C1
def test_31019_pair(capsys):
    doc = analyze(capsys, "31019")
    (w,) = doc["witnessesL"]
    assert (w["leader_payoff"], w["follower_payoff"]) == ("28/3", "19/3")
    assert w["x"] == ["1/3", "2/3"] and w["jF_label"] == "t4"
    doc = analyze(capsys, "31019-prime")
    w = next(w for w in doc["witnessesL"] if w["x"] == ["1", "0"])
    assert (w["jF_label"], w["leader_payoff"], w["follower_payoff"]) == ("t3", "3", "3")


@C1
def test_4231_dominated_strategy_attains_high_value(capsys):
    doc = analyze(capsys, "4231")
    assert (doc["alphaL"], doc["alphaH"]) == ("2", "3")
    assert any(w["x"] == ["0", "1"] and w["leader_payoff"] == "3" for w in doc["witnessesH"])
    assert dominance_check(load("4231"), Player.I, 1).kind is Dominance.STRONG


@C1
def test_4132_both_leaders(capsys):
    for leader in ("I", "II"):
        doc = analyze(capsys, "4132", leader)
        assert doc["alphaL"] == "7/2"
        assert [(e["alpha"], e["beta"]) for e in doc["nash"]["equilibria"]] == [("5/2", "5/2")]


@C1
def test_two_by_three_leader_one(capsys):
    doc = analyze(capsys, "2x3-outside", "I")
    (w,) = doc["witnessesL"]
    assert w["x"] == ["1/3", "2/3"] and w["jF_label"] == "t3"
    assert (w["leader_payoff"], w["follower_payoff"]) == ("5/3", "4/3")


@C1
def test_two_by_three_commitments_outside_equilibrium():
    g = load("2x3-outside")
    for leader in Player:
        (_, wL), _ = commitment_values(g, leader)
        assert all(not is_equilibrium_strategy(g, leader, w.x) for w in wL)


@C1
@pytest.mark.xfail(strict=True, reason="exact optimum for leader II is 2/3 at (0,1/3,2/3); see notes")
def test_two_by_three_leader_two_as_printed(capsys):
    doc = analyze(capsys, "2x3-outside", "II")
    w = doc["witnessesL"][0]
    assert w["x"] == ["1/2", "1/2", "0"] and w["jF_label"] == "s1"
    assert (w["leader_payoff"], w["follower_payoff"]) == ("1/2", "5/2")


# ---------------------------------------------------------------------------
# criterion 2


@C2
def test_travelers_dilemma(capsys):
    start = time.perf_counter()
    doc = cli(capsys, "trd", "--max", "100")
    elapsed = time.perf_counter() - start
    print(f"TrD(100) wall clock {elapsed:.1f} s")
    assert doc["alphaL"] == doc["beta_F"] == "295/3"
    assert doc["support"] == [97, 99, 100]
    assert doc["weights"] == ["1/3", "1/3", "1/3"]
    assert doc["jF"] == 99
    assert doc["nash"] == [2, 2]
    assert doc["saddle_points"] == [[2, 2]]
    cce = {c["distribution"]: c for c in doc["cce"]}
    assert cce["1/2(100,100) + 1/2(98,98)"]["passed"] and cce["1/2(100,100) + 1/2(98,98)"]["value"] == "99"
    assert cce["1/2(100,100) + 1/2(97,97)"]["passed"] and cce["1/2(100,100) + 1/2(97,97)"]["value"] == "197/2"
    assert not cce["(100,100)"]["passed"]
    assert elapsed < 120


# ---------------------------------------------------------------------------
# criteria 3 and 4: one seeded corpus


@pytest.fixture(scope="module")
def corpus():
    """Seeded games drawn until 1,000 have a complete equilibrium list.

    Degenerate draws (extreme equilibria only) are kept as well, since the
    bound chain must hold for them too.
    """
    rng = random.Random(20240917)
    out = []
    complete = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        while complete < 1000:
            g = random_game(rng, rng.randint(2, 4), rng.randint(2, 4))
            nash = nash_equilibria(g)
            complete += nash.complete
            out.append((g, nash, leader_report(g, Player.I, nash=nash)))
    return out


@C3
def test_bound_chain(corpus):
    violations = []
    complete = 0
    for g, nash, rep in corpus:
        complete += nash.complete
        v, l, h, aL, aH = rep.v_leader, rep.nash_l, rep.nash_h, rep.alphaL, rep.alphaH
        ok = v <= l <= h <= aH and l <= aL
        if rep.degeneracy is DegeneracyStatus.NON_DEGENERATE:
            ok = ok and aL == aH
        if not ok:
            violations.append((g.A, g.B, rep.chain))
    print(f"bound chain: {len(corpus)} games, {complete} with complete enumeration, {len(violations)} violations")
    assert complete == 1000
    assert not violations


@C4
def test_pure_commitment_witnesses_are_equilibria(corpus):
    confirmed = 0
    for g, _, rep in corpus:
        if rep.degeneracy is not DegeneracyStatus.NON_DEGENERATE:
            continue
        chk = check_pure_commitment_nash(g)
        assert chk.verdict is not PureCommitmentVerdict.VIOLATED, (g.A, g.B)
        confirmed += chk.verdict is PureCommitmentVerdict.CONFIRMED
    print(f"pure commitment witnesses confirmed as equilibria in {confirmed} games")
    assert confirmed > 100


@C4
def test_completely_mixed_equilibria_improve(corpus):
    applicable = 0
    for g, nash, _ in corpus:
        if not nash.complete or not any(len(e.x.support) == g.m and len(e.y.support) == g.n for e in nash):
            continue
        r = completely_mixed_improvement(g)
        if r.applicable:
            applicable += 1
            assert r.improved > r.alpha_nash and r.alphaL >= r.improved, (g.A, g.B)
    print(f"completely mixed improvement checked on {applicable} games")
    assert applicable > 20


# ---------------------------------------------------------------------------
# criterion 5


def _generic_2x2(g):
    """Case label, values and follower verdicts from the LP pipeline only."""
    nash = nash_equilibria(g)
    values, follower = {}, {}
    for p in Player:
        (aL, wL), (aH, _) = commitment_values(g, p)
        values[p] = (aL, aH, wL)
    # within the enumeration bound the list is complete exactly when neither player is degenerate
    if not nash.complete:
        case, rel = CaseLabel.A, {}
    else:
        rel = {p: generic_relation(g, p, nash, values[p][0]) for p in Player}
        if rel[Player.I] is Relation.EXISTS_OUTSIDE:
            case = CaseLabel.B_I
        elif rel[Player.II] is Relation.EXISTS_OUTSIDE:
            case = CaseLabel.B_II
        else:
            case = CaseLabel.B_III
    for p in Player:
        if rel.get(p) is not Relation.EXISTS_OUTSIDE:
            follower[p] = FollowerVerdict.NOT_APPLICABLE
            continue
        (e,) = nash.equilibria
        beta_n = e.beta if p is Player.I else e.alpha
        worse = any(w.follower_payoff < beta_n for w in values[p][2])
        follower[p] = FollowerVerdict.WORSE if worse else FollowerVerdict.NOT_WORSE
    return case, {p: values[p][:2] for p in Player}, follower


@C5
def test_two_by_two_closed_form_equals_generic():
    rng = random.Random(5)
    mismatches = []
    labels = set()
    for _ in range(10_000):
        g = random_game(rng, 2, 2)
        rep = analyze_2x2(g, verify=False)
        case, values, follower = _generic_2x2(g)
        labels.add(case)
        closed = {p: (rep.commitment[p].alphaL, rep.commitment[p].alphaH) for p in Player}
        if (case, values, follower) != (rep.split.case, closed, {p: rep.follower[p].verdict for p in Player}):
            mismatches.append((g.A, g.B))
    print(f"2x2 oracle: 10000 games, {len(mismatches)} mismatches, cases seen {sorted(c.value for c in labels)}")
    assert labels == set(CaseLabel)
    assert not mismatches


@C5
def test_highest_value_matches_vertex_oracle_3x3():
    rng = random.Random(6)
    for _ in range(200):
        g = random_game(rng, 3, 3)
        (aL, _), (aH, _) = commitment_values(g, Player.I)
        assert (aL, aH) == brute_alpha(g), (g.A, g.B)


# ---------------------------------------------------------------------------
# criterion 6


def _wuc_corpus():
    rng = random.Random(66)
    games = [load(p.stem) for p in sorted(GAMES.glob("*.game"))]
    for _ in range(150):
        games.append(random_game(rng, rng.randint(2, 3), rng.randint(2, 3), -3, 3))
    for _ in range(150):
        base = random_game(rng, rng.randint(2, 3), rng.randint(2, 3))
        a, c = F(rng.randint(1, 6), rng.randint(1, 4)), rng.randint(-5, 5)
        games.append(Game(base.A, tuple(tuple(-a * v + c for v in r) for r in base.A)))
    return games


@C6
def test_wuc_yes_pins_leadership_values():
    yes = no = 0
    for g in _wuc_corpus():
        r = classify_wuc(g)
        if r.verdict is WucVerdict.YES:
            yes += 1
            for p in Player:
                (aL, _), (aH, _) = commitment_values(g, p)
                assert maximin(g, p).value == aL == aH, (g.A, g.B, p)
        elif r.verdict is WucVerdict.NO:
            no += 1
            assert r.witness.verify(g), (g.A, g.B)
    print(f"wuc corpus: {yes} Yes, {no} No")
    assert yes > 100 and no > 100


@C6
def test_zero_sum_games_classify_yes():
    rng = random.Random(60)
    for _ in range(60):
        base = random_game(rng, rng.randint(2, 4), rng.randint(2, 4))
        g = Game(base.A, tuple(tuple(-v for v in r) for r in base.A))
        rep = classify(g)
        assert rep.wuc.verdict is WucVerdict.YES
        assert rep.asc.verdict is Verdict.YES
        assert rep.acoop.verdict is Verdict.YES


# ---------------------------------------------------------------------------
# criterion 7


def _append_row(g, row_a, row_b):
    return Game(g.A + (row_a,), g.B + (row_b,))


def _append_col(g, col_a, col_b):
    return Game(tuple(r + (a,) for r, a in zip(g.A, col_a)), tuple(r + (b,) for r, b in zip(g.B, col_b)))


@C7
def test_appending_a_row_never_hurts_the_leader():
    rng = random.Random(70)
    for _ in range(500):
        g = random_game(rng, rng.randint(2, 3), rng.randint(2, 3))
        extra = random_game(rng, 1, g.n)
        h = _append_row(g, extra.A[0], extra.B[0])
        (aL, _), (aH, _) = commitment_values(g, Player.I)
        (bL, _), (bH, _) = commitment_values(h, Player.I)
        assert bL >= aL and bH >= aH, (g.A, g.B, extra.A, extra.B)
        assert maximin(h, Player.I).value >= maximin(g, Player.I).value


@C7
def test_appending_a_column_never_raises_the_safety_level():
    rng = random.Random(71)
    for _ in range(500):
        g = random_game(rng, rng.randint(2, 3), rng.randint(2, 3))
        extra = random_game(rng, g.m, 1)
        h = _append_col(g, [r[0] for r in extra.A], [r[0] for r in extra.B])
        assert maximin(h, Player.I).value <= maximin(g, Player.I).value
