"""Command-line front end.

Exit codes: 0 success, 1 the analysis refused to run (size bounds, wrong
shape), 2 usage or input errors.  JSON documents carry every rational as a
``"p/q"`` string, with a float in a sibling ``*_approx`` field.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .classify import DEFAULT_SEED, classify
from .commitment import check_pure_commitment_nash, leader_report
from .equilibria import CorrelatedDistribution, NashSet, nash_equilibria, verify_cce
from .game import DEFAULT_ENUM_BOUND, Game, GameFormatError, Player, game_from_dict
from .ratmath import RationalParseError, approx, render, to_rational
from .trd import MAX_CAPACITY, TrdCapacityError, TrdSpec, solve_trd
from .two_by_two import TwoByTwoError, analyze_2x2

SCHEMA = "leadsolve/1"


class Refusal(Exception):
    """The analysis declined to run on this input (exit code 1)."""


class InputError(Exception):
    """Unreadable or malformed input (exit code 2)."""


# ---------------------------------------------------------------------------
# rendering helpers


def _num(doc: Dict[str, Any], key: str, value: Optional[Fraction]) -> None:
    if value is None:
        doc[key] = None
        return
    doc[key] = render(value)
    doc[key + "_approx"] = approx(value)


def _vec(doc: Dict[str, Any], key: str, values: Sequence[Fraction]) -> None:
    doc[key] = [render(v) for v in values]
    doc[key + "_approx"] = [approx(v) for v in values]


def _fmt_vec(values: Sequence[Fraction]) -> str:
    return "(" + ", ".join(render(v) for v in values) + ")"


def _labels(game: Game, who: Player):
    return game.labels_of(who)


def _nash_doc(game: Game, nash: NashSet) -> Dict[str, Any]:
    eqs = []
    for e in nash.equilibria:
        d: Dict[str, Any] = {}
        _vec(d, "x", e.x.weights)
        _vec(d, "y", e.y.weights)
        _num(d, "alpha", e.alpha)
        _num(d, "beta", e.beta)
        eqs.append(d)
    doc: Dict[str, Any] = {"complete": nash.complete, "checked": nash.checked, "note": nash.note, "equilibria": eqs}
    _num(doc, "l", nash.lowest)
    _num(doc, "h", nash.highest)
    return doc


def _nash_lines(nash: NashSet) -> List[str]:
    head = "complete" if nash.complete else ("extreme equilibria only" if nash.checked else "not computed")
    lines = [f"Nash equilibria ({head}){': ' + nash.note if nash.note else ''}"]
    for e in nash.equilibria:
        lines.append(f"  x={_fmt_vec(e.x.weights)} y={_fmt_vec(e.y.weights)} payoffs=({render(e.alpha)}, {render(e.beta)})")
    return lines


def _emit(args, doc: Dict[str, Any], lines: List[str]) -> None:
    if args.json:
        doc = {"schema": SCHEMA, **doc}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# input


def _read_doc(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"game_core: {path}: cannot read file: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"game_core: {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"game_core: {path}: a game document must be an object")
    return doc


def _load(path: str) -> Game:
    try:
        return game_from_dict(_read_doc(path))
    except GameFormatError as exc:
        raise InputError(f"game_core: {path}: {exc}") from exc


def _check_bound(game: Game, args) -> None:
    if game.m + game.n > args.enum_bound and not args.skip_degeneracy:
        raise Refusal(
            f"equilibria: m+n = {game.m + game.n} exceeds the enumeration bound {args.enum_bound}; "
            "raise --enum-bound or pass --skip-degeneracy"
        )


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> None:
    game = _load(args.game)
    _check_bound(game, args)
    leader = Player(args.leader)
    nash = nash_equilibria(game, args.enum_bound)
    rep = leader_report(game, leader, args.enum_bound, nash=nash, check_degeneracy=not args.skip_degeneracy)
    pure = check_pure_commitment_nash(game, leader, args.enum_bound) if not args.skip_degeneracy else None
    follower_labels = _labels(game, leader.other)

    doc: Dict[str, Any] = {"command": "analyze", "game": game.name, "leader": leader.value}
    _num(doc, "v", rep.v_leader)
    _vec(doc, "maximin_strategy", rep.maximin_strategy.weights)
    _num(doc, "alphaL", rep.alphaL)
    _num(doc, "alphaH", rep.alphaH)
    _num(doc, "l", rep.nash_l)
    _num(doc, "h", rep.nash_h)
    doc["nash_complete"] = rep.nash_complete
    doc["degeneracy"] = rep.degeneracy.value
    doc["chain"] = rep.chain
    doc["chain_ok"] = rep.chain_ok
    wl = []
    for w in rep.witnessesL:
        d: Dict[str, Any] = {}
        _vec(d, "x", w.x.weights)
        d["jF"] = w.follower_reply
        d["jF_label"] = follower_labels[w.follower_reply]
        _num(d, "leader_payoff", w.leader_payoff)
        _num(d, "follower_payoff", w.follower_payoff)
        d["tie"] = w.tie
        wl.append(d)
    doc["witnessesL"] = wl
    wh = []
    for w in rep.witnessesH:
        d = {}
        _vec(d, "x", w.x.weights)
        d["column"] = w.column
        d["column_label"] = follower_labels[w.column]
        _num(d, "leader_payoff", w.leader_payoff)
        wh.append(d)
    doc["witnessesH"] = wh
    doc["nash"] = _nash_doc(game, nash)
    if pure is not None:
        doc["pure_commitment"] = {
            "verdict": pure.verdict.value,
            "pairs": [{"leader": i, "follower": j, "nash": ok} for i, j, ok in pure.pairs],
        }

    lines = [f"{game.name or args.game}: leader {leader.value} ({rep.degeneracy.value})", rep.chain]
    if not rep.chain_ok:
        lines.append("WARNING: bound chain violated")
    for w in rep.witnessesL:
        tie = " (tie, induced by perturbation)" if w.tie else ""
        lines.append(
            f"  commit {_fmt_vec(w.x.weights)} -> {follower_labels[w.follower_reply]}: "
            f"payoffs ({render(w.leader_payoff)}, {render(w.follower_payoff)}){tie}"
        )
    lines += _nash_lines(nash)
    if pure is not None:
        lines.append(f"pure commitment vs Nash: {pure.verdict.value}")
    _emit(args, doc, lines)


def cmd_nash(args) -> None:
    game = _load(args.game)
    nash = nash_equilibria(game, args.enum_bound)
    if not nash.checked:
        raise Refusal(f"equilibria: {nash.note}; raise --enum-bound")
    doc = {"command": "nash", "game": game.name, "nash": _nash_doc(game, nash)}
    _emit(args, doc, [game.name or args.game] + _nash_lines(nash))


def cmd_classify(args) -> None:
    game = _load(args.game)
    _check_bound(game, args)
    rep = classify(game, args.enum_bound, args.seed)
    conds = {}
    lines = [f"{game.name or args.game}: classification (seed {args.seed})"]
    for p, c in rep.conditions.items():
        conds[p.value] = {
            "pointwise_min": c.pointwise_min,
            "existence": c.existence,
            "pointwise_max": c.pointwise_max,
            "constant_on_replies": c.constant_on_replies,
        }
        lines.append(
            f"  leader {p.value}: pointwise-min={c.pointwise_min} existence={c.existence} "
            f"pointwise-max={c.pointwise_max} constant-on-replies={c.constant_on_replies}"
        )
    wuc: Dict[str, Any] = {"verdict": rep.wuc.verdict.value, "method": rep.wuc.method}
    lines.append(f"  wuc: {rep.wuc.verdict.value} ({rep.wuc.method})")
    if rep.wuc.witness is not None:
        w = rep.wuc.witness
        wd: Dict[str, Any] = {"side": w.side.value, "clause": w.clause}
        _vec(wd, "first", w.first.weights)
        _vec(wd, "second", w.second.weights)
        _vec(wd, "fixed", w.fixed.weights)
        wuc["witness"] = wd
        lines.append(
            f"    witness: player {w.side.value} moves {_fmt_vec(w.first.weights)} -> "
            f"{_fmt_vec(w.second.weights)} against {_fmt_vec(w.fixed.weights)} ({w.clause})"
        )
    doc = {
        "command": "classify",
        "game": game.name,
        "seed": args.seed,
        "conditions": conds,
        "wuc": wuc,
        "asc": {"verdict": rep.asc.verdict.value, "reason": rep.asc.reason},
        "acoop": {"verdict": rep.acoop.verdict.value, "reason": rep.acoop.reason},
        "notes": list(rep.notes),
    }
    lines.append(f"  asc: {rep.asc.verdict.value} ({rep.asc.reason})")
    lines.append(f"  a-cooperative: {rep.acoop.verdict.value} ({rep.acoop.reason})")
    lines += [f"  note: {n}" for n in rep.notes]
    _emit(args, doc, lines)


def cmd_two_by_two(args) -> None:
    game = _load(args.game)
    try:
        rep = analyze_2x2(game)
    except TwoByTwoError as exc:
        raise Refusal(f"two_by_two: {args.game}: {exc}") from exc
    doc: Dict[str, Any] = {"command": "two-by-two", "game": game.name}
    _num(doc, "d", rep.d)
    _num(doc, "c", rep.c)
    _num(doc, "beta_d", rep.beta_d)
    doc["case"] = rep.split.case.value
    doc["case_verified"] = rep.split.verified
    lines = [f"{game.name or args.game}: case {rep.split.case.value}"
             f" (generic cross-check {'agrees' if rep.split.verified else 'DISAGREES'})"]
    lines.append(f"  d={render(rep.d) if rep.d is not None else '-'} "
                 f"c={render(rep.c) if rep.c is not None else '-'} "
                 f"beta_d={render(rep.beta_d) if rep.beta_d is not None else '-'}")
    players = {}
    for p in (Player.I, Player.II):
        cf, lem, fol = rep.commitment[p], rep.conditions[p], rep.follower[p]
        pd: Dict[str, Any] = {"ell1": lem.ell1, "ell2": lem.ell2, "relation": rep.split.relation[p].value,
                              "follower": fol.verdict.value}
        _num(pd, "alphaL", cf.alphaL)
        _num(pd, "alphaH", cf.alphaH)
        _num(pd, "beta_F", fol.beta_F)
        _num(pd, "beta_N", fol.beta_N)
        _num(pd, "v_follower", fol.v_follower)
        pd["unique"] = fol.unique
        players[p.value] = pd
        lines.append(
            f"  leader {p.value}: alphaL={render(cf.alphaL)} alphaH={render(cf.alphaH)} "
            f"ell1={lem.ell1} ell2={lem.ell2} {rep.split.relation[p].value}; follower {fol.verdict.value}"
        )
    doc["leaders"] = players
    _emit(args, doc, lines)


def cmd_trd(args) -> None:
    try:
        spec = TrdSpec(args.max)
        sol = solve_trd(spec, Player(args.leader), MAX_CAPACITY)
    except (TrdCapacityError, ValueError) as exc:
        raise Refusal(f"trd: {exc}") from exc
    rep = sol.leader
    claims = spec.claims
    doc: Dict[str, Any] = {"command": "trd", "max": spec.max_claim, "leader": rep.leader.value}
    _num(doc, "alphaL", rep.alphaL)
    _num(doc, "alphaH", rep.alphaH)
    _num(doc, "v", rep.v_leader)
    w = rep.witnessesL[0]
    support = [claims[i] for i in w.x.support]
    doc["support"] = support
    _vec(doc, "weights", [w.x.weights[i] for i in w.x.support])
    doc["jF"] = claims[w.follower_reply]
    _num(doc, "beta_F", w.follower_payoff)
    doc["tie"] = w.tie
    ne = sol.nash.equilibria[0]
    doc["nash"] = [claims[ne.x.support[0]], claims[ne.y.support[0]]]
    doc["elimination_rounds"] = len(sol.elimination.rounds)
    doc["saddle_points"] = [[claims[e.x.support[0]], claims[e.y.support[0]]] for e in sol.saddle]
    doc["asc"] = sol.asc
    doc["chain"] = rep.chain
    cce = []
    for label, chk in sol.cce:
        d: Dict[str, Any] = {"distribution": label, "passed": chk.passed}
        _num(d, "value", chk.expected[0])
        idx, gain = chk.worst[Player.I]
        d["best_deviation"] = claims[idx]
        _num(d, "gain", gain)
        cce.append(d)
    doc["cce"] = cce
    lines = [
        f"TrD({spec.max_claim}), leader {rep.leader.value}",
        rep.chain,
        f"  commitment on claims {support} (weights {_fmt_vec([w.x.weights[i] for i in w.x.support])})"
        f" -> follower claims {claims[w.follower_reply]}: payoffs ({render(w.leader_payoff)}, {render(w.follower_payoff)})",
        f"  Nash equilibrium ({doc['nash'][0]},{doc['nash'][1]}) by iterated dominance in {len(sol.elimination.rounds)} rounds",
        f"  saddle points: {doc['saddle_points']}; asc={sol.asc}",
    ]
    for d in cce:
        lines.append(f"  CCE {d['distribution']}: {'pass' if d['passed'] else 'fail'} (value {d['value']}, "
                     f"best deviation {d['best_deviation']} gains {d['gain']})")
    _emit(args, doc, lines)


def cmd_verify_cce(args) -> None:
    doc_in = _read_doc(args.game)
    try:
        game = game_from_dict(doc_in)
    except GameFormatError as exc:
        raise InputError(f"game_core: {args.game}: {exc}") from exc
    src = _read_doc(args.distribution) if args.distribution else doc_in
    where = args.distribution or args.game
    raw = src.get("z")
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise InputError(f"equilibria: {where}: field 'z' must be an array of arrays")
    try:
        z = CorrelatedDistribution(tuple(tuple(to_rational(v) for v in row) for row in raw))
        chk = verify_cce(game, z)
    except (RationalParseError, ValueError, TypeError) as exc:
        raise InputError(f"equilibria: {where}: field 'z': {exc}") from exc
    doc: Dict[str, Any] = {"command": "verify-cce", "game": game.name, "passed": chk.passed}
    _vec(doc, "expected", chk.expected)
    worst = {}
    lines = [f"{game.name or args.game}: {'coarse correlated equilibrium' if chk.passed else 'not a CCE'}",
             f"  expected payoffs {_fmt_vec(chk.expected)}"]
    for p, (idx, gain) in chk.worst.items():
        d: Dict[str, Any] = {"strategy": idx, "label": game.labels_of(p)[idx]}
        _num(d, "gain", gain)
        worst[p.value] = d
        lines.append(f"  player {p.value}: best fixed deviation {game.labels_of(p)[idx]} gains {render(gain)}")
    doc["worst"] = worst
    _emit(args, doc, lines)


# ---------------------------------------------------------------------------
# parser


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leadsolve", description="Exact analysis of bimatrix leadership games.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def common(p, game=True, leader=False, bound=False):
        if game:
            p.add_argument("game", help="game document (JSON)")
        if leader:
            p.add_argument("--leader", choices=["I", "II"], default="I")
        if bound:
            p.add_argument("--enum-bound", type=int, default=DEFAULT_ENUM_BOUND, metavar="N",
                           help="largest m+n for enumeration (default %(default)s)")
            p.add_argument("--skip-degeneracy", action="store_true",
                           help="skip the degeneracy scan and run past the enumeration bound")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("analyze", help="commitment values and the bound chain")
    common(p, leader=True, bound=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("nash", help="Nash equilibria")
    common(p, bound=True)
    p.set_defaults(func=cmd_nash)

    p = sub.add_parser("classify", help="sufficient conditions and game classes")
    common(p, bound=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("two-by-two", help="closed-form analysis of a 2x2 game")
    common(p)
    p.set_defaults(func=cmd_two_by_two)

    p = sub.add_parser("trd", help="Traveler's Dilemma")
    common(p, game=False, leader=True)
    p.add_argument("--max", type=int, default=100, help="largest claim (default %(default)s)")
    p.set_defaults(func=cmd_trd)

    p = sub.add_parser("verify-cce", help="check a coarse correlated equilibrium")
    common(p)
    p.add_argument("distribution", nargs="?", help="document with field 'z' (default: the game file)")
    p.set_defaults(func=cmd_verify_cce)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except InputError as exc:
        print(f"leadsolve: error: {exc}", file=sys.stderr)
        return 2
    except Refusal as exc:
        print(f"leadsolve: refused: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
