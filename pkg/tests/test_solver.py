import itertools
import random

import pytest

from procgame.core import Action, Joint, members
from procgame.dsl import parse_game
from procgame.game import payoff_vector, validate
from procgame.generate import random_perfect_game
from procgame.solver import (ERROR, AmbiguousEquilibrium, NoPureEquilibrium,
                             Verdict, handle_simultaneous,
                             oracle_backward_induction, pure_equilibria,
                             solve_dfs)

from helpers import random_process_game


def path(result):
    return [str(x) for x in result.path]


def single(processes, payoffs):
    players = ", ".join(p for p, _ in processes)
    text = ["mode perfect", f"players: {players}"]
    text += [f"process {p} := {e}" for p, e in processes]
    text += [f"payoff {p}: {payoffs[p]}" for p, _ in processes]
    return parse_game("\n".join(text))


def test_veto(veto):
    r = solve_dfs(veto)
    assert r.verdict is Verdict.PATH
    assert path(r) == ["Z", "X"] and r.payoffs == (1, 1)
    assert r.diagnostics == ()


def test_battle_of_the_sexes(bos):
    r = solve_dfs(bos)
    assert path(r) == ["M", "R"] and r.payoffs == (2, 1)


def test_single_player_takes_the_best_action():
    pg = single([("p", "a + b")], {"p": "mid(a) -> 1 mid(b) -> 3"})
    assert path(solve_dfs(pg)) == ["b"]


def test_prisoners_dilemma(dilemma):
    r = solve_dfs(dilemma)
    assert [str(x) for x in r.path] == ["{BA,BB}"]
    assert r.payoffs == (-2, -2)


def test_matching_pennies(pennies):
    r = solve_dfs(pennies)
    assert r.verdict is Verdict.NO_PURE_EQUILIBRIUM
    assert r.path is None and r.message == "no pure equilibrium path"


def test_extended_bos_has_two_equilibria(extended_bos):
    tree = extended_bos.tree()
    (h_node,) = [t for lab, t in tree.successors(tree.initial) if str(lab) == "H"]
    moves = tree.successors(h_node)
    labels = [lab for lab, _ in moves]
    values = [payoff_vector(extended_bos, tree.history(t)) for _, t in moves]
    stable = {str(labels[k]) for k in pure_equilibria(labels, values)}
    assert stable == {"{M,R}", "{F,W}"}
    strict = solve_dfs(extended_bos, ERROR)
    assert strict.verdict is Verdict.AMBIGUOUS
    assert "{F,W}" in strict.message and "{M,R}" in strict.message


def test_lexicographic_tie_is_reported(extended_bos):
    r = solve_dfs(extended_bos)
    assert path(r) == ["H", "{F,W}"]
    assert r.payoffs == (2, 1)
    assert any("tie after H" in note for note in r.diagnostics)


def test_equal_branches_are_a_tie():
    pg = single([("p", "a + b")], {"p": "true -> 1"})
    assert path(solve_dfs(pg)) == ["a"]
    assert solve_dfs(pg, ERROR).verdict is Verdict.AMBIGUOUS
    oracle = oracle_backward_induction(pg)
    assert {tuple(map(str, p)) for p in oracle.paths} == {("a",), ("b",)}
    assert {str(x) for x in oracle.optimal_actions[()]} == {"a", "b"}


def test_handle_simultaneous():
    M, F, R, W = Action("M", 0), Action("F", 0), Action("R", 1), Action("W", 1)
    labels = [Joint(frozenset(p)) for p in ((M, R), (M, W), (F, R), (F, W))]
    # pennies-like payoffs: no stable profile
    cycle = [(1, -1), (-1, 1), (-1, 1), (1, -1)]
    with pytest.raises(NoPureEquilibrium):
        handle_simultaneous(labels, cycle)
    coord = [(2, 1), (0, 0), (0, 0), (1, 2)]
    assert handle_simultaneous(labels, coord) == 3  # {F,W} sorts first
    with pytest.raises(AmbiguousEquilibrium):
        handle_simultaneous(labels, coord, ERROR)


def test_oracle_on_fixtures(veto, bos, dilemma, pennies):
    assert {tuple(map(str, p)) for p in oracle_backward_induction(veto).paths} == {("Z", "X")}
    assert {tuple(map(str, p)) for p in oracle_backward_induction(bos).paths} == {("M", "R")}
    assert oracle_backward_induction(pennies).paths == frozenset()
    (only,) = oracle_backward_induction(dilemma).paths
    assert [str(x) for x in only] == ["{BA,BB}"]


def random_games(seed, count, n_max=4, d_max=3, mode=None):
    rng = random.Random(seed)
    made = 0
    while made < count:
        pg = random_process_game(rng, rng.randint(1, n_max), d_max, mode,
                                 payoffs=True)
        if validate(pg, budget=5000):
            continue
        made += 1
        yield pg


def test_solver_agrees_with_oracle_on_random_games():
    for pg in random_games(11, 150):
        r = solve_dfs(pg)
        oracle = oracle_backward_induction(pg)
        if r.verdict is Verdict.PATH:
            assert (r.path, r.payoffs) in oracle.outcomes
            if len(oracle.outcomes) == 1:
                assert oracle.outcomes == {(r.path, r.payoffs)}
        else:
            assert r.verdict is Verdict.NO_PURE_EQUILIBRIUM


def test_solver_agrees_with_oracle_on_generated_games():
    rng = random.Random(12)
    for _ in range(100):
        pg = parse_game(random_perfect_game(rng, rng.randint(1, 5), 3))
        r = solve_dfs(pg)
        assert (r.path, r.payoffs) in oracle_backward_induction(pg).outcomes


def test_no_pure_verdict_is_sound():
    # with one simultaneous stage the verdict is checked over all profiles directly
    rng = random.Random(13)
    seen = 0
    for _ in range(300):
        vals = {}
        players = ["p", "q"]
        acts = [["a", "b", "c"][:rng.randint(1, 3)], ["x", "y", "z"][:rng.randint(1, 3)]]
        rules = {p: [] for p in players}
        for prof in itertools.product(*acts):
            vals[prof] = (rng.randint(0, 2), rng.randint(0, 2))
            for i, p in enumerate(players):
                rules[p].append(f"{{{prof[0]},{prof[1]}}} -> {vals[prof][i]}")
        text = ["mode imperfect", "players: p, q",
                "process p := " + " + ".join(acts[0]),
                "process q := " + " + ".join(acts[1])]
        text += [f"payoff {p}: " + " ".join(rules[p]) + " true -> 0" for p in players]
        pg = parse_game("\n".join(text))
        if len(acts[0]) == 1 or len(acts[1]) == 1:
            continue
        def stable(prof):
            a, x = prof
            return (all(vals[(b, x)][0] <= vals[prof][0] for b in acts[0])
                    and all(vals[(a, y)][1] <= vals[prof][1] for y in acts[1]))
        exists = any(stable(p) for p in vals)
        r = solve_dfs(pg)
        assert (r.verdict is Verdict.NO_PURE_EQUILIBRIUM) == (not exists)
        if exists:
            names = tuple(sorted(a.name for a in members(r.path[0])))
            prof = next(p for p in vals if tuple(sorted(p)) == names)
            assert stable(prof)
        seen += 1
    assert seen > 50


def shift_first_player(text, k):
    out, block = [], None
    for line in text.splitlines():
        if line.startswith("payoff "):
            block = line.split()[1].rstrip(":")
        elif block == "p01" and "->" in line:
            body, value = line.rsplit("->", 1)
            line = f"{body}-> {int(value) + k}"
        out.append(line)
    return "\n".join(out)


def test_adding_constant_to_one_player_keeps_the_path():
    rng = random.Random(14)
    for _ in range(100):
        text = random_perfect_game(rng, rng.randint(1, 4), 3)
        a = solve_dfs(parse_game(text))
        b = solve_dfs(parse_game(shift_first_player(text, 7)))
        assert a.path == b.path
        assert b.payoffs[0] == a.payoffs[0] + 7 and a.payoffs[1:] == b.payoffs[1:]


def test_solver_is_deterministic(extended_bos, veto):
    for pg in (extended_bos, veto):
        assert solve_dfs(pg) == solve_dfs(pg)


def test_peak_entries_are_bounded(veto, bos, extended_bos, dilemma):
    for pg in (veto, bos, extended_bos, dilemma):
        d = max(len(pg.alphabet(i)) for i in range(pg.n))
        assert solve_dfs(pg).stats.peak_entries <= pg.n * d + 1
