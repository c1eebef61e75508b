"""Game-file generators: local-interaction chains and random perfect-information games."""

from __future__ import annotations

import itertools
import random


def _width(players: int) -> int:
    # zero-padded indices keep name order equal to numeric order
    return max(2, len(str(players)))


def _actions(i: int, count: int, width: int) -> list[str]:
    return [f"a{i:0{width}}_{k}" for k in range(1, count + 1)]


def _players(players: int, width: int) -> list[str]:
    return [f"p{i:0{width}}" for i in range(1, players + 1)]


def local_interaction_game(players: int, actions: int, degree: int = 1,
                           seed: int = 0) -> str:
    """A chain game where players move in turn, each seeing only its neighbours.

    Player i moves right after player i-1; its guards mention only the last
    ``degree`` moves, so it has at most ``actions ** degree`` distinct
    guards. Payoffs depend on the moves of players i-degree .. i+1 and end
    with a catch-all rule, so they are total on every terminal trace.
    """
    if players < 1 or actions < 1 or degree < 1:
        raise ValueError("players, actions and degree must be positive")
    rng = random.Random(seed)
    w = _width(players)
    acts = [_actions(i, actions, w) for i in range(1, players + 1)]
    names = _players(players, w)
    lines = [f"# local interaction: players={players} actions={actions} "
             f"degree={degree} seed={seed}",
             "mode perfect",
             "players: " + ", ".join(names)]
    for i in range(players):
        window = acts[max(0, i - degree):i]
        if not window:
            terms = acts[i]
        else:
            terms = [f"[pos({'.'.join(w)})]{a}"
                     for w in itertools.product(*window) for a in acts[i]]
        lines.append(f"process {names[i]} := " + " + ".join(terms))
    for i in range(players):
        lines.append(f"payoff {names[i]}:")
        window = acts[max(0, i - degree):min(players, i + 2)]
        for w in itertools.product(*window):
            lines.append(f"  mid({'.'.join(w)}) -> {rng.randint(0, 9)}")
        lines.append("  true -> 0")
    return "\n".join(lines) + "\n"


def _subset(rng: random.Random, items: list[str]) -> list[str]:
    picked = [x for x in items if rng.random() < 0.6]
    return picked or [rng.choice(items)]


def _random_formula(rng: random.Random, pool: list[str]) -> str:
    a, b = rng.choice(pool), rng.choice(pool)
    return rng.choice([
        f"mid({a})", f"!mid({a})", f"pos({a})", f"pre({a})",
        f"mid({a}) & mid({b})", f"mid({a}) | !mid({b})", f"mid({a}.{b})",
    ])


def random_perfect_game(rng: random.Random, players: int, actions: int) -> str:
    """A random perfect-information game in which every player moves at most once.

    Player i may only move right after player i-1 (its guards all contain
    ``pos`` of an i-1 move), sometimes refined by an earlier player's move
    or left empty so the branch ends early. Payoff rules are random formulas
    over all actions with small integer values, then a catch-all rule.
    """
    sizes = [rng.randint(1, actions) for _ in range(players)]
    w = _width(players)
    acts = [_actions(i + 1, sizes[i], w) for i in range(players)]
    names = _players(players, w)
    done = [acts[0]]  # actions each player can actually perform
    lines = ["mode perfect", "players: " + ", ".join(names),
             f"process {names[0]} := " + " + ".join(acts[0])]
    for i in range(1, players):
        terms, mine = [], set()
        for x in done[i - 1]:
            r = rng.random()
            if r < 0.15:
                continue
            picked = _subset(rng, acts[i])
            mine.update(picked)
            if i >= 2 and r < 0.45:
                j = rng.randrange(i - 1)
                for y in done[j]:
                    terms += [f"[pos({x}) & mid({y})]{a}" for a in picked]
            else:
                terms += [f"[pos({x})]{a}" for a in picked]
        if not terms:
            terms, mine = [f"[pos({done[i - 1][0]})]{acts[i][0]}"], {acts[i][0]}
        done.append([a for a in acts[i] if a in mine])
        lines.append(f"process {names[i]} := " + " + ".join(terms))
    pool = [a for group in done for a in group]
    for name in names:
        lines.append(f"payoff {name}:")
        for _ in range(rng.randint(0, 4)):
            lines.append(f"  {_random_formula(rng, pool)} -> {rng.randint(0, 3)}")
        lines.append(f"  true -> {rng.randint(0, 3)}")
    return "\n".join(lines) + "\n"
