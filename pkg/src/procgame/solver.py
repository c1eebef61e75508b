"""Equilibrium-path search over the lazily built game tree.

:func:`solve_dfs` walks the tree depth first and keeps, for every finished
node, only its best continuation (a :class:`RatEntry`). When a node is
finished the entries of its children are dropped, so at any moment the
retained entries sit on the current spine and its finished siblings.

:func:`oracle_backward_induction` is an independent eager check: it builds
the whole tree and computes the set of all subgame-perfect outcomes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .algebra import BudgetExceeded, materialize
from .core import Joint, ProcessGameError, members, owners, sort_key
from .game import (DEFAULT_BUDGET, ProcessGame, TurnAmbiguityError,
                   payoff_vector, split_joint_node)

LEXICOGRAPHIC = "lexicographic"
ERROR = "error"


class Verdict(str, Enum):
    PATH = "path"
    NO_PURE_EQUILIBRIUM = "no_pure_equilibrium"
    AMBIGUOUS = "ambiguous"


class NoPureEquilibrium(ProcessGameError):
    def __init__(self, history):
        super().__init__("no pure equilibrium path")
        self.history = tuple(history)


class AmbiguousEquilibrium(ProcessGameError):
    def __init__(self, history, labels):
        where = " ".join(map(str, history)) or "the root"
        shown = ", ".join(map(str, labels))
        super().__init__(f"several equilibrium moves after {where}: {shown}")
        self.history = tuple(history)
        self.labels = tuple(labels)


@dataclass(frozen=True)
class RatEntry:
    state: object
    suffix: tuple
    values: tuple


@dataclass(frozen=True)
class SolveStats:
    nodes_expanded: int
    peak_entries: int


@dataclass(frozen=True)
class EquilibriumResult:
    verdict: Verdict
    path: tuple | None
    payoffs: tuple | None
    stats: SolveStats
    diagnostics: tuple = ()
    message: str = ""


def pure_equilibria(labels: Sequence, values: Sequence[Sequence[float]]) -> list[int]:
    """Indices of the joint moves that are pure Nash equilibria.

    ``values[k]`` is the payoff vector (indexed by player) reached through
    ``labels[k]``. A profile is stable when no participant gains by swapping
    only its own component.
    """
    _, offered = split_joint_node(labels)
    index = {members(lab): k for k, lab in enumerate(labels)}
    stable = []
    for k, lab in enumerate(labels):
        profile = members(lab)
        if all(values[index[(profile - {a}) | {alt}]][a.owner] <= values[k][a.owner]
               for a in profile for alt in offered[a.owner] if alt != a):
            stable.append(k)
    return stable


def handle_simultaneous(labels: Sequence, values: Sequence, tie_break: str = LEXICOGRAPHIC,
                        history: tuple = ()) -> int:
    """Pick the equilibrium joint move at a simultaneous node."""
    stable = pure_equilibria(labels, values)
    if not stable:
        raise NoPureEquilibrium(history)
    return _break_tie(stable, labels, tie_break, history)


def _break_tie(candidates: list[int], labels, tie_break: str, history) -> int:
    if len(candidates) == 1:
        return candidates[0]
    if tie_break == ERROR:
        raise AmbiguousEquilibrium(history, [labels[k] for k in candidates])
    return min(candidates, key=lambda k: sort_key(labels[k]))


def solve_dfs(pg: ProcessGame, tie_break: str = LEXICOGRAPHIC) -> EquilibriumResult:
    """Find the equilibrium path by depth-first expansion of the game tree.

    Payoffs are always evaluated on the full root-to-leaf trace. With
    ``tie_break="error"`` any tie between best moves yields an AMBIGUOUS
    verdict; with ``"lexicographic"`` the move with the smallest name wins
    and a diagnostic is recorded.
    """
    if tie_break not in (LEXICOGRAPHIC, ERROR):
        raise ValueError(f"unknown tie-break policy {tie_break!r}")
    tree = pg.tree()
    live = peak = expanded = 0
    notes: list[str] = []

    def retain(k: int):
        nonlocal live, peak
        live += k
        peak = max(peak, live)

    def visit(node) -> RatEntry:
        nonlocal expanded
        expanded += 1
        moves = tree.successors(node)
        history = tree.history(node)
        if not moves:
            retain(1)
            return RatEntry(node, (), payoff_vector(pg, history))
        children = [visit(child) for _, child in moves]
        labels = [lab for lab, _ in moves]
        values = [c.values for c in children]
        if any(isinstance(lab, Joint) for lab in labels):
            ties = pure_equilibria(labels, values)
            if not ties:
                raise NoPureEquilibrium(history)
        else:
            movers = set().union(*(owners(lab) for lab in labels))
            if len(movers) != 1:
                who = ", ".join(pg.players[p] for p in sorted(movers))
                raise TurnAmbiguityError(
                    f"players {who} can all move after "
                    f"{' '.join(map(str, history)) or 'the root'}")
            (owner,) = movers
            best = max(v[owner] for v in values)
            ties = [j for j, v in enumerate(values) if v[owner] == best]
        k = _break_tie(ties, labels, tie_break, history)
        if len(ties) > 1:
            where = " ".join(map(str, history)) or "the root"
            notes.append(f"tie after {where} between "
                         f"{', '.join(str(labels[j]) for j in ties)}; chose {labels[k]}")
        chosen = children[k]
        entry = RatEntry(node, (labels[k],) + chosen.suffix, chosen.values)
        retain(1)
        retain(-len(children))  # children's entries are no longer needed
        return entry

    try:
        root = visit(tree.initial)
    except NoPureEquilibrium:
        return EquilibriumResult(Verdict.NO_PURE_EQUILIBRIUM, None, None,
                                 SolveStats(expanded, peak), tuple(notes),
                                 "no pure equilibrium path")
    except AmbiguousEquilibrium as exc:
        return EquilibriumResult(Verdict.AMBIGUOUS, None, None,
                                 SolveStats(expanded, peak), tuple(notes), str(exc))
    return EquilibriumResult(Verdict.PATH, root.suffix, root.values,
                             SolveStats(expanded, peak), tuple(notes))


@dataclass(frozen=True)
class OracleResult:
    paths: frozenset
    outcomes: frozenset
    profile: dict = field(compare=False)
    optimal_actions: dict = field(compare=False)


def oracle_backward_induction(pg: ProcessGame, budget: int = DEFAULT_BUDGET,
                              max_selections: int = 100_000) -> OracleResult:
    """All subgame-perfect outcomes, by exhaustive bottom-up evaluation.

    ``outcomes`` holds every (path, payoff vector) reachable under some
    subgame-perfect profile; ``profile`` is one such profile (ties broken by
    name) and ``optimal_actions`` lists, for every decision node, the moves
    that are best against that profile's continuation values.
    """
    tree = pg.tree()
    ts = materialize(tree, budget)
    children: dict[int, list] = {s: [] for s in ts.states}
    for src, lab, dst in ts.transitions:
        children[src].append((lab, dst))
    hist = {s: tree.history(node) for s, node in ts.notes.items()}

    outcomes: dict[int, set] = {}
    value: dict[int, tuple | None] = {}
    suffix: dict[int, tuple | None] = {}
    profile: dict = {}
    optimal: dict = {}

    for s in sorted(ts.states, reverse=True):
        kids = children[s]
        if not kids:
            v = payoff_vector(pg, hist[s])
            outcomes[s] = {((), v)}
            value[s], suffix[s] = v, ()
            continue
        labels = [lab for lab, _ in kids]
        if any(isinstance(lab, Joint) for lab in labels):
            outcomes[s] = _joint_outcomes(kids, outcomes, max_selections)
            stable = _brute_force_ne(labels, [value[t] for _, t in kids])
        else:
            (owner,) = set().union(*(owners(lab) for lab in labels))
            outcomes[s] = _decision_outcomes(owner, kids, outcomes)
            live = [j for j, (_, t) in enumerate(kids) if value[t] is not None]
            best = max((value[kids[j][1]][owner] for j in live), default=None)
            stable = [j for j in live if value[kids[j][1]][owner] == best]
        if not stable:
            value[s] = suffix[s] = None
            continue
        optimal[hist[s]] = tuple(labels[j] for j in stable)
        j = min(stable, key=lambda j: sort_key(labels[j]))
        profile[hist[s]] = labels[j]
        t = kids[j][1]
        value[s], suffix[s] = value[t], (labels[j],) + suffix[t]

    root = frozenset(outcomes[ts.initial])
    return OracleResult(frozenset(p for p, _ in root), root, profile, optimal)


def _decision_outcomes(owner: int, kids, outcomes) -> set:
    # An outcome of child c survives iff some choice of outcomes at the other
    # children leaves c optimal, i.e. it beats each sibling's worst outcome.
    worst = [min((v[owner] for _, v in outcomes[t]), default=None) for _, t in kids]
    out = set()
    for j, (lab, t) in enumerate(kids):
        others = [w for i, w in enumerate(worst) if i != j]
        if any(w is None for w in others):
            continue
        floor = max(others, default=float("-inf"))
        out.update(((lab,) + p, v) for p, v in outcomes[t] if v[owner] >= floor)
    return out


def _brute_force_ne(labels, vals) -> list[int]:
    if any(v is None for v in vals):
        return []
    profiles = [members(lab) for lab in labels]
    by_profile = dict(zip(profiles, range(len(labels))))
    stable = []
    for k, prof in enumerate(profiles):
        ok = True
        for a in prof:
            for other in profiles:
                rest = prof - {a}
                if other - rest and len(other - rest) == 1 and rest <= other:
                    (alt,) = other - rest
                    if alt.owner == a.owner and vals[by_profile[other]][a.owner] > vals[k][a.owner]:
                        ok = False
        if ok:
            stable.append(k)
    return stable


def _joint_outcomes(kids, outcomes, max_selections: int) -> set:
    labels = [lab for lab, _ in kids]
    pools = [sorted(outcomes[t], key=repr) for _, t in kids]
    count = 1
    for pool in pools:
        count *= len(pool)
    if count > max_selections:
        raise BudgetExceeded(f"{count} outcome selections at a simultaneous node")
    out = set()
    for pick in itertools.product(*pools):
        for k in _brute_force_ne(labels, [v for _, v in pick]):
            p, v = pick[k]
            out.add(((labels[k],) + p, v))
    return out
