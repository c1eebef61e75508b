"""Process-games: per-player systems plus payoff rules, and checks over them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (JOIN, BudgetExceeded, CommunicationFunction,
                      build_game_tree, count_edges)
from .core import (AlphabetOverlapError, Joint, ProcessGameError,
                   TransitionSystem, members, owners, strip)
from .formula import formula_size, satisfies

DEFAULT_BUDGET = 10**6


class NoMatchingRuleError(ProcessGameError):
    pass


class MalformedJointNode(ProcessGameError):
    pass


class TurnAmbiguityError(ProcessGameError):
    pass


@dataclass(frozen=True)
class PayoffRuleSet:
    """Ordered ``formula -> value`` rules; the first rule satisfied by a trace wins."""

    player: int
    rules: tuple

    def evaluate(self, trace: Sequence) -> float | None:
        for cond, value in self.rules:
            if satisfies(trace, cond):
                return value
        return None

    @property
    def size(self) -> int:
        return len(self.rules) + sum(formula_size(f) for f, _ in self.rules)


@dataclass(frozen=True)
class ProcessGame:
    players: tuple
    systems: tuple
    payoffs: tuple
    gamma: CommunicationFunction = field(default_factory=CommunicationFunction)
    exprs: tuple = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def mode(self) -> str:
        return "imperfect" if self.gamma.mode == JOIN else "perfect"

    def alphabet(self, i: int) -> frozenset:
        """Distinct action names player ``i`` can perform."""
        ts: TransitionSystem = self.systems[i]
        return frozenset(a.name for _, lab, _ in ts.transitions
                         for a in members(strip(lab)))

    def tree(self):
        return build_game_tree(self)


def payoff_of(pg: ProcessGame, i: int, trace: Sequence) -> float:
    value = pg.payoffs[i].evaluate(tuple(trace))
    if value is None:
        path = " ".join(map(str, trace)) or "(empty)"
        raise NoMatchingRuleError(
            f"no payoff rule of player {pg.players[i]} matches trace {path}")
    return value


def payoff_vector(pg: ProcessGame, trace: Sequence) -> tuple:
    trace = tuple(trace)
    return tuple(payoff_of(pg, i, trace) for i in range(pg.n))


def split_joint_node(labels: Sequence) -> tuple[tuple, dict]:
    """Read a simultaneous node as a one-shot game.

    Returns the participating players and, per player, the actions offered.
    Raises MalformedJointNode unless the labels form exactly the full product
    of the per-player action sets.
    """
    sets = [members(lab) for lab in labels]
    per_player: dict = {}
    for m in sets:
        for a in m:
            per_player.setdefault(a.owner, set()).add(a)
    players = tuple(sorted(per_player, key=lambda p: (p is None, p)))
    expected = math.prod(len(v) for v in per_player.values())
    if any(len(m) != len(players) for m in sets) or len(set(sets)) != len(sets) \
            or len(sets) != expected:
        shown = ", ".join(map(str, labels))
        raise MalformedJointNode(f"joint moves {shown} do not form a full product")
    return players, {p: sorted(v) for p, v in per_player.items()}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def _fmt_trace(trace) -> str:
    return " ".join(map(str, trace)) or "(root)"


def validate(pg: ProcessGame, budget: int = DEFAULT_BUDGET) -> list[Diagnostic]:
    """Check the side conditions of a process-game over its whole tree.

    The result is empty iff the game is well formed.
    """
    diags: list[Diagnostic] = []
    seen: set = set()

    def once(code, key, message):
        if (code, key) not in seen:
            seen.add((code, key))
            diags.append(Diagnostic(code, message))

    if not (len(pg.players) == len(pg.systems) == len(pg.payoffs)):
        return [Diagnostic("structure", "players, processes and payoffs differ in number")]

    tree = pg.tree()
    stack = [tree.initial]
    visited = 0
    try:
        while stack:
            node = stack.pop()
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"game tree has more than {budget} nodes")
            moves = tree.successors(node)
            h = tree.history(node)
            if not moves:
                for i, rules in enumerate(pg.payoffs):
                    if rules.evaluate(h) is None:
                        once("partial-payoff", i,
                             f"no payoff rule of player {pg.players[i]} matches "
                             f"terminal trace {_fmt_trace(h)}")
                continue
            _check_node(pg, h, [lab for lab, _ in moves], once)
            stack.extend(t for _, t in moves)
    except AlphabetOverlapError as exc:
        once("alphabet-overlap", "compose", str(exc))
    except BudgetExceeded as exc:
        diags.append(Diagnostic("budget-exceeded", str(exc)))
    return diags


def _check_node(pg: ProcessGame, h, labels, once) -> None:
    where = _fmt_trace(h)
    by_name: dict = {}
    for lab in labels:
        for a in members(lab):
            by_name.setdefault(a.name, set()).add(a.owner)
    for name, who in by_name.items():
        if len(who) > 1:
            names = ", ".join(pg.players[p] for p in sorted(who))
            once("alphabet-overlap", name,
                 f"action {name} is enabled for several players ({names}) "
                 f"after {where}; player alphabets must be disjoint")
    if len(set(labels)) != len(labels):
        once("nondeterministic", h,
             f"two moves with the same label are enabled after {where}")
    if any(isinstance(lab, Joint) for lab in labels):
        try:
            split_joint_node(labels)
        except MalformedJointNode as exc:
            once("malformed-joint", h, f"after {where}: {exc}")
        return
    movers = set().union(*(owners(lab) for lab in labels))
    if len(movers) > 1:
        names = ", ".join(pg.players[p] for p in sorted(movers))
        once("turn-ambiguity", h,
             f"players {names} can all move after {where}; "
             "exactly one player may move at a node")


@dataclass(frozen=True)
class SizeReport:
    n: int
    d: int
    b_size: int
    alphabet_sizes: tuple
    t_sizes: tuple
    pi_sizes: tuple
    bound_pg: int
    bound_ert: int
    exact_tree_size: int | None = None
    delta: int | None = None
    delta_bound: int | None = None

    def as_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "b_size": self.b_size,
            "alphabet_sizes": list(self.alphabet_sizes),
            "t_sizes": list(self.t_sizes), "pi_sizes": list(self.pi_sizes),
            "bound_pg": self.bound_pg, "bound_ert": self.bound_ert,
            "exact_tree_size": self.exact_tree_size,
            "delta": self.delta, "delta_bound": self.delta_bound,
        }


def size_report(pg: ProcessGame, delta: int | None = None,
                budget: int = DEFAULT_BUDGET) -> SizeReport:
    """Measured sizes and the analytic size bounds for a process-game.

    ``exact_tree_size`` counts the non-root nodes (equivalently the edges) of
    the game tree, and is None when the tree exceeds ``budget``.
    """
    alphabets = [pg.alphabet(i) for i in range(pg.n)]
    sizes = tuple(len(a) for a in alphabets)
    d = max(sizes, default=0)
    b_size = len(frozenset().union(*alphabets))
    if pg.mode == "imperfect":
        b_size += math.prod(sizes)
    t_sizes = tuple(len(ts.transitions) for ts in pg.systems)
    pi_sizes = tuple(p.size for p in pg.payoffs)
    try:
        exact = count_edges(pg.tree(), budget)
    except BudgetExceeded:
        exact = None
    return SizeReport(
        n=pg.n, d=d, b_size=b_size, alphabet_sizes=sizes, t_sizes=t_sizes,
        pi_sizes=pi_sizes,
        bound_pg=pg.n * d * b_size + sum(pi_sizes),
        bound_ert=sum(d**k for k in range(1, pg.n + 1)),
        exact_tree_size=exact,
        delta=delta,
        delta_bound=None if delta is None else pg.n * d**(delta + 1) + sum(pi_sizes),
    )
