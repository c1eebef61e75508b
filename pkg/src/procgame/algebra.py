"""Parallel composition and the encapsulation operators.

Composed systems are lazy: a node is a :class:`ProductState` carrying the
component states and the trace that led to it, so the product is unfolded
into a tree and children are re-derived on every call rather than cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .core import (ConditionalAction, ProcessGameError, TransitionSystem,
                   dot_union, members, strip)
from .formula import conjoin, satisfies

NONE = "none"
JOIN = "join"


@dataclass(frozen=True)
class CommunicationFunction:
    """``none``: no communication. ``join``: dot-union of the arguments."""

    mode: str = NONE

    def __post_init__(self):
        if self.mode not in (NONE, JOIN):
            raise ValueError(f"unknown communication mode {self.mode!r}")

    def defined(self) -> bool:
        return self.mode == JOIN

    def __call__(self, *labels):
        """Communicate labels; conditional arguments have their guards conjoined."""
        if self.mode == NONE:
            return None
        if any(isinstance(x, ConditionalAction) for x in labels):
            cond = None
            for x in labels:
                c = x.condition if isinstance(x, ConditionalAction) else None
                if c is not None:
                    cond = c if cond is None else conjoin(cond, c)
            return ConditionalAction(cond, dot_union(*map(strip, labels)))
        return dot_union(*labels)


@dataclass(frozen=True)
class ProductState:
    components: tuple
    history: tuple = ()


def _as_conditional(label) -> ConditionalAction:
    if isinstance(label, ConditionalAction):
        return label
    return ConditionalAction.plain(label)


class Composition:
    """Lazy parallel composition T1 || T2 || ... || Tn.

    The n-ary product is the left fold of the binary rule: at each state the
    moves of the first k components are combined with those of component k+1
    by keeping both sides' unilateral moves and, when gamma is defined,
    adding every communication of a left move with a right move.
    """

    def __init__(self, systems: Sequence, gamma: CommunicationFunction):
        if not systems:
            raise ValueError("nothing to compose")
        self.systems = tuple(systems)
        self.gamma = gamma
        self.initial = ProductState(tuple(t.initial for t in self.systems), ())

    def _moves(self, node: ProductState) -> list:
        acc: list = []
        for k, ts in enumerate(self.systems):
            right = [(label, {k: dst})
                     for label, dst in ts.successors(node.components[k])]
            joined = []
            if self.gamma.defined():
                for lab_l, upd_l in acc:
                    for lab_r, upd_r in right:
                        lab = self.gamma(_as_conditional(lab_l),
                                         _as_conditional(lab_r))
                        joined.append((lab, {**upd_l, **upd_r}))
            acc = acc + right + joined
        return acc

    def successors(self, node: ProductState) -> list:
        out = []
        for label, update in self._moves(node):
            comps = tuple(update.get(k, s) for k, s in enumerate(node.components))
            out.append((label, ProductState(comps, node.history + (strip(label),))))
        return out

    def is_terminating(self, node: ProductState) -> bool:
        return all(ts.is_terminating(s)
                   for ts, s in zip(self.systems, node.components))

    def history(self, node: ProductState) -> tuple:
        return node.history


def parallel_compose(systems: Sequence, gamma: CommunicationFunction | None = None
                     ) -> Composition:
    return Composition(systems, gamma or CommunicationFunction())


class _Filter:
    """A lazy view of ``inner`` that rewrites the outgoing moves of each state."""

    def __init__(self, inner):
        self.inner = inner
        self.initial = inner.initial

    def is_terminating(self, state) -> bool:
        return self.inner.is_terminating(state)

    def history(self, state) -> tuple:
        return self.inner.history(state)

    def successors(self, state) -> list:
        return self.rewrite(state, self.inner.successors(state))

    def rewrite(self, state, moves: list) -> list:
        raise NotImplementedError


class Encapsulated(_Filter):
    def __init__(self, inner, blocked: Iterable):
        super().__init__(inner)
        self.blocked = frozenset(blocked)

    def rewrite(self, state, moves):
        return [(lab, t) for lab, t in moves if strip(lab) not in self.blocked]


def encapsulate(ts, blocked: Iterable):
    """Remove every transition whose (unconditioned) label is in ``blocked``.

    Explicit systems stay explicit with the same states; lazy systems get a
    lazy view.
    """
    blocked = frozenset(blocked)
    if isinstance(ts, TransitionSystem):
        kept = tuple(tr for tr in ts.transitions if strip(tr[1]) not in blocked)
        return TransitionSystem(ts.states, kept, ts.terminating, ts.initial,
                                ts.notes)
    return Encapsulated(ts, blocked)


class ConditionResolved(_Filter):
    def rewrite(self, state, moves):
        out = []
        h = None
        for lab, t in moves:
            if isinstance(lab, ConditionalAction):
                if h is None:
                    h = self.inner.history(state)
                if not satisfies(h, lab.condition):
                    continue
                lab = lab.action
            out.append((lab, t))
        return out


def encapsulate_conditional(ts) -> ConditionResolved:
    """Keep a guarded move only where the history satisfies its guard."""
    return ConditionResolved(ts)


class SubsumptionCut(_Filter):
    def rewrite(self, state, moves):
        sets = [members(strip(lab)) for lab, _ in moves]
        return [(lab, t) for (lab, t), m in zip(moves, sets)
                if not any(m < other for other in sets)]


def cut_subsumed(ts) -> SubsumptionCut:
    """Drop moves whose label set is a proper subset of another move's at the same state."""
    return SubsumptionCut(ts)


def build_game_tree(pg):
    """The game tree: cut_subsumed(encapsulate_conditional(T1 || ... || Tn))."""
    return cut_subsumed(encapsulate_conditional(
        parallel_compose(pg.systems, pg.gamma)))


class BudgetExceeded(ProcessGameError):
    pass


def materialize(system, budget: int | None = None) -> TransitionSystem:
    """Force a (lazy) system into an explicit one, numbering states in BFS order.

    ``notes`` keeps the original state objects. Only reachable states appear.
    """
    index: dict[Hashable, int] = {system.initial: 0}
    order = [system.initial]
    transitions = []
    i = 0
    while i < len(order):
        s = order[i]
        for label, t in system.successors(s):
            if t not in index:
                index[t] = len(order)
                order.append(t)
                if budget is not None and len(order) > budget:
                    raise BudgetExceeded(f"more than {budget} states")
            transitions.append((index[s], label, index[t]))
        i += 1
    term = frozenset(index[s] for s in order if system.is_terminating(s))
    return TransitionSystem(frozenset(range(len(order))), tuple(transitions),
                            term, 0, dict(enumerate(order)))


def count_edges(system, budget: int | None = None) -> int:
    """Number of edges of a tree-shaped system, by depth-first traversal."""
    count = 0
    stack = [system.initial]
    while stack:
        s = stack.pop()
        succ = system.successors(s)
        count += len(succ)
        if budget is not None and count > budget:
            raise BudgetExceeded(f"more than {budget} nodes")
        stack.extend(t for _, t in succ)
    return count

