"""Actions, labels and transition systems shared by the rest of the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Protocol, Union

from .formula import TRUE, Formula


class ProcessGameError(Exception):
    """Base class for errors raised by this package."""


class AmbiguousHistoryError(ProcessGameError):
    pass


class AlphabetOverlapError(ProcessGameError):
    pass


@dataclass(frozen=True, order=True)
class Action:
    """An atomic action. Identity is the name; ``owner`` is bookkeeping."""

    name: str
    owner: int | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.name


TAU = Action("tau")


@dataclass(frozen=True)
class Joint:
    """A simultaneous move: the dot-union of atomic actions of distinct players."""

    members: frozenset

    def __post_init__(self):
        if len(self.members) < 2:
            raise ValueError("a joint label needs at least two actions")
        if TAU in self.members:
            raise ValueError("the silent action cannot take part in a joint label")
        owners = [a.owner for a in self.members if a.owner is not None]
        if len(owners) != len(set(owners)):
            raise AlphabetOverlapError(
                f"joint label {self} combines two actions of one player")

    def __str__(self) -> str:
        return "{" + ",".join(sorted(a.name for a in self.members)) + "}"


Label = Union[Action, Joint]


def members(label: Label) -> frozenset:
    """The label as a set of atomic actions (atomic labels are singletons)."""
    if isinstance(label, Joint):
        return label.members
    return frozenset((label,))


def owners(label: Label) -> frozenset:
    return frozenset(a.owner for a in members(label))


def sort_key(label: Label) -> tuple:
    """Lexicographic key by action name, used for tie-breaking and display."""
    return tuple(sorted(a.name for a in members(label)))


def dot_union(*labels: Label) -> Label:
    """Merge labels of distinct players into one joint label."""
    acc: set = set()
    for lab in labels:
        m = members(lab)
        if acc & m:
            raise AlphabetOverlapError(
                "cannot merge " + ", ".join(map(str, labels)) +
                ": shared action name")
        acc |= m
    if len(acc) == 1:
        return next(iter(acc))
    return Joint(frozenset(acc))


@dataclass(frozen=True)
class ConditionalAction:
    condition: Formula
    action: Label

    @classmethod
    def plain(cls, action: Label) -> "ConditionalAction":
        return cls(TRUE, action)

    def __str__(self) -> str:
        from .formula import TrueF, format_formula
        if isinstance(self.condition, TrueF):
            return str(self.action)
        return f"[{format_formula(self.condition)}]{self.action}"


def strip(label) -> Label:
    """Drop the condition of a conditional action; plain labels pass through."""
    return label.action if isinstance(label, ConditionalAction) else label


class System(Protocol):
    """What every (possibly lazy) transition system offers."""

    initial: Hashable

    def successors(self, state) -> list[tuple[object, Hashable]]: ...

    def is_terminating(self, state) -> bool: ...

    def history(self, state) -> tuple: ...


@dataclass(frozen=True)
class TransitionSystem:
    """An explicit quintuple (S, A, ->, terminating, initial).

    States are opaque integers. ``notes`` maps states to a debug annotation
    and takes no part in equality.
    """

    states: frozenset
    transitions: tuple
    terminating: frozenset
    initial: int
    notes: Mapping = field(default_factory=dict, compare=False, repr=False)

    @cached_property
    def _out(self) -> dict:
        out: dict = {s: [] for s in self.states}
        for src, label, dst in self.transitions:
            out.setdefault(src, []).append((label, dst))
        return out

    @property
    def actions(self) -> frozenset:
        return frozenset(label for _, label, _ in self.transitions)

    def successors(self, state) -> list:
        return list(self._out.get(state, ()))

    def is_terminating(self, state) -> bool:
        return state in self.terminating

    def history(self, state) -> tuple:
        return history_of(self, state)


def reachable_states(ts: System) -> set:
    """All states reachable from the initial state."""
    seen = {ts.initial}
    stack = [ts.initial]
    while stack:
        s = stack.pop()
        for _, t in ts.successors(s):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def history_of(ts: System, s) -> tuple:
    """The unique trace leading from the initial state to ``s``.

    Raises AmbiguousHistoryError when two distinct traces reach ``s`` or when
    a cycle makes the set of traces infinite.
    """
    found: set = set()
    on_path: set = set()

    def walk(state, trace):
        if state == s:
            found.add(trace)
            if len(found) > 1:
                raise AmbiguousHistoryError(f"state {s!r} has several histories")
        if state in on_path:
            raise AmbiguousHistoryError("cycle on a path from the initial state")
        on_path.add(state)
        for label, t in ts.successors(state):
            walk(t, trace + (strip(label),))
        on_path.discard(state)

    walk(ts.initial, ())
    if not found:
        raise ValueError(f"state {s!r} is not reachable")
    return next(iter(found))


def complete_traces(ts: System, limit: int | None = None) -> list[tuple]:
    """Traces of all maximal paths (ending in a state with no moves)."""
    out: list = []
    stack = [(ts.initial, ())]
    while stack:
        s, trace = stack.pop()
        succ = ts.successors(s)
        if not succ:
            out.append(trace)
            if limit is not None and len(out) > limit:
                raise ValueError("too many traces")
        for label, t in reversed(succ):
            stack.append((t, trace + (strip(label),)))
    return out


def build_system(transitions: Iterable[tuple], initial: int,
                 terminating: Iterable[int] = ()) -> TransitionSystem:
    """Convenience constructor; states are collected from the transitions."""
    transitions = tuple(transitions)
    states = {initial}
    for src, _, dst in transitions:
        states.update((src, dst))
    return TransitionSystem(frozenset(states), transitions,
                            frozenset(terminating), initial)
