"""History conditions and their satisfaction over traces.

A trace is any tuple of hashable symbols. Inside a game the symbols are
action labels (see :mod:`procgame.core`), but nothing here depends on that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence, Union

Trace = tuple


@dataclass(frozen=True)
class Exact:
    """The whole history equals ``pattern``."""

    pattern: Trace


@dataclass(frozen=True)
class Pre:
    pattern: Trace


@dataclass(frozen=True)
class Mid:
    """``pattern`` occurs contiguously somewhere in the history."""

    pattern: Trace


@dataclass(frozen=True)
class Pos:
    pattern: Trace


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class TrueF:
    def __repr__(self) -> str:
        return "TRUE"


TRUE = TrueF()

Formula = Union[Exact, Pre, Mid, Pos, Not, Or, And, TrueF]

_PATTERNS = (Exact, Pre, Mid, Pos)


def _occurs(h: Sequence[Hashable], pattern: Sequence[Hashable]) -> bool:
    k = len(pattern)
    if k == 0:
        return True
    first = pattern[0]
    for i in range(len(h) - k + 1):
        if h[i] == first and tuple(h[i:i + k]) == pattern:
            return True
    return False


def satisfies(h: Sequence[Hashable], f: Formula) -> bool:
    """Decide whether history ``h`` satisfies ``f``."""
    h = tuple(h)
    if isinstance(f, TrueF):
        return True
    if isinstance(f, Exact):
        return h == f.pattern
    if isinstance(f, Pre):
        return h[:len(f.pattern)] == f.pattern
    if isinstance(f, Pos):
        k = len(f.pattern)
        return k <= len(h) and h[len(h) - k:] == f.pattern
    if isinstance(f, Mid):
        return _occurs(h, f.pattern)
    if isinstance(f, Not):
        return not satisfies(h, f.operand)
    if isinstance(f, Or):
        return satisfies(h, f.left) or satisfies(h, f.right)
    if isinstance(f, And):
        return satisfies(h, f.left) and satisfies(h, f.right)
    raise TypeError(f"not a formula: {f!r}")


def conjoin(left: Formula, right: Formula) -> Formula:
    """``left & right`` with ``true`` folded away."""
    if isinstance(left, TrueF):
        return right
    if isinstance(right, TrueF):
        return left
    return And(left, right)


def formula_size(f: Formula) -> int:
    """Number of connectives plus pattern symbols (``true`` counts 1)."""
    if isinstance(f, _PATTERNS):
        return max(1, len(f.pattern))
    if isinstance(f, TrueF):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.operand)
    return 1 + formula_size(f.left) + formula_size(f.right)


def symbols_of(f: Formula) -> set:
    """All symbols mentioned in trace patterns of ``f``."""
    if isinstance(f, _PATTERNS):
        return set(f.pattern)
    if isinstance(f, TrueF):
        return set()
    if isinstance(f, Not):
        return symbols_of(f.operand)
    return symbols_of(f.left) | symbols_of(f.right)


def map_symbols(f: Formula, fn) -> Formula:
    if isinstance(f, _PATTERNS):
        return type(f)(tuple(fn(x) for x in f.pattern))
    if isinstance(f, TrueF):
        return f
    if isinstance(f, Not):
        return Not(map_symbols(f.operand, fn))
    return type(f)(map_symbols(f.left, fn), map_symbols(f.right, fn))


# Printing. Precedence: ! > & > |
_PREC = {Or: 1, And: 2}


def format_formula(f: Formula, fmt=str) -> str:
    """Render ``f`` in the game-file syntax; ``fmt`` renders one symbol."""
    return _fmt(f, fmt, 0)


def _seq(pattern: Trace, fmt) -> str:
    if not pattern:
        raise ValueError("empty trace patterns have no textual form")
    return ".".join(fmt(x) for x in pattern)


def _fmt(f: Formula, fmt, ctx: int) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Exact):
        return _seq(f.pattern, fmt)
    if isinstance(f, Pre):
        return f"pre({_seq(f.pattern, fmt)})"
    if isinstance(f, Mid):
        return f"mid({_seq(f.pattern, fmt)})"
    if isinstance(f, Pos):
        return f"pos({_seq(f.pattern, fmt)})"
    if isinstance(f, Not):
        return "!" + _fmt(f.operand, fmt, 3)
    prec = _PREC[type(f)]
    op = " | " if isinstance(f, Or) else " & "
    # left-associative: a right operand of equal precedence needs parens
    text = _fmt(f.left, fmt, prec) + op + _fmt(f.right, fmt, prec + 1)
    return f"({text})" if prec < ctx else text
