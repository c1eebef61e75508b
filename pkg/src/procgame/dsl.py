"""The game-file language: process terms, formulas and payoff blocks.

Grammar (``#`` starts a comment, whitespace is insignificant)::

    game     := mode players stmt*
    mode     := "mode" ("perfect" | "imperfect")
    players  := "players" ":" ident ("," ident)*
    stmt     := "process" ident ":=" expr
              | "payoff" ident ":" (formula "->" number)+
    expr     := term ("+" term)*
    term     := factor ("." factor)*
    factor   := ident | "[" formula "]" factor | "(" expr ")"
    formula  := disj
    disj     := conj ("|" conj)*
    conj     := unary ("&" unary)*
    unary    := "!" unary | "true" | seqpat | "pre(" seqpat ")"
              | "mid(" seqpat ")" | "pos(" seqpat ")" | "(" formula ")"
    seqpat   := symbol ("." symbol)*
    symbol   := ident | "{" ident ("," ident)+ "}"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .algebra import JOIN, NONE, CommunicationFunction
from .core import (Action, ConditionalAction, Joint, ProcessGameError,
                   TransitionSystem)
from .formula import (TRUE, Exact, Formula, Mid, Not, Or, And, Pos, Pre,
                      conjoin, format_formula, symbols_of)
from .game import PayoffRuleSet, ProcessGame

KEYWORDS = frozenset({"mode", "players", "process", "payoff", "true",
                      "pre", "mid", "pos", "tau"})


class ParseError(ProcessGameError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class GameDefinitionError(ProcessGameError):
    """A syntactically valid file that does not define a process-game."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


# -- process terms ---------------------------------------------------------

@dataclass(frozen=True)
class Act:
    action: Action


@dataclass(frozen=True)
class Cond:
    condition: Formula
    body: "ProcessExpr"


@dataclass(frozen=True)
class Seq:
    first: "ProcessExpr"
    second: "ProcessExpr"


@dataclass(frozen=True)
class Choice:
    left: "ProcessExpr"
    right: "ProcessExpr"


ProcessExpr = Union[Act, Cond, Seq, Choice]


def format_expr(e: ProcessExpr) -> str:
    """Print a term so that parsing gives back the same tree."""
    if isinstance(e, Act):
        return e.action.name
    if isinstance(e, Cond):
        body = format_expr(e.body)
        if isinstance(e.body, (Seq, Choice)):
            body = f"({body})"
        return f"[{format_formula(e.condition)}]{body}"
    if isinstance(e, Seq):
        left = format_expr(e.first)
        right = format_expr(e.second)
        if isinstance(e.first, Choice):
            left = f"({left})"
        if isinstance(e.second, (Seq, Choice)):
            right = f"({right})"
        return f"{left}.{right}"
    left = format_expr(e.left)
    right = format_expr(e.right)
    if isinstance(e.right, Choice):
        right = f"({right})"
    return f"{left}+{right}"


def actions_of(e: ProcessExpr) -> list[Action]:
    if isinstance(e, Act):
        return [e.action]
    if isinstance(e, Cond):
        return actions_of(e.body)
    if isinstance(e, Seq):
        return actions_of(e.first) + actions_of(e.second)
    return actions_of(e.left) + actions_of(e.right)


def conditions_of(e: ProcessExpr) -> list[Formula]:
    if isinstance(e, Act):
        return []
    if isinstance(e, Cond):
        return [e.condition] + conditions_of(e.body)
    if isinstance(e, Seq):
        return conditions_of(e.first) + conditions_of(e.second)
    return conditions_of(e.left) + conditions_of(e.right)


def expr_to_ts(e: ProcessExpr) -> TransitionSystem:
    """Build the transition system of a term.

    A prefix adds one fresh target state; choice shares the start state;
    sequencing merges all terminating states of the first part into the
    start of the second; a condition guards the initial transitions of its
    body. Every label is a :class:`ConditionalAction`.
    """
    transitions: list = []
    notes: dict = {0: format_expr(e)}
    counter = [1]

    def fresh(note: str) -> int:
        s = counter[0]
        counter[0] += 1
        notes[s] = note
        return s

    def build(x: ProcessExpr, start: int) -> set:
        if isinstance(x, Act):
            t = fresh(x.action.name)
            transitions.append([start, ConditionalAction.plain(x.action), t])
            return {t}
        if isinstance(x, Choice):
            return build(x.left, start) | build(x.right, start)
        if isinstance(x, Cond):
            mark = len(transitions)
            ends = build(x.body, start)
            for tr in transitions[mark:]:
                if tr[0] == start:
                    lab = tr[1]
                    tr[1] = ConditionalAction(conjoin(x.condition, lab.condition),
                                              lab.action)
            return ends
        ends = build(x.first, start)
        if len(ends) == 1:
            mid = next(iter(ends))
        else:
            mid = fresh(format_expr(x.second))
            for tr in transitions:
                if tr[2] in ends:
                    tr[2] = mid
            for s in ends:
                notes.pop(s, None)
        return build(x.second, mid)

    terminating = build(e, 0)
    trs = tuple(tuple(t) for t in transitions)
    states = {0} | {t[0] for t in trs} | {t[2] for t in trs}
    return TransitionSystem(frozenset(states), trs, frozenset(terminating), 0,
                            {s: n for s, n in notes.items() if s in states})


def compile_payoffs(rules: Iterable[tuple[Formula, float]], player: int) -> PayoffRuleSet:
    rules = tuple((f, float(v)) for f, v in rules)
    if not rules:
        raise ValueError("a payoff rule set needs at least one rule")
    return PayoffRuleSet(player, rules)


# -- lexer -----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<number>-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?(?![A-Za-z_]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|->|[:,+.\[\]()!|&{}])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str = "identifier") -> Token:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected {what}")
        return self.advance()

    # formulas
    def formula(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("!"):
            self.advance()
            return Not(self.unary())
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        for word, ctor in (("pre", Pre), ("mid", Mid), ("pos", Pos)):
            if self.at(word):
                self.advance()
                self.expect("(")
                pat = self.seqpat()
                self.expect(")")
                return ctor(pat)
        if self.tok.kind == "ident" or self.at("{"):
            return Exact(self.seqpat())
        raise self.error("expected a formula")

    def seqpat(self) -> tuple:
        out = [self.symbol()]
        while self.at("."):
            self.advance()
            out.append(self.symbol())
        return tuple(out)

    def symbol(self):
        if self.at("{"):
            start = self.advance()
            names = [self.ident("action name").text]
            while self.at(","):
                self.advance()
                names.append(self.ident("action name").text)
            self.expect("}")
            if len(set(names)) != len(names) or len(names) < 2:
                raise ParseError("a joint label needs two or more distinct actions",
                                 start.line, start.column)
            return Joint(frozenset(Action(n) for n in names))
        return Action(self.ident("action name").text)

    # process terms
    def expr(self, owner: int | None) -> ProcessExpr:
        e = self.term(owner)
        while self.at("+"):
            self.advance()
            e = Choice(e, self.term(owner))
        return e

    def term(self, owner) -> ProcessExpr:
        e = self.factor(owner)
        while self.at("."):
            self.advance()
            e = Seq(e, self.factor(owner))
        return e

    def factor(self, owner) -> ProcessExpr:
        if self.at("["):
            self.advance()
            f = self.formula()
            self.expect("]")
            return Cond(f, self.factor(owner))
        if self.at("("):
            self.advance()
            e = self.expr(owner)
            self.expect(")")
            return e
        return Act(Action(self.ident("action name").text, owner))

    def number(self) -> float:
        if self.tok.kind != "number":
            raise self.error("expected a number")
        return float(self.advance().text)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected input after formula")
    return f


def parse_expr(text: str, owner: int | None = None) -> ProcessExpr:
    p = _Parser(text)
    e = p.expr(owner)
    if p.tok.kind != "eof":
        raise p.error("unexpected input after process term")
    return e


def parse_game(text: str) -> ProcessGame:
    """Parse and resolve a game file.

    Raises ParseError for syntax errors and GameDefinitionError when the file
    parses but does not describe a complete process-game.
    """
    p = _Parser(text)
    p.expect("mode")
    if p.at("perfect") or p.at("imperfect"):
        mode = p.advance().text
    else:
        raise p.error("expected 'perfect' or 'imperfect'")
    p.expect("players")
    p.expect(":")
    players = [p.ident("player name")]
    while p.at(","):
        p.advance()
        players.append(p.ident("player name"))

    problems: list[str] = []
    index: dict[str, int] = {}
    for tok in players:
        if tok.text in index:
            problems.append(f"player {tok.text} is declared twice "
                            f"(line {tok.line})")
        index.setdefault(tok.text, len(index))
    names = list(index)

    exprs: dict[int, ProcessExpr] = {}
    rules: dict[int, list] = {}
    while p.tok.kind != "eof":
        if p.at("process"):
            p.advance()
            who = p.ident("player name")
            p.expect(":=")
            owner = index.get(who.text)
            e = p.expr(owner)
            if owner is None:
                problems.append(f"process for undeclared player {who.text} "
                                f"(line {who.line})")
            elif owner in exprs:
                problems.append(f"player {who.text} has two processes "
                                f"(line {who.line})")
            else:
                exprs[owner] = e
        elif p.at("payoff"):
            p.advance()
            who = p.ident("player name")
            p.expect(":")
            block = []
            while True:
                f = p.formula()
                p.expect("->")
                block.append((f, p.number()))
                if p.at("process") or p.at("payoff") or p.tok.kind == "eof":
                    break
            owner = index.get(who.text)
            if owner is None:
                problems.append(f"payoff for undeclared player {who.text} "
                                f"(line {who.line})")
            elif owner in rules:
                problems.append(f"player {who.text} has two payoff blocks "
                                f"(line {who.line})")
            else:
                rules[owner] = block
        else:
            raise p.error("expected 'process' or 'payoff'")

    for i, name in enumerate(names):
        if i not in exprs:
            problems.append(f"player {name} has no process")
        if i not in rules:
            problems.append(f"player {name} has no payoff rules")

    declared = {a.name for e in exprs.values() for a in actions_of(e)}
    for name in sorted(declared & KEYWORDS):
        problems.append(f"{name} is reserved and cannot be an action")
    clash = declared & set(names)
    for name in sorted(clash):
        problems.append(f"{name} is used both as a player and as an action")

    def check(f: Formula, where: str):
        for sym in symbols_of(f):
            for a in (sym.members if isinstance(sym, Joint) else (sym,)):
                if a.name not in declared:
                    problems.append(f"{where} mentions undeclared action {a.name}")

    for i, e in exprs.items():
        for f in conditions_of(e):
            check(f, f"a condition in the process of {names[i]}")
    for i, block in rules.items():
        for f, _ in block:
            check(f, f"a payoff rule of {names[i]}")

    if problems:
        raise GameDefinitionError(problems)

    order = range(len(names))
    return ProcessGame(
        players=tuple(names),
        systems=tuple(expr_to_ts(exprs[i]) for i in order),
        payoffs=tuple(compile_payoffs(rules[i], i) for i in order),
        gamma=CommunicationFunction(JOIN if mode == "imperfect" else NONE),
        exprs=tuple(exprs[i] for i in order),
    )


def format_game(pg: ProcessGame) -> str:
    """Render a ProcessGame back to game-file text (needs ``pg.exprs``)."""
    lines = [f"mode {pg.mode}", "players: " + ", ".join(pg.players)]
    for name, e in zip(pg.players, pg.exprs):
        lines.append(f"process {name} := {format_expr(e)}")
    for name, rs in zip(pg.players, pg.payoffs):
        lines.append(f"payoff {name}:")
        for f, v in rs.rules:
            lines.append(f"  {format_formula(f)} -> {_num(v)}")
    return "\n".join(lines) + "\n"


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))

