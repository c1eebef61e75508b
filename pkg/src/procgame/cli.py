"""Command-line front end.

Exit codes: 0 ok, 1 I/O error, 2 no pure equilibrium, 3 parse error,
4 ambiguous equilibrium (strict tie-breaking), 5 semantic diagnostics,
6 node budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import BudgetExceeded
from .core import Joint, ProcessGameError, owners
from .dsl import GameDefinitionError, ParseError, parse_game
from .game import DEFAULT_BUDGET, ProcessGame, size_report, validate
from .generate import local_interaction_game
from .solver import ERROR, LEXICOGRAPHIC, Verdict, solve_dfs

EXIT_OK = 0
EXIT_IO = 1
EXIT_NO_PURE = 2
EXIT_PARSE = 3
EXIT_AMBIGUOUS = 4
EXIT_SEMANTIC = 5
EXIT_BUDGET = 6


def num(v: float):
    """Integral floats as ints, for output."""
    return int(v) if float(v).is_integer() else v


def render_text(tree, budget: int = DEFAULT_BUDGET) -> str:
    """The tree as a process term, e.g. ``M.(R+W)+F.(R+W)``."""
    seen = [0]

    def term(node) -> str:
        parts = []
        for label, child in tree.successors(node):
            seen[0] += 1
            if seen[0] > budget:
                raise BudgetExceeded(f"game tree has more than {budget} nodes")
            below = tree.successors(child)
            text = str(label)
            if below:
                inner = term(child)
                text += "." + (f"({inner})" if len(below) > 1 else inner)
            parts.append(text)
        return "+".join(parts)

    return term(tree.initial) or "(empty)"


def render_dot(pg: ProcessGame, budget: int = DEFAULT_BUDGET) -> str:
    """DOT description of the game tree; node ids follow depth-first preorder."""
    tree = pg.tree()
    lines = ["digraph game {", '  node [shape=circle, fontsize=10];']
    counter = [0]

    def visit(node) -> str:
        ident = f"n{counter[0]}"
        counter[0] += 1
        if counter[0] > budget + 1:
            raise BudgetExceeded(f"game tree has more than {budget} nodes")
        moves = tree.successors(node)
        if not moves:
            h = tree.history(node)
            vals = [rs.evaluate(h) for rs in pg.payoffs]
            text = ", ".join("?" if v is None else str(num(v)) for v in vals)
            lines.append(f'  {ident} [shape=box, label="({text})"];')
            return ident
        movers = sorted(set().union(*(owners(lab) for lab, _ in moves)),
                        key=lambda p: (p is None, p))
        who = ", ".join(pg.players[p] if p is not None else "?" for p in movers)
        style = ", style=dashed" if any(isinstance(lab, Joint) for lab, _ in moves) else ""
        lines.append(f'  {ident} [label="{who}"{style}];')
        for label, child in moves:
            target = visit(child)
            lines.append(f'  {ident} -> {target} [label="{label}"];')
        return ident

    visit(tree.initial)
    lines.append("}")
    return "\n".join(lines) + "\n"


def result_document(pg: ProcessGame, result) -> dict:
    return {
        "verdict": result.verdict.value,
        "players": list(pg.players),
        "path": None if result.path is None else [str(x) for x in result.path],
        "payoffs": None if result.payoffs is None else [num(v) for v in result.payoffs],
        "stats": {"nodes_expanded": result.stats.nodes_expanded,
                  "peak_entries": result.stats.peak_entries},
        "diagnostics": list(result.diagnostics),
        "message": result.message,
    }


def _load(path: str) -> ProcessGame:
    with open(path, encoding="utf-8") as fh:
        return parse_game(fh.read())


def cmd_check(args) -> int:
    pg = _load(args.file)
    diags = validate(pg, args.max_nodes)
    if not diags:
        print("ok")
        return EXIT_OK
    for d in diags:
        print(d)
    if any(d.code == "budget-exceeded" for d in diags):
        return EXIT_BUDGET
    return EXIT_SEMANTIC


def cmd_tree(args) -> int:
    pg = _load(args.file)
    if args.format == "dot":
        sys.stdout.write(render_dot(pg, args.max_nodes))
    else:
        print(render_text(pg.tree(), args.max_nodes))
    return EXIT_OK


def cmd_solve(args) -> int:
    pg = _load(args.file)
    tie = ERROR if args.tie_break == "error" else LEXICOGRAPHIC
    result = solve_dfs(pg, tie)
    if args.json:
        print(json.dumps(result_document(pg, result), indent=2))
    else:
        for note in result.diagnostics:
            print(f"warning: {note}", file=sys.stderr)
        if result.verdict is Verdict.PATH:
            print(" ".join(map(str, result.path)) or "(empty)")
            print("payoffs: " + ", ".join(
                f"{p}={num(v)}" for p, v in zip(pg.players, result.payoffs)))
        elif result.verdict is Verdict.NO_PURE_EQUILIBRIUM:
            print("no pure equilibrium path")
        else:
            print(f"ambiguous equilibrium: {result.message}")
    return {Verdict.PATH: EXIT_OK, Verdict.NO_PURE_EQUILIBRIUM: EXIT_NO_PURE,
            Verdict.AMBIGUOUS: EXIT_AMBIGUOUS}[result.verdict]


def cmd_size(args) -> int:
    pg = _load(args.file)
    report = size_report(pg, args.delta, args.max_nodes)
    doc = report.as_dict()
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        for key, value in doc.items():
            if isinstance(value, list):
                value = ",".join(map(str, value))
            print(f"{key}: {'-' if value is None else value}")
    return EXIT_OK


def cmd_gen(args) -> int:
    sys.stdout.write(local_interaction_game(args.players, args.actions,
                                            args.degree, args.seed))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procgame",
        description="Build, inspect and solve games given as process terms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate a game file")
    p.add_argument("file")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tree", help="print the game tree")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("solve", help="find the equilibrium path")
    p.add_argument("file")
    p.add_argument("--tie-break", choices=("lex", "error"), default="lex")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("size", help="report representation sizes and bounds")
    p.add_argument("file")
    p.add_argument("--delta", type=int, default=None,
                   help="interaction degree for the local-interaction bound")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_size)

    p = sub.add_parser("gen", help="print a generated local-interaction game")
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--actions", type=int, required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GameDefinitionError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_SEMANTIC
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        if args.command != "gen":
            raise
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProcessGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
