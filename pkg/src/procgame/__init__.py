"""Extensive games written as per-player process terms.

Each player is a small process over (conditional) actions; the game tree is
recovered by parallel composition followed by condition resolution and the
subsumption cut, and solved by a depth-first equilibrium search.
"""

from .algebra import (BudgetExceeded, CommunicationFunction, build_game_tree,
                      cut_subsumed, encapsulate, encapsulate_conditional,
                      materialize, parallel_compose)
from .core import (Action, ConditionalAction, Joint, ProcessGameError,
                   TransitionSystem, history_of, reachable_states)
from .dsl import GameDefinitionError, ParseError, expr_to_ts, parse_game
from .formula import satisfies
from .game import ProcessGame, payoff_of, size_report, validate
from .solver import Verdict, oracle_backward_induction, solve_dfs

__version__ = "0.1.0"
