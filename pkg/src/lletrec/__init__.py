"""Unfolding semantics for the lambda-calculus with letrec: translation into
first-order term graphs, bisimulation collapse, readback and maximal sharing."""

from .bisim import bisimilar, bisimulation, collapse, equiv, funbisim, iso, split_vars, unshare_delimiters
from .readback import maxshare, readback
from .syntax import (
    Abs,
    App,
    BlackHole,
    FunVar,
    Let,
    Term,
    Var,
    alpha_eq,
    free_vars,
    freshen,
    parse,
    pretty,
    remove_garbage,
    required_vars,
    term_size,
)
from .termgraph import TermGraph, from_json, graph_size, is_eager_scope, to_dot, to_json, validate
from .translate import Semantics, graphsem
from .unfold import is_productive, step, step_single_rule, unfold_truncated, unfold_truncated_single_rule

__all__ = [
    "Abs", "App", "BlackHole", "FunVar", "Let", "Term", "Var",
    "alpha_eq", "free_vars", "freshen", "parse", "pretty", "remove_garbage", "required_vars", "term_size",
    "TermGraph", "from_json", "graph_size", "is_eager_scope", "to_dot", "to_json", "validate",
    "Semantics", "graphsem",
    "bisimilar", "bisimulation", "collapse", "equiv", "funbisim", "iso", "split_vars", "unshare_delimiters",
    "maxshare", "readback",
    "is_productive", "step", "step_single_rule", "unfold_truncated", "unfold_truncated_single_rule",
]
