"""Reading a letrec term back from an eager-scope lambda-term-graph.

Shared vertices get an indirection above them and become letrec functions,
bound at the innermost abstraction of their prefix.  A depth-first spanning
tree fixes which edge into an indirection carries its definition; all other
edges into it only mention the function name.  Terms are synthesised bottom
up along the tree; each label is a term together with one binding map per
prefix level (level 0 is the top level).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bisim import collapse, split_vars, unshare_delimiters
from .syntax import Abs, App, FunVar, Let, Term, Var, freshen, remove_garbage
from .termgraph import TermGraph, is_eager_scope, validate
from .translate import Semantics, graphsem


class NotEagerScope(ValueError):
    pass


# bindings per prefix level; None marks a definition still to be filled in
Levels = tuple[dict[str, Term | None], ...]


@dataclass(frozen=True)
class _Label:
    levels: Levels
    term: Term


def _join(a: Levels, b: Levels) -> Levels:
    assert len(a) == len(b), "application children with different prefixes"
    joined = []
    for x, y in zip(a, b):
        level = dict(x)
        for name, rhs in y.items():
            if level.get(name) is None:
                level[name] = rhs
        joined.append(level)
    return tuple(joined)


def _let(bindings: dict[str, Term | None], body: Term, order: dict[str, int]) -> Term:
    if not bindings:
        return body
    missing = [name for name, rhs in bindings.items() if rhs is None]
    assert not missing, f"unfinished bindings {missing}"
    ordered = sorted(bindings.items(), key=lambda item: order[item[0]])
    return Let(tuple(ordered), body)


class _Readback:
    def __init__(self, g: TermGraph):
        self.g = g
        self.prefix = validate(g)
        if not is_eager_scope(g, self.prefix):
            raise NotEagerScope("readback needs an eager-scope graph")
        self.shared = self.shared_vertices()
        self.tree_parent: dict[int, tuple[int, int]] = {}
        self.order = self.spanning_tree()
        self.lam_name = {v: f"x{k}" for k, v in enumerate(v for v in self.order if g.labels[v] == "lam")}
        # a black hole is a function f = f; a shared vertex is a function too
        names = (f"f{k}" for k in itertools.count())
        self.bh_name: dict[int, str] = {}
        self.ind_name: dict[int, str] = {}
        for v in self.order:
            if g.labels[v] == "bh":
                self.bh_name[v] = next(names)
            if v in self.shared:
                self.ind_name[v] = next(names)
        self.fun_order = {name: int(name[1:]) for name in [*self.bh_name.values(), *self.ind_name.values()]}

    def shared_vertices(self) -> set[int]:
        """Vertices with two or more incoming edges that are not backlinks (the top edge counts)."""
        deg = self.g.in_degrees()
        deg[self.g.root] += 1
        return {v for v, d in enumerate(deg) if d >= 2}

    def spanning_tree(self) -> list[int]:
        """Depth-first preorder, successors in index order; backlinks never enter the tree."""
        g = self.g
        order = [g.root]
        seen = {g.root}
        stack = [(g.root, 0)]
        while stack:
            v, i = stack[-1]
            if i == len(g.succ[v]):
                stack.pop()
                continue
            stack[-1] = (v, i + 1)
            w = g.succ[v][i]
            if g.is_backlink(v, i) or w in seen:
                continue
            seen.add(w)
            self.tree_parent[w] = (v, i)
            order.append(w)
            stack.append((w, 0))
        return order

    def empty_levels(self, v: int) -> Levels:
        return tuple({} for _ in range(len(self.prefix[v]) + 1))

    def reference(self, v: int) -> _Label:
        """Label of a non-tree edge into shared vertex v: the name, with its definition pending."""
        name = self.ind_name[v]
        levels = self.empty_levels(v)
        levels[-1][name] = None
        return _Label(levels, FunVar(name))

    def run(self) -> Term:
        g = self.g
        above: dict[int, _Label] = {}  # label of the tree edge into each vertex

        def edge_label(v: int, i: int) -> _Label:
            w = g.succ[v][i]
            if self.tree_parent.get(w) == (v, i):
                return above[w]
            return self.reference(w)

        for v in reversed(self.order):
            match g.labels[v]:
                case "lam":
                    body = edge_label(v, 0)
                    *outer, own = body.levels
                    label = _Label(tuple(outer), Abs(self.lam_name[v], _let(own, body.term, self.fun_order)))
                case "app":
                    fun, arg = edge_label(v, 0), edge_label(v, 1)
                    label = _Label(_join(fun.levels, arg.levels), App(fun.term, arg.term))
                case "var":
                    label = _Label(self.empty_levels(v), Var(self.lam_name[g.succ[v][0]]))
                case "del":
                    inner = edge_label(v, 0)
                    label = _Label(inner.levels + ({},), inner.term)
                case "bh":
                    name = self.bh_name[v]
                    label = _Label(({name: FunVar(name)},), FunVar(name))
            if v in self.shared:
                label = self.define(v, label)
            above[v] = label

        top = above[g.root]
        return _let(top.levels[0], top.term, self.fun_order)

    def define(self, v: int, label: _Label) -> _Label:
        """The tree edge into an indirection: complete the binding at the innermost level."""
        name = self.ind_name[v]
        levels = tuple(dict(level) for level in label.levels)
        levels[-1][name] = label.term
        return _Label(levels, FunVar(name))


def readback(g: TermGraph) -> Term:
    """A term whose maximal-prefix translation is isomorphic to g."""
    return _Readback(g).run()


def maxshare(t: Term, unshare_dels: bool = False, no_var_sharing: bool = False) -> Term:
    """Maximally shared form: read back the collapse of the translation."""
    g, _ = collapse(graphsem(remove_garbage(freshen(t)), Semantics.MAX))
    if unshare_dels:
        g = unshare_delimiters(g)
    if no_var_sharing:
        g = split_vars(g)
    return readback(g)
