"""Translation of letrec terms into eager-scope lambda-term-graphs.

The translation walks the term once, carrying the abstraction prefix as a
stack of entries.  Each entry is a lambda vertex together with the letrec
functions attached at its level; the bottom entry is a dummy for top-level
functions.  Before every construct the stack is popped as far as the free
variables of the current subterm allow, and each pop emits a `del` vertex.

The two semantics differ only in the level at which a letrec function is
attached:

* MinPrefix attaches each function as low as its free variables permit.
* MaxPrefix attaches it as high as possible without forcing a scope to stay
  open over a vertex that does not use it.  Levels start at the top of the
  stack and are lowered whenever a dry run finds a construct whose stack
  top is not required there; this decreasing iteration reaches the greatest
  admissible assignment.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .syntax import (
    Abs,
    App,
    BlackHole,
    FunVar,
    Let,
    OpenTerm,
    RequiredVars,
    Term,
    Var,
    free_vars,
    freshen,
    remove_garbage,
    term_size,
)
from .termgraph import TermGraph, graph_size

__all__ = ["Semantics", "graphsem", "term_size", "graph_size"]

ROOT = "*"


class Semantics(enum.Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class _Entry:
    vertex: int | None
    var: str
    funs: frozenset[str] = frozenset()


_Prefix = tuple[_Entry, ...]


class _Translation:
    def __init__(self, term: Term, semantics: Semantics, levels: dict[str, str], dry: bool):
        self.term = term
        self.semantics = semantics
        self.levels = levels
        self.dry = dry
        self.required = RequiredVars(term)
        self.depth = self.required.depth
        self.fv: dict[int, frozenset[str]] = {}
        self.req: dict[int, frozenset[str]] = {}
        self.labels: list[str] = []
        self.succ: list[list[int | None]] = []
        self.ind_prefix: dict[int, tuple[int, ...]] = {}
        self.ind_of: dict[str, int] = {}
        self.let_prefix: dict[str, tuple[str, ...]] = {}
        self.lowered: dict[str, str] = {}

    # -- helpers

    def free(self, t: Term) -> frozenset[str]:
        key = id(t)
        if key not in self.fv:
            self.fv[key] = free_vars(t)
        return self.fv[key]

    def required_at(self, t: Term) -> frozenset[str]:
        key = id(t)
        if key not in self.req:
            self.req[key] = self.required.at(t)
        return self.req[key]

    def new(self, label: str, arity: int) -> int:
        self.labels.append(label)
        self.succ.append([None] * arity)
        return len(self.labels) - 1

    def lower(self, fun: str, var: str) -> None:
        current = self.lowered.get(fun, self.levels.get(fun))
        if current is None or self.depth_of(var) < self.depth_of(current):
            self.lowered[fun] = var

    def depth_of(self, var: str) -> int:
        return -1 if var == ROOT else self.depth[var]

    def pop_unneeded(self, prefix: _Prefix, t: Term) -> tuple[_Prefix, list[_Entry]]:
        fv = self.free(t)
        popped = []
        while len(prefix) > 1:
            top = prefix[-1]
            if top.var in fv or top.funs & fv:
                break
            popped.append(top)
            prefix = prefix[:-1]
        return prefix, popped

    def check_eager(self, prefix: _Prefix, t: Term) -> None:
        """At a construct, the stack top must be required; otherwise lower the
        functions that keep it open."""
        needed = self.required_at(t)
        if len(prefix) == 1 or prefix[-1].var in needed:
            return
        keep = max((i for i, e in enumerate(prefix) if e.var in needed), default=0)
        fv = self.free(t)
        for entry in prefix[keep + 1:]:
            for fun in entry.funs & fv:
                allowed = self.let_prefix[fun]
                target = max((e.var for e in prefix[: keep + 1] if e.var in allowed), key=self.depth_of)
                self.lower(fun, target)
        if not self.dry:
            raise AssertionError("translation left a scope open that is not required")

    # -- translation

    def translate(self, prefix: _Prefix, t: Term) -> int:
        prefix, popped = self.pop_unneeded(prefix, t)
        head = None
        last = None
        for entry in popped:
            d = self.new("del", 2)
            self.succ[d][1] = entry.vertex
            if last is None:
                head = d
            else:
                self.succ[last][0] = d
            last = d
        v = self.construct(prefix, t)
        if last is None:
            return v
        self.succ[last][0] = v
        return head

    def construct(self, prefix: _Prefix, t: Term) -> int:
        match t:
            case Abs(var, body):
                self.check_eager(prefix, t)
                v = self.new("lam", 1)
                self.succ[v][0] = self.translate(prefix + (_Entry(v, var),), body)
                return v
            case App(fun, arg):
                self.check_eager(prefix, t)
                v = self.new("app", 2)
                self.succ[v][0] = self.translate(prefix, fun)
                self.succ[v][1] = self.translate(prefix, arg)
                return v
            case Var(name):
                top = prefix[-1]
                assert top.var == name, f"variable {name} is not the innermost open scope"
                v = self.new("var", 1)
                self.succ[v][0] = top.vertex
                return v
            case BlackHole():
                return self.new("bh", 0)
            case FunVar(name):
                if not any(name in e.funs for e in prefix):
                    allowed = self.let_prefix[name]
                    target = max((e.var for e in prefix if e.var in allowed), key=self.depth_of)
                    self.lower(name, target)
                    if not self.dry:
                        raise AssertionError(f"function {name} used outside its attachment scope")
                    return self.new("bh", 0)
                return self.ind_of[name]
            case Let(bindings, body):
                return self.let(prefix, bindings, body)
        raise TypeError(t)

    def let(self, prefix: _Prefix, bindings, body) -> int:
        names = [name for name, _ in bindings]
        vars_here = tuple(e.var for e in prefix)
        for name in names:
            self.let_prefix[name] = vars_here
        if self.semantics is Semantics.MIN:
            levels = self.min_levels(prefix, bindings)
        else:
            levels = [self.max_level(prefix, name) for name in names]
        attached = [set(e.funs) for e in prefix]
        for name, level in zip(names, levels):
            attached[level].add(name)
        inner = tuple(_Entry(e.vertex, e.var, frozenset(fs)) for e, fs in zip(prefix, attached))
        inds = []
        for name, level in zip(names, levels):
            ind = self.new("ind", 1)
            self.ind_of[name] = ind
            self.ind_prefix[ind] = tuple(e.vertex for e in prefix[1 : level + 1])
            inds.append(ind)
        for (name, rhs), level, ind in zip(bindings, levels, inds):
            self.succ[ind][0] = self.translate(inner[: level + 1], rhs)
        return self.translate(inner, body)

    def min_levels(self, prefix: _Prefix, bindings) -> list[int]:
        index = {}
        for i, entry in enumerate(prefix):
            index[entry.var] = i
            for fun in entry.funs:
                index[fun] = i
        names = [name for name, _ in bindings]
        fvs = [self.free(rhs) for _, rhs in bindings]
        levels = [max((index[x] for x in fv if x in index), default=0) for fv in fvs]
        changed = True
        while changed:
            changed = False
            for i, fv in enumerate(fvs):
                for j, name in enumerate(names):
                    if name in fv and levels[j] > levels[i]:
                        levels[i] = levels[j]
                        changed = True
        return levels

    def max_level(self, prefix: _Prefix, name: str) -> int:
        wanted = self.levels.get(name)
        if wanted is None:
            return len(prefix) - 1
        limit = self.depth_of(wanted)
        return max(i for i, e in enumerate(prefix) if self.depth_of(e.var) <= limit)

    # -- indirection erasure

    def finish(self, root: int) -> TermGraph:
        """Erase indirection vertices; a cycle of indirections becomes a
        delimiter chain ending in a black hole."""
        target: dict[int, int] = {}  # indirection -> vertex or surviving indirection

        for v in range(len(self.labels)):
            path = []
            u = v
            while self.labels[u] == "ind" and u not in target and u not in path:
                path.append(u)
                u = self.succ[u][0]
            if self.labels[u] != "ind":
                end = u
            elif u in target:
                end = target[u]
            else:
                cycle = path[path.index(u):]
                end = min(cycle)
            for w in path:
                target[w] = end

        new_id: dict[int, int] = {}
        chain_of: dict[int, list[int]] = {}
        labels: list[str] = []
        for v, label in enumerate(self.labels):
            if label != "ind":
                new_id[v] = len(labels)
                labels.append(label)
            elif target[v] == v:
                ids = list(range(len(labels), len(labels) + len(self.ind_prefix[v]) + 1))
                labels.extend(["del"] * (len(ids) - 1) + ["bh"])
                chain_of[v] = ids
                new_id[v] = ids[0]

        def resolve(w: int) -> int:
            return new_id[target.get(w, w)]

        succ: list[tuple[int, ...]] = [()] * len(labels)
        for v, label in enumerate(self.labels):
            if label != "ind":
                succ[new_id[v]] = tuple(resolve(w) for w in self.succ[v])
            elif v in chain_of:
                ids = chain_of[v]
                for d, nxt, lam in zip(ids, ids[1:], reversed(self.ind_prefix[v])):
                    succ[d] = (nxt, new_id[lam])
        return TermGraph(tuple(labels), tuple(succ), resolve(root))


def _prepare(t: Term) -> Term:
    fv = free_vars(t)
    if fv:
        raise OpenTerm(fv)
    return remove_garbage(freshen(t))


def graphsem(t: Term, semantics: Semantics | str = Semantics.MAX) -> TermGraph:
    """Interpret a closed term as an eager-scope lambda-term-graph."""
    semantics = Semantics(semantics)
    t = _prepare(t)
    levels: dict[str, str] = {}
    if semantics is Semantics.MAX:
        while True:
            run = _Translation(t, semantics, levels, dry=True)
            run.translate((_Entry(None, ROOT),), t)
            if not run.lowered:
                break
            levels.update(run.lowered)
    run = _Translation(t, semantics, levels, dry=False)
    root = run.translate((_Entry(None, ROOT),), t)
    return run.finish(root)
