"""Unfolding of letrec terms: the rewrite rules, truncated infinite
unfoldings, productivity, and the one-rule system used as a cross-check."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

from .syntax import (
    Abs,
    App,
    BlackHole,
    FunVar,
    Let,
    NameSupply,
    Position,
    Term,
    Var,
    all_names,
    children,
    free_vars,
    freshen,
    reachable_bindings,
    remove_garbage,
    rename_bound,
    replace_at,
    substitute,
)


class Rule(enum.Enum):
    AT_LAM = "lambda"
    AT_APP = "app"
    MERGE = "merge"
    REC = "rec"
    NIL = "nil"
    REDUCE = "reduce"
    TIGHTEN = "tighten"
    BLACK_HOLE = "blackhole"


# rules that cannot produce a constructor and are applied before the others
EAGER = (Rule.NIL, Rule.REDUCE, Rule.TIGHTEN, Rule.BLACK_HOLE)


# ---------------------------------------------------------------- truncated trees


@dataclass(frozen=True, slots=True)
class TLam:
    body: Tree

    def __str__(self) -> str:
        return f"lam({self.body})"


@dataclass(frozen=True, slots=True)
class TApp:
    fun: Tree
    arg: Tree

    def __str__(self) -> str:
        return f"app({self.fun},{self.arg})"


@dataclass(frozen=True, slots=True)
class TVar:
    index: int

    def __str__(self) -> str:
        return f"v{self.index}"


@dataclass(frozen=True, slots=True)
class TBH:
    def __str__(self) -> str:
        return "bh"


@dataclass(frozen=True, slots=True)
class TCut:
    def __str__(self) -> str:
        return "cut"


Tree = Union[TLam, TApp, TVar, TBH, TCut]


def contains_bh(tree: Tree) -> bool:
    match tree:
        case TBH():
            return True
        case TLam(body):
            return contains_bh(body)
        case TApp(fun, arg):
            return contains_bh(fun) or contains_bh(arg)
    return False


# ---------------------------------------------------------------- single steps


def _let_redexes(let: Let, with_bh: bool, supply: NameSupply) -> Iterator[tuple[Rule, Term]]:
    bindings, body = let.bindings, let.body
    if not bindings:
        yield Rule.NIL, body
        return
    keep = reachable_bindings(let)
    if len(keep) < len(bindings):
        kept = tuple(bindings[i] for i in keep)
        yield Rule.REDUCE, Let(kept, body) if kept else body
    if with_bh:
        names = let.names
        for name, rhs in bindings:
            if isinstance(rhs, FunVar) and rhs.name in names:
                yield _drop_binding(let, name, rhs)
    match body:
        case Abs(var, inner):
            yield Rule.AT_LAM, Abs(var, Let(bindings, inner))
        case App(fun, arg):
            yield Rule.AT_APP, App(Let(bindings, fun), Let(bindings, arg))
        case Let():
            yield Rule.MERGE, _merge(let, supply)
        case FunVar(name) if name in let.names:
            rhs = dict(bindings)[name]
            yield Rule.REC, Let(bindings, rename_bound(rhs, supply))


def _drop_binding(let: Let, name: str, rhs: FunVar) -> tuple[Rule, Term]:
    """tighten (f = g) or black hole (f = f): remove f and substitute for it."""
    if rhs.name == name:
        rule, replacement = Rule.BLACK_HOLE, BlackHole()
    else:
        rule, replacement = Rule.TIGHTEN, rhs
    # the replacement may name a sibling, so substitute inside the group's scope
    mapping = {name: replacement}
    rest = tuple((n, substitute(rhs, mapping)) for n, rhs in let.bindings if n != name)
    body = substitute(let.body, mapping)
    return rule, Let(rest, body) if rest else body


def _merge(let: Let, supply: NameSupply) -> Let:
    inner = let.body
    clash = set(let.names) & set(inner.names)
    if clash:
        renames = {name: FunVar(supply.fresh(name)) for name in clash}
        bindings = tuple((renames[n].name if n in renames else n, substitute(rhs, renames)) for n, rhs in inner.bindings)
        inner = Let(bindings, substitute(inner.body, renames))
    return Let(let.bindings + inner.bindings, inner.body)


def _all_redexes(t: Term, with_bh: bool, supply: NameSupply, pos: Position = ()):
    if isinstance(t, Let):
        for rule, result in _let_redexes(t, with_bh, supply):
            yield pos, rule, result
    for sel, child in children(t):
        yield from _all_redexes(child, with_bh, supply, pos + (sel,))


def step(t: Term, with_bh: bool = True) -> list[tuple[Position, Rule, Term]]:
    """All one-step reducts of `t`, tagged with the redex position and rule."""
    supply = NameSupply(all_names(t))
    return [(pos, rule, replace_at(t, pos, result)) for pos, rule, result in _all_redexes(t, with_bh, supply)]


# ---------------------------------------------------------------- head normalisation


class _Unfolder:
    """Lazy unfolding: rewrite only what is needed to expose the head constructor."""

    def __init__(self, t: Term):
        self.supply = NameSupply(all_names(t))

    def whnf(self, t: Term) -> Term:
        """Rewrite at the head until it is Abs, App, Var, BlackHole or a free FunVar."""
        while isinstance(t, Let):
            t = self.let_head(t)
        return t

    def let_head(self, let: Let) -> Term:
        while True:
            eager = self.eager(let)
            if not isinstance(eager, Let):
                return eager
            let = eager
            bindings, body = let.bindings, let.body
            match body:
                case Abs(var, inner):
                    return Abs(var, Let(bindings, inner))
                case App(fun, arg):
                    return App(Let(bindings, fun), Let(bindings, arg))
                case Let():
                    let = _merge(let, self.supply)
                case FunVar(name) if name in let.names:
                    index = let.names.index(name)
                    rhs = bindings[index][1]
                    if isinstance(rhs, Let):
                        # the definition itself needs a head before it can be copied
                        rhs = self.whnf(rhs)
                        updated = bindings[:index] + ((name, rhs),) + bindings[index + 1:]
                        let = Let(updated, body)
                        continue
                    let = Let(bindings, rename_bound(rhs, self.supply))
                case _:
                    raise AssertionError("reduce should have removed the group")

    def eager(self, let: Let) -> Term:
        """Apply reduce, nil, tighten and black-hole rules until none applies."""
        t: Term = let
        while isinstance(t, Let):
            for rule, result in _let_redexes(t, True, self.supply):
                if rule in EAGER:
                    t = result
                    break
            else:
                break
        return t


def _tree(unfolder: _Unfolder, t: Term, depth: int, env: tuple[str, ...]) -> Tree:
    t = unfolder.whnf(t)
    match t:
        case Var(name):
            return TVar(env[::-1].index(name))
        case BlackHole():
            return TBH()
        case FunVar(name):
            raise ValueError(f"free function variable {name}")
    if depth == 0:
        return TCut()
    match t:
        case Abs(var, body):
            return TLam(_tree(unfolder, body, depth - 1, env + (var,)))
        case App(fun, arg):
            return TApp(_tree(unfolder, fun, depth - 1, env), _tree(unfolder, arg, depth - 1, env))
    raise TypeError(t)


def unfold_truncated(t: Term, depth: int, strategy: str = "outermost") -> Tree:
    """The depth-`depth` prefix of the infinite unfolding of a closed term.

    Depth counts Lam and App nodes.  Variables and black holes at the
    frontier are still reported, other frontier subterms become `cut`.
    `strategy` selects "outermost" (lazy, head-driven) or "innermost"
    (rewrites the deepest redexes above the frontier first).
    """
    t = freshen(t)
    if free_vars(t):
        raise ValueError("unfold_truncated needs a closed term")
    if strategy == "outermost":
        return _tree(_Unfolder(t), t, depth, ())
    if strategy == "innermost":
        return _innermost(t, depth)
    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------- innermost strategy


def _active(t: Term, depth: int, pos: Position = ()) -> Iterator[Position]:
    """Positions of Let nodes whose constructor depth is within the frontier, post-order."""
    match t:
        case Abs(_, body):
            if depth > 0:
                yield from _active(body, depth - 1, pos + ("body",))
        case App(fun, arg):
            if depth > 0:
                yield from _active(fun, depth - 1, pos + ("fun",))
                yield from _active(arg, depth - 1, pos + ("arg",))
        case Let(bindings, body):
            for i, (_, rhs) in enumerate(bindings):
                yield from _active(rhs, depth, pos + (i,))
            yield from _active(body, depth, pos + ("in",))
            yield pos


def _innermost(t: Term, depth: int, limit: int = 200_000) -> Tree:
    supply = NameSupply(all_names(t))
    for _ in range(limit):
        candidates = list(_active(t, depth))
        if not candidates:
            return _read_tree(t, depth, ())
        chosen = None
        for pos in candidates:
            let = _subterm(t, pos)
            redexes = list(_let_redexes(let, True, supply))
            eager = [r for r in redexes if r[0] in EAGER]
            pick = (eager or redexes or [None])[0]
            if pick is not None:
                chosen = (pos, pick[1])
                break
        if chosen is None:
            raise AssertionError("Let without redex")
        t = replace_at(t, chosen[0], chosen[1])
    raise RuntimeError("innermost unfolding did not settle")


def _subterm(t: Term, pos: Position) -> Term:
    for sel in pos:
        t = dict(children(t))[sel]
    return t


def _read_tree(t: Term, depth: int, env: tuple[str, ...]) -> Tree:
    match t:
        case Var(name):
            return TVar(env[::-1].index(name))
        case BlackHole():
            return TBH()
    if depth == 0:
        return TCut()
    match t:
        case Abs(var, body):
            return TLam(_read_tree(body, depth - 1, env + (var,)))
        case App(fun, arg):
            return TApp(_read_tree(fun, depth - 1, env), _read_tree(arg, depth - 1, env))
    raise AssertionError(f"residual {type(t).__name__} above the frontier")


# ---------------------------------------------------------------- productivity


def is_productive(t: Term) -> bool:
    """True iff the unfolding of `t` is a lambda-term without black holes.

    Every Let body and every function definition is followed through chains
    of Lets and function variables; the term is unproductive iff such a chain
    closes a cycle before reaching a lambda or an application.
    """
    t = remove_garbage(freshen(t))
    definitions: dict[str, Term] = {}
    nodes: list[Term] = []

    def collect(u: Term) -> None:
        nodes.append(u)
        if isinstance(u, Let):
            definitions.update(u.bindings)
        for _, child in children(u):
            collect(child)

    collect(t)
    if any(isinstance(u, BlackHole) for u in nodes):
        return False

    def next_unguarded(u: Term) -> Term | None:
        match u:
            case Let(_, body):
                return body
            case FunVar(name):
                return definitions.get(name)
        return None

    settled: set[int] = set()
    for start in nodes:
        path: list[int] = []
        u: Term | None = start
        while u is not None and id(u) not in settled:
            if id(u) in path:
                return False
            path.append(id(u))
            u = next_unguarded(u)
        settled.update(path)
    return True


# ---------------------------------------------------------------- one-rule system


def step_single_rule(t: Term, supply: NameSupply | None = None) -> Term | None:
    """Apply  let B in L -> L[f_i := L_i[f_j := let B in f_j]]  at the leftmost-outermost Let."""
    supply = supply or NameSupply(all_names(t))
    match t:
        case Let(bindings, body):
            wrapped = {name: Let(bindings, FunVar(name)) for name, _ in bindings}
            definitions = {name: substitute(rhs, wrapped, supply) for name, rhs in bindings}
            return substitute(body, definitions, supply)
        case Abs(var, body):
            reduct = step_single_rule(body, supply)
            return None if reduct is None else Abs(var, reduct)
        case App(fun, arg):
            reduct = step_single_rule(fun, supply)
            if reduct is not None:
                return App(reduct, arg)
            reduct = step_single_rule(arg, supply)
            return None if reduct is None else App(fun, reduct)
    return None


def unfold_truncated_single_rule(t: Term, depth: int, limit: int = 100_000) -> Tree:
    """Truncated unfolding driven by the one-rule system.  Diverges on
    unproductive terms, so `limit` bounds the number of head steps."""
    t = freshen(t)
    supply = NameSupply(all_names(t))

    def tree(u: Term, depth: int, env: tuple[str, ...]) -> Tree:
        for _ in range(limit):
            if not isinstance(u, Let):
                break
            u = step_single_rule(u, supply)
        else:
            raise RuntimeError("one-rule unfolding did not reach a head constructor")
        match u:
            case Var(name):
                return TVar(env[::-1].index(name))
            case BlackHole():
                return TBH()
        if depth == 0:
            return TCut()
        match u:
            case Abs(var, body):
                return TLam(tree(body, depth - 1, env + (var,)))
            case App(fun, arg):
                return TApp(tree(fun, depth - 1, env), tree(arg, depth - 1, env))
        raise TypeError(u)

    return tree(t, depth, ())
