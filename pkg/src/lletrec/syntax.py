"""Abstract and concrete syntax of the lambda calculus with letrec.

Terms are immutable dataclasses.  Identifiers bound by an enclosing letrec
group are parsed as `FunVar`, everything else as `Var`, so the rewrite rules
can tell function variables from lambda variables without an environment.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True, slots=True)
class Abs:
    var: str
    body: Term


@dataclass(frozen=True, slots=True)
class App:
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class FunVar:
    name: str


@dataclass(frozen=True, slots=True)
class Let:
    bindings: tuple[tuple[str, Term], ...]
    body: Term

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.bindings)


@dataclass(frozen=True, slots=True)
class BlackHole:
    pass


Term = Union[Abs, App, Var, FunVar, Let, BlackHole]

# A position is a path of child selectors: "body" (under a lambda), "fun",
# "arg", "in" (the body of a Let) or an int (the i-th binding of a Let).
Selector = Union[str, int]
Position = tuple[Selector, ...]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class OpenTerm(ValueError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__("term has free variables: " + ", ".join(self.names))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""(?P<ws>\s+|--[^\n]*)
      | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
      | (?P<bh>_\|_)
      | (?P<sym>[\\λ.;=()])
    """,
    re.VERBOSE,
)
_KEYWORDS = {"let", "in"}


def _tokenize(source: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind, text = m.lastgroup, m.group()
        col = pos - line_start + 1
        if kind == "ident" and text in _KEYWORDS:
            kind = text
        elif kind == "sym":
            kind = "\\" if text == "λ" else text
        if kind != "ws":
            tokens.append((kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def error(self, message: str) -> ParseError:
        _, text, line, col = self.tokens[self.i]
        found = repr(text) if text else "end of input"
        return ParseError(f"{message}, found {found}", line, col)

    def expect(self, kind: str) -> str:
        if self.peek() != kind:
            raise self.error(f"expected {kind!r}")
        text = self.tokens[self.i][1]
        self.i += 1
        return text

    def term(self) -> Term:
        kind = self.peek()
        if kind == "\\":
            self.i += 1
            names = [self.expect("ident")]
            while self.peek() == "ident":
                names.append(self.expect("ident"))
            self.expect(".")
            body = self.term()
            for name in reversed(names):
                body = Abs(name, body)
            return body
        if kind == "let":
            return self.let()
        return self.app()

    def let(self) -> Let:
        self.expect("let")
        bindings = []
        while True:
            _, _, line, col = self.tokens[self.i]
            name = self.expect("ident")
            if any(name == other for other, _ in bindings):
                raise ParseError(f"duplicate binding {name!r} in one group", line, col)
            self.expect("=")
            bindings.append((name, self.term()))
            if self.peek() != ";":
                break
            self.i += 1
        self.expect("in")
        return Let(tuple(bindings), self.term())

    def app(self) -> Term:
        term = self.atom()
        while self.peek() in ("ident", "bh", "("):
            term = App(term, self.atom())
        return term

    def atom(self) -> Term:
        kind = self.peek()
        if kind == "ident":
            return Var(self.expect("ident"))
        if kind == "bh":
            self.i += 1
            return BlackHole()
        if kind == "(":
            self.i += 1
            term = self.term()
            self.expect(")")
            return term
        raise self.error("expected a term")


def _resolve(t: Term, functions: frozenset[str]) -> Term:
    """Turn identifiers bound by an enclosing letrec group into function variables."""
    match t:
        case Var(name):
            return FunVar(name) if name in functions else t
        case Abs(var, body):
            return Abs(var, _resolve(body, functions - {var}))
        case App(fun, arg):
            return App(_resolve(fun, functions), _resolve(arg, functions))
        case Let(bindings, body):
            inner = functions | {name for name, _ in bindings}
            return Let(tuple((n, _resolve(rhs, inner)) for n, rhs in bindings), _resolve(body, inner))
    return t


def parse(source: str) -> Term:
    """Parse concrete syntax into a term.  Names are kept as written."""
    parser = _Parser(source)
    term = parser.term()
    parser.expect("eof")
    return _resolve(term, frozenset())


# ---------------------------------------------------------------- printing


def pretty(t: Term) -> str:
    """Render a term in the concrete syntax accepted by `parse`."""
    return _pretty(t, 0)


def _pretty(t: Term, level: int) -> str:
    # level 0: anything; 1: left of an application; 2: argument position
    match t:
        case Var(name) | FunVar(name):
            return name
        case BlackHole():
            return "_|_"
        case App(fun, arg):
            s = f"{_pretty(fun, 1)} {_pretty(arg, 2)}"
            return f"({s})" if level >= 2 else s
        case Abs(var, body):
            s = f"\\{var}. {_pretty(body, 0)}"
        case Let(bindings, body):
            if not bindings:
                return _pretty(body, level)
            group = "; ".join(f"{name} = {_pretty(rhs, 0)}" for name, rhs in bindings)
            s = f"let {group} in {_pretty(body, 0)}"
    return f"({s})" if level >= 1 else s


# ---------------------------------------------------------------- traversal


def children(t: Term) -> Iterator[tuple[Selector, Term]]:
    match t:
        case Abs(_, body):
            yield "body", body
        case App(fun, arg):
            yield "fun", fun
            yield "arg", arg
        case Let(bindings, body):
            for i, (_, rhs) in enumerate(bindings):
                yield i, rhs
            yield "in", body


def subterm(t: Term, pos: Position) -> Term:
    for sel in pos:
        t = dict(children(t))[sel]
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    sel, rest = pos[0], pos[1:]
    match t:
        case Abs(var, body) if sel == "body":
            return Abs(var, replace_at(body, rest, new))
        case App(fun, arg) if sel == "fun":
            return App(replace_at(fun, rest, new), arg)
        case App(fun, arg) if sel == "arg":
            return App(fun, replace_at(arg, rest, new))
        case Let(bindings, body) if sel == "in":
            return Let(bindings, replace_at(body, rest, new))
        case Let(bindings, body) if isinstance(sel, int):
            name, rhs = bindings[sel]
            updated = bindings[:sel] + ((name, replace_at(rhs, rest, new)),) + bindings[sel + 1:]
            return Let(updated, body)
    raise KeyError(f"no child {sel!r} in {type(t).__name__}")


def positions(t: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    """All (position, subterm) pairs in pre-order."""
    yield prefix, t
    for sel, child in children(t):
        yield from positions(child, prefix + (sel,))


def free_vars(t: Term) -> frozenset[str]:
    """Free lambda variables and free function variables of `t`."""
    match t:
        case Var(name) | FunVar(name):
            return frozenset((name,))
        case BlackHole():
            return frozenset()
        case Abs(var, body):
            return free_vars(body) - {var}
        case App(fun, arg):
            return free_vars(fun) | free_vars(arg)
        case Let(bindings, body):
            names = {name for name, _ in bindings}
            inner = free_vars(body).union(*(free_vars(rhs) for _, rhs in bindings))
            return inner - names
    raise TypeError(t)


def bound_names(t: Term) -> set[str]:
    found = set()
    for _, sub in positions(t):
        match sub:
            case Abs(var, _):
                found.add(var)
            case Let(bindings, _):
                found.update(name for name, _ in bindings)
    return found


def all_names(t: Term) -> set[str]:
    return bound_names(t) | free_vars(t)


def term_size(t: Term) -> int:
    """Symbol count: one per node, one per lambda binder, one per binding equation."""
    match t:
        case Var() | FunVar() | BlackHole():
            return 1
        case Abs(_, body):
            return 2 + term_size(body)
        case App(fun, arg):
            return 1 + term_size(fun) + term_size(arg)
        case Let(bindings, body):
            return 1 + term_size(body) + sum(1 + term_size(rhs) for _, rhs in bindings)
    raise TypeError(t)


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def contains_black_hole(t: Term) -> bool:
    return any(isinstance(sub, BlackHole) for _, sub in positions(t))


# ---------------------------------------------------------------- alpha-equivalence


def _nameless(t: Term, env: tuple[tuple[str, ...], ...]):
    match t:
        case Var(name) | FunVar(name):
            for depth, frame in enumerate(reversed(env)):
                if name in frame:
                    return ("bound", depth, frame.index(name))
            return ("free", name)
        case BlackHole():
            return ("bh",)
        case Abs(var, body):
            return ("abs", _nameless(body, env + ((var,),)))
        case App(fun, arg):
            return ("app", _nameless(fun, env), _nameless(arg, env))
        case Let(bindings, body):
            inner = env + (tuple(name for name, _ in bindings),)
            return ("let", tuple(_nameless(rhs, inner) for _, rhs in bindings), _nameless(body, inner))
    raise TypeError(t)


def nameless(t: Term):
    """Locally nameless rendering: bound occurrences become (frame, slot) pairs."""
    return _nameless(t, ())


def alpha_eq(a: Term, b: Term) -> bool:
    return nameless(a) == nameless(b)


# ---------------------------------------------------------------- renaming


class NameSupply:
    """Hands out names that do not clash with any name seen so far."""

    def __init__(self, taken=()):
        self.taken = set(taken)
        self.counter = itertools.count()

    def fresh(self, hint: str) -> str:
        stem = hint.rstrip("0123456789'") or "v"
        while True:
            name = f"{stem}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def rename_bound(t: Term, supply: NameSupply, env: dict[str, str] | None = None) -> Term:
    """Give every binder in `t` a fresh name from `supply`."""
    env = env or {}
    match t:
        case Var(name):
            return Var(env.get(name, name))
        case FunVar(name):
            return FunVar(env.get(name, name))
        case BlackHole():
            return t
        case Abs(var, body):
            new = supply.fresh(var)
            return Abs(new, rename_bound(body, supply, {**env, var: new}))
        case App(fun, arg):
            return App(rename_bound(fun, supply, env), rename_bound(arg, supply, env))
        case Let(bindings, body):
            inner = {**env, **{name: supply.fresh(name) for name, _ in bindings}}
            return Let(
                tuple((inner[name], rename_bound(rhs, supply, inner)) for name, rhs in bindings),
                rename_bound(body, supply, inner),
            )
    raise TypeError(t)


def freshen(t: Term) -> Term:
    """Alpha-equivalent term whose binders all have distinct names."""
    return rename_bound(t, NameSupply(free_vars(t)))


def substitute(t: Term, mapping: dict[str, Term], supply: NameSupply | None = None) -> Term:
    """Capture-avoiding simultaneous substitution of variables (of either kind)."""
    if not mapping:
        return t
    if supply is None:
        taken = all_names(t).union(*(all_names(r) for r in mapping.values()), mapping)
        supply = NameSupply(taken)
    danger = frozenset().union(*(free_vars(r) for r in mapping.values()))
    return _subst(t, mapping, danger, supply)


def _subst(t: Term, mapping: dict[str, Term], danger: frozenset[str], supply: NameSupply) -> Term:
    match t:
        case Var(name) | FunVar(name):
            return mapping.get(name, t)
        case BlackHole():
            return t
        case App(fun, arg):
            return App(_subst(fun, mapping, danger, supply), _subst(arg, mapping, danger, supply))
        case Abs(var, body):
            mapping = {k: v for k, v in mapping.items() if k != var}
            if not mapping:
                return t
            if var in danger:
                new = supply.fresh(var)
                return Abs(new, _subst(body, {**mapping, var: Var(new)}, danger, supply))
            return Abs(var, _subst(body, mapping, danger, supply))
        case Let(bindings, body):
            names = [name for name, _ in bindings]
            mapping = {k: v for k, v in mapping.items() if k not in names}
            if not mapping:
                return t
            renames = {name: supply.fresh(name) for name in names if name in danger}
            inner = {**mapping, **{old: FunVar(new) for old, new in renames.items()}}
            return Let(
                tuple((renames.get(name, name), _subst(rhs, inner, danger, supply)) for name, rhs in bindings),
                _subst(body, inner, danger, supply),
            )
    raise TypeError(t)


# ---------------------------------------------------------------- garbage


def reachable_bindings(let: Let) -> list[int]:
    """Indices of the bindings reachable from the body through mutual references."""
    index = {name: i for i, (name, _) in enumerate(let.bindings)}
    seen: set[int] = set()
    todo = [index[n] for n in free_vars(let.body) if n in index]
    while todo:
        i = todo.pop()
        if i in seen:
            continue
        seen.add(i)
        todo.extend(index[n] for n in free_vars(let.bindings[i][1]) if n in index)
    return sorted(seen)


def remove_garbage(t: Term) -> Term:
    """Drop unreachable bindings at every Let and elide emptied groups."""
    match t:
        case Var() | FunVar() | BlackHole():
            return t
        case Abs(var, body):
            return Abs(var, remove_garbage(body))
        case App(fun, arg):
            return App(remove_garbage(fun), remove_garbage(arg))
        case Let(bindings, body):
            let = Let(tuple((n, remove_garbage(rhs)) for n, rhs in bindings), remove_garbage(body))
            keep = reachable_bindings(let)
            if not keep:
                return let.body
            return Let(tuple(let.bindings[i] for i in keep), let.body)
    raise TypeError(t)


# ---------------------------------------------------------------- required variables


def _lambda_depths(t: Term) -> dict[str, int]:
    depths = {}

    def walk(t: Term, depth: int) -> None:
        if isinstance(t, Abs):
            depths[t.var] = depth
            walk(t.body, depth + 1)
            return
        for _, child in children(t):
            walk(child, depth)

    walk(t, 0)
    return depths


def function_requirements(t: Term) -> dict[str, frozenset[str]]:
    """For every letrec-bound name, the lambda variables free in its complete unfolding.

    Least fixpoint over mutual recursion.  Assumes binder names are unique.
    """
    definitions = {}
    for _, sub in positions(t):
        if isinstance(sub, Let):
            definitions.update(sub.bindings)
    req = {name: frozenset() for name in definitions}
    changed = True
    while changed:
        changed = False
        for name, rhs in definitions.items():
            new = _required(rhs, req)
            if new != req[name]:
                req[name] = new
                changed = True
    return req


def _required(t: Term, req: dict[str, frozenset[str]]) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset((name,))
        case FunVar(name):
            return req.get(name, frozenset())
        case BlackHole():
            return frozenset()
        case Abs(var, body):
            return _required(body, req) - {var}
        case App(fun, arg):
            return _required(fun, req) | _required(arg, req)
        case Let(_, body):
            # bindings contribute through the occurrences of their names
            return _required(body, req)
    raise TypeError(t)


class RequiredVars:
    """Required lambda variables at every position of a freshened term."""

    def __init__(self, t: Term):
        self.term = t
        self.functions = function_requirements(t)
        self.depth = _lambda_depths(t)

    def at(self, sub: Term) -> frozenset[str]:
        return _required(sub, self.functions)

    def ordered(self, names) -> tuple[str, ...]:
        return tuple(sorted(names, key=self.depth.__getitem__))

    def map(self) -> dict[Position, tuple[str, ...]]:
        return {pos: self.ordered(self.at(sub)) for pos, sub in positions(self.term)}


def required_vars(t: Term) -> dict[Position, tuple[str, ...]]:
    """Map each position to the enclosing lambda variables its unfolding uses, outermost first."""
    return RequiredVars(t).map()
