"""Random closed terms for property tests and the acceptance runs."""

from __future__ import annotations

import random

from .syntax import Abs, App, FunVar, Let, Term, Var, free_vars, freshen, positions, replace_at, term_size
from .unfold import Rule, is_productive, step


class _Generator:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0

    def fresh(self, stem: str) -> str:
        self.counter += 1
        return f"{stem}{self.counter}"

    def term(self, budget: int, lams: tuple[str, ...], funs: tuple[str, ...]) -> Term:
        rng = self.rng
        names = [Var(x) for x in lams] + [FunVar(f) for f in funs]
        if budget <= 2 or (names and rng.random() < 1.5 / budget):
            if names:
                return rng.choice(names)
            x = self.fresh("x")
            return Abs(x, Var(x))
        kind = rng.choices(("abs", "app", "let"), weights=(3, 4, 2))[0]
        if kind == "abs" or not names:
            x = self.fresh("x")
            return Abs(x, self.term(budget - 2, lams + (x,), funs))
        if kind == "app":
            left = rng.randint(1, budget - 2)
            return App(self.term(left, lams, funs), self.term(budget - 1 - left, lams, funs))
        count = rng.choice((1, 1, 2, 3))
        new = tuple(self.fresh("f") for _ in range(count))
        scope = funs + new
        shares = [rng.randint(1, max(1, (budget - 1) // (count + 1))) for _ in range(count)]
        bindings = tuple((f, self.term(share, lams, scope)) for f, share in zip(new, shares))
        body = self.term(max(1, budget - 1 - sum(shares) - count), lams, scope)
        return Let(bindings, body)


def random_term(rng: random.Random, max_size: int) -> Term:
    """A closed term with term_size at most max_size."""
    gen = _Generator(rng)
    while True:
        t = gen.term(rng.randint(3, max_size), (), ())
        if term_size(t) <= max_size:
            return t


def random_productive_term(rng: random.Random, max_size: int) -> Term:
    while True:
        t = random_term(rng, max_size)
        if is_productive(t):
            return t


def random_terms(seed: int, count: int, max_size: int, productive: bool = True) -> list[Term]:
    rng = random.Random(seed)
    pick = random_productive_term if productive else random_term
    return [pick(rng, max_size) for _ in range(count)]


def let_floats(t: Term) -> list[Term]:
    """Terms obtained by moving one binding group out of the abstraction right above it."""
    out = []
    for pos, sub in positions(t):
        match sub:
            case Abs(var, Let(bindings, body)):
                if not any(var in free_vars(rhs) for _, rhs in bindings):
                    out.append(replace_at(t, pos, Let(bindings, Abs(var, body))))
    return out


def equivalent_variant(rng: random.Random, t: Term) -> Term:
    """A term with the same unfolding as t: one rec step or one let-float, else t itself."""
    t = freshen(t)
    recs = [u for _, rule, u in step(t, with_bh=False) if rule is Rule.REC]
    floats = let_floats(t)
    choices = [c for c in (recs, floats) if c]
    if not choices:
        return t
    return rng.choice(rng.choice(choices))
