"""Named example terms and the quadratic-growth family."""

from __future__ import annotations

from .syntax import Abs, App, Term, Var, parse

SOURCES: dict[str, str] = {
    # fixed-point combinator, plain and with a redundant unrolling
    "fix": r"\f. let r = f r in r",
    "fix_unrolled": r"\f. let r = f (f r) in r",
    "fix_twice": r"\f. let r = f (f (f r)) in r",
    "fix_let_body": r"\f. let r = f r in f r",
    "fix_mutual": r"\f. let r = f s; s = f r in r",
    # a diverging counter and two look-alikes: same shape, different unfoldings
    "counter": r"let f = \x. f x in f",
    "counter_eta": r"let f = \x. (\y. f y) x in f",
    "counter_other": r"let f = \x. (\y. f x) x in f",
    # one term, four ways of placing the bindings
    "placement_top": r"let I = \z. z in \x. \y. let f = x in ((y I) (I y)) (f f)",
    "placement_outer": r"\x. let I = \z. z in \y. let f = x in ((y I) (I y)) (f f)",
    "placement_inner": r"\x. \y. let I = \z. z; f = x in ((y I) (I y)) (f f)",
    "placement_alias": r"\x. let I = \z. z in \y. let f = x; g = I in ((y g) (g y)) (f f)",
    # where a binding sits decides where its delimiters go
    "let_outside": r"\x. let f = x in \y. f (f y)",
    "let_inside": r"\x. \y. let f = x in f (f y)",
    "let_inside_pair": r"\x. \y. let f = x in (f f) y",
    # meaningless bindings
    "self_loop": r"let f = f in f",
    "mutual_loop": r"let f = g; g = f in f",
    "nested_loop": r"let f = let g = f in g in f",
    "applied_hole": r"\x. let f = f in f x",
    "shared_hole": r"\x. let f = f; g = f in g (g x)",
    # sharing and scoping examples
    "identity": r"\x. x",
    "id_id": r"(\x. x) (\x. x)",
    "self_apply_twice": r"\x. let f = \y. (f x) y in f f",
    "unused_binding": r"\x. \y. let f = x in y",
    "lifted_fun": r"\a. \b. let f = a in ((a a) (f a)) b",
    "church_two": r"\s. \z. s (s z)",
    "omega_like": r"let w = \x. x x in w w",
    "deep_scope": r"\a. \b. \c. let g = \d. a (d c) in g (g b)",
    "even_odd": r"\z. let e = \n. n z o; o = \n. n e z in e",
    "nested_let": r"\x. let f = let g = \y. g (x y) in g in f f",
}


def corpus() -> dict[str, Term]:
    return {name: parse(source) for name, source in SOURCES.items()}


def quadratic_family(n: int) -> Term:
    """M_n: a term of linear size whose scope delimiters take quadratic space.

    Under \\x0 and \\x1, n abstractions over x2 alternate with n-1 over x1.
    Every body applies x0 to the variable of the abstraction just above it,
    so each level closes one more scope than the previous.
    """
    if n < 1:
        raise ValueError("n must be positive")
    binders = ["x1"] + ["x2", "x1"] * (n - 1) + ["x2"]
    body: Term = App(App(Var("x0"), Var(binders[-2])), Var(binders[-1]))
    term = Abs(binders[-1], body)
    for i in range(len(binders) - 2, 0, -1):
        term = Abs(binders[i], App(App(Var("x0"), Var(binders[i - 1])), term))
    term = Abs("x1", App(App(Var("x0"), Var("x1")), term))
    return Abs("x0", term)
