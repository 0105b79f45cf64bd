import pytest
from hypothesis import given, settings

from conftest import closed_terms
from lletrec.syntax import (
    Abs,
    App,
    BlackHole,
    FunVar,
    Let,
    NameSupply,
    OpenTerm,
    ParseError,
    Var,
    alpha_eq,
    bound_names,
    children,
    free_vars,
    freshen,
    parse,
    positions,
    pretty,
    remove_garbage,
    required_vars,
    substitute,
    term_size,
)


def test_parse_identity():
    assert parse(r"\x. x") == Abs("x", Var("x"))


def test_parse_resolves_function_variables():
    t = parse(r"\f. let r = f r in r")
    assert t == Abs("f", Let((("r", App(Var("f"), FunVar("r"))),), FunVar("r")))


def test_parse_mutual_group():
    assert parse("let f = g; g = f in f") == Let((("f", FunVar("g")), ("g", FunVar("f"))), FunVar("f"))


def test_parse_lambda_symbol_multi_binder_and_comments():
    assert parse("λx y. x -- keep x\n") == Abs("x", Abs("y", Var("x")))


def test_lambda_shadows_function_name():
    t = parse(r"let f = \f. f in f")
    assert t == Let((("f", Abs("f", Var("f"))),), FunVar("f"))


def test_parse_black_hole_token():
    assert parse(r"\x. _|_ x") == Abs("x", App(BlackHole(), Var("x")))


@pytest.mark.parametrize(
    "source, where",
    [(r"\x. (x", (1, 7)), ("let f = x; f = y in f", (1, 12)), ("\n  x .", (2, 5)), ("", (1, 1))],
)
def test_parse_errors_carry_position(source, where):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert (info.value.line, info.value.col) == where


def test_duplicate_binding_message():
    with pytest.raises(ParseError, match="duplicate binding 'f'"):
        parse("let f = x; f = y in f")


def test_pretty_examples():
    assert pretty(Abs("x", Var("x"))) == r"\x. x"
    assert pretty(parse(r"\f. let r = f r in r")) == r"\f. let r = f r in r"
    assert pretty(BlackHole()) == "_|_"
    assert pretty(parse(r"(\x. x) (\y. y) z")) == r"(\x. x) (\y. y) z"
    assert pretty(parse(r"x (y z)")) == "x (y z)"


def test_alpha_eq_examples():
    assert alpha_eq(parse(r"\x. x"), parse(r"\y. y"))
    assert not alpha_eq(parse(r"\x. \y. x"), parse(r"\x. \y. y"))
    assert alpha_eq(parse(r"let f = \x. x in f"), parse(r"let g = \x. x in g"))


def test_alpha_eq_group_order_is_observable():
    assert not alpha_eq(parse("let f = x; g = y in f"), parse("let g = y; f = x in f"))


def test_free_vars_examples():
    assert free_vars(parse(r"\x. x y")) == {"y"}
    assert free_vars(parse("let f = x in f")) == {"x"}
    assert free_vars(parse(r"\f. let r = f r in r")) == frozenset()


def test_remove_garbage_examples():
    assert alpha_eq(remove_garbage(parse(r"\x. \y. let f = x in y")), parse(r"\x. \y. y"))
    assert remove_garbage(parse("let f = g; g = f in x")) == Var("x")
    fix = parse(r"\f. let r = f r in r")
    assert remove_garbage(fix) == fix


def test_remove_garbage_keeps_mutually_reachable():
    t = parse(r"let a = \x. b x; b = \y. a y; c = \z. z in a")
    assert [n for n, _ in remove_garbage(t).bindings] == ["a", "b"]


def test_freshen_examples():
    assert pretty(freshen(parse(r"(\x. x) (\x. x)"))) == r"(\x0. x0) (\x1. x1)"
    assert pretty(freshen(parse(r"\x. \x. x"))) == r"\x0. \x1. x1"
    t = freshen(parse(r"let f = \z. z in \z. f z"))
    zs = [n for n in bound_names(t) if n.startswith("z")]
    assert len(zs) == 2


def test_required_vars_examples():
    t = freshen(parse(r"\x. let f = x in \y. f (f y)"))
    assert required_vars(t)[("body", 0)] == (t.var,)
    t = parse(r"\x. \y. x")
    assert required_vars(t)[("body", "body")] == ("x",)


def test_required_vars_through_function():
    t = freshen(parse(r"\a. \b. let f = a in ((a a) (f a)) b"))
    a = t.var
    fa = ("body", "body", "in", "fun", "arg")
    assert required_vars(t)[fa] == (a,)


def test_required_vars_unfold_through_definitions():
    # y is required under the binding because the body passes through g
    t = freshen(parse(r"\x. \y. let g = \z. y in g x"))
    rv = required_vars(t)
    assert set(rv[("body", "body", 0)]) == {t.body.var}


def test_term_size_convention():
    assert term_size(parse(r"\x. x")) == 3
    assert term_size(parse("let f = x in f")) == 1 + 1 + 1 + 1


def test_substitute_avoids_capture():
    t = substitute(parse(r"\y. x y"), {"x": Var("y")})
    assert isinstance(t, Abs) and t.var != "y"
    assert free_vars(t) == {"y"}


def test_name_supply_avoids_taken():
    supply = NameSupply({"x0", "x1"})
    assert supply.fresh("x") not in {"x0", "x1"}


def test_open_term_reports_names():
    err = OpenTerm({"y", "x"})
    assert "x" in str(err) and "y" in str(err)


@settings(max_examples=150, deadline=None)
@given(closed_terms(25))
def test_round_trip(t):
    assert alpha_eq(parse(pretty(t)), t)


@settings(max_examples=150, deadline=None)
@given(closed_terms(25))
def test_freshen_idempotent_and_unique(t):
    once = freshen(t)
    assert alpha_eq(freshen(once), once)
    assert alpha_eq(once, t)
    binders = [sub.var for _, sub in positions(once) if isinstance(sub, Abs)]
    binders += [n for _, sub in positions(once) if isinstance(sub, Let) for n in sub.names]
    assert len(binders) == len(set(binders))


@settings(max_examples=150, deadline=None)
@given(closed_terms(25))
def test_remove_garbage_idempotent_and_shrinking(t):
    once = remove_garbage(t)
    assert remove_garbage(once) == once
    assert term_size(once) <= term_size(t)


@settings(max_examples=150, deadline=None)
@given(closed_terms(25))
def test_required_vars_scoping(t):
    t = remove_garbage(freshen(t))
    rv = required_vars(t)
    assert rv[()] == ()
    for pos, names in rv.items():
        enclosing = set()
        node = t
        for sel in pos:
            if isinstance(node, Abs):
                enclosing.add(node.var)
            node = dict(children(node))[sel]
        assert set(names) <= enclosing
