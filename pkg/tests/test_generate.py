import random

from lletrec.bisim import equiv
from lletrec.generate import equivalent_variant, let_floats, random_terms
from lletrec.syntax import alpha_eq, is_closed, parse, term_size
from lletrec.unfold import is_productive


def test_random_terms_respect_bounds():
    terms = random_terms(seed=3, count=100, max_size=15)
    assert all(is_closed(t) and term_size(t) <= 15 and is_productive(t) for t in terms)


def test_random_terms_are_reproducible():
    assert random_terms(9, 20, 20) == random_terms(9, 20, 20)


def test_let_float():
    floated = let_floats(parse(r"\x. let f = \y. y in f x"))
    assert len(floated) == 1 and alpha_eq(floated[0], parse(r"let f = \y. y in \x. f x"))
    assert let_floats(parse(r"\x. let f = x in f")) == []


def test_equivalent_variants():
    rng = random.Random(4)
    for t in random_terms(seed=4, count=40, max_size=15, productive=False):
        assert equiv(t, equivalent_variant(rng, t))
