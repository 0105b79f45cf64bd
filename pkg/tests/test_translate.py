from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given, settings

from conftest import closed_terms
from lletrec.bisim import collapse, funbisim, iso
from lletrec.corpus import SOURCES, quadratic_family
from lletrec.syntax import OpenTerm, parse, term_size
from lletrec.termgraph import from_json, graph_size, is_eager_scope, validate
from lletrec.translate import Semantics, graphsem

FIXTURES = Path(__file__).parent / "fixtures"
TRACED_TERM = r"\x. \y. let I = \z. z; f = x in ((y I) (I y)) (f f)"


def labels(g):
    return Counter(g.labels)


def test_fix_graph():
    g = graphsem(parse(SOURCES["fix"]))
    assert labels(g) == {"lam": 1, "app": 1, "var": 1}
    assert graph_size(g) == 3


def test_unrolled_fix_graph_has_one_var_per_occurrence():
    g = graphsem(parse(SOURCES["fix_unrolled"]))
    assert labels(g) == {"lam": 1, "app": 2, "var": 2}


def test_black_hole_chain():
    g = graphsem(parse(SOURCES["applied_hole"]))
    assert labels(g)["bh"] == 1
    assert labels(g)["del"] == 1
    bh = g.labels.index("bh")
    assert [v for v, _, w in g.edges() if w == bh] == [g.labels.index("del")]


def test_meaningless_terms_are_one_black_hole():
    for name in ("self_loop", "mutual_loop", "nested_loop"):
        g = graphsem(parse(SOURCES[name]))
        assert g.labels == ("bh",)


def test_open_term_rejected():
    with pytest.raises(OpenTerm):
        graphsem(parse(r"\x. y"))


def test_semantics_accepts_strings():
    t = parse(SOURCES["fix"])
    assert graphsem(t, "min") == graphsem(t, Semantics.MIN)


def test_deterministic_ids():
    t = parse(SOURCES["placement_alias"])
    assert graphsem(t) == graphsem(t)


def test_hand_traced_minimal_prefix_graph():
    fixture = from_json((FIXTURES / "traced_min.json").read_text())
    assert iso(graphsem(parse(TRACED_TERM), Semantics.MIN), fixture)
    assert iso(graphsem(parse(SOURCES["placement_outer"]), Semantics.MIN), fixture)


def test_hand_traced_maximal_prefix_graph():
    fixture = from_json((FIXTURES / "traced_max.json").read_text())
    assert iso(graphsem(parse(TRACED_TERM), Semantics.MAX), fixture)


def test_placement_examples():
    names = ["placement_top", "placement_outer", "placement_inner", "placement_alias"]
    mins = [graphsem(parse(SOURCES[n]), Semantics.MIN) for n in names]
    maxs = [graphsem(parse(SOURCES[n]), Semantics.MAX) for n in names]
    assert all(iso(mins[0], g) for g in mins)
    assert iso(mins[0], maxs[0])
    assert not iso(maxs[0], maxs[1]) and not iso(maxs[0], maxs[2]) and not iso(maxs[1], maxs[2])
    assert iso(maxs[2], maxs[3])


def test_let_structure_decides_delimiters():
    graphs = [graphsem(parse(SOURCES[n])) for n in ("let_outside", "let_inside", "let_inside_pair")]
    for a in range(3):
        for b in range(a + 1, 3):
            assert not iso(graphs[a], graphs[b])
    # only delimiters differ in number
    assert [labels(g)["del"] for g in graphs] == [2, 1, 1]
    assert all(labels(g) - Counter({"del": labels(g)["del"]}) == labels(graphs[0]) - Counter({"del": 2}) for g in graphs[:2])


def test_quadratic_family_sizes():
    # counted by hand for n = 1, 2: each level adds lam, two apps, two vars and
    # one delimiter per scope closed above the x0 occurrence
    sizes = [(term_size(quadratic_family(n)), graph_size(graphsem(quadratic_family(n)))) for n in (1, 2)]
    assert sizes == [(15, 15), (27, 32)]


def _merges_only_delimiters(hom, g) -> bool:
    images: dict[int, list[int]] = {}
    for v, w in hom.items():
        images.setdefault(w, []).append(v)
    return all(len(vs) == 1 or all(g.labels[v] == "del" for v in vs) for vs in images.values())


def test_min_maps_onto_max_by_merging_delimiters(named):
    for t in named.values():
        small, large = graphsem(t, Semantics.MAX), graphsem(t, Semantics.MIN)
        hom = funbisim(large, small)
        assert hom is not None and _merges_only_delimiters(hom, large)


@settings(max_examples=150, deadline=None)
@given(closed_terms(25))
def test_class_membership(t):
    for semantics in Semantics:
        g = graphsem(t, semantics)
        assert is_eager_scope(g, validate(g))


@settings(max_examples=150, deadline=None)
@given(closed_terms(25))
def test_min_to_max_delimiter_sharing(t):
    small, large = graphsem(t, Semantics.MAX), graphsem(t, Semantics.MIN)
    hom = funbisim(large, small)
    assert hom is not None and _merges_only_delimiters(hom, large)
    assert iso(collapse(small)[0], collapse(large)[0])


@settings(max_examples=150, deadline=None)
@given(closed_terms(25))
def test_quadratic_bound(t):
    assert graph_size(graphsem(t)) <= term_size(t) ** 2
