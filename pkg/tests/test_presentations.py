import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quandleforge.errors import BudgetExceeded, ParseError
from quandleforge.presentations import (Gen, Op, QuandlePresentation, add_type_relations,
                                        complete, format_term, parse, simplify,
                                        substitute, term_generators)
from quandleforge.quandles import dihedral_quandle, is_connected, isomorphic, type_of, validate

TREFOIL_SPUN = "quandle<a, b | (a*b)*a = b, a*^{n} b = a>"


def spun(n):
    return parse(TREFOIL_SPUN.replace("{n}", str(n)))


# -- parsing -----------------------------------------------------------------

def test_parse_twist_spun_trefoil():
    p = parse("quandle<a,b | (a*b)*a=b, a*^4 b=a>")
    assert p.generators == ("a", "b")
    assert len(p.relations) == 2
    lhs, rhs = p.relations[1]
    assert lhs == Op(Gen("a"), Gen("b"), 4) and rhs == Gen("a")


def test_parse_no_relations():
    p = parse("quandle<a | >")
    assert p.generators == ("a",) and p.relations == ()


def test_parse_inverse_and_negative_powers():
    p = parse("quandle<a, b | a*-b = a*^-1 b>")
    lhs, rhs = p.relations[0]
    assert lhs == Op(Gen("a"), Gen("b"), -1) == rhs


def test_parse_left_associative():
    p = parse("quandle<a, b, c | a*b*c = a>")
    assert p.relations[0][0] == Op(Op(Gen("a"), Gen("b"), 1), Gen("c"), 1)


@pytest.mark.parametrize("bad, line, column", [
    ("quandle<a,b | a*=b>", 1, 17),
    ("quandle<a | a=a", 1, 16),
    ("quandle<| a=a>", 1, 9),
    ("group<a | >", 1, 1),
    ("quandle<a | a=b>", 1, 15),
])
def test_parse_errors_have_positions(bad, line, column):
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert info.value.line == line and info.value.column == column


def test_parse_error_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("quandle<a,b | a*=b>")
    assert "ident" in info.value.expected and "(" in info.value.expected


def test_to_text_round_trip():
    for text in ("quandle<a, b | (a*b)*a = b, a*^4 b = a>",
                 "quandle<a | >",
                 "quandle<a, b, c | a*-b = c, a*^-2 b = c*b*a>"):
        p = parse(text)
        assert parse(p.to_text()) == p


def test_presentation_validates_leaf_names():
    with pytest.raises(ValueError):
        QuandlePresentation(("a",), ((Gen("a"), Gen("b")),))


_gen_terms = st.recursive(
    st.sampled_from(("a", "b", "c")).map(Gen),
    lambda kids: st.builds(Op, kids, kids, st.integers(min_value=-4, max_value=4)),
    max_leaves=8,
)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(_gen_terms, _gen_terms), min_size=0, max_size=3))
def test_random_presentations_round_trip(relations):
    p = QuandlePresentation(("a", "b", "c"), tuple(relations))
    assert parse(p.to_text()) == p


def test_term_helpers():
    term = Op(Op(Gen("a"), Gen("b"), 1), Gen("a"), 1)
    assert term_generators(term) == {"a", "b"}
    swapped = substitute(term, "b", Gen("c"))
    assert term_generators(swapped) == {"a", "c"}
    assert format_term(term) == "a*b*a"


# -- completion --------------------------------------------------------------

def test_free_single_generator_collapses():
    result = complete(parse("quandle<a | >"))
    assert result.quandle.order == 1
    assert result.generator_images == {"a": 0}


@pytest.mark.parametrize("n, expected", [(2, 3), (3, 8), (4, 24), (5, 120)])
def test_twist_spun_trefoil_orders(n, expected):
    result = complete(spun(n))
    assert result.quandle.order == expected
    assert type_of(result.quandle) == n
    assert is_connected(result.quandle)
    assert validate(result.quandle).ok


def test_two_twist_spun_trefoil_is_dihedral():
    result = complete(spun(2))
    ok, _ = isomorphic(result.quandle, dihedral_quandle(3))
    assert ok
    from quandleforge.quandles import inner_group_order
    assert inner_group_order(result.quandle) == 6


def test_completion_deterministic():
    a = complete(spun(4))
    b = complete(spun(4))
    assert a.quandle.op == b.quandle.op
    assert a.generator_images == b.generator_images
    assert a.stats == b.stats


def test_completion_budget_exceeded():
    with pytest.raises(BudgetExceeded) as info:
        complete(spun(7), budget=500)
    assert info.value.allocated == 500


def test_completion_stats_accounting():
    result = complete(spun(3))
    assert result.stats.allocated >= result.quandle.order
    assert result.stats.merges >= 0


def test_completion_serialize():
    import json as _json
    result = complete(spun(2))
    header, _, table = result.serialize().partition("\n")
    payload = _json.loads(header)
    assert payload["generator_images"] == {"a": 0, "b": 1}
    assert payload["stats"]["allocated"] == result.stats.allocated
    assert table.startswith("quandle 3\n")


def test_generator_images_generate():
    result = complete(spun(3))
    images = set(result.generator_images.values())
    assert images <= set(range(result.quandle.order))
    # closure of the images under both operations reaches everything
    q = result.quandle
    span = set(images)
    changed = True
    while changed:
        changed = False
        for a in list(span):
            for b in list(span):
                for v in (q.op[a][b], q.inverse_columns()[b][a]):
                    if v not in span:
                        span.add(v)
                        changed = True
    assert span == set(range(q.order))


def test_merged_generators_share_an_image():
    result = complete(parse("quandle<a, b | a = b>"))
    assert result.quandle.order == 1
    assert result.generator_images["a"] == result.generator_images["b"]


# -- type relations ----------------------------------------------------------

def test_add_type_relations_appends_ordered_pairs():
    p = parse("quandle<a, b | (a*b)*a = b>")
    typed = add_type_relations(p, 4)
    assert len(typed.relations) == 3
    assert typed.relations[1] == (Op(Gen("a"), Gen("b"), 4), Gen("a"))
    assert typed.relations[2] == (Op(Gen("b"), Gen("a"), 4), Gen("b"))


def test_add_type_relations_n_one_trivializes():
    p = parse("quandle<a, b | >")
    result = complete(add_type_relations(p, 1))
    assert result.quandle.order == 2
    assert type_of(result.quandle) == 1


def test_symmetric_type_relation_is_redundant():
    plain = complete(spun(4)).quandle
    both = complete(add_type_relations(parse("quandle<a, b | (a*b)*a = b>"), 4)).quandle
    ok, _ = isomorphic(plain, both)
    assert ok


def test_add_type_relations_idempotent_on_completion():
    # appending the relations the completed quandle already satisfies is harmless
    base = spun(3)
    completed = complete(base).quandle
    again = complete(add_type_relations(base, type_of(completed))).quandle
    ok, _ = isomorphic(completed, again)
    assert ok


# -- simplification ----------------------------------------------------------

def test_simplify_eliminates_defined_generator():
    p = parse("quandle<a, b, c | c = a*b, c*a = b>")
    s = simplify(p)
    assert s.generators == ("a", "b")
    assert len(s.relations) == 1


def test_simplify_drops_tautologies():
    p = parse("quandle<a, b | a = a, a*b = a*b>")
    s = simplify(p)
    assert s.relations == ()
    assert s.generators == ("a", "b")


def test_simplify_keeps_last_generator():
    s = simplify(parse("quandle<a, b | a = b>"))
    assert len(s.generators) == 1


def test_simplify_preserves_completion():
    for text in ("quandle<a, b, c | c = a*b, (c*a) = b, a*^3 b = a>",
                 "quandle<a, b | (a*b)*a = b, a*^4 b = a>",
                 "quandle<x, y, z | y*x = z, x*z = y, z*y = x, x*^2 y = x, y*^2 x = y>"):
        p = parse(text)
        full = complete(p).quandle
        reduced = complete(simplify(p)).quandle
        ok, _ = isomorphic(full, reduced)
        assert ok
