import itertools
import math

import pytest

from quandleforge.errors import BudgetExceeded, CapExceeded, ParseError
from quandleforge.groups import (FiniteGroup, GroupPresentation, automorphism_classes,
                                 automorphism_order, automorphisms, check_group_axioms,
                                 cyclic_group, element_order, format_group_table,
                                 group_from_permutations, group_from_presentation,
                                 groups_isomorphic, parse_group_presentation,
                                 parse_group_table, power)

Q8_TEXT = "group<x, y | x^2 = y^2 = (x*y)^2>"
BT_TEXT = "group<x, y | x^3 = y^3 = (x*y)^2>"
BI_TEXT = "group<x, y | x^3 = y^5 = (x*y)^2>"


def build(text, budget=10_000):
    return group_from_presentation(parse_group_presentation(text), budget=budget)


def brute_element_orders(g):
    """Orders by repeated multiplication straight off the table."""
    orders = []
    for x in range(g.order):
        cur, m = x, 1
        while cur != g.identity:
            cur = g.mul[cur][x]
            m += 1
        orders.append(m)
    return orders


def brute_automorphism_count(g):
    """Census over all bijections; only sane for order <= 8."""
    count = 0
    for perm in itertools.permutations(range(g.order)):
        if perm[g.identity] != g.identity:
            continue
        if all(perm[g.mul[x][y]] == g.mul[perm[x]][perm[y]]
               for x in range(g.order) for y in range(g.order)):
            count += 1
    return count


# -- parsing -----------------------------------------------------------------

def test_parse_presentation_basic():
    p = parse_group_presentation("group<x | x^3>")
    assert p.generators == ("x",)
    assert p.relators == ((1, 1, 1),)


def test_parse_chain_expansion():
    p = parse_group_presentation("group<x, y | x^2 = (x*y)^3 = y^3, x^4>")
    assert len(p.relators) == 3  # two pairwise relators from the chain plus x^4


def test_parse_negative_power_and_parens():
    p = parse_group_presentation("group<x, y | x^2*y^-3, (x*y^-1)^2>")
    assert p.relators[0] == (1, 1, -2, -2, -2)
    assert p.relators[1] == (1, -2, 1, -2)


@pytest.mark.parametrize("bad", [
    "group<x | x^>",
    "group<x,  | x>",
    "group<x | y^2>",
    "quandle<x | x^2>",
    "group<x | x^2",
])
def test_parse_errors_carry_position(bad):
    with pytest.raises(ParseError) as info:
        parse_group_presentation(bad)
    assert info.value.line >= 1 and info.value.column >= 1


def test_presentation_rejects_unknown_letters():
    with pytest.raises(ValueError):
        GroupPresentation(("x",), ((1, 2),))


# -- coset enumeration -------------------------------------------------------

def test_cyclic_order_three():
    g = build("group<x | x^3>", budget=100)
    assert g.order == 3
    check_group_axioms(g)


@pytest.mark.parametrize("text, expected", [
    (Q8_TEXT, 8),
    (BT_TEXT, 24),
    (BI_TEXT, 120),
])
def test_binary_polyhedral_orders(text, expected):
    g = build(text)
    assert g.order == expected
    check_group_axioms(g)


def test_enumeration_is_deterministic():
    a = build(BT_TEXT)
    b = build(BT_TEXT)
    assert a.mul == b.mul and a.inv == b.inv and a.identity == b.identity


def test_identity_is_element_zero():
    for text in (Q8_TEXT, BT_TEXT, "group<x | x^6>"):
        assert build(text).identity == 0


def test_free_group_exceeds_budget():
    with pytest.raises(BudgetExceeded) as info:
        build("group<x, y | >", budget=200)
    assert info.value.allocated is not None


def test_group_table_round_trip():
    g = build(Q8_TEXT)
    again = parse_group_table(format_group_table(g))
    assert again.mul == g.mul and again.identity == g.identity


def test_group_from_permutations_quaternion():
    g = group_from_permutations(
        [[2, 3, 1, 0, 7, 6, 4, 5], [4, 5, 6, 7, 1, 0, 3, 2]])
    assert g.order == 8
    check_group_axioms(g)
    iso, _ = groups_isomorphic(g, build(Q8_TEXT))
    assert iso


# -- element orders ----------------------------------------------------------

def test_element_order_identity():
    g = cyclic_group(5)
    assert element_order(g, g.identity) == 1


def test_element_order_cyclic_generator():
    g = cyclic_group(6)
    assert element_order(g, 1) == 6


def test_element_order_matches_brute_force():
    g = build(Q8_TEXT)
    orders = brute_element_orders(g)
    assert [element_order(g, x) for x in range(g.order)] == orders
    # the quaternion group has a unique involution
    assert orders.count(2) == 1
    assert element_order(g, orders.index(2)) == 2


# -- automorphisms -----------------------------------------------------------

def test_trivial_group_has_one_automorphism():
    auts = automorphisms(cyclic_group(1))
    assert len(auts) == 1 and auts[0].perm == (0,)


def test_cyclic_three_has_two_automorphisms():
    auts = automorphisms(cyclic_group(3))
    assert [f.perm for f in auts] == [(0, 1, 2), (0, 2, 1)]


def test_quaternion_automorphism_count_vs_census():
    g = build(Q8_TEXT)
    auts = automorphisms(g)
    assert len(auts) == 24
    assert brute_automorphism_count(g) == 24
    perms = {f.perm for f in auts}
    assert len(perms) == 24
    # closed under composition
    for f in auts[:6]:
        for h in auts[:6]:
            composed = tuple(f.perm[h.perm[x]] for x in range(g.order))
            assert composed in perms


def test_quaternion_has_order_three_automorphism():
    g = build(Q8_TEXT)
    orders = sorted({automorphism_order(f) for f in automorphisms(g)})
    assert 3 in orders
    f = next(f for f in automorphisms(g) if automorphism_order(f) == 3)
    # brute-force composition: three applications give the identity, one does not
    twice = tuple(f.perm[f.perm[x]] for x in range(g.order))
    thrice = tuple(f.perm[v] for v in twice)
    assert thrice == tuple(range(g.order)) and f.perm != tuple(range(g.order))


def test_automorphism_list_is_lexicographic_and_deterministic():
    g = build(BT_TEXT)
    auts = automorphisms(g)
    gens_first = auts[0]
    assert gens_first.perm == tuple(range(g.order))  # identity comes first
    again = group_from_presentation(parse_group_presentation(BT_TEXT))
    assert [f.perm for f in automorphisms(again)] == [f.perm for f in auts]


def test_automorphism_order_divides_group_of_automorphisms():
    for text in ("group<x | x^5>", Q8_TEXT, BT_TEXT):
        g = build(text)
        auts = automorphisms(g)
        for f in auts:
            assert len(auts) % automorphism_order(f) == 0


def test_automorphism_cap():
    with pytest.raises(CapExceeded):
        automorphisms(cyclic_group(361))


def test_automorphism_classes_partition():
    g = build(Q8_TEXT)
    classes = automorphism_classes(g)
    assert len(classes) == len(automorphisms(g))
    assert classes[0] == 0


# -- powers ------------------------------------------------------------------

def test_power_zero_is_identity():
    g = cyclic_group(7)
    f = automorphisms(g)[1]
    assert power(f, 0).perm == tuple(range(7))


def test_power_order_formula():
    g = cyclic_group(11)
    for f in automorphisms(g):
        o = automorphism_order(f)
        for s in range(-6, 13):
            expected = 1 if s == 0 else o // math.gcd(o, s)
            assert automorphism_order(power(f, s)) == expected


def test_inversion_has_order_two():
    g = cyclic_group(5)
    inv = next(f for f in automorphisms(g) if f.perm == (0, 4, 3, 2, 1))
    assert automorphism_order(inv) == 2


def test_negative_power_is_inverse():
    g = cyclic_group(5)
    f = next(f for f in automorphisms(g) if automorphism_order(f) == 4)
    back = power(f, -1)
    assert tuple(back.perm[f.perm[x]] for x in range(5)) == tuple(range(5))


# -- isomorphism -------------------------------------------------------------

def test_isomorphic_to_itself_with_identity_witness():
    g = build(Q8_TEXT)
    ok, witness = groups_isomorphic(g, g)
    assert ok and witness == tuple(range(g.order))


def test_cyclic_four_vs_klein_four():
    c4 = cyclic_group(4)
    klein = group_from_presentation(
        parse_group_presentation("group<x, y | x^2, y^2, x*y*x^-1*y^-1>"))
    assert klein.order == 4
    ok, _ = groups_isomorphic(c4, klein)
    assert not ok


def test_presented_and_permutation_realizations_isomorphic():
    pts = [(x, y) for x in range(5) for y in range(5) if (x, y) != (0, 0)]
    idx = {v: i for i, v in enumerate(pts)}

    def act(m):
        a, b, c, d = m
        return [idx[((a * x + b * y) % 5, (c * x + d * y) % 5)] for (x, y) in pts]

    sl25 = group_from_permutations([act((1, 1, 0, 1)), act((0, 4, 1, 0))])
    assert sl25.order == 120
    presented = build(BI_TEXT)
    ok, witness = groups_isomorphic(presented, sl25)
    assert ok
    # verify the witness really is an isomorphism
    for x in range(120):
        for y in range(0, 120, 7):
            assert witness[presented.mul[x][y]] == sl25.mul[witness[x]][witness[y]]


def test_isomorphism_symmetric_on_tested_pairs():
    g1 = build("group<x, y | x^2, y^3, (x*y)^3>")  # order 12
    g2 = build("group<a, b | b^3, a^2, (b*a)^3>")
    ok12, _ = groups_isomorphic(g1, g2)
    ok21, _ = groups_isomorphic(g2, g1)
    assert ok12 and ok21


def test_isomorphism_cap():
    with pytest.raises(CapExceeded):
        groups_isomorphic(cyclic_group(400), cyclic_group(400))


# -- table validation --------------------------------------------------------

def test_constructor_rejects_bad_identity():
    with pytest.raises(ValueError):
        FiniteGroup([[1, 0], [0, 1]], identity=0)


def test_constructor_rejects_missing_inverse():
    # x*y = x has an identity column but no inverses
    with pytest.raises(ValueError):
        FiniteGroup([[0, 0, 0], [1, 1, 1], [2, 2, 2]], identity=0)
