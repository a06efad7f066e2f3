"""Acceptance suite: one test per criterion, exact tolerances, timed budgets.

Each test prints a single PASS line on success (run with -s to see them all).
"""

import itertools
import math
import random
import time

import pytest

from quandleforge.catalog import TwistSpinSpec, builtin_catalog, twist_spin_presentation
from quandleforge.classifier import classify, triple_report
from quandleforge.groups import (automorphism_order, automorphisms, check_group_axioms,
                                 group_from_presentation, groups_isomorphic,
                                 parse_group_presentation, power)
from quandleforge.presentations import complete, parse
from quandleforge.quandles import (dihedral_quandle, enumerate_quandles, find_monodromy, galex,
                                   hom_count, isomorphic, type_of)

TREFOIL_FAMILY = "quandle<a,b | (a*b)*a=b, a*^{n} b=a>"
GOLDEN_ORDERS = {2: 3, 3: 8, 4: 24, 5: 120}


@pytest.fixture(scope="module")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="module")
def golden_completions():
    results = {}
    for n in (2, 3, 4, 5):
        start = time.monotonic()
        results[n] = complete(parse(TREFOIL_FAMILY.replace("{n}", str(n)))).quandle
        assert time.monotonic() - start < 5.0
    return results


def brute_force_isomorphic(q1, q2):
    """All-bijections oracle, independent of the library search."""
    if q1.order != q2.order:
        return False
    n = q1.order
    for perm in itertools.permutations(range(n)):
        if all(perm[q1.op[x][y]] == q2.op[perm[x]][perm[y]]
               for x in range(n) for y in range(n)):
            return True
    return False


def test_criterion_1_golden_orders(catalog, golden_completions):
    for n, expected in GOLDEN_ORDERS.items():
        assert golden_completions[n].order == expected
    start = time.monotonic()
    q = complete(twist_spin_presentation(TwistSpinSpec(catalog.knot("t_{2,5}"), 3))).quandle
    assert time.monotonic() - start < 5.0
    assert q.order == 120
    print("\nACCEPTANCE 1 PASS: golden orders 3, 8, 24, 120 and t_{2,5}@3 -> 120")


def test_criterion_2_type_equals_twists(catalog, golden_completions):
    for n, q in golden_completions.items():
        assert type_of(q) == n
    for inst in catalog.instances:
        assert type_of(inst.quandle) == inst.n
        assert type_of(galex(inst.group, inst.monodromy)) == inst.n
    print("\nACCEPTANCE 2 PASS: quandle type equals the twist parameter everywhere")


def _seeded_small_presentations(count=20):
    rng = random.Random(20250811)
    out = []
    while len(out) < count:
        kind = rng.choice(("cyclic", "abelian", "dihedral", "dicyclic", "triangle"))
        if kind == "cyclic":
            m = rng.randrange(2, 61)
            out.append((f"group<x | x^{m}>", m))
        elif kind == "abelian":
            a, b = rng.randrange(2, 9), rng.randrange(2, 9)
            if a * b <= 60:
                out.append((f"group<x, y | x^{a}, y^{b}, x*y*x^-1*y^-1>", a * b))
        elif kind == "dihedral":
            m = rng.randrange(3, 31)
            if 2 * m <= 60:
                out.append((f"group<x, y | x^2, y^{m}, (x*y)^2>", 2 * m))
        elif kind == "dicyclic":
            m = rng.randrange(2, 16)
            if 4 * m <= 60:
                out.append((f"group<x, y | x^{m} = y^2 = (x*y)^2>", 4 * m))
        else:
            c = rng.choice((3, 4, 5))
            out.append((f"group<x, y | x^2, y^3, (x*y)^{c}>", {3: 12, 4: 24, 5: 60}[c]))
    return out


def test_criterion_3_type_equals_automorphism_order(catalog):
    start = time.monotonic()
    groups = [g for g in catalog.groups.values() if g.order <= 60]
    assert len(groups) == 5
    for text, expected in _seeded_small_presentations():
        g = group_from_presentation(parse_group_presentation(text))
        assert g.order == expected
        check_group_axioms(g)
        groups.append(g)
    checked = 0
    for g in groups:
        for f in automorphisms(g):
            assert type_of(galex(g, f)) == automorphism_order(f)
            checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    print(f"\nACCEPTANCE 3 PASS: type(galex) == order(automorphism) for {checked} "
          f"automorphisms over {len(groups)} groups in {elapsed:.1f}s")


def test_criterion_4_cross_path_oracle(catalog):
    for inst in catalog.instances:
        realized = galex(inst.group, inst.monodromy)
        ok, _ = isomorphic(inst.quandle, realized)
        assert ok, (inst.knot.name, inst.n)
        # the monodromy is rediscoverable deterministically
        again = find_monodromy(inst.group, inst.n, inst.quandle)
        assert again.perm == inst.monodromy.perm
    print("\nACCEPTANCE 4 PASS: completion path and group path agree on all 10 instances")


def test_criterion_5_triple_desk_instance(catalog):
    report = triple_report(2, 3, 5)
    assert all(ok for _, _, ok in report.groups_isomorphic)
    assert not any(ok for _, _, ok in report.quandles_isomorphic)
    assert sorted(report.quandle_types) == [2, 3, 5]
    assert report.quandle_orders == (120, 120, 120)
    # the shared group really is the same group under two independent builds
    ok, _ = groups_isomorphic(catalog.groups["2I"], catalog.permutation_realizations["2I"])
    assert ok
    print("\nACCEPTANCE 5 PASS: (2,3,5) triple has one group, three quandle types")


def test_criterion_6_coloring_counts(catalog):
    r3 = dihedral_quandle(3)
    qa = catalog.instance("t_{3,4}", 2).quandle
    qb = catalog.instance("t_{2,3}", 4).quandle
    assert qa.order == qb.order == 24
    assert hom_count(qa, r3) == 9
    assert hom_count(qb, r3) == 9
    assert (type_of(qa), type_of(qb)) == (2, 4)
    print("\nACCEPTANCE 6 PASS: both order-24 quandles have 9 colorings, types 2 vs 4")


def test_criterion_7_branched_types(catalog):
    checked = 0
    for inst in catalog.instances:
        for s in range(1, 8):
            if math.gcd(inst.n, s) != 1:
                continue
            q = galex(inst.group, power(inst.monodromy, s))
            assert type_of(q) == inst.n, (inst.knot.name, inst.n, s)
            checked += 1
    assert checked >= 40
    print(f"\nACCEPTANCE 7 PASS: branched twist spins keep type n over {checked} (n, s) pairs")


def test_criterion_8_dihedral_collision(catalog):
    r5 = dihedral_quandle(5)
    qa = catalog.instance("figure-eight", 2).quandle
    qb = catalog.instance("t_{2,5}", 2).quandle
    assert isomorphic(qa, r5)[0] and isomorphic(qb, r5)[0]
    assert brute_force_isomorphic(qa, r5) and brute_force_isomorphic(qb, r5)
    cert = classify(TwistSpinSpec(catalog.knot("figure-eight"), 2),
                    TwistSpinSpec(catalog.knot("t_{2,5}"), 2))
    assert cert.verdict == "not_equivalent"
    assert cert.quandle_isomorphic is True
    assert cert.caveats
    print("\nACCEPTANCE 8 PASS: isomorphic dihedral quandles, distinct twist spins, caveat attached")


def test_criterion_9_isomorphism_oracle_agreement():
    disagreements = 0
    rng = random.Random(5)
    for order in (1, 2, 3, 4):
        reps = enumerate_quandles(order)
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                fast, _ = isomorphic(a, b)
                slow = brute_force_isomorphic(a, b)
                assert fast == slow == (i == j)
                disagreements += fast != slow
        # relabelings of the same class must also agree
        for q in reps:
            perm = list(range(order))
            rng.shuffle(perm)
            inverse = [0] * order
            for k, v in enumerate(perm):
                inverse[v] = k
            relabeled = type(q)([[perm[q.op[inverse[x]][inverse[y]]]
                                  for y in range(order)] for x in range(order)])
            fast, _ = isomorphic(q, relabeled)
            assert fast and brute_force_isomorphic(q, relabeled)
    assert disagreements == 0
    print("\nACCEPTANCE 9 PASS: zero disagreements with the all-bijections oracle up to order 4")


def test_criterion_10_classifier_matrix(catalog):
    start = time.monotonic()
    specs = [("figure-eight", 2), ("t_{2,5}", 2), ("t_{2,7}", 2), ("t_{3,4}", 2),
             ("t_{3,5}", 2), ("t_{2,3}", 3), ("t_{2,5}", 3), ("t_{2,3}", 4), ("t_{2,3}", 5)]
    for name_a, n_a in specs:
        for name_b, n_b in specs:
            cert = classify(TwistSpinSpec(catalog.knot(name_a), n_a),
                            TwistSpinSpec(catalog.knot(name_b), n_b))
            expected = "equivalent" if (name_a, n_a) == (name_b, n_b) else "not_equivalent"
            assert cert.verdict == expected, (name_a, n_a, name_b, n_b)
    elapsed = time.monotonic() - start
    assert elapsed < 120.0
    print(f"\nACCEPTANCE 10 PASS: 81-pair classifier matrix exact in {elapsed:.1f}s")
