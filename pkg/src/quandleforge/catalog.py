"""Knot specs, twist-spin parameters, and the built-in instance catalog.

Knots enter as braid words (sigma_i as +i, its inverse as -i).  The knot
quandle of a twist spin is realized along two independent paths: completion
of the diagram presentation with type relations appended, and a generalized
Alexander quandle over the catalog group.  The loader cross-checks the two
paths on every instance and refuses to serve an inconsistent catalog.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import CatalogInconsistent, InvalidMonodromy, NotAKnot, NotFound, OutsideCatalog
from .groups import (FiniteGroup, GroupAutomorphism, automorphism_order, group_from_permutations,
                     group_from_presentation, groups_isomorphic, parse_group_presentation, power)
from .presentations import (Gen, Op, QuandlePresentation, add_type_relations, complete)
from .quandles import FiniteQuandle, find_monodromy, galex, is_connected, type_of


@dataclass(frozen=True)
class FamilyTags:
    """Which finiteness-relevant families the knot belongs to."""

    two_bridge: bool = False
    torus: tuple[int, int] | None = None
    montesinos: tuple[tuple[int, int], ...] | None = None


@dataclass(frozen=True)
class KnotSpec:
    """A named 1-knot given as a braid word plus family metadata."""

    name: str
    braid: tuple[int, ...]
    strands: int
    family_tags: FamilyTags = field(default_factory=FamilyTags)

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("strand count must be positive")
        for letter in self.braid:
            if letter == 0 or abs(letter) >= self.strands:
                raise ValueError(f"braid letter {letter} out of range for {self.strands} strands")


@dataclass(frozen=True)
class TwistSpinSpec:
    """Twist parameters: n > 1 twists, branch index s coprime to n (s=1 plain)."""

    knot: KnotSpec
    n: int
    s: int = 1

    def __post_init__(self):
        if self.n <= 1:
            raise ValueError("twist parameter n must be greater than 1")
        if self.s < 1:
            raise ValueError("branch parameter s must be positive")
        if math.gcd(self.n, self.s) != 1:
            raise ValueError(f"n={self.n} and s={self.s} must be coprime")


def braid_permutation(braid: tuple[int, ...], strands: int) -> list[int]:
    """Map each top position to the bottom position its strand reaches."""
    arrangement = list(range(strands))
    for letter in braid:
        i = abs(letter)
        arrangement[i - 1], arrangement[i] = arrangement[i], arrangement[i - 1]
    final = [0] * strands
    for pos, strand in enumerate(arrangement):
        final[strand] = pos
    return final


def closure_components(k: KnotSpec) -> int:
    """Number of components of the braid closure (cycles of the permutation)."""
    perm = braid_permutation(k.braid, k.strands)
    seen = [False] * k.strands
    count = 0
    for start in range(k.strands):
        if seen[start]:
            continue
        count += 1
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = perm[cur]
    return count


def _braid_arc_presentation(k: KnotSpec, open_strand: int | None) -> QuandlePresentation:
    # one generator per arc, one relation per crossing; optionally leave the
    # closure arc of one strand open so its end arcs stay distinct generators
    strands = k.strands
    labels = list(range(strands))
    next_label = strands
    crossings: list[tuple[int, int, int, int]] = []  # (out, under, over, sign)
    for letter in k.braid:
        i = abs(letter)
        a, b = labels[i - 1], labels[i]
        out = next_label
        next_label += 1
        if letter > 0:
            # left strand passes over: under-arc b emerges as b * a
            crossings.append((out, b, a, 1))
            labels[i - 1], labels[i] = out, a
        else:
            # left strand passes under: under-arc a emerges as a *inv b
            crossings.append((out, a, b, -1))
            labels[i - 1], labels[i] = b, out

    parent = list(range(next_label))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pos in range(strands):
        if pos == open_strand:
            continue
        a, b = find(labels[pos]), find(pos)
        if a != b:
            parent[max(a, b)] = min(a, b)

    names: dict[int, str] = {}
    order_of_appearance = list(range(strands)) + [c[0] for c in crossings]
    for label in order_of_appearance:
        root = find(label)
        if root not in names:
            names[root] = f"x{len(names)}"
    generators = tuple(names[root] for root in
                       sorted(names, key=lambda r: int(names[r][1:])))
    relations = tuple(
        (Op(Gen(names[find(under)]), Gen(names[find(over)]), sign), Gen(names[find(out)]))
        for out, under, over, sign in crossings
    )
    return QuandlePresentation(generators, relations)


def wirtinger_presentation(k: KnotSpec) -> QuandlePresentation:
    """Diagram presentation of the knot quandle from the closed braid.

    One generator per arc, one relation per crossing with the over-arc acting
    on the right and the crossing sign selecting the operation or its inverse.
    Arc numbering is deterministic: top strands left to right, then crossing
    outputs top to bottom.
    """
    if closure_components(k) != 1:
        raise NotAKnot(f"closure of {k.name or k.braid} has more than one component")
    return _braid_arc_presentation(k, open_strand=None)


def cut_open_presentation(k: KnotSpec) -> QuandlePresentation:
    """Arc presentation of the knot cut open at the first strand.

    Same crossing relations as the closed diagram, but the closure arc of
    strand 0 is left open, so its two end arcs remain distinct generators.
    Twist-spun quandles are presented from this open diagram; closing the
    last arc adds a relation that does not survive twist spinning (for the
    trefoil with three or more twists it collapses the completion below the
    branched-cover group order).
    """
    if closure_components(k) != 1:
        raise NotAKnot(f"closure of {k.name or k.braid} has more than one component")
    return _braid_arc_presentation(k, open_strand=0)


def twist_spin_presentation(t: TwistSpinSpec) -> QuandlePresentation:
    """Open-diagram presentation with the type-n relations appended.

    This is the hypothesis presentation for the twist-spun knot quandle; the
    catalog loader cross-validates every finite instance against the
    group-automorphism path instead of trusting it.
    """
    return add_type_relations(cut_open_presentation(t.knot), t.n)


def branched_twist_spin_quandle(t: TwistSpinSpec, g: FiniteGroup,
                                f: GroupAutomorphism) -> FiniteQuandle:
    """Quandle of the branched twist spin: the Alexander quandle of f^s on g."""
    order = automorphism_order(f)
    if order != t.n:
        raise InvalidMonodromy(f"monodromy has order {order}, expected n={t.n}")
    return galex(g, power(f, t.s))


_MONTESINOS_FAMILIES = {(2, 3, 3): "S2", (2, 3, 5): "S3"}


def finite_family(t: TwistSpinSpec) -> str | None:
    """The finiteness family containing the twist spin, or None.

    Families: S1 (n=2, non-trivial 2-bridge), S2 (n=2, Montesinos with tangle
    orders 2,3,3), S3 (n=2, Montesinos 2,3,5), S4 (n=3, torus t_{2,3} or
    t_{2,5}), S5 (n=4, t_{2,3}), S6 (n=5, t_{2,3}).  Branched spins (s > 1)
    are not members.
    """
    if t.s != 1:
        return None
    tags = t.knot.family_tags
    if t.n == 2:
        if tags.two_bridge:
            return "S1"
        if tags.montesinos is not None:
            alphas = tuple(sorted(a for a, _ in tags.montesinos))
            return _MONTESINOS_FAMILIES.get(alphas)
        return None
    if tags.torus is None:
        return None
    pq = tuple(sorted(tags.torus))
    if t.n == 3 and pq in ((2, 3), (2, 5)):
        return "S4"
    if t.n == 4 and pq == (2, 3):
        return "S5"
    if t.n == 5 and pq == (2, 3):
        return "S6"
    return None


# ---------------------------------------------------------------------------
# built-in catalog


@dataclass(frozen=True)
class CatalogInstance:
    """One twist spin with finite knot quandle, realized along both paths."""

    knot: KnotSpec
    n: int
    family: str
    group_name: str
    group: FiniteGroup
    monodromy: GroupAutomorphism
    quandle: FiniteQuandle
    generator_images: dict[str, int]


@dataclass(frozen=True)
class Catalog:
    knots: dict[str, KnotSpec]
    aliases: dict[str, str]
    groups: dict[str, FiniteGroup]
    permutation_realizations: dict[str, FiniteGroup]
    instances: tuple[CatalogInstance, ...]
    _by_key: dict[tuple[str, int], CatalogInstance]

    def knot(self, name: str) -> KnotSpec:
        key = self.aliases.get(name, name)
        if key not in self.knots:
            raise OutsideCatalog(f"no catalog knot named {name!r}")
        return self.knots[key]

    def instance(self, name: str, n: int) -> CatalogInstance:
        knot = self.knot(name)
        key = (knot.name, n)
        if key not in self._by_key:
            raise OutsideCatalog(f"no finite catalog instance for ({knot.name}, n={n})")
        return self._by_key[key]

    def torus_knot(self, p: int, q: int) -> KnotSpec:
        pq = tuple(sorted((p, q)))
        for knot in self.knots.values():
            if knot.family_tags.torus is not None and tuple(sorted(knot.family_tags.torus)) == pq:
                return knot
        raise OutsideCatalog(f"no catalog torus knot for parameters {pq}")


def _load_raw(path: str | None) -> dict:
    if path is None:
        data = resources.files("quandleforge").joinpath("data/catalog.json")
        return json.loads(data.read_text(encoding="utf-8"))
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@lru_cache(maxsize=4)
def builtin_catalog(path: str | None = None) -> Catalog:
    """Load (once per path) and cross-validate the instance catalog.

    Every group is realized from its presentation and from its permutation
    generators, and the two must be isomorphic.  Every instance's completed
    presentation quandle must have the group's order, type n, be connected,
    and be isomorphic to an Alexander quandle of an order-n automorphism
    (the cached monodromy).  Any failure raises CatalogInconsistent.
    """
    raw = _load_raw(path)
    groups: dict[str, FiniteGroup] = {}
    perm_groups: dict[str, FiniteGroup] = {}
    for name, spec in raw["groups"].items():
        presented = group_from_presentation(
            parse_group_presentation(spec["presentation"]), name=name)
        permuted = group_from_permutations(spec["permutations"], name=f"{name}-perm")
        expected = spec["order"]
        if presented.order != expected or permuted.order != expected:
            raise CatalogInconsistent(
                f"group {name}: realized orders {presented.order}/{permuted.order}, "
                f"expected {expected}")
        iso, _ = groups_isomorphic(presented, permuted)
        if not iso:
            raise CatalogInconsistent(f"group {name}: realizations are not isomorphic")
        groups[name] = presented
        perm_groups[name] = permuted

    knots: dict[str, KnotSpec] = {}
    aliases: dict[str, str] = {}
    instances: list[CatalogInstance] = []
    for entry in raw["knots"]:
        tags = entry.get("tags", {})
        knot = KnotSpec(
            name=entry["name"],
            braid=tuple(entry["braid"]),
            strands=entry["strands"],
            family_tags=FamilyTags(
                two_bridge=tags.get("two_bridge", False),
                torus=tuple(tags["torus"]) if "torus" in tags else None,
                montesinos=tuple(tuple(pair) for pair in tags["montesinos"])
                if "montesinos" in tags else None,
            ),
        )
        knots[knot.name] = knot
        for alias in entry.get("aliases", ()):
            aliases[alias] = knot.name
        for inst in entry["instances"]:
            n = inst["n"]
            group = groups[inst["group"]]
            spec = TwistSpinSpec(knot, n)
            family = finite_family(spec)
            if family is None:
                raise CatalogInconsistent(
                    f"({knot.name}, n={n}) is catalogued but not in a finiteness family")
            result = complete(twist_spin_presentation(spec))
            quandle = result.quandle
            if quandle.order != group.order:
                raise CatalogInconsistent(
                    f"({knot.name}, n={n}): completion order {quandle.order} != "
                    f"group order {group.order}")
            if type_of(quandle) != n:
                raise CatalogInconsistent(
                    f"({knot.name}, n={n}): completed quandle has type {type_of(quandle)}")
            if not is_connected(quandle):
                raise CatalogInconsistent(f"({knot.name}, n={n}): completion is not connected")
            try:
                monodromy = find_monodromy(group, n, quandle)
            except NotFound as exc:
                raise CatalogInconsistent(
                    f"({knot.name}, n={n}): no order-{n} automorphism realizes the "
                    f"completion") from exc
            instances.append(CatalogInstance(
                knot=knot, n=n, family=family, group_name=inst["group"], group=group,
                monodromy=monodromy, quandle=quandle,
                generator_images=result.generator_images))
    by_key = {(inst.knot.name, inst.n): inst for inst in instances}
    return Catalog(knots=knots, aliases=aliases, groups=groups,
                   permutation_realizations=perm_groups,
                   instances=tuple(instances), _by_key=by_key)
