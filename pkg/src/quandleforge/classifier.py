"""Equivalence decisions for twist spins with finite knot quandles.

Two such twist spins are equivalent exactly when they have the same twist
parameter and the same underlying knot.  The certificate reports the full
invariant comparison alongside the verdict, because the invariants alone
sometimes cannot witness a distinction (the order-5 dihedral collision
between the 2-twist spins of the figure-eight and t_{2,5}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .catalog import Catalog, TwistSpinSpec, builtin_catalog, finite_family
from .errors import OutsideCatalog, OutsideFiniteCatalog
from .groups import groups_isomorphic
from .quandles import dihedral_quandle, hom_count, is_connected, isomorphic, profile, type_of

_REPORT_FIELDS = ("order", "type", "orbit_sizes", "inner_group_order",
                  "colorings_R3", "colorings_R5")


@dataclass(frozen=True)
class Certificate:
    """Verdict plus the invariant evidence for one pair of twist spins."""

    verdict: str  # "equivalent" | "not_equivalent"
    basis: str  # "twist_and_knot_match" | "invariant_witness" | "catalog_identity"
    witnesses: tuple[str, ...]
    profiles: tuple[dict, dict]
    quandle_isomorphic: bool
    group_isomorphic: bool
    caveats: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "basis": self.basis,
            "witness": list(self.witnesses),
            "profiles": {"a": self.profiles[0], "b": self.profiles[1]},
            "quandle_iso": self.quandle_isomorphic,
            "group_iso": self.group_isomorphic,
            "caveats": list(self.caveats),
        }


@lru_cache(maxsize=64)
def _instance_report(name: str, n: int, catalog_path: str | None) -> dict:
    inst = builtin_catalog(catalog_path).instance(name, n)
    prof = profile(inst.quandle)
    return {
        "knot": inst.knot.name,
        "n": inst.n,
        "family": inst.family,
        "order": prof.order,
        "type": prof.type if prof.type != math.inf else "infinity",
        "connected": is_connected(inst.quandle),
        "orbit_sizes": list(prof.orbit_sizes),
        "inner_group_order": prof.inner_group_order,
        "colorings_R3": hom_count(inst.quandle, dihedral_quandle(3)),
        "colorings_R5": hom_count(inst.quandle, dihedral_quandle(5)),
    }


def classify(a: TwistSpinSpec, b: TwistSpinSpec,
             catalog_path: str | None = None) -> Certificate:
    """Decide equivalence of two finite-quandle twist spins.

    Raises OutsideFiniteCatalog when either spec is not in a finiteness
    family (including branched spins), and OutsideCatalog when the knot has
    no built-in instance data.
    """
    catalog = builtin_catalog(catalog_path)
    for spec in (a, b):
        if finite_family(spec) is None:
            raise OutsideFiniteCatalog(
                f"({spec.knot.name}, n={spec.n}, s={spec.s}) is not in any finiteness family")
    inst_a = catalog.instance(a.knot.name, a.n)
    inst_b = catalog.instance(b.knot.name, b.n)
    report_a = _instance_report(inst_a.knot.name, inst_a.n, catalog_path)
    report_b = _instance_report(inst_b.knot.name, inst_b.n, catalog_path)

    witnesses = tuple(
        f"{field}: {report_a[field]} vs {report_b[field]}"
        for field in _REPORT_FIELDS if report_a[field] != report_b[field]
    )
    if profile(inst_a.quandle) == profile(inst_b.quandle):
        quandle_iso, _ = isomorphic(inst_a.quandle, inst_b.quandle)
    else:
        quandle_iso = False
    group_iso, _ = groups_isomorphic(inst_a.group, inst_b.group)

    if a.n == b.n and inst_a.knot.name == inst_b.knot.name:
        return Certificate(
            verdict="equivalent", basis="twist_and_knot_match", witnesses=(),
            profiles=(report_a, report_b), quandle_isomorphic=quandle_iso,
            group_isomorphic=group_iso, caveats=())

    caveats: list[str] = []
    if witnesses:
        basis = "invariant_witness"
        caveats.append("invariants distinguish these twist spins: "
                       + ", ".join(w.split(":")[0] for w in witnesses))
    else:
        basis = "catalog_identity"
        caveats.append("all computed quandle invariants coincide"
                       + (" and the quandles are isomorphic" if quandle_iso else "")
                       + "; the verdict rests on the catalog identity of the twist parameters"
                       " and underlying knots")
        if quandle_iso:
            caveats.append("quandle isomorphism does not decide equivalence inside the n=2"
                           " two-bridge family: distinct knots can share the dihedral quandle")
    return Certificate(
        verdict="not_equivalent", basis=basis, witnesses=witnesses,
        profiles=(report_a, report_b), quandle_isomorphic=quandle_iso,
        group_isomorphic=group_iso, caveats=tuple(caveats))


@dataclass(frozen=True)
class TripleReport:
    """Pairwise comparison of the three twist spins built from coprime (p, q, r)."""

    parameters: tuple[int, int, int]
    labels: tuple[str, str, str]
    quandle_orders: tuple[int, int, int]
    quandle_types: tuple[int, int, int]
    groups_isomorphic: tuple[tuple[str, str, bool], ...]
    quandles_isomorphic: tuple[tuple[str, str, bool], ...]

    def to_json(self) -> dict:
        return {
            "parameters": list(self.parameters),
            "labels": list(self.labels),
            "quandle_orders": list(self.quandle_orders),
            "quandle_types": list(self.quandle_types),
            "groups_isomorphic": [list(row) for row in self.groups_isomorphic],
            "quandles_isomorphic": [list(row) for row in self.quandles_isomorphic],
        }


def triple_report(p: int, q: int, r: int, catalog_path: str | None = None) -> TripleReport:
    """Compare the twist spins with n in {p, q, r} over the complementary torus knots.

    The three spins share a group up to isomorphism while their quandle
    types are p, q and r, so no two of the quandles are isomorphic.  Only
    triples whose instances are all in the catalog are accepted; the sole
    finite desk instance is {2, 3, 5}.
    """
    params = (p, q, r)
    if any(v <= 1 for v in params):
        raise ValueError("parameters must all be greater than 1")
    if (math.gcd(p, q) != 1 or math.gcd(q, r) != 1 or math.gcd(p, r) != 1):
        raise ValueError(f"parameters {params} must be pairwise coprime")
    catalog = builtin_catalog(catalog_path)
    spins = []
    for n, (u, v) in ((p, (q, r)), (q, (r, p)), (r, (p, q))):
        knot = catalog.torus_knot(u, v)
        inst = catalog.instance(knot.name, n)
        spins.append(inst)
    labels = tuple(f"twist-spin(n={inst.n}, {inst.knot.name})" for inst in spins)
    group_rows = []
    quandle_rows = []
    for i in range(3):
        for j in range(i + 1, 3):
            giso, _ = groups_isomorphic(spins[i].group, spins[j].group)
            group_rows.append((labels[i], labels[j], giso))
            if profile(spins[i].quandle) == profile(spins[j].quandle):
                qiso, _ = isomorphic(spins[i].quandle, spins[j].quandle)
            else:
                qiso = False
            quandle_rows.append((labels[i], labels[j], qiso))
    return TripleReport(
        parameters=params,
        labels=labels,
        quandle_orders=tuple(inst.quandle.order for inst in spins),
        quandle_types=tuple(type_of(inst.quandle) for inst in spins),
        groups_isomorphic=tuple(group_rows),
        quandles_isomorphic=tuple(quandle_rows),
    )
