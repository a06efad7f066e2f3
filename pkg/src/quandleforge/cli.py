"""Command-line interface: deterministic, machine-readable access to the library.

Exit codes: 0 success, 1 domain errors (budget exceeded, not found, outside
the catalog), 2 usage or parse errors.  All output is deterministic; JSON is
the stable contract, text output is for humans.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import catalog as cat
from . import classifier, groups, presentations, quandles
from .errors import ParseError, QuandleForgeError

DEFAULT_BUDGET = 10_000
_BRAID_WORD = re.compile(r"-?\d+(,-?\d+)*")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except QuandleForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if out:
        print(out, end="" if out.endswith("\n") else "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qf", description="finite quandles of twist-spun knots")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="element budget for enumerations (default 10000)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--catalog", default=None, help="path to a catalog JSON file")

    p = sub.add_parser("group", help="build a group from a presentation")
    p.add_argument("presentation", help="group presentation text, '-' for stdin, or a file path")
    common(p)
    p.set_defaults(handler=_cmd_group)

    p = sub.add_parser("complete", help="complete a quandle presentation to a table")
    p.add_argument("presentation", help="quandle presentation text, '-' for stdin, or a file path")
    common(p)
    p.set_defaults(handler=_cmd_complete)

    p = sub.add_parser("type", help="type of a quandle (least n with x *^n y = x)")
    p.add_argument("quandle", help="quandle table/presentation text, '-' or a file path")
    common(p)
    p.set_defaults(handler=_cmd_type)

    p = sub.add_parser("galex", help="Alexander quandle of a group automorphism")
    p.add_argument("group", help="group presentation text, '-' or a file path")
    p.add_argument("--auto", type=int, default=None,
                   help="index into the deterministic automorphism list")
    p.add_argument("--auto-order", type=int, default=None,
                   help="use the first automorphism of this order instead")
    common(p)
    p.set_defaults(handler=_cmd_galex)

    p = sub.add_parser("iso", help="decide quandle isomorphism")
    p.add_argument("first")
    p.add_argument("second")
    common(p)
    p.set_defaults(handler=_cmd_iso)

    p = sub.add_parser("colorings", help="count quandle homomorphisms to a target")
    p.add_argument("quandle")
    p.add_argument("--target", default="R3", help="R3, R5, or a quandle file path")
    common(p)
    p.set_defaults(handler=_cmd_colorings)

    p = sub.add_parser("twist-spin", help="presentation and completion of a twist spin")
    p.add_argument("knot", help="catalog knot name (t_{2,3}, figure-eight, ...) or a "
                                "braid word of comma-separated signed integers, e.g. 1,1,1")
    p.add_argument("--n", type=int, required=True, help="twist parameter, n > 1")
    p.add_argument("--strands", type=int, default=None,
                   help="strand count for braid-word input (default: largest index + 1)")
    common(p)
    p.set_defaults(handler=_cmd_twist_spin)

    p = sub.add_parser("branched", help="branched twist spin quandle profile")
    p.add_argument("knot")
    p.add_argument("--n", type=int, required=True, help="twist parameter, n > 1")
    p.add_argument("--s", type=int, default=1, help="branch parameter coprime to n")
    common(p)
    p.set_defaults(handler=_cmd_branched)

    p = sub.add_parser("classify", help="equivalence certificate for two twist spins")
    p.add_argument("knot_a")
    p.add_argument("n_a", type=int)
    p.add_argument("knot_b")
    p.add_argument("n_b", type=int)
    common(p)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("triple", help="same-group different-quandle triple report")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("r", type=int)
    common(p)
    p.set_defaults(handler=_cmd_triple)

    p = sub.add_parser("census", help="enumerate small quandles up to isomorphism")
    p.add_argument("order", type=int)
    common(p)
    p.set_defaults(handler=_cmd_census)

    return parser


def _read_input(text: str) -> str:
    if text == "-":
        return sys.stdin.read()
    path = Path(text)
    if ("\n" not in text and len(text) < 4096 and path.is_file()):
        return path.read_text()
    return text


def _load_quandle(text: str, budget: int) -> quandles.FiniteQuandle:
    source = _read_input(text).strip()
    if source.startswith("quandle<"):
        return presentations.complete(presentations.parse(source), budget=budget).quandle
    if source.startswith("quandle"):
        return quandles.parse_quandle_table(source)
    raise ValueError('quandle input must start with "quandle<" (presentation) '
                     'or "quandle <order>" (table)')


def _load_group(text: str, budget: int) -> groups.FiniteGroup:
    source = _read_input(text).strip()
    if source.startswith("group<"):
        return groups.group_from_presentation(
            groups.parse_group_presentation(source), budget=budget)
    if source.startswith("group"):
        return groups.parse_group_table(source)
    raise ValueError('group input must start with "group<" (presentation) '
                     'or "group <order>" (table)')


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _quandle_report(q: quandles.FiniteQuandle, fmt: str, extra: dict | None = None) -> str:
    info = quandles.profile_json(q)
    if extra:
        info.update(extra)
    if fmt == "json":
        info["table"] = [list(row) for row in q.op]
        return _dump(info)
    lines = [quandles.format_quandle_table(q).rstrip("\n")]
    lines.append(f"order {info['order']}")
    lines.append(f"type {info['type']}")
    lines.append(f"connected {'yes' if info['connected'] else 'no'}")
    lines.append(f"orbit-sizes {' '.join(str(v) for v in info['orbit_sizes'])}")
    lines.append(f"inner-group-order {info['inner_group_order']}")
    lines.append(f"colorings R3={info['colorings']['R3']} R5={info['colorings']['R5']}")
    for key in sorted(extra or ()):
        lines.append(f"{key} {extra[key]}")
    return "\n".join(lines) + "\n"


def _cmd_group(args) -> str:
    g = _load_group(args.presentation, args.budget)
    if args.format == "json":
        return _dump({
            "order": g.order,
            "identity": g.identity,
            "mul": [list(row) for row in g.mul],
            "inv": list(g.inv),
        })
    return groups.format_group_table(g) + f"order {g.order}\n"


def _cmd_complete(args) -> str:
    source = _read_input(args.presentation).strip()
    result = presentations.complete(presentations.parse(source), budget=args.budget)
    images = {name: result.generator_images[name] for name in sorted(result.generator_images)}
    extra = {
        "generators": " ".join(f"{k}={v}" for k, v in images.items()),
        "stats": f"allocated={result.stats.allocated} merges={result.stats.merges}",
    }
    if args.format == "json":
        info = quandles.profile_json(result.quandle)
        info["table"] = [list(row) for row in result.quandle.op]
        info["generator_images"] = images
        info["stats"] = {"allocated": result.stats.allocated, "merges": result.stats.merges}
        return _dump(info)
    return _quandle_report(result.quandle, "text", extra)


def _cmd_type(args) -> str:
    q = _load_quandle(args.quandle, args.budget)
    value = quandles.type_of(q)
    if args.format == "json":
        return _dump({"type": value})
    return f"type {value}\n"


def _cmd_galex(args) -> str:
    g = _load_group(args.group, args.budget)
    auts = groups.automorphisms(g)
    if (args.auto is None) == (args.auto_order is None):
        raise ValueError("specify exactly one of --auto or --auto-order")
    if args.auto is not None:
        if not 0 <= args.auto < len(auts):
            raise ValueError(f"automorphism index {args.auto} out of range "
                             f"(group has {len(auts)} automorphisms)")
        f = auts[args.auto]
    else:
        f = next((a for a in auts if groups.automorphism_order(a) == args.auto_order), None)
        if f is None:
            raise ValueError(f"no automorphism of order {args.auto_order}")
    q = quandles.galex(g, f)
    return _quandle_report(q, args.format)


def _cmd_iso(args) -> str:
    q1 = _load_quandle(args.first, args.budget)
    q2 = _load_quandle(args.second, args.budget)
    ok, witness = quandles.isomorphic(q1, q2)
    if args.format == "json":
        return _dump({"isomorphic": ok,
                      "witness": list(witness) if witness is not None else None})
    if ok:
        return "isomorphic yes\nwitness " + " ".join(str(v) for v in witness) + "\n"
    return "isomorphic no\n"


def _cmd_colorings(args) -> str:
    q = _load_quandle(args.quandle, args.budget)
    target_name = args.target
    if target_name in ("R3", "R5"):
        target = quandles.dihedral_quandle(int(target_name[1:]))
    else:
        target = _load_quandle(target_name, args.budget)
    count = quandles.hom_count(q, target)
    if args.format == "json":
        return _dump({"target": target_name, "colorings": count})
    return f"colorings {count}\n"


def _parse_braid_word(text: str, strands: int | None) -> cat.KnotSpec:
    letters = tuple(int(part) for part in text.split(","))
    if strands is None:
        strands = max(abs(v) for v in letters) + 1
    return cat.KnotSpec(text, letters, strands)


def _cmd_twist_spin(args) -> str:
    catalog = cat.builtin_catalog(args.catalog)
    if _BRAID_WORD.fullmatch(args.knot):
        knot = _parse_braid_word(args.knot, args.strands)
    else:
        knot = catalog.knot(args.knot)
    spec = cat.TwistSpinSpec(knot, args.n)
    pres = cat.twist_spin_presentation(spec)
    result = presentations.complete(pres, budget=args.budget)
    family = cat.finite_family(spec)
    extra = {"presentation": pres.to_text(), "family": family or "none"}
    if args.format == "json":
        info = quandles.profile_json(result.quandle)
        info["presentation"] = pres.to_text()
        info["family"] = family
        info["table"] = [list(row) for row in result.quandle.op]
        return _dump(info)
    return _quandle_report(result.quandle, "text", extra)


def _cmd_branched(args) -> str:
    catalog = cat.builtin_catalog(args.catalog)
    inst = catalog.instance(args.knot, args.n)
    spec = cat.TwistSpinSpec(inst.knot, args.n, args.s)
    q = cat.branched_twist_spin_quandle(spec, inst.group, inst.monodromy)
    extra = {"branch": f"n={args.n} s={args.s}", "group": inst.group_name}
    if args.format == "json":
        info = quandles.profile_json(q)
        info["n"] = args.n
        info["s"] = args.s
        info["group"] = inst.group_name
        return _dump(info)
    return _quandle_report(q, "text", extra)


def _cmd_classify(args) -> str:
    catalog = cat.builtin_catalog(args.catalog)
    spec_a = cat.TwistSpinSpec(catalog.knot(args.knot_a), args.n_a)
    spec_b = cat.TwistSpinSpec(catalog.knot(args.knot_b), args.n_b)
    certificate = classifier.classify(spec_a, spec_b, catalog_path=args.catalog)
    if args.format == "json":
        return _dump(certificate.to_json())
    lines = [f"verdict {certificate.verdict}", f"basis {certificate.basis}"]
    for w in certificate.witnesses:
        lines.append(f"witness {w}")
    for c in certificate.caveats:
        lines.append(f"caveat {c}")
    return "\n".join(lines) + "\n"


def _cmd_triple(args) -> str:
    report = classifier.triple_report(args.p, args.q, args.r, catalog_path=args.catalog)
    if args.format == "json":
        return _dump(report.to_json())
    lines = [f"triple {report.parameters[0]} {report.parameters[1]} {report.parameters[2]}"]
    for label, order, tp in zip(report.labels, report.quandle_orders, report.quandle_types):
        lines.append(f"member {label} order={order} type={tp}")
    for a, b, ok in report.groups_isomorphic:
        lines.append(f"groups {a} ~ {b}: {'isomorphic' if ok else 'distinct'}")
    for a, b, ok in report.quandles_isomorphic:
        lines.append(f"quandles {a} ~ {b}: {'isomorphic' if ok else 'distinct'}")
    return "\n".join(lines) + "\n"


def _cmd_census(args) -> str:
    reps = quandles.enumerate_quandles(args.order)
    if args.format == "json":
        return _dump({
            "order": args.order,
            "classes": len(reps),
            "tables": [[list(row) for row in q.op] for q in reps],
        })
    lines = [f"order {args.order}: {len(reps)} isomorphism classes"]
    for i, q in enumerate(reps):
        lines.append(f"# class {i}")
        lines.append(quandles.format_quandle_table(q).rstrip("\n"))
    return "\n".join(lines) + "\n"
