"""Finite quandle tables and their invariants.

A quandle is a set with a binary operation ``*`` that is idempotent, has
bijective right translations S_y: x -> x*y, and is right self-distributive:
(x*y)*z = (x*z)*(y*z).  Everything here works on explicit operation tables
(``op[x][y]`` is x*y) and is pure and deterministic.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass

from .errors import CapExceeded, NotFound
from .groups import (FiniteGroup, GroupAutomorphism, automorphism_classes, automorphisms,
                     automorphism_order)

ENUMERATION_CAP = 5


class FiniteQuandle:
    """Immutable n x n operation table; entry at row x, column y is x*y."""

    __slots__ = ("order", "op", "_columns", "_inv_columns", "_profile", "_orbits", "_gens")

    def __init__(self, op):
        table = tuple(tuple(row) for row in op)
        n = len(table)
        if n == 0:
            raise ValueError("quandle must be non-empty")
        for row in table:
            if len(row) != n or any(not (0 <= v < n) for v in row):
                raise ValueError("operation table is not a square table of indices")
        self.order = n
        self.op = table
        self._columns: tuple[tuple[int, ...], ...] | None = None
        self._inv_columns: tuple[tuple[int, ...], ...] | None = None
        self._profile: QuandleInvariantProfile | None = None
        self._orbits: tuple[tuple[int, ...], ...] | None = None
        self._gens: list[int] | None = None

    def columns(self) -> tuple[tuple[int, ...], ...]:
        """Right translations S_y as tuples: columns()[y][x] = x*y."""
        if self._columns is None:
            n = self.order
            op = self.op
            self._columns = tuple(tuple(op[x][y] for x in range(n)) for y in range(n))
        return self._columns

    def inverse_columns(self) -> tuple[tuple[int, ...], ...]:
        """Inverse translations: inverse_columns()[y][x] is the z with z*y = x."""
        if self._inv_columns is None:
            self._inv_columns = tuple(_invert_perm(col) for col in self.columns())
        return self._inv_columns

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteQuandle) and self.op == other.op

    def __hash__(self) -> int:
        return hash(self.op)

    def __repr__(self) -> str:
        return f"<FiniteQuandle of order {self.order}>"


@dataclass(frozen=True)
class QuandleInvariantProfile:
    """Cheap isomorphism invariants used as a pre-filter.

    ``type`` is the least n >= 1 with S_y^n = id for all y.  The value
    ``math.inf`` is reserved for quandles of infinite type, which cannot
    occur for the finite tables handled here; it exists so downstream
    serializations have a defined marker.
    """

    order: int
    type: int | float
    orbit_sizes: tuple[int, ...]
    s_cycle_profile: tuple[tuple[int, ...], ...]
    inner_group_order: int


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of the axiom check; ``witness`` pins the first failure."""

    ok: bool
    axiom: str | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(q: FiniteQuandle) -> ValidationResult:
    """Check the three quandle axioms, returning the first violation found."""
    n = q.order
    op = q.op
    for x in range(n):
        if op[x][x] != x:
            return ValidationResult(False, "idempotence", (x,))
    cols = q.columns()
    full = list(range(n))
    for y in range(n):
        if sorted(cols[y]) != full:
            return ValidationResult(False, "bijectivity", (y,))
    # (x*y)*z = (x*z)*(y*z) for all x is the permutation identity
    # S_z . S_y = S_{y*z} . S_z checked columnwise.
    for y in range(n):
        coly = cols[y]
        for z in range(n):
            colz = cols[z]
            lhs = [colz[v] for v in coly]
            rhs_col = cols[op[y][z]]
            rhs = [rhs_col[v] for v in colz]
            if lhs != rhs:
                for x in range(n):
                    if lhs[x] != rhs[x]:
                        return ValidationResult(False, "distributivity", (x, y, z))
    return ValidationResult(True)


def type_of(q: FiniteQuandle) -> int:
    """Least n >= 1 with x *^n y = x for all x, y: the lcm of the S_y orders."""
    result = 1
    for col in q.columns():
        result = math.lcm(result, _perm_order_of(col))
    return result


def _perm_order_of(perm: tuple[int, ...]) -> int:
    n = len(perm)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = perm[cur]
            length += 1
        order = math.lcm(order, length)
    return order


def galex(g: FiniteGroup, f: GroupAutomorphism) -> FiniteQuandle:
    """Generalized Alexander quandle on g: x*y = f(x y^-1) y."""
    if f.group is not g and f.group.mul != g.mul:
        raise ValueError("automorphism does not belong to the given group")
    mul = g.mul
    inv = g.inv
    perm = f.perm
    op = [[mul[perm[mul[x][inv[y]]]][y] for y in range(g.order)] for x in range(g.order)]
    return FiniteQuandle(op)


def orbits(q: FiniteQuandle) -> tuple[tuple[int, ...], ...]:
    """Orbits of the group generated by all right translations."""
    if q._orbits is not None:
        return q._orbits
    n = q.order
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(n):
        for y in range(n):
            a, b = find(x), find(q.op[x][y])
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: dict[int, list[int]] = {}
    for x in range(n):
        blocks.setdefault(find(x), []).append(x)
    result = tuple(tuple(blocks[root]) for root in sorted(blocks))
    q._orbits = result
    return result


def is_connected(q: FiniteQuandle) -> bool:
    return len(orbits(q)) == 1


def _subquandle_closure(q: FiniteQuandle, seed: set[int]) -> set[int]:
    op = q.op
    inv_cols = q.inverse_columns()
    span = set(seed)
    frontier = deque(span)
    while frontier:
        a = frontier.popleft()
        for b in list(span):
            for v in (op[a][b], op[b][a], inv_cols[b][a], inv_cols[a][b]):
                if v not in span:
                    span.add(v)
                    frontier.append(v)
    return span


def _generating_set(q: FiniteQuandle) -> list[int]:
    """Small generating set under closure by * and its right inverse.

    Grows greedily, preferring any element that completes the closure in one
    step (small sets keep the homomorphism searches shallow); cached.
    """
    if q._gens is not None:
        return list(q._gens)
    n = q.order
    gens = [0]
    span = _subquandle_closure(q, {0})
    while len(span) < n:
        best_x = -1
        best_span: set[int] | None = None
        for x in range(n):
            if x in span:
                continue
            candidate = _subquandle_closure(q, span | {x})
            if len(candidate) == n:
                best_x, best_span = x, candidate
                break
            if best_span is None or len(candidate) > len(best_span):
                best_x, best_span = x, candidate
        gens.append(best_x)
        span = best_span
    q._gens = list(gens)
    return gens


def _invert_perm(perm: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for i, v in enumerate(perm):
        out[v] = i
    return out


def inner_group_order(q: FiniteQuandle) -> int:
    """Order of the permutation group generated by all right translations.

    S_{x*y} = S_y^-1 S_x S_y, so the translations of a generating set of the
    quandle already generate the whole inner group.
    """
    cols = q.columns()
    gens = []
    for x in _generating_set(q):
        col = cols[x]
        if col not in gens:
            gens.append(col)
    identity = tuple(range(q.order))
    seen = {identity}
    frontier = deque([identity])
    while frontier:
        p = frontier.popleft()
        for g in gens:
            composed = tuple(g[v] for v in p)
            if composed not in seen:
                seen.add(composed)
                frontier.append(composed)
    return len(seen)


def profile(q: FiniteQuandle) -> QuandleInvariantProfile:
    """Invariant profile; cached on the quandle."""
    if q._profile is None:
        cycle_types = sorted(_cycle_type(col) for col in q.columns())
        q._profile = QuandleInvariantProfile(
            order=q.order,
            type=type_of(q),
            orbit_sizes=tuple(sorted(len(b) for b in orbits(q))),
            s_cycle_profile=tuple(cycle_types),
            inner_group_order=inner_group_order(q),
        )
    return q._profile


def _cycle_type(perm: tuple[int, ...]) -> tuple[int, ...]:
    n = len(perm)
    seen = [False] * n
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = perm[cur]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


# ---------------------------------------------------------------------------
# homomorphism counting and isomorphism


def _closure_recipes(q: FiniteQuandle, gens: list[int]) -> list[tuple[int, int, int, int]]:
    """Derivations (element, opcode, a, b) reaching every element from gens.

    opcode 0: element = a * b; opcode 1: element = a *inv b (the unique z with
    z * b = a).  Scanning order is deterministic.
    """
    op = q.op
    inv_cols = q.inverse_columns()
    known = list(gens)
    position = {g: i for i, g in enumerate(gens)}
    recipes: list[tuple[int, int, int, int]] = []
    i = 0
    while i < len(known):
        a = known[i]
        for b in known[: i + 1]:
            for pair in ((a, b), (b, a)):
                for code in (0, 1):
                    x, y = pair
                    v = op[x][y] if code == 0 else inv_cols[y][x]
                    if v not in position:
                        position[v] = len(known)
                        known.append(v)
                        recipes.append((v, code, x, y))
        i += 1
    if len(known) != q.order:
        raise RuntimeError("generating set failed to reach every element")
    return recipes


def hom_count(src: FiniteQuandle, dst: FiniteQuandle) -> int:
    """Number of quandle homomorphisms src -> dst.

    Backtracks over images of a generating set of src; each candidate is
    extended by the closure recipes and then verified on all pairs.
    """
    gens = _generating_set(src)
    recipes = _closure_recipes(src, gens)
    n = src.order
    src_op = src.op
    dst_op = dst.op
    dst_inv_cols = dst.inverse_columns()
    count = 0
    for images in itertools.product(range(dst.order), repeat=len(gens)):
        h = [-1] * n
        for g, img in zip(gens, images):
            h[g] = img
        for elem, code, a, b in recipes:
            h[elem] = dst_op[h[a]][h[b]] if code == 0 else dst_inv_cols[h[b]][h[a]]
        ok = True
        for x in range(n):
            hx = h[x]
            row = src_op[x]
            for y in range(n):
                if h[row[y]] != dst_op[hx][h[y]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


def _intern(key_rows: list[list]) -> list[list[int]]:
    palette: dict = {}
    out = []
    for keys in key_rows:
        row = []
        for key in keys:
            if key not in palette:
                palette[key] = len(palette)
            row.append(palette[key])
        out.append(row)
    return out


def _joint_colors(q1: FiniteQuandle, q2: FiniteQuandle) -> tuple[list[int], list[int]]:
    """Iteratively refined element colors with a palette shared by both quandles."""
    quandles = (q1, q2)
    sizes = [{x: len(block) for block in orbits(q) for x in block} for q in quandles]
    interned = _intern([
        [(_cycle_type(quandles[i].columns()[x]), sizes[i][x]) for x in range(quandles[i].order)]
        for i in range(2)
    ])
    while True:
        refined = _intern([
            [
                (base[x], tuple(sorted(
                    (base[y], base[q.op[x][y]], base[q.op[y][x]]) for y in range(q.order)
                )))
                for x in range(q.order)
            ]
            for q, base in zip(quandles, interned)
        ])
        if refined == interned:
            return interned[0], interned[1]
        interned = refined


def isomorphic(q1: FiniteQuandle, q2: FiniteQuandle) -> tuple[bool, tuple[int, ...] | None]:
    """Decide quandle isomorphism; returns (answer, witness bijection or None).

    Pre-filtered by the invariant profile, then generator-image backtracking
    with color-refined candidate sets.  For connected quandles the image of
    the first generator can be pinned to a single element, because the inner
    automorphism group acts transitively.
    """
    if q1.order != q2.order:
        return False, None
    if q1.op == q2.op:
        return True, tuple(range(q1.order))
    if profile(q1) != profile(q2):
        return False, None
    colors1, colors2 = _joint_colors(q1, q2)
    if Counter(colors1) != Counter(colors2):
        return False, None
    gens = _generating_set(q1)
    recipes = _closure_recipes(q1, gens)
    n = q1.order
    op1 = q1.op
    op2 = q2.op
    inv_cols2 = q2.inverse_columns()
    connected = len(orbits(q1)) == 1
    candidate_sets = []
    for i, g in enumerate(gens):
        matches = [y for y in range(n) if colors2[y] == colors1[g]]
        if i == 0 and connected:
            matches = matches[:1]
        candidate_sets.append(matches)
    for images in itertools.product(*candidate_sets):
        if len(set(images)) != len(images):
            continue
        h = [-1] * n
        used = [False] * n
        ok = True
        for g, img in zip(gens, images):
            if used[img]:
                ok = False
                break
            h[g] = img
            used[img] = True
        if not ok:
            continue
        for elem, code, a, b in recipes:
            v = op2[h[a]][h[b]] if code == 0 else inv_cols2[h[b]][h[a]]
            if used[v] or colors2[v] != colors1[elem]:
                ok = False
                break
            h[elem] = v
            used[v] = True
            # back-edges to the pinned generator images prune wrong branches early
            row1e = op1[elem]
            row2v = op2[v]
            for g, img in zip(gens, images):
                w = h[row1e[g]]
                if w >= 0 and row2v[img] != w:
                    ok = False
                    break
                w = h[op1[g][elem]]
                if w >= 0 and op2[img][v] != w:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for x in range(n):
            hx = h[x]
            if [h[v] for v in op1[x]] != [op2[hx][h[y]] for y in range(n)]:
                ok = False
                break
        if ok:
            return True, tuple(h)
    return False, None


def find_monodromy(g: FiniteGroup, n: int, target: FiniteQuandle) -> GroupAutomorphism:
    """First order-n automorphism f of g with galex(g, f) isomorphic to target.

    The automorphism list is deterministic, so the result is reproducible.
    Raises NotFound when no automorphism of order n yields the target.
    """
    if g.order != target.order:
        raise ValueError(f"group order {g.order} differs from target order {target.order}")
    if not is_connected(target):
        raise ValueError("target quandle must be connected")
    auts = automorphisms(g)
    classes = automorphism_classes(g)
    # conjugate automorphisms give isomorphic Alexander quandles, so one
    # failure rules out the whole conjugacy class
    failed: set[int] = set()
    for idx, f in enumerate(auts):
        if automorphism_order(f) != n or classes[idx] in failed:
            continue
        ok, _ = isomorphic(galex(g, f), target)
        if ok:
            return f
        failed.add(classes[idx])
    raise NotFound(f"no automorphism of order {n} realizes the target quandle")


# ---------------------------------------------------------------------------
# exhaustive enumeration of small quandles


def enumerate_quandles(order: int) -> list[FiniteQuandle]:
    """One representative per isomorphism class of quandles of the given order.

    Exhaustive backtracking over the columns (each S_y is a permutation
    fixing y), pruning by partial self-distributivity; classes are reduced
    by a minimum-relabeling canonical form, independent of `isomorphic`.
    Deterministic output order.
    """
    if order < 1:
        raise ValueError("order must be positive")
    if order > ENUMERATION_CAP:
        raise CapExceeded(f"enumeration cap is order {ENUMERATION_CAP}")
    n = order
    perms_fixing = []
    for y in range(n):
        perms_fixing.append([p for p in itertools.permutations(range(n)) if p[y] == y])
    reps: list[FiniteQuandle] = []
    seen_canon: set[tuple[int, ...]] = set()
    cols: list[tuple[int, ...]] = []

    def consistent_after(k: int) -> bool:
        # check all distributivity triples whose three needed columns are chosen
        for y in range(k + 1):
            coly = cols[y]
            for z in range(k + 1):
                colz = cols[z]
                yz = colz[y]
                if yz > k:
                    continue
                colyz = cols[yz]
                for x in range(n):
                    if colz[coly[x]] != colyz[colz[x]]:
                        return False
        return True

    def descend(y: int) -> None:
        if y == n:
            op = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
            canon = _canonical_form(op, n)
            if canon not in seen_canon:
                seen_canon.add(canon)
                reps.append(FiniteQuandle(op))
            return
        for p in perms_fixing[y]:
            cols.append(p)
            if consistent_after(y):
                descend(y + 1)
            cols.pop()

    descend(0)
    return reps


def _canonical_form(op: tuple[tuple[int, ...], ...], n: int) -> tuple[int, ...]:
    best: tuple[int, ...] | None = None
    for sigma in itertools.permutations(range(n)):
        inverse = [0] * n
        for i, v in enumerate(sigma):
            inverse[v] = i
        flat = tuple(
            sigma[op[inverse[x]][inverse[y]]] for x in range(n) for y in range(n)
        )
        if best is None or flat < best:
            best = flat
    return best


# ---------------------------------------------------------------------------
# stock tables and text formats


def trivial_quandle(n: int) -> FiniteQuandle:
    """x*y = x for all x, y."""
    return FiniteQuandle([[x] * n for x in range(n)])


def dihedral_quandle(m: int) -> FiniteQuandle:
    """Integers mod m with x*y = 2y - x."""
    return FiniteQuandle([[(2 * y - x) % m for y in range(m)] for x in range(m)])


def format_quandle_table(q: FiniteQuandle) -> str:
    lines = [f"quandle {q.order}"]
    lines.extend(" ".join(str(v) for v in row) for row in q.op)
    return "\n".join(lines) + "\n"


def parse_quandle_table(text: str) -> FiniteQuandle:
    lines = [line for line in text.splitlines() if line.strip()]
    header = lines[0].split() if lines else []
    if len(header) != 2 or header[0] != "quandle" or not header[1].isdigit():
        raise ValueError('quandle table must start with "quandle <order>"')
    order = int(header[1])
    rows = [[int(v) for v in line.split()] for line in lines[1 : order + 1]]
    if len(rows) != order:
        raise ValueError(f"expected {order} table rows, found {len(rows)}")
    return FiniteQuandle(rows)


def profile_json(q: FiniteQuandle) -> dict:
    """Stable JSON-ready summary including coloring counts by R3 and R5."""
    prof = profile(q)
    return {
        "order": prof.order,
        "type": prof.type if prof.type != math.inf else "infinity",
        "connected": is_connected(q),
        "orbit_sizes": list(prof.orbit_sizes),
        "inner_group_order": prof.inner_group_order,
        "colorings": {
            "R3": hom_count(q, dihedral_quandle(3)),
            "R5": hom_count(q, dihedral_quandle(5)),
        },
    }
