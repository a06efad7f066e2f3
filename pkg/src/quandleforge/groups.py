"""Finite groups as multiplication tables over indices 0..order-1.

Groups are built from presentations by coset enumeration over the trivial
subgroup (HLT-style relator tracing with immediate coincidence merging), or
from explicit permutation generators.  Automorphism and isomorphism search
are exhaustive backtracking over generator images, pruned by element-order
data, so they are meant for desk-scale orders (default cap 360).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass

from .errors import BudgetExceeded, CapExceeded, ParseError
from .parsing import TokenStream

DEFAULT_BUDGET = 10_000
DEFAULT_CAP = 360


class FiniteGroup:
    """Immutable multiplication table with identity and inverse data.

    ``mul[x][y]`` is the product x*y.  The constructor checks that the table
    is square, that ``identity`` is two-sided and that every element has a
    two-sided inverse; full associativity is O(order^3) and is left to
    :func:`check_group_axioms`.
    """

    __slots__ = ("order", "mul", "identity", "inv", "name", "_automorphisms", "_order_vector",
                 "_aut_classes")

    def __init__(self, mul, identity: int = 0, name: str = ""):
        table = tuple(tuple(row) for row in mul)
        n = len(table)
        if n == 0:
            raise ValueError("group must be non-empty")
        for row in table:
            if len(row) != n or any(not (0 <= v < n) for v in row):
                raise ValueError("multiplication table is not a square table of indices")
        if table[identity] != tuple(range(n)) or any(table[x][identity] != x for x in range(n)):
            raise ValueError(f"element {identity} is not a two-sided identity")
        inv = [-1] * n
        for x in range(n):
            for y in range(n):
                if table[x][y] == identity and table[y][x] == identity:
                    inv[x] = y
                    break
            if inv[x] < 0:
                raise ValueError(f"element {x} has no two-sided inverse")
        self.order = n
        self.mul = table
        self.identity = identity
        self.inv = tuple(inv)
        self.name = name
        self._automorphisms: tuple[GroupAutomorphism, ...] | None = None
        self._order_vector: tuple[int, ...] | None = None
        self._aut_classes: tuple[int, ...] | None = None

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"


@dataclass(frozen=True)
class GroupPresentation:
    """Generator names plus relator words (tuples of signed 1-based letters)."""

    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator name")
        k = len(self.generators)
        for word in self.relators:
            for letter in word:
                if letter == 0 or abs(letter) > k:
                    raise ValueError(f"relator letter {letter} does not name a generator")


@dataclass(frozen=True)
class GroupAutomorphism:
    """A permutation of group elements compatible with multiplication."""

    group: FiniteGroup
    perm: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.perm[x]


def check_group_axioms(g: FiniteGroup) -> None:
    """Full associativity check by triple loop; raises ValueError on failure."""
    mul = g.mul
    n = g.order
    for x in range(n):
        rowx = mul[x]
        for y in range(n):
            xy = rowx[y]
            rowxy = mul[xy]
            rowy = mul[y]
            for z in range(n):
                if rowxy[z] != rowx[rowy[z]]:
                    raise ValueError(f"associativity fails at ({x}, {y}, {z})")


# ---------------------------------------------------------------------------
# presentation text format


def parse_group_presentation(text: str) -> GroupPresentation:
    """Parse ``group<x, y | x^2 = (x*y)^3 = y^3, x^4>``.

    Relator words use ``*`` for products, ``^`` for integer powers and
    parentheses for grouping.  An ``=`` chain is expanded into the pairwise
    relators ``lhs * rhs^-1``; a bare word is a relator equal to the identity.
    """
    ts = TokenStream(text)
    kw = ts.expect("ident", '"group"')
    if kw.text != "group":
        raise ParseError(f'expected "group", found {kw.text!r}', kw.line, kw.column,
                         expected=("group",))
    ts.expect("<")
    names = [ts.expect("ident", "generator name").text]
    while ts.accept(","):
        names.append(ts.expect("ident", "generator name").text)
    index = {name: i + 1 for i, name in enumerate(names)}
    if len(index) != len(names):
        raise ts.fail("duplicate generator name")
    ts.expect("|")
    relators: list[tuple[int, ...]] = []
    if ts.peek().kind != ">":
        relators.extend(_parse_relator_chain(ts, index))
        while ts.accept(","):
            relators.extend(_parse_relator_chain(ts, index))
    ts.expect(">")
    ts.expect("end", "end of input")
    return GroupPresentation(tuple(names), tuple(relators))


def _parse_relator_chain(ts: TokenStream, index: dict[str, int]) -> list[tuple[int, ...]]:
    words = [_parse_group_word(ts, index)]
    while ts.accept("="):
        words.append(_parse_group_word(ts, index))
    if len(words) == 1:
        return [words[0]]
    out = []
    for lhs, rhs in zip(words, words[1:]):
        out.append(lhs + _invert_word(rhs))
    return out


def _parse_group_word(ts: TokenStream, index: dict[str, int]) -> tuple[int, ...]:
    word = list(_parse_group_factor(ts, index))
    while ts.accept("*"):
        word.extend(_parse_group_factor(ts, index))
    return tuple(word)


def _parse_group_factor(ts: TokenStream, index: dict[str, int]) -> tuple[int, ...]:
    tok = ts.peek()
    if tok.kind == "ident":
        ts.next()
        if tok.text not in index:
            raise ParseError(f"unknown generator {tok.text!r}", tok.line, tok.column)
        base: tuple[int, ...] = (index[tok.text],)
    elif tok.kind == "(":
        ts.next()
        base = _parse_group_word(ts, index)
        ts.expect(")")
    else:
        raise ts.fail(f"expected generator or '(', found {tok.text or 'end of input'!r}",
                      expected=("ident", "("))
    if ts.accept("^"):
        sign = -1 if ts.accept("-") else 1
        exp = sign * int(ts.expect("int", "integer exponent").text)
        if exp == 0:
            return ()
        if exp < 0:
            base = _invert_word(base)
            exp = -exp
        return base * exp
    return base


def _invert_word(word: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-letter for letter in reversed(word))


def _free_reduce_cols(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for col in word:
        if out and out[-1] == col ^ 1:
            out.pop()
        else:
            out.append(col)
    return tuple(out)


def format_group_table(g: FiniteGroup) -> str:
    lines = [f"group {g.order}"]
    lines.extend(" ".join(str(v) for v in row) for row in g.mul)
    return "\n".join(lines) + "\n"


def parse_group_table(text: str) -> FiniteGroup:
    lines = [line for line in text.splitlines() if line.strip()]
    header = lines[0].split() if lines else []
    if len(header) != 2 or header[0] != "group" or not header[1].isdigit():
        raise ValueError('group table must start with "group <order>"')
    order = int(header[1])
    rows = [[int(v) for v in line.split()] for line in lines[1 : order + 1]]
    if len(rows) != order:
        raise ValueError(f"expected {order} table rows, found {len(rows)}")
    table = tuple(tuple(row) for row in rows)
    identity = next((x for x in range(order) if table[x] == tuple(range(order))), None)
    if identity is None:
        raise ValueError("table has no identity row")
    return FiniteGroup(table, identity=identity)


# ---------------------------------------------------------------------------
# coset enumeration


def group_from_presentation(p: GroupPresentation, budget: int = DEFAULT_BUDGET,
                            name: str = "") -> FiniteGroup:
    """Build the presented group by coset enumeration over the trivial subgroup.

    Element 0 is the identity; the remaining elements are numbered in the
    order their cosets were first defined, so the table is deterministic for
    a given presentation and budget.  Raises BudgetExceeded when more than
    ``budget`` cosets get allocated, which signals a possibly infinite group.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    ngens = len(p.generators)
    ncols = 2 * ngens
    # letter g (1-based, signed) -> column 2*(g-1) for g, 2*(g-1)+1 for g^-1
    relator_cols = [word for word in (
        _free_reduce_cols(tuple(
            (2 * (letter - 1)) if letter > 0 else (2 * (-letter - 1) + 1) for letter in word))
        for word in p.relators) if word]

    table: list[list[int] | None] = [[-1] * ncols]
    parent = [0]
    creation: list[tuple[int, int]] = [(-1, -1)]
    pending: deque[int] = deque()
    allocated = 1
    merges = 0

    def rep(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a: int, b: int) -> None:
        nonlocal merges
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        parent[b] = a
        merges += 1
        pending.append(b)

    def define(x: int, col: int, y: int) -> None:
        x, y = rep(x), rep(y)
        row = table[x]
        cur = row[col]
        if cur >= 0:
            union(cur, y)
            return
        row[col] = y
        twin = table[y][col ^ 1]
        if twin >= 0:
            if rep(twin) != x:
                union(twin, x)
        else:
            table[y][col ^ 1] = x

    def drain() -> None:
        while pending:
            dead = pending.popleft()
            row = table[dead]
            table[dead] = None
            if row is None:
                continue
            for col in range(ncols):
                v = row[col]
                if v >= 0:
                    define(rep(dead), col, v)

    def new_coset(creator: int, col: int) -> int:
        nonlocal allocated
        if allocated + 1 > budget:
            raise BudgetExceeded(
                f"coset enumeration exceeded budget of {budget} cosets", allocated=allocated)
        idx = len(table)
        table.append([-1] * ncols)
        parent.append(idx)
        creation.append((creator, col))
        allocated += 1
        table[creator][col] = idx
        table[idx][col ^ 1] = creator
        return idx

    def trace_fill(start: int, word: tuple[int, ...]) -> None:
        # enforce start . word == start, filling gaps HLT-style
        if not word:
            return
        w = rep(start)
        n = len(word)
        i, cur = 0, w
        while i < n:
            cur = rep(cur)
            v = table[cur][word[i]]
            if v < 0:
                break
            cur = v
            i += 1
        else:
            union(rep(cur), rep(w))
            return
        j, back = n, w
        while j - 1 > i:
            back = rep(back)
            v = table[back][word[j - 1] ^ 1]
            if v < 0:
                break
            back = v
            j -= 1
        while j - 1 > i:
            cur = rep(cur)
            v = table[cur][word[i]]
            cur = rep(v) if v >= 0 else new_coset(cur, word[i])
            i += 1
        define(rep(cur), word[i], rep(back))

    scan = 0
    while True:
        drain()
        progressed_at = (allocated, merges)
        while scan < len(table):
            if parent[scan] == scan and table[scan] is not None:
                for word in relator_cols:
                    trace_fill(scan, word)
                    drain()
                if parent[scan] == scan and table[scan] is not None:
                    row = table[scan]
                    for col in range(ncols):
                        if row[col] < 0:
                            new_coset(scan, col)
                            drain()
                            row = table[scan]
                            if row is None or parent[scan] != scan:
                                break
            scan += 1
        # verification sweep: no live gaps, every relator closes at every coset
        stable = True
        for x in range(len(table)):
            if parent[x] != x or table[x] is None:
                continue
            if any(v < 0 for v in table[x]):
                stable = False
                break
            for word in relator_cols:
                cur = x
                for col in word:
                    step = table[rep(cur)][col]
                    if step < 0:
                        cur = -1
                        break
                    cur = rep(step)
                if cur != x:
                    stable = False
                    break
            if not stable:
                break
        if stable and not pending:
            break
        if (allocated, merges) == progressed_at and not pending:
            # verification found work missed by the single pass: rescan
            scan = 0

    live = [x for x in range(len(table)) if parent[x] == x and table[x] is not None]
    renum = {old: new for new, old in enumerate(live)}
    order = len(live)

    def word_of(coset: int) -> list[int]:
        path = []
        while True:
            creator, col = creation[coset]
            if creator < 0:
                break
            path.append(col)
            coset = creator
        path.reverse()
        return path

    mul = [[0] * order for _ in range(order)]
    for old_y in live:
        path = word_of(old_y)
        col_y = renum[old_y]
        for old_x in live:
            cur = old_x
            for col in path:
                cur = rep(table[rep(cur)][col])
            mul[renum[old_x]][col_y] = renum[cur]
    return FiniteGroup(mul, identity=renum[rep(0)], name=name)


def group_from_permutations(perms: list[list[int]], name: str = "") -> FiniteGroup:
    """Close permutation generators under composition into a multiplication table.

    Elements are numbered breadth-first from the identity, following the
    generators in the order given.
    """
    if not perms:
        raise ValueError("need at least one permutation generator")
    degree = len(perms[0])
    gens = []
    for p in perms:
        t = tuple(p)
        if sorted(t) != list(range(degree)):
            raise ValueError("generator is not a permutation")
        gens.append(t)
    identity = tuple(range(degree))
    elements = [identity]
    seen = {identity: 0}
    queue = deque([identity])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = tuple(cur[g[i]] for i in range(degree))
            if nxt not in seen:
                seen[nxt] = len(elements)
                elements.append(nxt)
                queue.append(nxt)
    n = len(elements)
    mul = [[0] * n for _ in range(n)]
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            prod = tuple(a[b[k]] for k in range(degree))
            mul[i][j] = seen[prod]
    return FiniteGroup(mul, identity=0, name=name)


def cyclic_group(m: int) -> FiniteGroup:
    if m < 1:
        raise ValueError("order must be positive")
    mul = [[(a + b) % m for b in range(m)] for a in range(m)]
    return FiniteGroup(mul, identity=0, name=f"Z{m}")


# ---------------------------------------------------------------------------
# element and automorphism arithmetic


def element_order(g: FiniteGroup, x: int) -> int:
    """Least m > 0 with x^m equal to the identity."""
    if not 0 <= x < g.order:
        raise ValueError(f"element {x} out of range")
    cur = x
    m = 1
    while cur != g.identity:
        cur = g.mul[cur][x]
        m += 1
    return m


def _order_vector(g: FiniteGroup) -> tuple[int, ...]:
    if g._order_vector is None:
        g._order_vector = tuple(element_order(g, x) for x in range(g.order))
    return g._order_vector


def _generating_set(g: FiniteGroup) -> list[int]:
    """Greedy generating set: add the first element outside the span so far."""
    gens: list[int] = []
    span = {g.identity}
    for x in range(g.order):
        if x in span:
            continue
        gens.append(x)
        frontier = deque(span | {x})
        span.add(x)
        while frontier:
            a = frontier.popleft()
            for b in gens:
                for prod in (g.mul[a][b], g.mul[b][a]):
                    if prod not in span:
                        span.add(prod)
                        frontier.append(prod)
        if len(span) == g.order:
            break
    return gens


def _definition_chain(g: FiniteGroup, gens: list[int]) -> list[tuple[int, int, int]]:
    """BFS definitions (element, earlier element, generator position) covering the group."""
    chain: list[tuple[int, int, int]] = []
    seen = {g.identity}
    queue = deque([g.identity])
    while queue:
        cur = queue.popleft()
        for pos, gen in enumerate(gens):
            nxt = g.mul[cur][gen]
            if nxt not in seen:
                seen.add(nxt)
                chain.append((nxt, cur, pos))
                queue.append(nxt)
    if len(seen) != g.order:
        raise ValueError("generating set does not generate the group")
    return chain


def _extend_homomorphism(src: FiniteGroup, dst: FiniteGroup, gens: list[int],
                         chain: list[tuple[int, int, int]], images: tuple[int, ...],
                         injective: bool) -> list[int] | None:
    """Map src into dst from generator images; None when not a homomorphism."""
    f = [-1] * src.order
    f[src.identity] = dst.identity
    used = [False] * dst.order
    used[dst.identity] = True
    if injective and src.identity in gens:
        pass
    for elem, base, pos in chain:
        v = dst.mul[f[base]][images[pos]]
        if injective:
            if used[v]:
                return None
            used[v] = True
        f[elem] = v
    # multiplicativity on (element, generator) pairs implies it everywhere
    for pos, gen in enumerate(gens):
        img = images[pos]
        for x in range(src.order):
            if f[src.mul[x][gen]] != dst.mul[f[x]][img]:
                return None
    return f


def automorphisms(g: FiniteGroup, cap: int = DEFAULT_CAP) -> list[GroupAutomorphism]:
    """The full automorphism group, ordered lexicographically by generator images.

    Backtracking over generator images pruned by element order; results are
    cached on the group object.
    """
    if g.order > cap:
        raise CapExceeded(f"group order {g.order} exceeds the automorphism cap {cap}")
    if g._automorphisms is not None:
        return list(g._automorphisms)
    gens = _generating_set(g)
    chain = _definition_chain(g, gens)
    orders = _order_vector(g)
    candidates = [[y for y in range(g.order) if orders[y] == orders[x]] for x in gens]
    found = []
    for images in itertools.product(*candidates):
        f = _extend_homomorphism(g, g, gens, chain, images, injective=True)
        if f is not None:
            found.append(GroupAutomorphism(g, tuple(f)))
    g._automorphisms = tuple(found)
    return list(found)


def automorphism_classes(g: FiniteGroup, cap: int = DEFAULT_CAP) -> tuple[int, ...]:
    """Conjugacy class index for each entry of automorphisms(g), cached.

    Conjugate automorphisms yield isomorphic Alexander quandles, so searches
    over automorphisms only need one representative per class.
    """
    if g._aut_classes is not None:
        return g._aut_classes
    auts = automorphisms(g, cap=cap)
    perms = [f.perm for f in auts]
    index = {perm: i for i, perm in enumerate(perms)}
    inverses = [tuple(_invert_perm_tuple(p)) for p in perms]
    n = len(perms)
    classes = [-1] * n
    next_class = 0
    for start in range(n):
        if classes[start] >= 0:
            continue
        classes[start] = next_class
        frontier = [start]
        while frontier:
            i = frontier.pop()
            fi = perms[i]
            for h, hinv in zip(perms, inverses):
                conj = tuple(h[fi[hinv[x]]] for x in range(len(fi)))
                j = index[conj]
                if classes[j] < 0:
                    classes[j] = next_class
                    frontier.append(j)
        next_class += 1
    g._aut_classes = tuple(classes)
    return g._aut_classes


def _invert_perm_tuple(perm: tuple[int, ...]) -> list[int]:
    out = [0] * len(perm)
    for i, v in enumerate(perm):
        out[v] = i
    return out


def automorphism_order(f: GroupAutomorphism) -> int:
    """Least m > 0 with the m-fold composition equal to the identity map."""
    return _perm_order(f.perm)


def power(f: GroupAutomorphism, s: int) -> GroupAutomorphism:
    """The s-fold composition of f; negative s composes the inverse."""
    return GroupAutomorphism(f.group, _perm_power(f.perm, s))


def _perm_cycles(perm: tuple[int, ...]) -> list[list[int]]:
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cur, cycle = start, []
        while not seen[cur]:
            seen[cur] = True
            cycle.append(cur)
            cur = perm[cur]
        cycles.append(cycle)
    return cycles


def _perm_order(perm: tuple[int, ...]) -> int:
    return math.lcm(*(len(c) for c in _perm_cycles(perm)))


def _perm_power(perm: tuple[int, ...], s: int) -> tuple[int, ...]:
    out = [0] * len(perm)
    for cycle in _perm_cycles(perm):
        k = len(cycle)
        for i, v in enumerate(cycle):
            out[v] = cycle[(i + s) % k]
    return tuple(out)


def groups_isomorphic(g1: FiniteGroup, g2: FiniteGroup,
                      cap: int = DEFAULT_CAP) -> tuple[bool, tuple[int, ...] | None]:
    """Decide isomorphism by backtracking; returns (answer, witness bijection or None)."""
    if g1.order > cap or g2.order > cap:
        raise CapExceeded(f"group order exceeds the isomorphism cap {cap}")
    if g1.order != g2.order:
        return False, None
    if g1 is g2 or g1.mul == g2.mul:
        return True, tuple(range(g1.order))
    if Counter(_order_vector(g1)) != Counter(_order_vector(g2)):
        return False, None
    gens = _generating_set(g1)
    chain = _definition_chain(g1, gens)
    orders1 = _order_vector(g1)
    orders2 = _order_vector(g2)
    candidates = [[y for y in range(g2.order) if orders2[y] == orders1[x]] for x in gens]
    for images in itertools.product(*candidates):
        f = _extend_homomorphism(g1, g2, gens, chain, images, injective=True)
        if f is not None:
            return True, tuple(f)
    return False, None
