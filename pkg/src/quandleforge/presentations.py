"""Finitely presented quandles: parsing, Tietze simplification, and completion.

A presentation ``quandle<a, b | (a*b)*a = b, a*^4 b = a>`` lists generators
and equations between terms.  ``complete`` decides finiteness within a
budget by deterministic saturation: points are allocated for the orbit of
the generators under the basic right translations, every relation is traced
both as a point equation and as an identity of translation operators at
every point, idempotence is traced per point, and coincidences are merged
through a union-find with immediate propagation.  Bijectivity of the
translations is structural: the table stores each translation and its
inverse as paired columns.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Union

from .errors import BudgetExceeded, ParseError
from .parsing import TokenStream
from .quandles import FiniteQuandle, format_quandle_table, validate

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class Gen:
    """A generator leaf."""

    name: str


@dataclass(frozen=True)
class Op:
    """``left *^power right``; power -1 is the inverse operation, 1 plain ``*``."""

    left: "QuandleTerm"
    right: "QuandleTerm"
    power: int = 1


QuandleTerm = Union[Gen, Op]


def term_generators(term: QuandleTerm) -> set[str]:
    if isinstance(term, Gen):
        return {term.name}
    return term_generators(term.left) | term_generators(term.right)


def substitute(term: QuandleTerm, name: str, replacement: QuandleTerm) -> QuandleTerm:
    if isinstance(term, Gen):
        return replacement if term.name == name else term
    return Op(substitute(term.left, name, replacement),
              substitute(term.right, name, replacement), term.power)


def format_term(term: QuandleTerm) -> str:
    if isinstance(term, Gen):
        return term.name
    left = format_term(term.left)
    if isinstance(term.left, Op) and term.left.power != term.power:
        # left-associativity only absorbs a chain of the same operator symbol
        left = f"({left})"
    elif isinstance(term.left, Op) and term.power != 1:
        left = f"({left})"
    right = format_term(term.right)
    if isinstance(term.right, Op):
        right = f"({right})"
    if term.power == 1:
        return f"{left}*{right}"
    if term.power == -1:
        return f"{left}*-{right}"
    return f"{left}*^{term.power} {right}"


@dataclass(frozen=True)
class QuandlePresentation:
    """Generator names and relations as pairs of terms."""

    generators: tuple[str, ...]
    relations: tuple[tuple[QuandleTerm, QuandleTerm], ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator name")
        declared = set(self.generators)
        for lhs, rhs in self.relations:
            for name in term_generators(lhs) | term_generators(rhs):
                if name not in declared:
                    raise ValueError(f"relation mentions undeclared generator {name!r}")

    def to_text(self) -> str:
        rels = ", ".join(f"{format_term(a)} = {format_term(b)}" for a, b in self.relations)
        return f"quandle<{', '.join(self.generators)} | {rels}>"


def parse(text: str) -> QuandlePresentation:
    """Parse presentation text; raises ParseError with line/column on bad input."""
    ts = TokenStream(text)
    kw = ts.expect("ident", '"quandle"')
    if kw.text != "quandle":
        raise ParseError(f'expected "quandle", found {kw.text!r}', kw.line, kw.column,
                         expected=("quandle",))
    ts.expect("<")
    names = [ts.expect("ident", "generator name").text]
    while ts.accept(","):
        names.append(ts.expect("ident", "generator name").text)
    if len(set(names)) != len(names):
        raise ts.fail("duplicate generator name")
    declared = set(names)
    ts.expect("|")
    relations: list[tuple[QuandleTerm, QuandleTerm]] = []
    if ts.peek().kind != ">":
        relations.append(_parse_relation(ts, declared))
        while ts.accept(","):
            relations.append(_parse_relation(ts, declared))
    ts.expect(">")
    ts.expect("end", "end of input")
    return QuandlePresentation(tuple(names), tuple(relations))


def _parse_relation(ts: TokenStream, declared: set[str]) -> tuple[QuandleTerm, QuandleTerm]:
    lhs = _parse_term(ts, declared)
    ts.expect("=")
    rhs = _parse_term(ts, declared)
    return lhs, rhs


def _parse_term(ts: TokenStream, declared: set[str]) -> QuandleTerm:
    term = _parse_atom(ts, declared)
    while ts.accept("*"):
        if ts.accept("-"):
            power = -1
        elif ts.accept("^"):
            sign = -1 if ts.accept("-") else 1
            power = sign * int(ts.expect("int", "integer exponent").text)
        else:
            power = 1
        term = Op(term, _parse_atom(ts, declared), power)
    return term


def _parse_atom(ts: TokenStream, declared: set[str]) -> QuandleTerm:
    tok = ts.peek()
    if tok.kind == "ident":
        ts.next()
        if tok.text not in declared:
            raise ParseError(f"unknown generator {tok.text!r}", tok.line, tok.column)
        return Gen(tok.text)
    if tok.kind == "(":
        ts.next()
        term = _parse_term(ts, declared)
        ts.expect(")")
        return term
    raise ts.fail(f"expected generator or '(', found {tok.text or 'end of input'!r}",
                  expected=("ident", "("))


# ---------------------------------------------------------------------------
# presentation surgery


def add_type_relations(p: QuandlePresentation, n: int) -> QuandlePresentation:
    """Append ``x *^n y = x`` for every ordered pair of distinct generators."""
    if n < 1:
        raise ValueError("n must be positive")
    extra = []
    for x in p.generators:
        for y in p.generators:
            if x != y:
                extra.append((Op(Gen(x), Gen(y), n), Gen(x)))
    return QuandlePresentation(p.generators, p.relations + tuple(extra))


def simplify(p: QuandlePresentation) -> QuandlePresentation:
    """Tietze elimination: remove generators defined by a relation g = term.

    Also drops relations that become syntactically ``t = t``.  Completion of
    the output is isomorphic to completion of the input; that is a tested
    property, not an assumption.
    """
    generators = list(p.generators)
    relations = list(p.relations)
    changed = True
    while changed:
        changed = False
        relations = [(a, b) for a, b in relations if a != b]
        for i, (lhs, rhs) in enumerate(relations):
            target: str | None = None
            replacement: QuandleTerm | None = None
            if isinstance(lhs, Gen) and lhs.name not in term_generators(rhs):
                target, replacement = lhs.name, rhs
            elif isinstance(rhs, Gen) and rhs.name not in term_generators(lhs):
                target, replacement = rhs.name, lhs
            if target is None or len(generators) == 1:
                continue
            del relations[i]
            relations = [
                (substitute(a, target, replacement), substitute(b, target, replacement))
                for a, b in relations
            ]
            generators.remove(target)
            changed = True
            break
    return QuandlePresentation(tuple(generators), tuple(relations))


# ---------------------------------------------------------------------------
# completion


@dataclass(frozen=True)
class CompletionStats:
    allocated: int
    merges: int


@dataclass(frozen=True)
class CompletionResult:
    quandle: FiniteQuandle
    generator_images: dict[str, int]
    stats: CompletionStats

    def serialize(self) -> str:
        """JSON header (generator images and stats) followed by the table text."""
        header = json.dumps({
            "generator_images": dict(sorted(self.generator_images.items())),
            "stats": {"allocated": self.stats.allocated, "merges": self.stats.merges},
        }, sort_keys=True)
        return header + "\n" + format_quandle_table(self.quandle)


def _operator_word(term: QuandleTerm, index: dict[str, int]) -> tuple[int, ...]:
    """Word over basic translation columns acting like the translation by term.

    Column 2i is the translation by generator i, column 2i+1 its inverse.
    S_{u *^k v} = S_v^-k S_u S_v^k.
    """
    if isinstance(term, Gen):
        return (2 * index[term.name],)
    wl = _operator_word(term.left, index)
    wr = _operator_word(term.right, index)
    k = term.power
    if k >= 0:
        return _inverse_word(wr) * k + wl + wr * k
    return wr * (-k) + wl + _inverse_word(wr) * (-k)


def _inverse_word(word: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(col ^ 1 for col in reversed(word))


def _free_reduce(word: tuple[int, ...]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs; sound because columns are paired bijections."""
    out: list[int] = []
    for col in word:
        if out and out[-1] == col ^ 1:
            out.pop()
        else:
            out.append(col)
    return tuple(out)


class _Saturation:
    """Partial translation table with union-find coincidence merging."""

    def __init__(self, ngens: int, budget: int):
        self.ncols = 2 * ngens
        self.budget = budget
        self.table: list[list[int] | None] = []
        self.parent: list[int] = []
        self.creation: list[tuple[int, int]] = []
        self.pending: deque[int] = deque()
        self.allocated = 0
        self.merges = 0
        self.defines = 0
        self.seeds = [self._new_root(i) for i in range(ngens)]

    def _new_root(self, gen_index: int) -> int:
        idx = self._alloc()
        self.creation.append((-1 - gen_index, -1))
        return idx

    def _alloc(self) -> int:
        if self.allocated + 1 > self.budget:
            raise BudgetExceeded(
                f"completion exceeded budget of {self.budget} elements",
                allocated=self.allocated)
        idx = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(idx)
        self.allocated += 1
        return idx

    def new_point(self, creator: int, col: int) -> int:
        idx = self._alloc()
        self.creation.append((creator, col))
        self.table[creator][col] = idx
        self.table[idx][col ^ 1] = creator
        self.defines += 1
        return idx

    def rep(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.merges += 1
        self.pending.append(b)

    def define(self, x: int, col: int, y: int) -> None:
        x, y = self.rep(x), self.rep(y)
        row = self.table[x]
        cur = row[col]
        if cur >= 0:
            self.union(cur, y)
            return
        row[col] = y
        self.defines += 1
        twin = self.table[y][col ^ 1]
        if twin >= 0:
            if self.rep(twin) != x:
                self.union(twin, x)
        else:
            self.table[y][col ^ 1] = x

    def drain(self) -> None:
        while self.pending:
            dead = self.pending.popleft()
            row = self.table[dead]
            self.table[dead] = None
            if row is None:
                continue
            for col in range(self.ncols):
                v = row[col]
                if v >= 0:
                    self.define(self.rep(dead), col, v)

    def walk_fill(self, start: int, word: tuple[int, ...]) -> int:
        """Apply a translation word, allocating fresh points for gaps."""
        cur = self.rep(start)
        for col in word:
            cur = self.rep(cur)
            v = self.table[cur][col]
            cur = self.rep(v) if v >= 0 else self.new_point(cur, col)
        return self.rep(cur)

    def trace_fill(self, start: int, word: tuple[int, ...]) -> None:
        """Enforce ``start . word == start``, filling gaps HLT-style."""
        if not word:
            return
        w = self.rep(start)
        n = len(word)
        i, cur = 0, w
        while i < n:
            cur = self.rep(cur)
            v = self.table[cur][word[i]]
            if v < 0:
                break
            cur = v
            i += 1
        else:
            self.union(self.rep(cur), self.rep(w))
            return
        j, back = n, w
        while j - 1 > i:
            back = self.rep(back)
            v = self.table[back][word[j - 1] ^ 1]
            if v < 0:
                break
            back = v
            j -= 1
        while j - 1 > i:
            cur = self.rep(cur)
            v = self.table[cur][word[i]]
            cur = self.rep(v) if v >= 0 else self.new_point(cur, word[i])
            i += 1
        self.define(self.rep(cur), word[i], self.rep(back))

    def live_points(self) -> list[int]:
        return [x for x in range(len(self.table))
                if self.parent[x] == x and self.table[x] is not None]

    def path_of(self, point: int) -> tuple[int, list[int]]:
        """(base generator index, column path) recorded at creation time."""
        path: list[int] = []
        while True:
            creator, col = self.creation[point]
            if creator < 0:
                return -1 - creator, path[::-1]
            path.append(col)
            point = creator

    def idempotence_word(self, point: int) -> tuple[int, ...]:
        base, path = self.path_of(point)
        return _free_reduce(_inverse_word(tuple(path)) + (2 * base,) + tuple(path))


def complete(p: QuandlePresentation, budget: int = DEFAULT_BUDGET) -> CompletionResult:
    """Complete a presentation to a finite operation table, or fail on budget.

    Deterministic: identical inputs give identical tables and generator
    images.  Raises BudgetExceeded when more than ``budget`` elements get
    allocated, which usually means the presented quandle is infinite.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    index = {name: i for i, name in enumerate(p.generators)}
    sat = _Saturation(len(p.generators), budget)
    value_words = []
    relator_words = []
    for lhs, rhs in p.relations:
        lw = _operator_word(lhs, index)
        rw = _operator_word(rhs, index)
        lbase = _base_point_word(lhs, index)
        rbase = _base_point_word(rhs, index)
        value_words.append((lbase, rbase))
        rho = _free_reduce(lw + _inverse_word(rw))
        if rho:
            relator_words.append(rho)

    while True:
        sat.drain()
        before = (sat.allocated, sat.merges, sat.defines)
        for (lseed, lword), (rseed, rword) in value_words:
            lv = sat.walk_fill(sat.seeds[lseed], lword)
            rv = sat.walk_fill(sat.seeds[rseed], rword)
            sat.union(lv, rv)
            sat.drain()
        i = 0
        while i < len(sat.table):
            if sat.parent[i] == i and sat.table[i] is not None:
                sat.trace_fill(i, sat.idempotence_word(i))
                sat.drain()
                for rho in relator_words:
                    if sat.parent[i] != i or sat.table[i] is None:
                        break
                    sat.trace_fill(i, rho)
                    sat.drain()
            i += 1
        live = sat.live_points()
        gaps = [(x, col) for x in live for col in range(sat.ncols)
                if sat.table[x][col] < 0]
        if (sat.allocated, sat.merges, sat.defines) == before:
            if not gaps:
                break
            sat.new_point(*gaps[0])
            sat.drain()

    live = sat.live_points()
    renum = {old: new for new, old in enumerate(live)}
    order = len(live)
    op = [[0] * order for _ in range(order)]
    for old_y in live:
        base, path = sat.path_of(old_y)
        word = _inverse_word(tuple(path)) + (2 * base,) + tuple(path)
        col_y = renum[old_y]
        for old_x in live:
            cur = old_x
            for col in word:
                cur = sat.rep(sat.table[sat.rep(cur)][col])
            op[renum[old_x]][col_y] = renum[cur]
    quandle = FiniteQuandle(op)
    images = {name: renum[sat.rep(sat.seeds[i])] for name, i in index.items()}
    _check_completion(quandle, p, images)
    return CompletionResult(quandle, images, CompletionStats(sat.allocated, sat.merges))


def _base_point_word(term: QuandleTerm, index: dict[str, int]) -> tuple[int, tuple[int, ...]]:
    """(seed generator, translation word) whose application evaluates the term."""
    if isinstance(term, Gen):
        return index[term.name], ()
    seed, word = _base_point_word(term.left, index)
    wr = _operator_word(term.right, index)
    k = term.power
    tail = wr * k if k >= 0 else _inverse_word(wr) * (-k)
    return seed, word + tail


def _check_completion(q: FiniteQuandle, p: QuandlePresentation, images: dict[str, int]) -> None:
    """The closed table must be a quandle satisfying every relation."""
    result = validate(q)
    if not result.ok:
        raise RuntimeError(
            f"completion produced a non-quandle table ({result.axiom} fails at {result.witness})")
    inv_cols = [[0] * q.order for _ in range(q.order)]
    for y in range(q.order):
        for x in range(q.order):
            inv_cols[y][q.op[x][y]] = x

    def evaluate(term: QuandleTerm) -> int:
        if isinstance(term, Gen):
            return images[term.name]
        left = evaluate(term.left)
        right = evaluate(term.right)
        k = term.power
        for _ in range(abs(k)):
            left = q.op[left][right] if k > 0 else inv_cols[right][left]
        return left

    for lhs, rhs in p.relations:
        if evaluate(lhs) != evaluate(rhs):
            raise RuntimeError(f"completion does not satisfy relation "
                               f"{format_term(lhs)} = {format_term(rhs)}")
