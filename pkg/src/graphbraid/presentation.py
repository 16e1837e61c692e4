"""Presentations of graph braid groups from critical cells."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import comb

import networkx as nx
import sympy

from .config_complex import ConfigurationComplex
from .graph_model import VertexOrder, format_graph
from .morse_field import FieldError, MorseField, Tag, critical_cells
from .notation import DEL, DOT, EDGE, STAR, CriticalNotation, Notation, NotationError, Term
from .rewrite_engine import RewriteSystem, free_reduce, inverse

CONVENTION = "boundary:tau-ordered,top-right-bottom^-1-left^-1;generators:notation-lex;v1"


@dataclass
class Relator:
    """One relator: the critical 2-cell, its reduced word and a bracket form.

    ``word`` uses signed 1-based generator indices.  When ``halves`` is set
    the relator equals ``[x, y]`` up to cyclic rotation and inversion.
    """

    cell: tuple
    word: tuple
    halves: tuple | None = None


@dataclass
class GroupPresentation:
    n: int
    generators: list
    names: list
    relators: list
    counts: list
    euler: int
    graph_hash: str
    is_tree: bool
    convention: str = CONVENTION
    extras: dict = field(default_factory=dict)

    @property
    def non_optimal(self) -> bool:
        return not self.is_tree

    def format_word(self, word) -> str:
        out = []
        for x in word:
            s = f"({self.names[abs(x) - 1]})"
            out.append(s if x > 0 else s + "^-1")
        return " ".join(out) or "1"

    def format_relator(self, r: Relator) -> str:
        if r.halves is not None:
            x, y = r.halves
            return f"[ {self.format_word(x)} , {self.format_word(y)} ]"
        return self.format_word(r.word)


class Presenter:
    """Runs classification and rewriting for one complex.

    Args:
        cx: the configuration complex.
        strategy: ``"memo"`` (memoized innermost), ``"leftmost"`` or ``"rightmost"``.
        trace: optional rewrite trace callback.
    """

    def __init__(self, cx: ConfigurationComplex, strategy: str = "memo", trace=None):
        self.cx = cx
        self.order: VertexOrder = cx.order
        self.field = MorseField(cx)
        self.rewriter = RewriteSystem(self.field, trace=trace)
        self.notation = Notation(cx)
        self.strategy = strategy
        self._critical = None
        self._gens = None

    @property
    def critical(self):
        if self._critical is None:
            self._critical = critical_cells(self.cx)
        return self._critical

    # ------------------------------------------------------------ generators

    def generator_key(self, c):
        try:
            nt = self.notation.encode(c)
        except NotationError:
            return (2, (), c)
        key = []
        for t in nt.terms:
            key.append(({DEL: 0, EDGE: 1, DOT: 1}.get(t.kind, 2), t.vertex, t.other,
                        t.direction, t.vector, t.count))
        return (0 if any(t.kind == DEL for t in nt.terms) else 1, tuple(key), c)

    def generators(self) -> list:
        if self._gens is None:
            self._gens = sorted(self.critical.by_dim.get(1, []), key=self.generator_key)
            self._gen_index = {c: k + 1 for k, c in enumerate(self._gens)}
        return self._gens

    def generator_names(self) -> list:
        return [self.notation.name(c) or self.cx.format_cell(c) for c in self.generators()]

    def to_generators(self, letters) -> tuple:
        self.generators()
        out = []
        for x in letters:
            c = self.rewriter.cell(x)
            if c not in self._gen_index:
                raise FieldError(f"non-critical letter {self.cx.format_cell(c)} in a normal form")
            k = self._gen_index[c]
            out.append(k if x > 0 else -k)
        return tuple(out)

    # ------------------------------------------------------------ relators

    def reduce(self, letters) -> tuple:
        if self.strategy == "memo":
            return self.rewriter.normal_form(letters)
        return self.rewriter.reduce(letters, self.strategy)

    def two_cells(self) -> list:
        return sorted(self.critical.by_dim.get(2, []), key=self.generator_key)

    def relators_generic(self) -> list:
        out = []
        for c in self.two_cells():
            letters = self.rewriter.word(self.cx.boundary_word(c))
            out.append(Relator(c, self.to_generators(self.reduce(letters))))
        return out

    def relators_tree_closed_form(self) -> list:
        """Relators from the closed formulas for trees, with bracket halves."""
        return [self._closed_form(c) for c in self.two_cells()]

    def _factor(self, terms, star) -> tuple:
        """Generator word of one named cell: a letter, or empty if collapsible."""
        terms = [t for t in terms if not (t.kind == STAR and t.count == 0)]
        if star:
            terms.append(Term(STAR, 0, count=star))
        c = self.notation.decode(CriticalNotation(tuple(terms)))
        tag = self.field.classify(c)
        if tag is Tag.COLLAPSIBLE:
            return ()
        if tag is Tag.REDUNDANT:
            raise FieldError(f"closed-form factor {self.cx.format_cell(c)} is redundant")
        return (self._gen_index[c],)

    def _closed_form(self, c) -> Relator:
        o = self.order
        self.generators()
        nt = self.notation.encode(c)
        edges = [t for t in nt.terms if t.kind == EDGE]
        stars = [t.count for t in nt.terms if t.kind == STAR]
        if len(edges) != 2 or len(nt.terms) != 2 + len(stars):
            raise FieldError(f"critical 2-cell {self.cx.format_cell(c)} is not a pair of edge clusters")
        p = stars[0] if stars else 0
        ta, tb = sorted(edges, key=lambda t: t.vertex)
        A, B, k, a, b = ta.vertex, tb.vertex, ta.direction, list(ta.vector), list(tb.vector)
        na, nb = sum(a), sum(b)
        beta = self._factor([tb], p + na)
        C = o.wedge(A, B)
        if C != A:
            i, j = o.g(C, A), o.g(C, B)
            dc = o.tree_degree[C] - 1
            alpha = self._factor([ta], p + nb)
            w1 = ()
            for s in range(nb):
                vec = [0] * dc
                vec[i - 1] += na
                vec[j - 1] += nb - s
                w1 += self._factor([Term(EDGE, C, tuple(vec), j)], p + s)
            conj = w1 + alpha + inverse(w1)
            flat = beta + conj + inverse(beta) + inverse(conj)
            halves = (beta, free_reduce(conj))
        else:
            i = o.g(A, B)
            shifted = list(a)
            shifted[i - 1] += nb
            alpha = self._factor([Term(EDGE, A, tuple(shifted), k)], p)
            w3 = self._w3(A, a, nb, i, p)
            a2 = list(a)
            a2[k - 1] -= 1
            w3p = self._w3(A, a2, nb, i, p + 1)
            flat = w3 + beta + inverse(w3) + alpha + w3p + inverse(beta) + inverse(w3p) + inverse(alpha)
            halves = (free_reduce(inverse(w3) + alpha + w3p), beta)
        return Relator(c, free_reduce(flat), halves)

    def _w3(self, A, a, nb, i, p) -> tuple:
        out = ()
        cur = list(a)
        for s in range(sum(a)):
            beta_idx = next(d for d, x in enumerate(cur, 1) if x)
            if beta_idx > i:
                vec = list(cur)
                vec[i - 1] += nb
                out += self._factor([Term(EDGE, A, tuple(vec), beta_idx)], p + s)
            cur[beta_idx - 1] -= 1
        return out

    # ------------------------------------------------------------ assembly

    def presentation(self, closed_form: bool | None = None) -> GroupPresentation:
        g = self.order.graph
        if closed_form is None:
            closed_form = g.is_tree
        gens = self.generators()
        relators = self.relators_generic()
        if closed_form:
            closed = self.relators_tree_closed_form()
            for r, cf in zip(relators, closed):
                if r.word != cf.word:
                    raise FieldError(f"closed form disagrees for {self.cx.format_cell(r.cell)}")
                r.halves = cf.halves
        counts = self.critical.counts
        return GroupPresentation(
            n=self.cx.n,
            generators=gens,
            names=self.generator_names(),
            relators=relators,
            counts=counts,
            euler=self.cx.euler_characteristic(),
            graph_hash=hashlib.sha256(format_graph(g).encode()).hexdigest()[:16],
            is_tree=g.is_tree,
        )


# ---------------------------------------------------------------- formulas


def generator_count_formula(order: VertexOrder, n: int) -> int:
    for i, t in order.deleted:
        if order.tree_degree[i] != 1 or order.tree_degree[t] != 1:
            raise ValueError("deleted edges must end at leaves of the tree")
    total = len(order.deleted)
    for v in order.essential:
        total += radial_rank(order.tree_degree[v], n)
    return total


def radial_rank(d: int, n: int) -> int:
    return sum(comb(n + d - 2, n - 1) - comb(n + d - i - 1, n - 1) for i in range(2, d))


def raag_commutation_graph(p: GroupPresentation):
    """Commutation graph if every relator is ``[a, b]`` for generators a, b."""
    graph = nx.Graph()
    graph.add_nodes_from(range(1, len(p.generators) + 1))
    for r in p.relators:
        pair = _single_commutator(r.word)
        if pair is None:
            return None
        graph.add_edge(*pair)
    return graph


def _single_commutator(word):
    w = list(word)
    if len(w) != 4:
        return None
    for _ in range(4):
        a, b, c, d = w
        if c == -a and d == -b and abs(a) != abs(b):
            return tuple(sorted((abs(a), abs(b))))
        w = w[1:] + w[:1]
    return None


def contains_k33(graph) -> bool:
    k33 = nx.complete_bipartite_graph(3, 3)
    return nx.algorithms.isomorphism.GraphMatcher(graph, k33).subgraph_is_monomorphic()


def abelianization_rank(p: GroupPresentation) -> int:
    m = len(p.generators)
    if m == 0:
        return 0
    rows = []
    for r in p.relators:
        row = [0] * m
        for x in r.word:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    if not rows or not any(any(row) for row in rows):
        return m
    return m - sympy.Matrix(rows).rank()


def equivalent_relators(u, v) -> bool:
    """Equal as cyclic words up to inversion."""
    u, v = _cyclic_reduce(tuple(u)), _cyclic_reduce(tuple(v))
    if len(u) != len(v):
        return False
    if not u:
        return True
    for cand in (v, inverse(v)):
        doubled = cand + cand
        if any(doubled[s:s + len(u)] == u for s in range(len(u))):
            return True
    return False


def _cyclic_reduce(w):
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def present(cx: ConfigurationComplex, strategy: str = "memo", trace=None) -> GroupPresentation:
    return Presenter(cx, strategy, trace).presentation()
