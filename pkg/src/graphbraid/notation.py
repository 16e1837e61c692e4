"""Subdivision-invariant names for cells built from clusters at essential vertices.

A term is one of

* ``X_m[x]``: the edge at essential vertex ``X`` in direction ``m`` with
  ``x[j]`` members stacked in direction ``j`` (the edge counts in ``x[m]``);
* ``X.[x]``: the vertex ``X`` itself with stacks ``x``;
* ``X[x]``: stacks at ``X`` without ``X`` or an edge;
* ``k*``: ``k`` vertices piled up at the basepoint;
* a deleted edge.

Text forms look like ``B2[(1,2)]+1*``, ``B.[(1,1)]`` and ``d12.3``.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass

from .config_complex import DELETED, TREE, VERTEX, ConfigurationComplex

EDGE, DOT, BARE, STAR, DEL = "edge", "dot", "bare", "star", "deleted"


class NotationError(ValueError):
    """A cell has no notation, or a notation names no unique cell."""


@dataclass(frozen=True)
class Term:
    kind: str
    vertex: int = 0
    vector: tuple = ()
    direction: int = 0
    count: int = 0
    other: int = 0

    def size(self) -> int:
        if self.kind == STAR:
            return self.count
        if self.kind == DEL:
            return 1
        return sum(self.vector) + (1 if self.kind == DOT else 0)


@dataclass(frozen=True)
class CriticalNotation:
    terms: tuple

    def size(self) -> int:
        return sum(t.size() for t in self.terms)


def _term_key(t: Term):
    rank = {DEL: 0, EDGE: 1, DOT: 1, BARE: 1, STAR: 2}[t.kind]
    return (rank, t.vertex, t.other, t.kind, t.direction, t.vector, t.count)


class Notation:
    """Encoder and decoder bound to one configuration complex."""

    def __init__(self, cx: ConfigurationComplex):
        self.cx = cx
        self.order = o = cx.order
        self.letters = {}
        for k, v in enumerate(o.essential):
            self.letters[v] = _letter_name(k)
        self.by_letter = {name: v for v, name in self.letters.items()}

    # ------------------------------------------------------------ encode

    def encode(self, c) -> CriticalNotation:
        cx, o = self.cx, self.order
        owner = {}
        for i in c:
            owner[cx.iota[i]] = i
            owner[cx.tau[i]] = i
        memo: dict = {}

        def vertex_term(v):
            if v in memo:
                return memo[v]
            if v == 0:
                key = (STAR, 0)
            else:
                p = o.parent[v]
                if p not in owner:
                    if o.is_essential(v):
                        key = (DOT, v)
                    elif o.is_essential(p):
                        key = (BARE, p)
                    else:
                        raise NotationError(f"v{v} is unblocked away from an essential vertex")
                else:
                    j = owner[p]
                    if cx.kind[j] == VERTEX:
                        up = vertex_term(p)
                        if up[0] == DOT and up[1] == p:
                            key = up
                        elif o.is_essential(p):
                            raise NotationError(f"cluster continues through essential vertex v{p}")
                        else:
                            key = up
                    elif cx.kind[j] == DELETED:
                        raise NotationError("vertex blocked by a deleted edge")
                    else:
                        key = edge_term(j)
            memo[v] = key
            return key

        def edge_term(j):
            x = cx.tau[j]
            if not o.is_essential(x):
                raise NotationError(f"edge e{cx.iota[j]} is not at an essential vertex")
            return (EDGE, x)

        groups: dict = {}
        terms = []
        for i in c:
            if cx.kind[i] == DELETED:
                terms.append(Term(DEL, cx.iota[i], other=cx.tau[i]))
                continue
            key = edge_term(i) if cx.kind[i] == TREE else vertex_term(cx.iota[i])
            groups.setdefault(key, []).append(i)
        for (kind, x), members in groups.items():
            if kind == STAR:
                terms.append(Term(STAR, 0, count=len(members)))
                continue
            vec = [0] * (o.tree_degree[x] - 1)
            m = 0
            for i in members:
                u = cx.iota[i]
                if u == x:
                    continue
                d = o.g(x, u)
                vec[d - 1] += 1
                if cx.kind[i] == TREE and cx.tau[i] == x:
                    m = d
            terms.append(Term(kind, x, tuple(vec), m))
        nt = CriticalNotation(tuple(sorted(terms, key=_term_key)))
        if self.decode(nt) != tuple(c):
            raise NotationError("cell is not determined by its clusters")
        return nt

    # ------------------------------------------------------------ decode

    def _stack(self, start: int, k: int) -> list:
        o = self.order
        out = []
        v = start
        for step in range(k):
            out.append(v)
            if step == k - 1:
                break
            kids = o.children[v]
            if len(kids) != 1:
                why = "branches" if kids else "ends"
                raise NotationError(f"cluster {why} at v{v}")
            v = kids[0]
        return out

    def _child(self, x: int, d: int) -> int:
        for w in self.order.children[x]:
            if self.order.direction_label(x, w) == d:
                return w
        raise NotationError(f"no direction {d} at v{x}")

    def decode(self, nt: CriticalNotation) -> tuple:
        cx, o = self.cx, self.order
        items = []
        for t in nt.terms:
            if t.kind == STAR:
                items += [cx.vertex_item[v] for v in self._stack(0, t.count)]
            elif t.kind == DEL:
                items.append(next(i for i in cx.edge_items if cx.kind[i] == DELETED
                                  and (cx.iota[i], cx.tau[i]) == (t.vertex, t.other)))
            else:
                x = t.vertex
                if len(t.vector) != o.tree_degree[x] - 1:
                    raise NotationError("vector length does not match the degree")
                if t.kind == DOT:
                    items.append(cx.vertex_item[x])
                for d, cnt in enumerate(t.vector, 1):
                    if cnt == 0:
                        if t.kind == EDGE and d == t.direction:
                            raise NotationError("edge direction has an empty stack")
                        continue
                    vs = self._stack(self._child(x, d), cnt)
                    if t.kind == EDGE and d == t.direction:
                        items.append(cx.tree_item[vs[0]])
                        vs = vs[1:]
                    items += [cx.vertex_item[v] for v in vs]
        c = tuple(sorted(items))
        if not cx.is_cell(c):
            raise NotationError("notation does not name a cell")
        return c

    # ------------------------------------------------------------ text

    def format(self, nt: CriticalNotation) -> str:
        parts = []
        for t in nt.terms:
            if t.kind == STAR:
                parts.append(f"{t.count}*")
            elif t.kind == DEL:
                parts.append(f"d{t.vertex}.{t.other}")
            else:
                vec = "(" + ",".join(map(str, t.vector)) + ")"
                mid = {EDGE: str(t.direction), DOT: ".", BARE: ""}[t.kind]
                parts.append(f"{self.letters[t.vertex]}{mid}[{vec}]")
        return "+".join(parts)

    _TERM = re.compile(r"^(?:(\d+)\*|d(\d+)\.(\d+)|([A-Z]+)(\d+|\.)?\[\(([\d,\s]*)\)\])$")

    def parse(self, text: str) -> CriticalNotation:
        terms = []
        for raw in text.replace(" ", "").split("+"):
            m = self._TERM.match(raw)
            if not m:
                raise NotationError(f"cannot parse term {raw!r}")
            if m.group(1):
                terms.append(Term(STAR, 0, count=int(m.group(1))))
            elif m.group(2):
                terms.append(Term(DEL, int(m.group(2)), other=int(m.group(3))))
            else:
                name = m.group(4)
                if name not in self.by_letter:
                    raise NotationError(f"unknown essential vertex {name!r}")
                vec = tuple(int(s) for s in m.group(6).split(",") if s)
                mid = m.group(5)
                if mid is None:
                    terms.append(Term(BARE, self.by_letter[name], vec))
                elif mid == ".":
                    terms.append(Term(DOT, self.by_letter[name], vec))
                else:
                    terms.append(Term(EDGE, self.by_letter[name], vec, int(mid)))
        return CriticalNotation(tuple(sorted(terms, key=_term_key)))

    def name(self, c) -> str | None:
        """Text notation of ``c``, or ``None`` when it has none."""
        try:
            return self.format(self.encode(c))
        except NotationError:
            return None

    def cell(self, text: str) -> tuple:
        return self.decode(self.parse(text))


def _letter_name(k: int) -> str:
    """A, B, ..., Z, AA, AB, ..."""
    name = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        name = string.ascii_uppercase[r] + name
    return name
