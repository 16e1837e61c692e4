"""Cells of the discretized unordered configuration space UD^n.

Vertices and edges of the graph are called *items* and are numbered so that
sorting items by id sorts them by ``(iota, kind, tau)``.  A cell is a sorted
tuple of ``n`` item ids whose closures are pairwise disjoint.
"""
from __future__ import annotations

import bisect
import re
from itertools import combinations
from math import comb

from .graph_model import VertexOrder

VERTEX, TREE, DELETED = 0, 1, 2
DEFAULT_CAP = 10_000_000


class CellCapExceeded(RuntimeError):
    """The instance has more cells than the configured cap."""


class ConfigurationComplex:
    """UD^n of an ordered graph, with cells encoded as tuples of item ids.

    Args:
        order: vertex order of a graph with a chosen maximal tree.
        n: number of strands.
        cap: maximal number of cells any single enumeration may produce.
    """

    def __init__(self, order: VertexOrder, n: int, cap: int = DEFAULT_CAP):
        if n < 1:
            raise ValueError("n must be at least 1")
        self.order = order
        self.n = n
        self.cap = cap
        nv = len(order)
        keys = [(v, VERTEX, v) for v in range(nv)]
        keys += [(v, TREE, order.parent[v]) for v in range(1, nv)]
        keys += [(i, DELETED, t) for i, t in order.deleted]
        keys.sort()
        self.kind = [k for _, k, _ in keys]
        self.iota = [i for i, _, _ in keys]
        self.tau = [t for _, _, t in keys]
        self.num_items = len(keys)
        self.vertex_item = [0] * nv
        self.tree_item = [-1] * nv
        for idx, (i, k, _) in enumerate(keys):
            if k == VERTEX:
                self.vertex_item[i] = idx
            elif k == TREE:
                self.tree_item[i] = idx
        # closure as a bitmask over vertex ranks
        self.closure = [(1 << i) | (1 << t) for i, t in zip(self.iota, self.tau)]
        self.conflict = []
        for a in range(self.num_items):
            m = 0
            for b in range(self.num_items):
                if self.closure[a] & self.closure[b]:
                    m |= 1 << b
            self.conflict.append(m)
        self.edge_items = [i for i in range(self.num_items) if self.kind[i] != VERTEX]
        self.incident = [[] for _ in range(nv)]
        for i in self.edge_items:
            self.incident[self.iota[i]].append(i)
            self.incident[self.tau[i]].append(i)

    # ------------------------------------------------------------ basics

    def dim(self, c) -> int:
        kind = self.kind
        return sum(1 for i in c if kind[i] != VERTEX)

    def is_cell(self, c) -> bool:
        if len(c) != self.n or list(c) != sorted(set(c)):
            return False
        occ = 0
        for i in c:
            if occ & self.closure[i]:
                return False
            occ |= self.closure[i]
        return True

    def occupied(self, c) -> int:
        occ = 0
        for i in c:
            occ |= self.closure[i]
        return occ

    def vertices_of(self, c) -> list:
        return [self.iota[i] for i in c if self.kind[i] == VERTEX]

    def edges_of(self, c) -> list:
        return [i for i in c if self.kind[i] != VERTEX]

    def replace(self, c, old: int, new: int) -> tuple:
        """Swap item ``old`` for ``new`` keeping the tuple sorted."""
        rest = [i for i in c if i != old]
        bisect.insort(rest, new)
        return tuple(rest)

    # ------------------------------------------------------------ enumeration

    def enumerate_cells(self, dim=None, cap=None):
        """Yield every cell (optionally of one dimension) in lexicographic order."""
        cap = self.cap if cap is None else cap
        conflict = self.conflict
        is_edge = 0
        for i in self.edge_items:
            is_edge |= 1 << i
        prefix = []

        def rec(cand, k, edges):
            if k == 0:
                if dim is None or edges == dim:
                    yield tuple(prefix)
                return
            while cand and bin(cand).count("1") >= k:
                low = cand & -cand
                cand ^= low
                i = low.bit_length() - 1
                e = edges + ((is_edge >> i) & 1)
                if dim is not None and (e > dim or e + k - 1 < dim):
                    continue
                prefix.append(i)
                yield from rec(cand & ~conflict[i], k - 1, e)
                prefix.pop()

        count = 0
        for c in rec((1 << self.num_items) - 1, self.n, 0):
            count += 1
            if count > cap:
                raise CellCapExceeded(f"more than {cap} cells")
            yield c

    def matchings(self, p: int):
        """All sets of ``p`` pairwise vertex-disjoint edges, as sorted tuples of items."""
        out = []

        def rec(start, chosen, occ):
            if len(chosen) == p:
                out.append(tuple(chosen))
                return
            for k in range(start, len(self.edge_items)):
                i = self.edge_items[k]
                if not occ & self.closure[i]:
                    chosen.append(i)
                    rec(k + 1, chosen, occ | self.closure[i])
                    chosen.pop()

        rec(0, [], 0)
        return out

    def matching_counts(self) -> list:
        """Number of ``p``-matchings for ``p = 0..n``.

        Subsets of deleted edges are enumerated; the tree edges are counted
        by the usual matched/unmatched dynamic programme over the tree.
        """
        o = self.order
        top = self.n
        total = [0] * (top + 1)
        deleted = [i for i in self.edge_items if self.kind[i] == DELETED]

        def mul(a, b):
            out = [0] * (top + 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b[:top + 1 - i]):
                        out[i + j] += x * y
            return out

        def tree_poly(blocked):
            free = [[1] + [0] * top for _ in range(len(o))]
            used = [[0] * (top + 1) for _ in range(len(o))]
            for v in range(len(o) - 1, 0, -1):
                p = o.parent[v]
                both = free[v][:] if not (blocked >> v) & 1 and not (blocked >> p) & 1 else None
                whole = [x + y for x, y in zip(free[v], used[v])]
                used[p] = mul(used[p], whole)
                if both is not None:
                    shifted = [0] + mul(free[p], both)[:top]
                    used[p] = [x + y for x, y in zip(used[p], shifted)]
                free[p] = mul(free[p], whole)
            return [x + y for x, y in zip(free[0], used[0])]

        for k in range(min(len(deleted), top) + 1):
            for ds in combinations(deleted, k):
                blocked = 0
                for i in ds:
                    blocked |= self.closure[i]
                if bin(blocked).count("1") != 2 * k:
                    continue
                for p, x in enumerate(tree_poly(blocked)[:top + 1 - k]):
                    total[p + k] += x
        return total

    def cell_counts(self) -> list:
        """Number of cells in each dimension, counted edge-first."""
        nv = len(self.order)
        matchings = self.matching_counts()
        counts = []
        for p in range(self.n + 1):
            if 2 * p > nv:
                break
            c = matchings[p] * comb(nv - 2 * p, self.n - p)
            if c == 0 and p > 0:
                break
            counts.append(c)
        while counts and counts[-1] == 0:
            counts.pop()
        return counts

    def euler_characteristic(self, method: str = "count") -> int:
        """Alternating cell count; ``method="enumerate"`` walks every cell."""
        if method == "enumerate":
            total = 0
            for c in self.enumerate_cells():
                total += -1 if self.dim(c) % 2 else 1
            return total
        return sum((-1) ** p * m for p, m in enumerate(self.cell_counts()))

    # ------------------------------------------------------------ faces

    def faces(self, c) -> list:
        """For each edge member: the face at its iota end, then at its tau end."""
        out = []
        for f in c:
            if self.kind[f] == VERTEX:
                continue
            out.append(self.replace(c, f, self.vertex_item[self.iota[f]]))
            out.append(self.replace(c, f, self.vertex_item[self.tau[f]]))
        return out

    def boundary_word(self, c) -> list:
        """Oriented boundary of a 2-cell as ``[(cell, sign), ...]`` of length 4.

        The edge with the smaller tau end is the first edge ``f``, the other
        is ``h``.  The loop starts at the corner where both edges sit at their
        iota ends: top (``f`` at iota), right (``h`` at tau), bottom inverted
        (``f`` at tau), left inverted (``h`` at iota).
        """
        es = self.edges_of(c)
        if len(es) != 2:
            raise ValueError("boundary_word needs a 2-cell")
        f, h = sorted(es, key=lambda i: (self.tau[i], i))
        vi = self.vertex_item
        top = self.replace(c, f, vi[self.iota[f]])
        right = self.replace(c, h, vi[self.tau[h]])
        bottom = self.replace(c, f, vi[self.tau[f]])
        left = self.replace(c, h, vi[self.iota[h]])
        return [(top, 1), (right, 1), (bottom, -1), (left, -1)]

    def endpoints(self, c) -> tuple:
        """Source and target 0-cells of a positively oriented 1-cell."""
        (f,) = self.edges_of(c)
        return (self.replace(c, f, self.vertex_item[self.iota[f]]),
                self.replace(c, f, self.vertex_item[self.tau[f]]))

    # ------------------------------------------------------------ text form

    def item_name(self, i: int) -> str:
        k = self.kind[i]
        if k == VERTEX:
            return "*" if self.iota[i] == 0 else f"v{self.iota[i]}"
        if k == TREE:
            return f"e{self.iota[i]}"
        return f"d{self.iota[i]}.{self.tau[i]}"

    def format_cell(self, c) -> str:
        return "{" + ",".join(self.item_name(i) for i in c) + "}"

    _TOKEN = re.compile(r"^(?:\*|v(\d+)|e(\d+)|d(\d+)\.(\d+))$")

    def parse_cell(self, text: str) -> tuple:
        body = text.strip().strip("{}")
        items = []
        for tok in filter(None, (t.strip() for t in body.split(","))):
            m = self._TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad cell member {tok!r}")
            if tok == "*":
                items.append(self.vertex_item[0])
            elif m.group(1):
                items.append(self.vertex_item[int(m.group(1))])
            elif m.group(2):
                items.append(self.tree_item[int(m.group(2))])
            else:
                key = (int(m.group(3)), int(m.group(4)))
                items.append(next(i for i in self.edge_items
                                  if self.kind[i] == DELETED and (self.iota[i], self.tau[i]) == key))
        c = tuple(sorted(items))
        if not self.is_cell(c):
            raise ValueError(f"{text!r} is not a cell of UD^{self.n}")
        return c
