"""Embedded graphs, sufficient subdivision, maximal trees and the vertex order.

A graph is given by a rotation system: for every vertex, the list of its
neighbours in clockwise order.  All later stages work with integer vertex
ranks produced by :func:`order_vertices`.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, replace
from pathlib import Path


class GraphError(ValueError):
    """Malformed or unsupported input graph."""


def edge(u: str, w: str) -> frozenset:
    return frozenset((u, w))


@dataclass(frozen=True)
class EmbeddedGraph:
    """Connected simple graph with a clockwise rotation at every vertex.

    ``deleted_edges`` is ``None`` until a maximal tree has been chosen.
    """

    rotation: dict
    root: str
    deleted_edges: frozenset | None = None

    @property
    def vertices(self) -> tuple:
        return tuple(self.rotation)

    @property
    def edges(self) -> frozenset:
        return frozenset(edge(u, w) for u, nbrs in self.rotation.items() for w in nbrs)

    @property
    def tree_edges(self) -> frozenset | None:
        if self.deleted_edges is None:
            return self.edges if self.is_tree else None
        return self.edges - self.deleted_edges

    @property
    def is_tree(self) -> bool:
        return len(self.edges) == len(self.rotation) - 1

    def degree(self, v: str) -> int:
        return len(self.rotation[v])

    def tree_degree(self, v: str) -> int:
        deleted = self.deleted_edges or frozenset()
        return sum(1 for w in self.rotation[v] if edge(v, w) not in deleted)

    @property
    def euler_characteristic(self) -> int:
        return len(self.rotation) - len(self.edges)

    def validate(self) -> None:
        rot = self.rotation
        if self.root not in rot:
            raise GraphError(f"root {self.root!r} is not a vertex")
        for v, nbrs in rot.items():
            if len(set(nbrs)) != len(nbrs):
                raise GraphError(f"duplicate edge at {v!r}")
            for w in nbrs:
                if w == v:
                    raise GraphError(f"loop at {v!r}")
                if w not in rot:
                    raise GraphError(f"unknown neighbour {w!r} of {v!r}")
                if v not in rot[w]:
                    raise GraphError(f"adjacency of {v!r} and {w!r} is not symmetric")
        if len(_component(rot, self.root)) != len(rot):
            raise GraphError("graph is not connected")
        if self.deleted_edges is not None:
            if not self.deleted_edges <= self.edges:
                raise GraphError("deleted edge is not an edge of the graph")
            tree = {v: [w for w in nbrs if edge(v, w) not in self.deleted_edges]
                    for v, nbrs in rot.items()}
            n_tree = sum(len(x) for x in tree.values()) // 2
            if n_tree != len(rot) - 1 or len(_component(tree, self.root)) != len(rot):
                raise GraphError("non-deleted edges do not form a spanning tree")


def _component(adj, start) -> set:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


# ---------------------------------------------------------------- file format

_ADJ = re.compile(r"^adj\s+(\S+?)\s*:\s*(.*)$")


def parse_graph(text: str) -> EmbeddedGraph:
    """Parse the line-oriented graph format (``root``, ``adj``, ``deleted``)."""
    rotation: dict = {}
    root = None
    deleted = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _ADJ.match(line)
        if m:
            v = m.group(1)
            if v in rotation:
                raise GraphError(f"line {lineno}: vertex {v!r} listed twice")
            rotation[v] = tuple(m.group(2).split())
            continue
        parts = line.split()
        if parts[0] == "root" and len(parts) == 2:
            root = parts[1]
        elif parts[0] == "deleted" and len(parts) == 3:
            deleted.append(edge(parts[1], parts[2]))
        else:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}")
    if root is None:
        raise GraphError("missing 'root' line")
    if len(set(deleted)) != len(deleted):
        raise GraphError("duplicate deleted edge")
    g = EmbeddedGraph(rotation, root, frozenset(deleted) if deleted else None)
    g.validate()
    return g


def load_graph(path) -> EmbeddedGraph:
    return parse_graph(Path(path).read_text())


def format_graph(g: EmbeddedGraph) -> str:
    lines = [f"root {g.root}"]
    lines += [f"adj {v}: {' '.join(nbrs)}" for v, nbrs in g.rotation.items()]
    for e in sorted(sorted(e) for e in g.deleted_edges or ()):
        lines.append(f"deleted {e[0]} {e[1]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- subdivision

class _Names:
    def __init__(self, taken):
        self.taken = set(taken)
        self.k = 0

    def fresh(self) -> str:
        while True:
            self.k += 1
            name = f"s{self.k}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _subdivide_edge(rot: dict, deleted: set | None, x: str, y: str, k: int, names: _Names,
                    root: str | None = None) -> list:
    """Insert ``k`` new vertices on edge xy in place; return the new path x..y.

    A deleted edge keeps its middle piece deleted, or the piece at ``root``
    so that the root stays a leaf of the tree.
    """
    new = [names.fresh() for _ in range(k)]
    path = [x, *new, y]
    rot[x] = tuple(path[1] if w == y else w for w in rot[x])
    rot[y] = tuple(path[-2] if w == x else w for w in rot[y])
    for i, s in enumerate(new, 1):
        rot[s] = (path[i - 1], path[i + 1])
    if deleted is not None and edge(x, y) in deleted:
        deleted.discard(edge(x, y))
        j = 0 if x == root else k if y == root else (k + 1) // 2
        deleted.add(edge(path[j], path[j + 1]))
    return path


def chains(g: EmbeddedGraph) -> list:
    """Maximal paths whose interior vertices have degree 2, as vertex lists."""
    rot = g.rotation
    branch = [v for v in rot if len(rot[v]) != 2]
    if not branch:
        branch = [g.root]
    is_branch = set(branch)
    used = set()
    out = []
    for b in branch:
        for w in rot[b]:
            if (b, w) in used:
                continue
            path = [b, w]
            while path[-1] not in is_branch:
                a, c = rot[path[-1]]
                path.append(c if a == path[-2] else a)
            used.add((b, w))
            used.add((path[-1], path[-2]))
            out.append(path)
    return out


def _shortest_cycle(ends: list, lengths: list):
    """Shortest cycle in the multigraph of chains; returns (length, chain ids)."""
    adj: dict = {}
    for i, (a, b) in enumerate(ends):
        adj.setdefault(a, []).append((b, i))
        adj.setdefault(b, []).append((a, i))
    best = None
    for i, (a, b) in enumerate(ends):
        if a == b:
            cand = (lengths[i], [i])
        else:
            dist = {a: 0}
            via = {}
            heap = [(0, a)]
            while heap:
                d, x = heapq.heappop(heap)
                if d > dist.get(x, float("inf")):
                    continue
                for y, j in adj[x]:
                    if j == i:
                        continue
                    nd = d + lengths[j]
                    if nd < dist.get(y, float("inf")):
                        dist[y] = nd
                        via[y] = (x, j)
                        heapq.heappush(heap, (nd, y))
            if b not in dist:
                continue
            ids = [i]
            x = b
            while x != a:
                x, j = via[x]
                ids.append(j)
            cand = (dist[b] + lengths[i], ids)
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def satisfies_abrams(g: EmbeddedGraph, n: int) -> bool:
    """Both sufficiency conditions for ``n`` strands."""
    ch = chains(g)
    for p in ch:
        if p[0] != p[-1] and len(p) - 1 < n - 1:
            return False
    cyc = _shortest_cycle([(p[0], p[-1]) for p in ch], [len(p) - 1 for p in ch])
    return cyc is None or cyc[0] >= n + 1


def subdivide_for(g: EmbeddedGraph, n: int) -> EmbeddedGraph:
    """Smallest subdivision of ``g`` that is sufficient for ``n`` strands.

    Chains are lengthened to ``n - 1`` edges first; short cycles are then
    fixed greedily by lengthening their longest chain.  When deleted edges
    are already present their endpoints are also made tree leaves.
    """
    if n < 1:
        raise GraphError("n must be at least 1")
    g.validate()
    ch = chains(g)
    ends = [(p[0], p[-1]) for p in ch]
    need = [max(len(p) - 1, n + 1 if p[0] == p[-1] else n - 1) for p in ch]
    while True:
        cyc = _shortest_cycle(ends, need)
        if cyc is None or cyc[0] >= n + 1:
            break
        length, ids = cyc
        i = max(ids, key=lambda j: (need[j], -j))
        need[i] += n + 1 - length

    rot = dict(g.rotation)
    deleted = set(g.deleted_edges) if g.deleted_edges is not None else None
    names = _Names(rot)
    for p, req in zip(ch, need):
        extra = req - (len(p) - 1)
        if extra <= 0:
            continue
        q, r = divmod(extra, len(p) - 1)
        for j in range(len(p) - 1):
            k = q + (1 if j < r else 0)
            if k:
                _subdivide_edge(rot, deleted, p[j], p[j + 1], k, names, g.root)
    out = EmbeddedGraph(rot, g.root, frozenset(deleted) if deleted is not None else None)
    if out.deleted_edges is not None:
        out = _isolate_deleted(out)
    out.validate()
    return out


def barycentric(g: EmbeddedGraph) -> EmbeddedGraph:
    """Split every edge once."""
    rot = dict(g.rotation)
    deleted = set(g.deleted_edges) if g.deleted_edges is not None else None
    names = _Names(rot)
    for e in sorted(sorted(e) for e in g.edges):
        _subdivide_edge(rot, deleted, e[0], e[1], 1, names, g.root)
    out = EmbeddedGraph(rot, g.root, frozenset(deleted) if deleted is not None else None)
    if out.deleted_edges is not None:
        out = _isolate_deleted(out)
    return out


def _isolate_deleted(g: EmbeddedGraph) -> EmbeddedGraph:
    """Subdivide deleted edges until both endpoints are leaves of the tree."""
    rot = dict(g.rotation)
    deleted = set(g.deleted_edges)
    names = _Names(rot)
    for u, w in sorted(sorted(e) for e in g.deleted_edges):
        for _ in range(2):
            if EmbeddedGraph(rot, g.root, frozenset(deleted)).tree_degree(u) != 1:
                s = _subdivide_edge(rot, None, u, w, 1, names)[1]
                deleted.discard(edge(u, w))
                deleted.add(edge(s, w))
                u = s
            u, w = w, u
    return EmbeddedGraph(rot, g.root, frozenset(deleted))


def pendant_root(g: EmbeddedGraph) -> EmbeddedGraph:
    """Attach a new leaf to the root and make it the basepoint."""
    name = "*"
    while name in g.rotation:
        name += "'"
    rot = dict(g.rotation)
    rot[g.root] = rot[g.root] + (name,)
    rot[name] = (g.root,)
    return EmbeddedGraph(rot, name, g.deleted_edges)


def _dfs_tree(g: EmbeddedGraph):
    rot = g.rotation
    pre = {g.root: 0}
    tree = set()
    stack = [(g.root, iter(rot[g.root]))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in pre:
                pre[w] = len(pre)
                tree.add(edge(v, w))
                stack.append((w, iter(rot[w])))
                break
        else:
            stack.pop()
    return tree, pre


def choose_maximal_tree(g: EmbeddedGraph, isolate: bool = True) -> EmbeddedGraph:
    """Pick a maximal tree whose deleted edges sit next to essential vertices.

    Forced deleted edges (from the input file) are kept as given.  With
    ``isolate`` the deleted edges are then subdivided until their endpoints
    are tree leaves, which the generator formula and the notation need.
    """
    g.validate()
    finish = _isolate_deleted if isolate else (lambda x: x)
    if g.deleted_edges is not None:
        return finish(g)
    if g.is_tree:
        return replace(g, deleted_edges=frozenset())
    rot = g.rotation
    tree, pre = _dfs_tree(g)
    provisional = sorted((sorted(e) for e in g.edges - tree), key=lambda e: (pre[e[0]], pre[e[1]]))
    if not any(len(x) >= 3 for x in rot.values()):
        chosen = {edge(*e) for e in provisional}
    else:
        chosen = set()
        for u, w in provisional:
            side = []
            for a, b in ((u, w), (w, u)):
                path = [b, a]
                while len(rot[path[-1]]) == 2:
                    x, y = rot[path[-1]]
                    path.append(y if x == path[-2] else x)
                side.append((len(path) - 2, pre[path[-1]], path))
            _, _, path = min(side)
            chosen.add(edge(path[-1], path[-2]))
    out = EmbeddedGraph(dict(rot), g.root, frozenset(chosen))
    out.validate()
    return finish(out)


# ---------------------------------------------------------------- vertex order

class VertexOrder:
    """Ranks, parents and direction labels of a graph with a chosen tree.

    Vertices are referred to by rank (``0`` is the basepoint).  Ranks follow
    a depth-first walk of the tree that takes branches clockwise, starting
    just after the direction back towards the root.
    """

    def __init__(self, g: EmbeddedGraph):
        if g.deleted_edges is None:
            g = choose_maximal_tree(g)
        g.validate()
        if g.tree_degree(g.root) != 1:
            raise GraphError(f"root {g.root!r} must have degree 1 in the tree (try pendant_root)")
        self.graph = g
        rot = g.rotation
        deleted = g.deleted_edges
        labels: dict = {}
        parent_name = {g.root: None}
        names = []
        stack = [g.root]
        while stack:
            v = stack.pop()
            names.append(v)
            # directions are numbered over tree edges only
            nbrs = [w for w in rot[v] if edge(v, w) not in deleted]
            if parent_name[v] is None:
                lab = {w: j + 1 for j, w in enumerate(nbrs)}
            else:
                start = nbrs.index(parent_name[v])
                lab = {nbrs[(start + j) % len(nbrs)]: j for j in range(len(nbrs))}
            labels[v] = lab
            kids = [w for w in sorted(nbrs, key=lab.get)
                    if edge(v, w) not in deleted and w != parent_name[v]]
            for w in kids:
                parent_name[w] = v
            stack.extend(reversed(kids))
        self.names = names
        self.rank = {v: i for i, v in enumerate(names)}
        size = len(names)
        self.parent = [-1 if parent_name[v] is None else self.rank[parent_name[v]] for v in names]
        self.children = [[] for _ in range(size)]
        for v in range(1, size):
            self.children[self.parent[v]].append(v)
        self._label = [{self.rank[w]: lab for w, lab in labels[v].items()} for v in names]
        self.tree_degree = [g.tree_degree(v) for v in names]
        self.last = list(range(size))
        for v in range(size - 1, 0, -1):
            p = self.parent[v]
            self.last[p] = max(self.last[p], self.last[v])
        self.depth = [0] * size
        for v in range(1, size):
            self.depth[v] = self.depth[self.parent[v]] + 1
        self.deleted = sorted(
            (max(self.rank[a], self.rank[b]), min(self.rank[a], self.rank[b]))
            for a, b in (tuple(e) for e in deleted))
        self.essential = [v for v in range(size) if self.tree_degree[v] >= 3]

    def __len__(self):
        return len(self.names)

    def name(self, v: int) -> str:
        return self.names[v]

    def is_essential(self, v: int) -> bool:
        return self.tree_degree[v] >= 3

    def direction_label(self, v: int, w: int) -> int:
        """Label at ``v`` of the edge towards its neighbour ``w``."""
        return self._label[v][w]

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when ``a`` lies on the tree geodesic from the root to ``b``."""
        return a <= b <= self.last[a]

    def g(self, v1: int, v2: int) -> int:
        """Direction at ``v1`` of the tree geodesic towards ``v2`` (0 if none)."""
        if v1 == v2 or not self.is_ancestor(v1, v2):
            return 0
        for c in self.children[v1]:
            if c <= v2 <= self.last[c]:
                return self._label[v1][c]
        raise AssertionError("unreachable")

    def wedge(self, v1: int, v2: int) -> int:
        while not self.is_ancestor(v1, v2):
            v1 = self.parent[v1]
        return v1

    def parent_edge(self, v: int) -> tuple:
        """``e(v)`` as the pair ``(iota, tau)``."""
        if v == 0:
            raise GraphError("the root has no parent edge")
        return (v, self.parent[v])

    def tree_edges(self) -> list:
        return [(v, self.parent[v]) for v in range(1, len(self))]

    def check_order_properties(self) -> list:
        """Return every violation of the two order clauses (empty if none)."""
        bad = []
        for v in range(len(self)):
            a = self.parent[v]
            while a >= 0:
                if a > v:
                    bad.append(("i", v, a))
                a = self.parent[a]
        for v in range(1, len(self)):
            ev = {v, self.parent[v]}
            for i, t in self.tree_edges():
                if v != t and ev & {i, t} == {t} and v < i:
                    ok = (self.is_essential(t) and 0 < self.g(t, v) < self.g(t, i))
                    if not ok:
                        bad.append(("ii", v, (i, t)))
        return bad


def order_vertices(g: EmbeddedGraph) -> VertexOrder:
    return VertexOrder(g)


def prepare(g: EmbeddedGraph, n: int, subdivide: bool = True, add_pendant_root: bool = False,
            isolate: bool | None = None) -> VertexOrder:
    """Subdivide, choose a tree and order the vertices.

    ``isolate=None`` isolates forced deleted edges only; automatically chosen
    deleted edges then stay next to an essential vertex.
    """
    if isolate is None:
        isolate = g.deleted_edges is not None
    if add_pendant_root:
        g = pendant_root(g)
    if subdivide:
        g = subdivide_for(g, n)
    g = choose_maximal_tree(g, isolate)
    return VertexOrder(g)
