"""The discrete gradient field W on UD^n and the induced cell classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config_complex import DELETED, TREE, VERTEX, ConfigurationComplex


class Tag(str, Enum):
    CRITICAL = "critical"
    REDUNDANT = "redundant"
    COLLAPSIBLE = "collapsible"


class FieldError(RuntimeError):
    """A property of the gradient field failed to hold."""


@dataclass(frozen=True)
class MorseClassification:
    tag: Tag
    w_image: tuple | None
    w_preimage: tuple | None
    rank: int


class MorseField:
    """Local classification of cells, W and W-path ranks.

    Classification uses the local criterion (order-respecting edges and
    blocked vertices); :func:`materialize_w` gives the inductive definition
    for cross-checking.
    """

    def __init__(self, cx: ConfigurationComplex):
        self.cx = cx
        self.order = cx.order
        self._rank: dict = {}

    # ------------------------------------------------------------ local data

    def _scan(self, c):
        """Minimal unblocked vertex and minimal order-respecting edge of ``c``."""
        cx = self.cx
        kind, iota, parent = cx.kind, cx.iota, self.order.parent
        occ = 0
        for i in c:
            occ |= cx.closure[i]
        unblocked = None
        first_child = {}
        for i in c:
            if kind[i] == VERTEX:
                v = iota[i]
                p = parent[v]
                if p < 0:
                    continue
                if unblocked is None and not (occ >> p) & 1:
                    unblocked = v
                first_child.setdefault(p, v)
        respecting = None
        for i in c:
            if kind[i] == TREE:
                m = first_child.get(cx.tau[i])
                if m is None or m > iota[i]:
                    respecting = i
                    break
        return unblocked, respecting

    def is_blocked(self, v: int, c) -> bool:
        cx = self.cx
        if cx.vertex_item[v] not in c:
            raise ValueError(f"v{v} is not a vertex of the cell")
        if v == 0:
            return True
        occ = 0
        for i in c:
            if i != cx.vertex_item[v]:
                occ |= cx.closure[i]
        return bool((occ >> self.order.parent[v]) & 1)

    def principal_reduction(self, c):
        v, _ = self._scan(c)
        if v is None:
            return None
        return self.cx.replace(c, self.cx.vertex_item[v], self.cx.tree_item[v])

    def order_respecting_edges(self, c) -> list:
        """Order-respecting edges of ``c`` (item ids), smallest iota first."""
        cx = self.cx
        kids = {}
        for i in c:
            if cx.kind[i] == VERTEX and i != cx.vertex_item[0]:
                kids.setdefault(self.order.parent[cx.iota[i]], []).append(cx.iota[i])
        out = []
        for i in c:
            if cx.kind[i] == TREE and all(v > cx.iota[i] for v in kids.get(cx.tau[i], ())):
                out.append(i)
        return out

    def classify(self, c) -> Tag:
        v, e = self._scan(c)
        if e is None:
            return Tag.CRITICAL if v is None else Tag.REDUNDANT
        if v is not None and v < self.cx.iota[e]:
            return Tag.REDUNDANT
        return Tag.COLLAPSIBLE

    def apply_w(self, c):
        """W(c) for redundant cells, ``None`` otherwise."""
        v, e = self._scan(c)
        if v is None or (e is not None and v > self.cx.iota[e]):
            return None
        return self.cx.replace(c, self.cx.vertex_item[v], self.cx.tree_item[v])

    def preimage(self, c):
        """The redundant cell whose W-image is ``c``, for collapsible ``c``."""
        v, e = self._scan(c)
        if e is None or (v is not None and v < self.cx.iota[e]):
            return None
        return self.cx.replace(c, e, self.cx.vertex_item[self.cx.iota[e]])

    # ------------------------------------------------------------ ranks

    def _successors(self, c):
        w = self.apply_w(c)
        if w is None:
            return ()
        return [f for f in self.cx.faces(w) if f != c]

    def rank(self, c) -> int:
        """Length of the longest W-path from ``c``; raises on a closed path."""
        memo = self._rank
        if c in memo:
            return memo[c]
        gray = {c}
        stack = [(c, iter(self._successors(c)))]
        while stack:
            x, it = stack[-1]
            for y in it:
                if y in memo:
                    continue
                if y in gray:
                    raise FieldError(f"closed W-path through {self.cx.format_cell(y)}")
                gray.add(y)
                stack.append((y, iter(self._successors(y))))
                break
            else:
                stack.pop()
                gray.discard(x)
                memo[x] = 1 + max((memo[y] for y in self._successors(x)), default=0)
        return memo[c]

    def classification(self, c) -> MorseClassification:
        tag = self.classify(c)
        return MorseClassification(
            tag,
            self.apply_w(c) if tag is Tag.REDUNDANT else None,
            self.preimage(c) if tag is Tag.COLLAPSIBLE else None,
            self.rank(c),
        )

    # ------------------------------------------------------------ f_v

    def f(self, c, v: int) -> int:
        """Members of ``c`` lying on the tree geodesic from the root to ``v``."""
        cx, o = self.cx, self.order
        return sum(1 for i in c if cx.kind[i] != DELETED and o.is_ancestor(cx.iota[i], v))


# ---------------------------------------------------------------- whole-complex


def materialize_w(cx: ConfigurationComplex) -> dict:
    """W built dimension by dimension from principal reductions."""
    field_ = MorseField(cx)
    by_dim: dict = {}
    for c in cx.enumerate_cells():
        by_dim.setdefault(cx.dim(c), []).append(c)
    w = {}
    image_prev = set()
    for p in sorted(by_dim):
        image = set()
        for c in by_dim[p]:
            if c in image_prev:
                continue
            r = field_.principal_reduction(c)
            if r is not None:
                w[c] = r
                image.add(r)
        image_prev = image
    return w


@dataclass
class CriticalCells:
    by_dim: dict = field(default_factory=dict)

    @property
    def counts(self) -> list:
        top = max(self.by_dim, default=-1)
        return [len(self.by_dim.get(p, ())) for p in range(top + 1)]

    def euler(self) -> int:
        return sum((-1) ** p * m for p, m in enumerate(self.counts))


def _blocked_completions(cx: ConfigurationComplex, occ: int, k: int):
    """Sets of ``k`` vertices, each the root or a child of an occupied vertex."""
    parent = cx.order.parent
    nv = len(cx.order)
    child_mask = [0] * nv
    for v in range(1, nv):
        child_mask[parent[v]] |= 1 << v
    out = []

    def rec(occ, last, chosen, left):
        if left == 0:
            out.append(list(chosen))
            return
        avail = 1 if not occ & 1 else 0
        m = occ
        while m:
            low = m & -m
            avail |= child_mask[low.bit_length() - 1]
            m ^= low
        avail &= ~occ & ~((1 << (last + 1)) - 1)
        while avail:
            low = avail & -avail
            avail ^= low
            v = low.bit_length() - 1
            chosen.append(v)
            rec(occ | low, v, chosen, left - 1)
            chosen.pop()

    rec(occ, -1, [], k)
    return out


def critical_cells(cx: ConfigurationComplex, dims=None, method: str = "pruned") -> CriticalCells:
    """All critical cells, grouped by dimension.

    ``method="pruned"`` only generates cells whose vertices are all blocked
    and whose tree edges can fail to be order-respecting; ``"exhaustive"``
    classifies every cell.
    """
    fld = MorseField(cx)
    out = CriticalCells()
    if method == "exhaustive":
        for c in cx.enumerate_cells():
            p = cx.dim(c)
            if (dims is None or p in dims) and fld.classify(c) is Tag.CRITICAL:
                out.by_dim.setdefault(p, []).append(c)
    else:
        o = cx.order
        edges = [i for i in cx.edge_items
                 if cx.kind[i] == DELETED or o.direction_label(cx.tau[i], cx.iota[i]) >= 2]
        sub_cx = _Restricted(cx, edges)
        for p in range(cx.n + 1):
            if dims is not None and p not in dims:
                continue
            found = []
            for es in sub_cx.matchings(p):
                occ = 0
                for i in es:
                    occ |= cx.closure[i]
                for vs in _blocked_completions(cx, occ, cx.n - p):
                    c = tuple(sorted(list(es) + [cx.vertex_item[v] for v in vs]))
                    if fld.classify(c) is Tag.CRITICAL:
                        found.append(c)
            if found:
                out.by_dim[p] = sorted(found)
    for p in list(out.by_dim):
        out.by_dim[p].sort()
        if not out.by_dim[p]:
            del out.by_dim[p]
    if (dims is None or 0 in dims) and len(out.by_dim.get(0, ())) != 1:
        raise FieldError(f"expected one critical 0-cell, found {len(out.by_dim.get(0, ()))}")
    return out


class _Restricted:
    """Matchings drawn from a subset of the edges."""

    def __init__(self, cx, edges):
        self.cx = cx
        self.edges = edges

    def matchings(self, p):
        out = []
        closure = self.cx.closure

        def rec(start, chosen, occ):
            if len(chosen) == p:
                out.append(tuple(chosen))
                return
            for k in range(start, len(self.edges)):
                i = self.edges[k]
                if not occ & closure[i]:
                    chosen.append(i)
                    rec(k + 1, chosen, occ | closure[i])
                    chosen.pop()

        rec(0, [], 0)
        return out


def dimension_bound(order, n: int) -> int:
    """Largest possible dimension of a critical cell."""
    g = order.graph
    ess = sum(1 for v in g.vertices if g.degree(v) >= 3)
    if g.is_tree:
        return min(n // 2, ess)
    return min((n + 1 - g.euler_characteristic) // 2, ess)


# ---------------------------------------------------------------- validation


@dataclass
class FieldReport:
    clauses: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(passed for passed, _ in self.clauses.values())

    def record(self, name, passed, example=None):
        self.clauses[name] = (bool(passed), example)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "clauses": {k: {"pass": p, "counterexample": ex} for k, (p, ex) in self.clauses.items()},
            "counts": self.counts,
        }


def validate_field(cx: ConfigurationComplex) -> FieldReport:
    """Check the vector-field axioms and acyclicity on every cell."""
    fld = MorseField(cx)
    fmt = cx.format_cell
    rep = FieldReport()
    by_dim: dict = {}
    for c in cx.enumerate_cells():
        by_dim.setdefault(cx.dim(c), []).append(c)
    tags = {}
    w = {}
    for cells in by_dim.values():
        for c in cells:
            t = fld.classify(c)
            tags[c] = t
            if t is Tag.REDUNDANT:
                w[c] = fld.apply_w(c)

    # (a) injectivity
    seen: dict = {}
    bad = None
    for c, img in w.items():
        if img in seen and bad is None:
            bad = f"{fmt(seen[img])} and {fmt(c)} -> {fmt(img)}"
        seen[img] = c
    rep.record("injective", bad is None, bad)

    # (b) images are exactly the collapsible cells
    bad = None
    for c, img in w.items():
        if tags.get(img) is not Tag.COLLAPSIBLE or fld.preimage(img) != c:
            bad = f"{fmt(c)} -> {fmt(img)}"
            break
    n_coll = sum(1 for t in tags.values() if t is Tag.COLLAPSIBLE)
    rep.record("domain_image_disjoint", bad is None and n_coll == len(w), bad)

    # (d) regular face
    bad = None
    for c, img in w.items():
        fs = cx.faces(img)
        if cx.dim(img) != cx.dim(c) + 1 or c not in fs or len(set(fs)) != len(fs):
            bad = fmt(c)
            break
    rep.record("regular_face", bad is None, bad)

    # (c1) no closed W-paths, by traversal
    bad = None
    try:
        for c in w:
            fld.rank(c)
    except FieldError as exc:
        bad = str(exc)
    rep.record("no_closed_paths_traversal", bad is None, bad)

    # (c2) potential argument: f_v never decreases; if all equal, the minimal
    # order-respecting iota strictly decreases
    bad = _check_potential(cx, fld, w, tags)
    rep.record("no_closed_paths_potential", bad is None, bad)

    # rank decreases along W-paths
    bad = None
    if rep.clauses["no_closed_paths_traversal"][0]:
        for c, img in w.items():
            r = fld.rank(c)
            for f in cx.faces(img):
                if f != c and fld.rank(f) >= r:
                    bad = f"{fmt(c)} -> {fmt(f)}"
                    break
            if bad:
                break
    rep.record("rank_decreases", bad is None, bad)

    # partition counts
    counts = {t.value: [0] * (cx.n + 1) for t in Tag}
    for c, t in tags.items():
        counts[t.value][cx.dim(c)] += 1
    rep.counts = counts
    red, col = counts["redundant"], counts["collapsible"]
    ok = all(red[p] == col[p + 1] for p in range(cx.n)) and red[cx.n] == 0 and col[0] == 0
    rep.record("redundant_matches_collapsible", ok, None if ok else str(counts))
    return rep


def _check_potential(cx, fld, w, tags):
    nv = len(cx.order)
    o = cx.order
    anc = np.zeros((cx.num_items, nv), dtype=np.int32)
    for i in range(cx.num_items):
        if cx.kind[i] != DELETED:
            u = cx.iota[i]
            anc[i, u:o.last[u] + 1] = 1
    big = nv + 1

    def min_respecting(c):
        _, e = fld._scan(c)
        return big if e is None else cx.iota[e]

    groups: dict = {}
    for c, img in w.items():
        groups.setdefault(cx.dim(c), []).append(c)
    for p, cells in groups.items():
        src = np.array(cells, dtype=np.int64)
        f_src = anc[src].sum(axis=1)
        imgs = np.array([w[c] for c in cells], dtype=np.int64)
        if not np.array_equal(anc[imgs].sum(axis=1), f_src):
            return "f_v(W(c)) differs from f_v(c)"
        for k, c in enumerate(cells):
            for f in cx.faces(w[c]):
                if f == c or tags.get(f) is not Tag.REDUNDANT:
                    continue
                ff = anc[list(f)].sum(axis=0)
                if (ff < f_src[k]).any():
                    return f"f_v decreases from {cx.format_cell(c)} to {cx.format_cell(f)}"
                if (ff == f_src[k]).all() and not min_respecting(f) < min_respecting(c):
                    return f"potential stalls from {cx.format_cell(c)} to {cx.format_cell(f)}"
    return None
