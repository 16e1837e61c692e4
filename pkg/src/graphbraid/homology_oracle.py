"""H0 and H1 of UD^n straight from integer boundary matrices.

Nothing here uses the gradient field.  Small complexes are handled by exact
elimination on the full matrices.  Larger ones are first shrunk by
coreductions (removing a cell together with its only remaining face), which
preserve homology, and the remainder is eliminated exactly.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

import numpy as np
from numba import njit

from .config_complex import VERTEX, CellCapExceeded, ConfigurationComplex

DIRECT_LIMIT = 20_000


@dataclass
class BoundaryMatrix:
    """Sparse matrix of the boundary map from p-cells to (p-1)-cells."""

    rows: list
    cols: list
    columns: list = field(default_factory=list)

    def to_dense(self):
        m = np.zeros((len(self.rows), len(self.cols)), dtype=np.int64)
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                m[i, j] = v
        return m


@dataclass
class HomologyResult:
    h0: int
    h1_rank: int
    torsion: list
    method: str
    remaining: tuple = ()


# ---------------------------------------------------------------- exact algebra


def smith_invariants(columns) -> list:
    """Nonzero invariant factors of a sparse integer matrix given by columns."""
    cols = {j: {r: v for r, v in col.items() if v} for j, col in enumerate(columns)}
    cols = {j: c for j, c in cols.items() if c}
    rows = defaultdict(set)
    for j, c in cols.items():
        for r in c:
            rows[r].add(j)
    invariants = []
    progress = True
    while progress:
        progress = False
        for j in sorted(cols):
            c = cols.get(j)
            if not c:
                cols.pop(j, None)
                continue
            units = [r for r, v in c.items() if v in (1, -1)]
            if not units:
                continue
            r = min(units, key=lambda x: len(rows[x]))
            u = c[r]
            for j2 in list(rows[r]):
                if j2 == j:
                    continue
                c2 = cols[j2]
                f = c2[r] * u
                for r2, v in c.items():
                    nv = c2.get(r2, 0) - f * v
                    if nv:
                        if r2 not in c2:
                            rows[r2].add(j2)
                        c2[r2] = nv
                    elif r2 in c2:
                        del c2[r2]
                        rows[r2].discard(j2)
                if not c2:
                    del cols[j2]
            for r2 in c:
                rows[r2].discard(j)
            del cols[j]
            invariants.append(1)
            progress = True
    if cols:
        rlist = sorted({r for c in cols.values() for r in c})
        ridx = {r: k for k, r in enumerate(rlist)}
        dense = [[0] * len(cols) for _ in rlist]
        for k, c in enumerate(cols.values()):
            for r, v in c.items():
                dense[ridx[r]][k] = v
        invariants += _dense_smith(dense)
    return sorted(invariants)


def _dense_smith(a) -> list:
    a = [row[:] for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    for j in range(t, n):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if done:
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]]
                if not bad:
                    break
                i, _ = bad[0]
                for j in range(t, n):
                    a[t][j] += a[i][j]
        out.append(abs(a[t][t]))
        t += 1
    # fix divisibility of the diagonal
    for _ in range(len(out)):
        for k in range(len(out) - 1):
            x, y = out[k], out[k + 1]
            g = gcd(x, y)
            out[k], out[k + 1] = g, x * y // g if g else 0
    return out


# ---------------------------------------------------------------- direct route


def _signed_faces(cx: ConfigurationComplex, c):
    """``(face, sign)`` pairs: the sum over edges of sign * (tau face - iota face)."""
    out = []
    k = 0
    for f in c:
        if cx.kind[f] == VERTEX:
            continue
        s = -1 if k % 2 else 1
        out.append((cx.replace(c, f, cx.vertex_item[cx.tau[f]]), s))
        out.append((cx.replace(c, f, cx.vertex_item[cx.iota[f]]), -s))
        k += 1
    return out


def boundary_matrix(cx: ConfigurationComplex, p: int) -> BoundaryMatrix:
    rows = list(cx.enumerate_cells(dim=p - 1))
    cols = list(cx.enumerate_cells(dim=p))
    idx = {c: i for i, c in enumerate(rows)}
    columns = []
    for c in cols:
        col = {}
        for face, s in _signed_faces(cx, c):
            col[idx[face]] = col.get(idx[face], 0) + s
        columns.append(col)
    return BoundaryMatrix(rows, cols, columns)


def boundary_squares_to_zero(cx: ConfigurationComplex, p: int) -> bool:
    """Check that the composite of the boundary maps from dimension ``p`` vanishes."""
    for c in cx.enumerate_cells(dim=p):
        acc: dict = defaultdict(int)
        for face, s in _signed_faces(cx, c):
            for ff, t in _signed_faces(cx, face):
                acc[ff] += s * t
        if any(acc.values()):
            return False
    return True


def _direct(cx: ConfigurationComplex) -> HomologyResult:
    d1 = boundary_matrix(cx, 1)
    d2 = boundary_matrix(cx, 2)
    inv1 = smith_invariants(d1.columns)
    inv2 = smith_invariants(d2.columns)
    h0 = len(d1.rows) - len(inv1)
    h1 = len(d1.cols) - len(inv1) - len(inv2)
    return HomologyResult(h0, h1, [x for x in inv2 if x > 1], "direct")


# ---------------------------------------------------------------- coreduction route


@njit(cache=True)
def _find(arr, x):
    k = np.searchsorted(arr, x)
    if k < arr.shape[0] and arr[k] == x:
        return k
    return -1


@njit(cache=True)
def _uf_root(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True)
def _coreduce(c0, c1, c2, is_vertex, iota_item, tau_item, inc_ptr, inc_idx, conflict):
    n0, n1, n2 = c0.shape[0], c1.shape[0], c2.shape[0]
    nitems = is_vertex.shape[0]
    removed0 = np.zeros(n0, np.bool_)
    removed1 = np.zeros(n1, np.bool_)
    removed2 = np.zeros(n2, np.bool_)
    inq1 = np.zeros(n1, np.bool_)
    inq2 = np.zeros(n2, np.bool_)
    cap = n0 + n1 + n2 + 1
    qd = np.empty(cap, np.int8)
    qi = np.empty(cap, np.int64)
    head = 0
    tail = 0
    size = 0
    one = np.int64(1)

    # components of the 1-skeleton
    uf = np.arange(n0)
    for k in range(n1):
        x = c1[k]
        for j in range(nitems):
            if (x >> j) & 1 and not is_vertex[j]:
                a = _find(c0, (x & ~(one << j)) | (one << iota_item[j]))
                b = _find(c0, (x & ~(one << j)) | (one << tau_item[j]))
                ra = _uf_root(uf, a)
                rb = _uf_root(uf, b)
                if ra != rb:
                    uf[max(ra, rb)] = min(ra, rb)
    components = 0
    for k in range(n0):
        if _uf_root(uf, k) == k:
            components += 1
            removed0[k] = True
            # enqueue cofaces
            x = c0[k]
            for u in range(nitems):
                if (x >> u) & 1 and is_vertex[u]:
                    rest = x & ~(one << u)
                    for t in range(inc_ptr[u], inc_ptr[u + 1]):
                        f = inc_idx[t]
                        if rest & conflict[f] == 0:
                            y = _find(c1, rest | (one << f))
                            if y >= 0 and not inq1[y] and not removed1[y]:
                                inq1[y] = True
                                qd[tail] = 1
                                qi[tail] = y
                                tail = (tail + 1) % cap
                                size += 1

    while size > 0:
        d = qd[head]
        k = qi[head]
        head = (head + 1) % cap
        size -= 1
        if d == 1:
            inq1[k] = False
            if removed1[k]:
                continue
            x = c1[k]
        else:
            inq2[k] = False
            if removed2[k]:
                continue
            x = c2[k]
        # alive faces
        alive = 0
        last = -1
        for j in range(nitems):
            if (x >> j) & 1 and not is_vertex[j]:
                for end in range(2):
                    e = iota_item[j] if end == 0 else tau_item[j]
                    y = (x & ~(one << j)) | (one << e)
                    if d == 1:
                        fi = _find(c0, y)
                        if not removed0[fi]:
                            alive += 1
                            last = fi
                    else:
                        fi = _find(c1, y)
                        if not removed1[fi]:
                            alive += 1
                            last = fi
        if alive != 1:
            continue
        # remove the pair (face, cell); enqueue cofaces of both
        if d == 1:
            removed0[last] = True
            removed1[k] = True
            sources = (c0[last], x)
        else:
            removed1[last] = True
            removed2[k] = True
            sources = (c1[last], x)
        for s in range(2):
            z = sources[s]
            zd = d - 1 + s
            if zd >= 2:
                continue
            for u in range(nitems):
                if (z >> u) & 1 and is_vertex[u]:
                    rest = z & ~(one << u)
                    for t in range(inc_ptr[u], inc_ptr[u + 1]):
                        f = inc_idx[t]
                        if rest & conflict[f] == 0:
                            w = rest | (one << f)
                            if zd == 0:
                                y = _find(c1, w)
                                if y >= 0 and not removed1[y] and not inq1[y]:
                                    inq1[y] = True
                                    qd[tail] = 1
                                    qi[tail] = y
                                    tail = (tail + 1) % cap
                                    size += 1
                            else:
                                y = _find(c2, w)
                                if y >= 0 and not removed2[y] and not inq2[y]:
                                    inq2[y] = True
                                    qd[tail] = 2
                                    qi[tail] = y
                                    tail = (tail + 1) % cap
                                    size += 1
    return components, removed0, removed1, removed2


def bitmask_cells(cx: ConfigurationComplex, p: int) -> np.ndarray:
    """Sorted array of the p-cells as bitmasks over item ids."""
    if cx.num_items > 62:
        raise CellCapExceeded("bitmask route needs at most 62 vertices and edges")
    nv = len(cx.order)
    k = cx.n - p
    free_count = nv - 2 * p
    if k < 0 or k > free_count:
        return np.zeros(0, dtype=np.int64)
    idx = np.array(list(combinations(range(free_count), k)), dtype=np.int64) if k else None
    chunks = []
    total = 0
    for es in cx.matchings(p):
        occ = 0
        ebits = 0
        for i in es:
            occ |= cx.closure[i]
            ebits |= 1 << i
        free = np.array([1 << cx.vertex_item[v] for v in range(nv) if not (occ >> v) & 1], dtype=np.int64)
        block = free[idx].sum(axis=1) + ebits if k else np.full(1, ebits, dtype=np.int64)
        chunks.append(block)
        total += block.shape[0]
        if total > cx.cap:
            raise CellCapExceeded(f"more than {cx.cap} cells")
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(chunks))


def _bits_to_cell(x: int) -> tuple:
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return tuple(out)


def _coreduced(cx: ConfigurationComplex) -> HomologyResult:
    c0, c1, c2 = (bitmask_cells(cx, p) for p in range(3))
    if c0.shape[0] + c1.shape[0] + c2.shape[0] > cx.cap:
        raise CellCapExceeded(f"more than {cx.cap} cells")
    is_vertex = np.array([k == VERTEX for k in cx.kind], dtype=np.bool_)
    iota_item = np.array([cx.vertex_item[v] for v in cx.iota], dtype=np.int64)
    tau_item = np.array([cx.vertex_item[v] for v in cx.tau], dtype=np.int64)
    inc_ptr = [0]
    inc_idx = []
    for i in range(cx.num_items):
        if cx.kind[i] == VERTEX:
            inc_idx += cx.incident[cx.iota[i]]
        inc_ptr.append(len(inc_idx))
    conflict = np.array(cx.conflict, dtype=np.int64)
    comps, r0, r1, r2 = _coreduce(c0, c1, c2, is_vertex, iota_item, tau_item,
                                  np.array(inc_ptr, dtype=np.int64),
                                  np.array(inc_idx, dtype=np.int64), conflict)
    rest = [[_bits_to_cell(int(x)) for x in arr[~r]] for arr, r in ((c0, r0), (c1, r1), (c2, r2))]
    idx0 = {c: i for i, c in enumerate(rest[0])}
    idx1 = {c: i for i, c in enumerate(rest[1])}

    def columns(cells, idx):
        out = []
        for c in cells:
            col: dict = {}
            for face, s in _signed_faces(cx, c):
                if face in idx:
                    col[idx[face]] = col.get(idx[face], 0) + s
            out.append(col)
        return out

    inv1 = smith_invariants(columns(rest[1], idx0))
    inv2 = smith_invariants(columns(rest[2], idx1))
    h0 = comps + len(rest[0]) - len(inv1)
    h1 = len(rest[1]) - len(inv1) - len(inv2)
    return HomologyResult(h0, h1, [x for x in inv2 if x > 1], "coreduction",
                          tuple(len(r) for r in rest))


# ---------------------------------------------------------------- public


def homology(cx: ConfigurationComplex, method: str = "auto") -> HomologyResult:
    """H0 and H1 of the complex; ``method`` is ``auto``, ``direct`` or ``coreduction``."""
    if method == "auto":
        counts = cx.cell_counts()[:3]
        small = sum(counts) <= DIRECT_LIMIT
        method = "direct" if small or cx.num_items > 62 else "coreduction"
    if method == "direct":
        if sum(cx.cell_counts()[:3]) > cx.cap:
            raise CellCapExceeded(f"more than {cx.cap} cells")
        return _direct(cx)
    return _coreduced(cx)


def h1_rank(cx: ConfigurationComplex, method: str = "auto") -> int:
    return homology(cx, method).h1_rank


def connected_components(cx: ConfigurationComplex, method: str = "auto") -> int:
    return homology(cx, method).h0
