"""Ready-made embedded graphs used by the tests and the command line."""
from __future__ import annotations

import random

from .graph_model import EmbeddedGraph, edge

# parent first, then children clockwise; ranks coincide with the labels
_FIG1 = {
    0: [1], 1: [0, 2], 2: [1, 3], 3: [2, 4, 7], 4: [3, 5], 5: [4, 6], 6: [5],
    7: [3, 8], 8: [7, 9], 9: [8, 10, 19], 10: [9, 11], 11: [10, 12],
    12: [11, 13, 16], 13: [12, 14], 14: [13, 15], 15: [14], 16: [12, 17],
    17: [16, 18], 18: [17], 19: [9, 20], 20: [19, 21], 21: [20, 22, 25],
    22: [21, 23], 23: [22, 24], 24: [23], 25: [21, 26], 26: [25, 27], 27: [26],
}


def _name(i: int) -> str:
    return "*" if i == 0 else f"v{i}"


def fig1_tree() -> EmbeddedGraph:
    """The 28-vertex tree with four essential vertices, sufficient for 4 strands."""
    rot = {_name(v): tuple(_name(w) for w in nbrs) for v, nbrs in _FIG1.items()}
    return EmbeddedGraph(rot, "*")


def h_tree() -> EmbeddedGraph:
    """Unsubdivided H: basepoint at the bottom-left leaf, A left, B right."""
    rot = {
        "*": ("A",),
        "A": ("TL", "B", "*"),
        "TL": ("A",),
        "B": ("TR", "BR", "A"),
        "TR": ("B",),
        "BR": ("B",),
    }
    return EmbeddedGraph(rot, "*")


def radial_tree(d: int, arm: int = 1) -> EmbeddedGraph:
    """Star with ``d`` arms of ``arm`` edges; the basepoint ends one arm."""
    rot: dict = {"c": tuple(f"a{k}_1" for k in range(d))}
    for k in range(d):
        for j in range(1, arm + 1):
            prev = "c" if j == 1 else f"a{k}_{j - 1}"
            nxt = (f"a{k}_{j + 1}",) if j < arm else ()
            rot[f"a{k}_{j}"] = (prev, *nxt)
    return EmbeddedGraph(rot, f"a0_{arm}")


def path_graph(k: int) -> EmbeddedGraph:
    names = [f"p{i}" for i in range(k)]
    rot = {}
    for i, v in enumerate(names):
        rot[v] = tuple(names[j] for j in (i - 1, i + 1) if 0 <= j < k)
    return EmbeddedGraph(rot, names[0])


def y_graph() -> EmbeddedGraph:
    return EmbeddedGraph({"c": ("x", "y", "z"), "x": ("c",), "y": ("c",), "z": ("c",)}, "x")


def k4_radial() -> EmbeddedGraph:
    """K4 with the star maximal tree at ``c`` and basepoint ``a``."""
    rot = {
        "c": ("a", "d", "b"),
        "a": ("b", "c", "d"),
        "b": ("d", "c", "a"),
        "d": ("a", "c", "b"),
    }
    deleted = frozenset({edge("a", "b"), edge("b", "d"), edge("d", "a")})
    return EmbeddedGraph(rot, "a", deleted)


def cycle_graph(k: int, tail: bool = True) -> EmbeddedGraph:
    """Cycle of length ``k``; with ``tail`` a pendant basepoint is attached."""
    names = [f"c{i}" for i in range(k)]
    rot = {v: (names[i - 1], names[(i + 1) % k]) for i, v in enumerate(names)}
    if not tail:
        return EmbeddedGraph(rot, names[0])
    rot[names[0]] = ("*",) + rot[names[0]]
    rot["*"] = (names[0],)
    return EmbeddedGraph(rot, "*")


def theta_graph() -> EmbeddedGraph:
    """Two vertices joined by three paths of length 2, plus a pendant basepoint."""
    rot = {
        "*": ("u",),
        "u": ("*", "m0", "m1", "m2"),
        "w": ("m2", "m1", "m0"),
        "m0": ("u", "w"),
        "m1": ("u", "w"),
        "m2": ("u", "w"),
    }
    return EmbeddedGraph(rot, "*")


def figure_eight() -> EmbeddedGraph:
    """Two triangles sharing a vertex, with a pendant basepoint."""
    rot = {
        "*": ("o",),
        "o": ("*", "a1", "a2", "b1", "b2"),
        "a1": ("o", "a2"), "a2": ("a1", "o"),
        "b1": ("o", "b2"), "b2": ("b1", "o"),
    }
    return EmbeddedGraph(rot, "*")


def random_tree(size: int, rng: random.Random, max_degree: int = 5) -> EmbeddedGraph:
    """Random embedded tree on ``size`` vertices whose basepoint is a leaf."""
    adj: dict = {0: []}
    for v in range(1, size):
        choices = [u for u in adj if len(adj[u]) < max_degree]
        u = rng.choice(choices)
        adj[u].append(v)
        adj[v] = [u]
    for nbrs in adj.values():
        rng.shuffle(nbrs)
    leaves = [v for v, nbrs in adj.items() if len(nbrs) == 1]
    root = rng.choice(leaves)
    rot = {f"t{v}": tuple(f"t{w}" for w in nbrs) for v, nbrs in adj.items()}
    return EmbeddedGraph(rot, f"t{root}")
