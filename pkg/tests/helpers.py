"""Shared instances for the test modules."""
from __future__ import annotations

import random
from functools import lru_cache

from graphbraid import library as L
from graphbraid.config_complex import ConfigurationComplex
from graphbraid.graph_model import prepare

TREES = {
    "fig1": L.fig1_tree,
    "htree": L.h_tree,
    "y": L.y_graph,
    "radial3": lambda: L.radial_tree(3),
    "radial4": lambda: L.radial_tree(4),
    "radial5": lambda: L.radial_tree(5),
    "path": lambda: L.path_graph(4),
}

GRAPHS = {
    "theta": L.theta_graph,
    "figure8": L.figure_eight,
    "cycle": lambda: L.cycle_graph(3),
    "k4": L.k4_radial,
}

# (graph, n) pairs used wherever a criterion says "every instance"
INSTANCES = [
    ("fig1", 2), ("fig1", 3), ("fig1", 4),
    ("htree", 2), ("htree", 3), ("htree", 4),
    ("y", 2), ("y", 3), ("path", 3),
    ("radial3", 2), ("radial3", 3), ("radial3", 4),
    ("radial4", 2), ("radial4", 3), ("radial4", 4),
    ("radial5", 2), ("radial5", 3), ("radial5", 4),
    ("theta", 2), ("theta", 3), ("figure8", 2), ("figure8", 3),
    ("cycle", 2), ("cycle", 3), ("k4", 2), ("k4", 3),
]


def graph(name: str):
    return (TREES.get(name) or GRAPHS[name])()


@lru_cache(maxsize=None)
def complex_for(name: str, n: int) -> ConfigurationComplex:
    return ConfigurationComplex(prepare(graph(name), n), n)


def random_trees(count: int, seed: int, max_size: int = 30):
    rng = random.Random(seed)
    return [L.random_tree(rng.randint(5, max_size), rng) for _ in range(count)]


def total_cells(cx: ConfigurationComplex) -> int:
    return sum(cx.cell_counts())


def random_graph(size: int, rng: random.Random, extra: int):
    """A random tree with ``extra`` additional edges away from the root."""
    from graphbraid.graph_model import EmbeddedGraph, edge

    tree = L.random_tree(size, rng)
    rot = {v: list(nbrs) for v, nbrs in tree.rotation.items()}
    others = [v for v in rot if v != tree.root]
    edges = tree.edges
    for _ in range(extra):
        for _ in range(20):
            u, w = rng.sample(others, 2)
            if edge(u, w) not in edges:
                break
        else:
            continue
        edges = edges | {edge(u, w)}
        rot[u].insert(rng.randint(0, len(rot[u])), w)
        rot[w].insert(rng.randint(0, len(rot[w])), u)
    return EmbeddedGraph({v: tuple(n) for v, n in rot.items()}, tree.root)
