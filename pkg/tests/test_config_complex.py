import random
from collections import Counter
from itertools import combinations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from graphbraid import library as L
from graphbraid.config_complex import VERTEX, CellCapExceeded, ConfigurationComplex
from graphbraid.graph_model import parse_graph, prepare
from helpers import complex_for, random_graph

seeds = st.integers(0, 10_000)
fast = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _cx(text, n):
    return ConfigurationComplex(prepare(parse_graph(text), n, subdivide=False), n)


def _small(seed, n, extra):
    rng = random.Random(seed)
    return ConfigurationComplex(prepare(random_graph(rng.randint(3, 6), rng, extra), n), n)


def test_single_edge_one_strand():
    cx = _cx("root a\nadj a: b\nadj b: a\n", 1)
    assert cx.cell_counts() == [2, 1]
    assert cx.euler_characteristic() == 1


def test_path_two_strands():
    cx = _cx("root a\nadj a: b\nadj b: a c\nadj c: b\n", 2)
    names = lambda p: sorted(cx.format_cell(c) for c in cx.enumerate_cells(dim=p))  # noqa: E731
    assert names(0) == ["{*,v1}", "{*,v2}", "{v1,v2}"]
    assert names(1) == ["{*,e2}", "{e1,v2}"]
    assert names(2) == []


def test_fig1_contains_the_two_edge_cell():
    cx = complex_for("fig1", 4)
    c = cx.parse_cell("{v10,v13,e16,e19}")
    assert cx.is_cell(c) and cx.dim(c) == 2


def test_faces_of_a_fig1_cell():
    cx = complex_for("fig1", 4)
    c = cx.parse_cell("{v10,e19,v20,*}")
    assert [cx.format_cell(f) for f in cx.faces(c)] == ["{*,v10,v19,v20}", "{*,v9,v10,v20}"]


def test_fig1_euler_characteristic():
    assert complex_for("fig1", 4).euler_characteristic() == -17


def test_euler_for_one_strand():
    tree = ConfigurationComplex(prepare(L.h_tree(), 1), 1)
    circle = ConfigurationComplex(prepare(L.cycle_graph(4, tail=False), 1), 1)
    assert tree.euler_characteristic() == 1
    assert circle.euler_characteristic() == 0


def test_cell_text_round_trip():
    cx = complex_for("k4", 2)
    for c in cx.enumerate_cells():
        assert cx.parse_cell(cx.format_cell(c)) == c


def test_cap_is_enforced():
    cx = ConfigurationComplex(prepare(L.fig1_tree(), 3), 3, cap=100)
    with pytest.raises(CellCapExceeded):
        list(cx.enumerate_cells())


@fast
@given(seeds, st.integers(1, 3), st.integers(0, 2))
def test_enumeration_matches_naive_filter(seed, n, extra):
    cx = _small(seed, n, extra)
    naive = set()
    for combo in combinations(range(cx.num_items), n):
        used = [v for i in combo for v in (cx.iota[i], cx.tau[i]) if cx.kind[i] != VERTEX] + \
               [cx.iota[i] for i in combo if cx.kind[i] == VERTEX]
        if len(used) == len(set(used)):
            naive.add(combo)
    cells = list(cx.enumerate_cells())
    assert len(cells) == len(set(cells))
    assert set(cells) == naive


@fast
@given(seeds, st.integers(1, 4), st.integers(0, 2))
def test_edge_first_counts_match_enumeration(seed, n, extra):
    cx = _small(seed, n, extra)
    by_dim = Counter(cx.dim(c) for c in cx.enumerate_cells())
    assert cx.cell_counts() == [by_dim[p] for p in range(len(cx.cell_counts()))]
    assert sum(by_dim.values()) == sum(cx.cell_counts())
    assert cx.matching_counts() == [len(cx.matchings(p)) for p in range(n + 1)]
    assert cx.euler_characteristic() == cx.euler_characteristic("enumerate")


@fast
@given(seeds, st.integers(2, 4), st.integers(0, 2))
def test_face_structure(seed, n, extra):
    cx = _small(seed, n, extra)
    for c in cx.enumerate_cells():
        p = cx.dim(c)
        faces = cx.faces(c)
        assert len(faces) == 2 * p == len(set(faces))
        assert all(cx.is_cell(f) and cx.dim(f) == p - 1 for f in faces)
        if p == 2:
            corners = Counter(ff for f in faces for ff in cx.faces(f))
            assert len(corners) == 4 and set(corners.values()) == {2}
            word = cx.boundary_word(c)
            assert len(word) == 4
            assert {x for x, _ in word} == set(faces)
            # consecutive letters share a corner when read with their signs
            ends = [cx.endpoints(x)[::s] for x, s in word]
            for k in range(4):
                assert ends[k][1] == ends[(k + 1) % 4][0]
