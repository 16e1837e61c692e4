import random
from collections import Counter

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from graphbraid import library as L
from graphbraid.config_complex import DELETED, TREE, ConfigurationComplex
from graphbraid.graph_model import prepare
from graphbraid.morse_field import (
    MorseField,
    Tag,
    critical_cells,
    dimension_bound,
    materialize_w,
    validate_field,
)
from helpers import complex_for, random_graph

seeds = st.integers(0, 10_000)
fast = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@pytest.fixture(scope="module")
def fig1():
    cx = complex_for("fig1", 4)
    return cx, MorseField(cx)


def test_critical_one_cell_of_fig1(fig1):
    cx, f = fig1
    c = cx.parse_cell("{v10,e19,v20,*}")
    assert f.classify(c) is Tag.CRITICAL
    assert f.apply_w(c) is None
    assert f.rank(c) == 1


def test_star_cluster_is_the_critical_zero_cell(fig1):
    cx, f = fig1
    c = cx.parse_cell("{*,v1,v2,v3}")
    assert all(f.is_blocked(v, c) for v in range(4))
    assert f.principal_reduction(c) is None
    assert f.classify(c) is Tag.CRITICAL
    assert critical_cells(cx, dims={0}).by_dim[0] == [c]


def test_blocked_by_an_edge(fig1):
    cx, f = fig1
    assert f.is_blocked(10, cx.parse_cell("{v10,e19,v12,v16}"))


def test_principal_reduction_moves_the_smallest_unblocked_vertex(fig1):
    cx, f = fig1
    c = cx.parse_cell("{v10,v19,v20,*}")
    assert f.classify(c) is Tag.REDUNDANT
    assert cx.format_cell(f.principal_reduction(c)) == "{*,e10,v19,v20}"
    assert f.rank(c) >= 2


def test_order_respecting_examples(fig1):
    cx, f = fig1
    assert f.order_respecting_edges(cx.parse_cell("{v10,e19,v12,v16}")) == []
    c = cx.parse_cell("{e19,v20,v21,v22}")
    assert [cx.item_name(i) for i in f.order_respecting_edges(c)] == ["e19"]
    assert f.classify(c) is Tag.COLLAPSIBLE and f.rank(c) == 1


def test_fig1_counts(fig1):
    cx, _ = fig1
    assert critical_cells(cx).counts == [1, 24, 6]


def test_path_has_no_critical_one_cells():
    cx = complex_for("path", 3)
    assert critical_cells(cx).counts == [1]
    assert validate_field(cx).ok


@pytest.mark.parametrize("name", ["theta", "figure8", "k4", "cycle"])
def test_one_strand_critical_cells_are_the_deleted_edges(name):
    from helpers import graph

    cx = ConfigurationComplex(prepare(graph(name), 1), 1)
    crit = critical_cells(cx)
    assert crit.by_dim[0] == [(cx.vertex_item[0],)]
    ones = crit.by_dim.get(1, [])
    assert sorted(ones) == sorted((i,) for i in cx.edge_items if cx.kind[i] == DELETED)


def test_radial_and_k4_have_no_critical_two_cells():
    for d in (3, 4, 5):
        for n in (2, 3, 4, 5):
            assert len(critical_cells(ConfigurationComplex(prepare(L.radial_tree(d), n), n)).counts) <= 2
    assert len(critical_cells(complex_for("k4", 2)).counts) == 2


def test_unknown_vertex_is_rejected(fig1):
    cx, f = fig1
    with pytest.raises(ValueError):
        f.is_blocked(5, cx.parse_cell("{v10,e19,v20,*}"))


def _instance(seed, n, extra):
    rng = random.Random(seed)
    return ConfigurationComplex(prepare(random_graph(rng.randint(3, 9), rng, extra), n), n)


@fast
@given(seeds, st.integers(1, 4), st.integers(0, 2))
def test_partition_and_pairing(seed, n, extra):
    cx = _instance(seed, n, extra)
    f = MorseField(cx)
    tags = Counter()
    for c in cx.enumerate_cells():
        t = f.classify(c)
        tags[t, cx.dim(c)] += 1
        if t is Tag.REDUNDANT:
            w = f.apply_w(c)
            assert f.classify(w) is Tag.COLLAPSIBLE and f.preimage(w) == c
            assert c in cx.faces(w)
            assert all(f.f(c, v) == f.f(w, v) for v in range(len(cx.order)))
        elif t is Tag.COLLAPSIBLE:
            assert f.apply_w(f.preimage(c)) == c
        else:
            assert f.apply_w(c) is None and f.preimage(c) is None
    for p in range(cx.n):
        assert tags[Tag.REDUNDANT, p] == tags[Tag.COLLAPSIBLE, p + 1]
    assert tags[Tag.COLLAPSIBLE, 0] == 0


@fast
@given(seeds, st.integers(1, 4), st.integers(0, 2))
def test_field_is_valid_and_classify_matches_inductive_w(seed, n, extra):
    cx = _instance(seed, n, extra)
    assert validate_field(cx).ok
    f = MorseField(cx)
    w = materialize_w(cx)
    assert {c for c in cx.enumerate_cells() if f.classify(c) is Tag.REDUNDANT} == set(w)
    assert all(f.apply_w(c) == img for c, img in w.items())


@fast
@given(seeds, st.integers(1, 5), st.integers(0, 2))
def test_pruned_enumeration_matches_exhaustive(seed, n, extra):
    cx = _instance(seed, n, extra)
    a = critical_cells(cx)
    assert a.by_dim == critical_cells(cx, method="exhaustive").by_dim
    assert a.euler() == cx.euler_characteristic()
    assert max(a.by_dim) <= dimension_bound(cx.order, n)


@fast
@given(seeds, st.integers(1, 4))
def test_rank_drops_along_w_paths(seed, n):
    cx = _instance(seed, n, 0)
    f = MorseField(cx)
    for c in cx.enumerate_cells():
        w = f.apply_w(c)
        if w is None:
            continue
        for face in cx.faces(w):
            if face != c:
                assert f.rank(face) < f.rank(c)


@fast
@given(seeds, st.integers(2, 5))
def test_edges_of_critical_cells_in_trees(seed, n):
    rng = random.Random(seed)
    cx = ConfigurationComplex(prepare(L.random_tree(rng.randint(4, 12), rng), n), n)
    o = cx.order
    for cells in critical_cells(cx).by_dim.values():
        for c in cells:
            verts = {cx.iota[i] for i in c if cx.kind[i] not in (TREE, DELETED)}
            for i in c:
                if cx.kind[i] == TREE:
                    t = cx.tau[i]
                    assert o.is_essential(t)
                    assert any(t < v < cx.iota[i] and o.parent[v] == t for v in verts)


def test_field_report_clauses(fig1):
    rep = validate_field(complex_for("radial4", 3))
    d = rep.as_dict()
    assert d["ok"] and set(d["clauses"]) >= {
        "injective", "domain_image_disjoint", "regular_face",
        "no_closed_paths_traversal", "no_closed_paths_potential",
    }
