import random

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form

from graphbraid import library as L
from graphbraid.config_complex import CellCapExceeded, ConfigurationComplex
from graphbraid.graph_model import parse_graph, prepare
from graphbraid.homology_oracle import (
    bitmask_cells,
    boundary_matrix,
    boundary_squares_to_zero,
    connected_components,
    h1_rank,
    homology,
    smith_invariants,
)
from graphbraid.morse_field import critical_cells
from graphbraid.presentation import abelianization_rank, present
from helpers import INSTANCES, complex_for, random_graph

seeds = st.integers(0, 10_000)
fast = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _columns(m):
    return [{i: int(m[i][j]) for i in range(len(m)) if m[i][j]} for j in range(len(m[0]))]


def test_smith_examples():
    assert smith_invariants(_columns([[2, 4], [6, 8]])) == [2, 4]
    assert smith_invariants(_columns([[2, 0], [0, 3]])) == [1, 6]
    assert smith_invariants(_columns([[0, 0], [0, 0]])) == []


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_smith_matches_sympy(rows, cols, data):
    m = [[data.draw(st.integers(-6, 6)) for _ in range(cols)] for _ in range(rows)]
    snf = smith_normal_form(Matrix(m), domain=ZZ)
    expected = sorted(abs(int(snf[k, k])) for k in range(min(rows, cols)) if snf[k, k])
    assert smith_invariants(_columns(m)) == expected


def test_tree_with_one_strand_is_contractible():
    r = homology(ConfigurationComplex(prepare(L.fig1_tree(), 1), 1))
    assert (r.h0, r.h1_rank, r.torsion) == (1, 0, [])


def test_radial_two_strands():
    assert h1_rank(complex_for("radial3", 2)) == 1


def test_path_two_strands_is_connected():
    cx = ConfigurationComplex(prepare(parse_graph("root a\nadj a: b\nadj b: a c\nadj c: b\n"), 2,
                                      subdivide=False), 2)
    assert sum(cx.cell_counts()) == 5
    assert connected_components(cx) == 1


def test_fig1_four_strands():
    r = homology(complex_for("fig1", 4), "coreduction")
    assert (r.h0, r.h1_rank, r.torsion) == (1, 24, [])


@pytest.mark.parametrize("name,n", [x for x in INSTANCES if sum(complex_for(*x).cell_counts()) < 30_000])
def test_boundary_squares_to_zero(name, n):
    cx = complex_for(name, n)
    assert boundary_squares_to_zero(cx, 2)
    if sum(cx.cell_counts()[:3]) < 3_000:
        d1 = boundary_matrix(cx, 1).to_dense()
        d2 = boundary_matrix(cx, 2).to_dense()
        assert not (d1 @ d2).any()


@pytest.mark.parametrize("name,n", INSTANCES)
def test_h1_matches_the_presentation(name, n):
    cx = complex_for(name, n)
    r = homology(cx)
    assert r.h0 == 1
    counts = critical_cells(cx).counts
    if cx.order.graph.is_tree or len(counts) <= 2:
        assert r.h1_rank == abelianization_rank(present(cx))


def test_bitmask_cells_match_enumeration():
    cx = complex_for("htree", 3)
    for p in range(3):
        masks = bitmask_cells(cx, p)
        expected = sorted(sum(1 << i for i in c) for c in cx.enumerate_cells(dim=p))
        assert np.array_equal(masks, np.array(expected, dtype=np.int64))


def test_cap_applies_to_the_oracle():
    cx = ConfigurationComplex(prepare(L.fig1_tree(), 3), 3, cap=1000)
    with pytest.raises(CellCapExceeded):
        homology(cx)


@fast
@given(seeds, st.integers(1, 4), st.integers(0, 2))
def test_direct_and_coreduction_agree(seed, n, extra):
    rng = random.Random(seed)
    cx = ConfigurationComplex(prepare(random_graph(rng.randint(3, 9), rng, extra), n), n)
    a = homology(cx, "direct")
    b = homology(cx, "coreduction")
    assert (a.h0, a.h1_rank, a.torsion) == (b.h0, b.h1_rank, b.torsion)
    assert a.h0 == 1
