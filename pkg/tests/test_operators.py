"""Difference operators: stencils, algebra, and summation by parts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reference
from ssfilm.fields import (
    CellField,
    GridSpec,
    VertexField,
    VertexVectorField,
    inner_cell,
    inner_edge,
    inner_vertex,
    norm_p,
)
from ssfilm.operators import (
    biharmonic,
    edge_grad,
    edge_grad_norm2,
    laplacian,
    norm_H1,
    norm_H2,
    p_laplacian4,
    skew_div,
    skew_grad,
    skew_grad_norm_p,
    skew_laplacian,
    vertex_to_center_avg,
)


def rand_cell(grid, seed, amp=1.0):
    rng = np.random.default_rng(seed)
    return CellField(grid, amp * rng.standard_normal((grid.m, grid.m)))


def rand_vector(grid, seed):
    rng = np.random.default_rng(seed)
    return VertexVectorField(
        VertexField(grid, rng.standard_normal((grid.m, grid.m))),
        VertexField(grid, rng.standard_normal((grid.m, grid.m))),
    )


# ------------------------------------------------------------ point values


def test_laplacian_spike_stencil():
    g = GridSpec(8, 8.0)  # h = 1
    u = CellField(g, reference.spike(8, 3, 4))
    v = laplacian(u).values
    assert v[3, 4] == -4.0
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        assert v[3 + di, 4 + dj] == 1.0
    for di, dj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        assert v[3 + di, 4 + dj] == 0.0
    assert v.sum() == pytest.approx(0.0, abs=1e-14)


def test_biharmonic_spike_center():
    g = GridSpec(8, 8.0)
    u = CellField(g, reference.spike(8, 2, 2))
    v = biharmonic(u).values
    assert v[2, 2] == 20.0  # 13-point stencil center weight at h = 1
    assert v[3, 2] == -8.0
    assert v[3, 3] == 2.0
    assert v[4, 2] == 1.0


def test_skew_laplacian_spike_stencil():
    g = GridSpec(8, 8.0)
    u = CellField(g, reference.spike(8, 5, 1))
    v = skew_laplacian(u).values
    assert v[5, 1] == -2.0
    for di, dj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        assert v[5 + di, 1 + dj] == 0.5
    assert v[6, 1] == 0.0


def test_vertex_avg_spike_spreads_quarters():
    g = GridSpec(8, 8.0)
    nu = VertexField(g, reference.spike(8, 3, 3))
    v = vertex_to_center_avg(nu).values
    hit = {(3, 3), (4, 3), (3, 4), (4, 4)}
    for i in range(8):
        for j in range(8):
            assert v[i, j] == (0.25 if (i, j) in hit else 0.0)


def test_edge_grad_one_sided_difference():
    g = GridSpec(4, 3.2)
    u = rand_cell(g, 0)
    ew, ns = edge_grad(u)
    assert ew.values[1, 2] == pytest.approx(
        (u.values[2, 2] - u.values[1, 2]) / g.h
    )
    assert ns.values[3, 3] == pytest.approx(
        (u.values[3, 0] - u.values[3, 3]) / g.h
    )


# ----------------------------------------------------------- eigenmodes


def test_laplacian_eigenmode():
    g = GridSpec(16, 3.2)
    X, _ = g.cell_xy()
    for lmode in (1, 3):
        u = CellField(g, np.cos(2 * np.pi * lmode * X / g.L))
        sigma = -(4.0 / g.h ** 2) * math.sin(math.pi * lmode / g.m) ** 2
        np.testing.assert_allclose(
            laplacian(u).values, sigma * u.values, rtol=0, atol=1e-12
        )
        np.testing.assert_allclose(
            biharmonic(u).values, sigma ** 2 * u.values, rtol=0, atol=1e-10
        )


def test_skew_laplacian_eigenmode():
    g = GridSpec(16, 3.2)
    X, Y = g.cell_xy()
    lmode, qmode = 2, 3
    al = 2 * np.pi * lmode / g.L
    be = 2 * np.pi * qmode / g.L
    u = CellField(g, np.cos(al * X + be * Y))
    sigma = (
        2.0 / g.h ** 2
    ) * (math.cos(al * g.h) * math.cos(be * g.h) - 1.0)
    np.testing.assert_allclose(
        skew_laplacian(u).values, sigma * u.values, rtol=0, atol=1e-12
    )


# ------------------------------------------------- annihilation / kernels


def test_constants_annihilated_v2c_preserves():
    g = GridSpec(8, 3.2)
    c = CellField.full(g, 4.2)
    for op in (laplacian, biharmonic, skew_laplacian, p_laplacian4):
        assert not op(c).values.any()
    F = skew_grad(c)
    assert not F.x.values.any() and not F.y.values.any()
    ew, ns = edge_grad(c)
    assert not ew.values.any() and not ns.values.any()
    nu = VertexField.full(g, 4.2)
    assert (vertex_to_center_avg(nu).values == 4.2).all()


def test_checkerboard_in_skew_kernel():
    # the (-1)^(i+j) mode is invisible to the vertex-centered operators
    g = GridSpec(8, 3.2)
    cb = CellField(g, reference.checkerboard(8, 0.9))
    F = skew_grad(cb)
    assert not F.x.values.any() and not F.y.values.any()
    assert not skew_laplacian(cb).values.any()
    assert not p_laplacian4(cb).values.any()
    assert skew_grad_norm_p(cb, 2) == 0.0
    # while the edge gradient sees it at full strength
    np.testing.assert_allclose(
        laplacian(cb).values, -(8.0 / g.h ** 2) * cb.values, rtol=1e-13
    )
    want = 8.0 * 0.9 ** 2 * g.L ** 2 / g.h ** 2
    assert edge_grad_norm2(cb) ** 2 == pytest.approx(want, rel=1e-13)


# ------------------------------------------------------ naive equivalence


@pytest.mark.parametrize("m", [4, 8, 16])
def test_stencils_match_naive_loops(m):
    g = GridSpec(m, 3.2)
    u = rand_cell(g, m)
    a, h = u.values, g.h
    np.testing.assert_array_equal(laplacian(u).values, reference.lap(a, h))
    np.testing.assert_array_equal(biharmonic(u).values, reference.bih(a, h))
    np.testing.assert_array_equal(
        skew_laplacian(u).values, reference.skew_lap(a, h)
    )
    gx, gy = reference.skew_grad(a, h)
    F = skew_grad(u)
    np.testing.assert_array_equal(F.x.values, gx)
    np.testing.assert_array_equal(F.y.values, gy)
    np.testing.assert_array_equal(
        p_laplacian4(u).values, reference.plap4(a, h)
    )
    ew, ns = edge_grad(u)
    rew, rns = reference.edge_grad(a, h)
    np.testing.assert_array_equal(ew.values, rew)
    np.testing.assert_array_equal(ns.values, rns)
    nu = VertexField(g, a)
    np.testing.assert_array_equal(
        vertex_to_center_avg(nu).values, reference.v2c(a)
    )
    G = rand_vector(g, m + 50)
    np.testing.assert_array_equal(
        skew_div(G).values, reference.skew_div(G.x.values, G.y.values, h)
    )


def test_operators_commute_with_shifts():
    g = GridSpec(8, 3.2)
    u = rand_cell(g, 21)
    rolled = CellField(g, np.roll(u.values, (2, 5), axis=(0, 1)))
    for op in (laplacian, biharmonic, skew_laplacian, p_laplacian4):
        np.testing.assert_allclose(
            op(rolled).values,
            np.roll(op(u).values, (2, 5), axis=(0, 1)),
            rtol=1e-12,
            atol=1e-12,
        )


# ------------------------------------------------------- operator algebra


def test_divergence_of_gradient_is_skew_laplacian():
    for m in (4, 8, 16):
        g = GridSpec(m, 3.2)
        u = rand_cell(g, m + 1)
        composed = skew_div(skew_grad(u))
        np.testing.assert_allclose(
            composed.values, skew_laplacian(u).values, rtol=0, atol=1e-13
        )


def test_skew_grad_div_adjoint():
    g = GridSpec(8, 3.2)
    u = rand_cell(g, 22)
    F = rand_vector(g, 23)
    gu = skew_grad(u)
    lhs = inner_cell(skew_div(F), u)
    rhs = -(inner_vertex(F.x, gu.x) + inner_vertex(F.y, gu.y))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_summation_by_parts_norms():
    g = GridSpec(8, 3.2)
    u = rand_cell(g, 24)
    assert inner_cell(laplacian(u), u) == pytest.approx(
        -edge_grad_norm2(u) ** 2, rel=1e-12
    )
    assert inner_cell(skew_laplacian(u), u) == pytest.approx(
        -skew_grad_norm_p(u, 2) ** 2, rel=1e-12
    )
    assert inner_cell(p_laplacian4(u), u) == pytest.approx(
        -skew_grad_norm_p(u, 4) ** 4, rel=1e-12
    )
    assert inner_cell(biharmonic(u), u) == pytest.approx(
        norm_p(laplacian(u), 2) ** 2, rel=1e-12
    )


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 2**31), st.sampled_from([4, 8, 16, 32]))
def test_self_adjointness(seed, m):
    g = GridSpec(m, 3.2)
    u, v = rand_cell(g, seed), rand_cell(g, seed + 1)
    for op in (laplacian, skew_laplacian, biharmonic):
        assert inner_cell(op(u), v) == pytest.approx(
            inner_cell(u, op(v)), rel=1e-12, abs=1e-12
        )


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 2**31), st.sampled_from([4, 8, 16, 32]))
def test_edge_gradient_dominates_skew_gradient(seed, m):
    # comparison of the two gradient energies, the coarser skew stencil
    # never exceeds the edge one
    g = GridSpec(m, 3.2)
    u = rand_cell(g, seed)
    assert edge_grad_norm2(u) >= skew_grad_norm_p(u, 2) * (1 - 1e-12)


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2**31), st.sampled_from([4, 8, 16]))
def test_p_laplacian_monotone(seed, m):
    g = GridSpec(m, 3.2)
    u, v = rand_cell(g, seed), rand_cell(g, seed + 9)
    duv = CellField(g, u.values - v.values)
    pd = CellField(g, p_laplacian4(u).values - p_laplacian4(v).values)
    assert inner_cell(pd, duv) <= 1e-11


# ----------------------------------------------------------------- norms


def test_skew_grad_norm_p_explicit_sums():
    g = GridSpec(8, 3.2)
    u = rand_cell(g, 25)
    gx, gy = reference.skew_grad(u.values, g.h)
    mag2 = gx * gx + gy * gy
    assert skew_grad_norm_p(u, 2) == pytest.approx(
        g.h * math.sqrt(mag2.sum()), rel=1e-13
    )
    assert skew_grad_norm_p(u, 4) == pytest.approx(
        (g.h ** 2 * np.sum(mag2 ** 2)) ** 0.25, rel=1e-13
    )
    with pytest.raises(ValueError):
        skew_grad_norm_p(u, 6)


def test_edge_grad_norm2_matches_edge_inner():
    g = GridSpec(8, 3.2)
    u = rand_cell(g, 26)
    ew, ns = edge_grad(u)
    want = inner_edge(ew, ew) + inner_edge(ns, ns)
    assert edge_grad_norm2(u) ** 2 == pytest.approx(want, rel=1e-13)


def test_sobolev_norms_compose():
    g = GridSpec(8, 3.2)
    u = rand_cell(g, 27)
    h1 = math.sqrt(norm_p(u, 2) ** 2 + edge_grad_norm2(u) ** 2)
    assert norm_H1(u) == pytest.approx(h1, rel=1e-13)
    h2 = math.sqrt(h1 ** 2 + norm_p(laplacian(u), 2) ** 2)
    assert norm_H2(u) == pytest.approx(h2, rel=1e-13)
    assert norm_H2(u) >= norm_H1(u) >= norm_p(u, 2)
