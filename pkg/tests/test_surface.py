"""Index-set determinants, surface measures, Gauss-Green and Stokes checks."""

import math

import numpy as np
import pytest

from ell2kit.errors import (ChartMismatch, MalformedBlock,
                            UnsupportedCodimension)
from ell2kit.polynomials import SparsePolynomial, random_polynomial
from ell2kit.sampling import SampleStream
from ell2kit.surface import (AffineLineBundle, FinitePerturbationMap, IndexSet,
                             PolyGraphSurface, balanced_coordinate, compose,
                             det_f, f_weight, gauss_green_ball,
                             gauss_green_halfspace,
                             gauss_green_halfspace_quadrature,
                             index_equivalent, sphere_normal_magnitude_check,
                             stokes_circle, stokes_halfplane)


def test_index_equivalence_examples():
    i = IndexSet.finite(1, 2, 5)
    assert index_equivalent(i, i)
    assert not index_equivalent(IndexSet.evens(), IndexSet.odds())
    assert index_equivalent(IndexSet.cofinite(1), IndexSet.cofinite(2))
    assert not index_equivalent(i, IndexSet.cofinite(3))
    assert index_equivalent(IndexSet.odds().patch(remove=[1], add=[2]),
                            IndexSet.odds())
    assert index_equivalent(IndexSet.finite(1, 2), IndexSet.finite(7, 9))
    assert not index_equivalent(IndexSet.finite(1, 2), IndexSet.finite(7))


def test_det_examples():
    i1, i2 = IndexSet.finite(1, 2), IndexSet.finite(1, 3)
    t = FinitePerturbationMap.build(i1, i2, {1}, [[1, 0], [1, 2]])
    assert det_f(t) == pytest.approx(2.0, abs=1e-14)
    tid = FinitePerturbationMap.build(i1, i1, set(), np.zeros((0, 0)))
    assert det_f(tid) == 1.0
    with pytest.raises(MalformedBlock):
        FinitePerturbationMap.build(i1, IndexSet.finite(1), set(),
                                    np.zeros((0, 0)))
    with pytest.raises(MalformedBlock):
        FinitePerturbationMap.build(i1, i2, {2}, [[1, 0], [0, 1]])


def test_det_multiplicative(rng):
    for _ in range(100):
        base = list(rng.choice(np.arange(1, 12), size=4, replace=False))
        i1 = IndexSet.finite(base[0], base[1])
        i2 = IndexSet.finite(base[0], base[2])
        i3 = IndexSet.finite(base[1], base[3])
        t1 = FinitePerturbationMap.build(i1, i2, {base[0]},
                                         rng.normal(size=(2, 2)) + np.eye(2))
        t2 = FinitePerturbationMap.build(i2, i3, set(),
                                         rng.normal(size=(2, 2)) + np.eye(2))
        t21 = compose(t2, t1, i1, i2, i3)
        assert det_f(t21) == pytest.approx(det_f(t2) * det_f(t1),
                                           rel=1e-10, abs=1e-10)


def test_line_bundle_geometry(weights):
    # direction scaled so the squared norm is exactly 3
    probe = AffineLineBundle(weights, {}, {2: 1.0, 4: 0.04})
    rest_sq = probe.dx_norm_sq() - 1.0  # everything except coordinate 2's head
    lb = AffineLineBundle(weights, {2: 0.1},
                          {2: math.sqrt(3.0 - rest_sq), 4: 0.04})
    assert lb.area_density() == pytest.approx(2.0, rel=1e-12)
    # chart change identity: n_I = |det| * n_swapped
    assert lb.area_density() == pytest.approx(
        abs(lb.chart_change_det(2)) * lb.area_density_swapped(2), rel=1e-14)
    assert lb.chart_change_det(2) * (1.0 / lb.chart_change_det(2)) == 1.0


def test_flat_graph_density(weights):
    flat = PolyGraphSurface(weights, {1: SparsePolynomial.zero()}, dims=3)
    assert flat.area_density({2: 0.3, 3: -1.0}) == 1.0
    tilted = PolyGraphSurface(weights, {2: SparsePolynomial.x(1) * 3.0}, dims=2)
    assert tilted.area_density({1: 0.5}) == pytest.approx(math.sqrt(10), rel=1e-14)
    with pytest.raises(UnsupportedCodimension):
        PolyGraphSurface(weights, {1: SparsePolynomial.zero(),
                                   2: SparsePolynomial.zero(),
                                   3: SparsePolynomial.zero()}, dims=4)


def test_f_weight_examples(weights):
    val = f_weight(weights, {1: 0.0}, tail_mode="none")
    assert val == pytest.approx(1.0 / math.sqrt(2 * math.pi * 0.25), rel=1e-14)
    # scaling in the exponent
    v0 = f_weight(weights, {2: 0.0, 3: 0.0}, tail_mode="none")
    vx = f_weight(weights, {2: 0.3, 3: -0.1}, tail_mode="none")
    expo = -0.3**2 / (2 * weights.a(2) ** 2) - 0.1**2 / (2 * weights.a(3) ** 2)
    assert vx / v0 == pytest.approx(math.exp(expo), rel=1e-12)
    # zero tail over a co-finite set blows up for decaying weights
    assert f_weight(weights, {}, tail_mode="zero", tail_start=9) == math.inf
    # balanced tail contributes exactly nothing
    assert f_weight(weights, {}, tail_mode="balanced", tail_start=9) == 1.0
    assert balanced_coordinate(weights.a(9)) > 0


def test_halfspace_boundary_mass(weights):
    hs = PolyGraphSurface(weights, {1: SparsePolynomial.zero()}, dims=2)
    assert hs.measure({}) == pytest.approx(
        1.0 / (math.sqrt(2 * math.pi) * weights.a(1)), rel=1e-12)
    assert hs.measure({2: (0.0, 0.0)}) == 0.0


def test_surface_measure_additivity(weights):
    lb = AffineLineBundle(weights, {2: 0.3, 4: -0.2}, {2: 0.125, 4: 0.05})
    total = lb.measure(-0.5, 0.8)
    split = lb.measure(-0.5, 0.1) + lb.measure(0.1, 0.8)
    assert split == pytest.approx(total, rel=1e-12)
    assert lb.measure(0.4, 0.4) == 0.0


def test_chart_consistency(weights):
    lb = AffineLineBundle(weights, {2: 0.3, 4: -0.2}, {2: 0.125, 4: 0.05})
    base = lb.measure(-0.5, 0.8)
    assert base == lb.measure(-0.5, 0.8)  # same chart twice: exact
    for j in (2, 4):
        swapped = lb.measure_swapped_chart(j, -0.5, 0.8)
        assert swapped == pytest.approx(base, rel=1e-3)
    with pytest.raises(ChartMismatch):
        lb.measure_swapped_chart(3, 0.0, 1.0)


def test_gauss_green_halfspace_examples(weights):
    lhs, rhs, res = gauss_green_halfspace(SparsePolynomial.constant(1.0), 1, weights)
    assert lhs == 0.0 and res <= 1e-15
    lhs, rhs, res = gauss_green_halfspace(SparsePolynomial.x(1), 1, weights)
    assert lhs == pytest.approx(0.5, abs=1e-15) and res <= 1e-14
    lhs, rhs, res = gauss_green_halfspace(SparsePolynomial.x(2), 1, weights)
    assert lhs == 0.0 and res <= 1e-15
    _, _, res0 = gauss_green_halfspace_quadrature(weights)
    assert res0 <= 1e-10


def test_gauss_green_halfspace_random(weights, rng):
    for _ in range(30):
        dims = int(rng.integers(2, 9))
        f = random_polynomial(rng, dims, 4, 4)
        i = int(rng.integers(1, dims + 1))
        lhs, rhs, res = gauss_green_halfspace(f, i, weights)
        assert res <= 1e-10 * max(abs(lhs), abs(rhs), 1.0)


def test_gauss_green_ball(weights, rng):
    st = SampleStream(seed=2024, dims=4)
    for trial in range(6):
        dims = int(rng.integers(2, 5))
        f = random_polynomial(rng, dims, 3, 3)
        i = int(rng.integers(1, dims + 1))
        lhs, rhs, res, se = gauss_green_ball(f, i, weights,
                                             float(rng.uniform(0.4, 1.2)),
                                             dims, st.child(trial), 150_000)
        assert res <= max(4.0 * se, 1e-12)
    with pytest.raises(ChartMismatch):
        gauss_green_ball(SparsePolynomial.x(4), 1, weights, 1.0, 2, st, 1000)


def test_stokes_halfplane(weights, rng):
    zero = SparsePolynomial.zero()
    lhs, rhs, res, _ = stokes_halfplane(zero, weights)
    assert lhs == 0.0 and rhs == 0.0
    # constant function pins the boundary orientation
    lhs, rhs, res, scale = stokes_halfplane(SparsePolynomial.constant(1.0),
                                            weights, tilt=(0.3, -0.4))
    assert res <= 1e-10 * scale
    for _ in range(10):
        f = random_polynomial(rng, 3, 3, 4)
        tilt = (float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-0.5, 0.5)))
        lhs, rhs, res, scale = stokes_halfplane(f, weights, tilt=tilt)
        assert res <= 1e-3 * scale


def test_stokes_circle_radial(weights, rng):
    # radial polynomial in the first two coordinates
    r2 = SparsePolynomial.x(1, 2) + SparsePolynomial.x(2, 2)
    f = r2 * r2 + r2 * 0.5 + 1.0
    val, scale = stokes_circle(f, weights, 0.9)
    assert abs(val) <= 1e-3 * scale
    for _ in range(10):
        g = random_polynomial(rng, 2, 4, 4)
        val, scale = stokes_circle(g, weights, float(rng.uniform(0.5, 1.3)))
        assert abs(val) <= 1e-3 * scale


def test_sphere_normal_magnitudes(weights, rng):
    assert sphere_normal_magnitude_check(weights, 4, 0.8, rng) <= 1e-12
