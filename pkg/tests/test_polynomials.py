"""Core numerics: moment oracle, polynomial algebra, metrics, sampling."""

import math
from fractions import Fraction

import numpy as np
import pytest

from ell2kit.errors import NonFiniteSample, NotNearInfinity, ZeroCoordinate
from ell2kit.measure import ProductGaussian, mc_integrate
from ell2kit.metrics import dp_distance, near_infinity_gauge
from ell2kit.polynomials import (SparsePolynomial, adjoint_derivative,
                                 gaussian_halfline_moment, gaussian_moment,
                                 gaussian_tilted_moment, integrate_polynomial,
                                 random_polynomial)
from ell2kit.sampling import SampleStream, mc_mean_stderr
from ell2kit.weights import TailedSequence, TruncatedPoint, WeightSequence


def quad_moment(k, sigma, order=400):
    x, w = np.polynomial.legendre.leggauss(order)
    span = 14.0 * sigma
    xs = span * x
    dens = np.exp(-xs * xs / (2 * sigma * sigma)) / math.sqrt(2 * math.pi) / sigma
    return span * float(np.dot(w, xs**k * dens))


def test_gaussian_moment_examples():
    assert gaussian_moment(0, 0.5) == 1.0
    assert gaussian_moment(2, 0.5) == 0.25
    assert gaussian_moment(4, 2.0) == 48.0
    assert gaussian_moment(3, 1.7) == 0.0  # odd branch is exact zero


def test_gaussian_moment_matches_quadrature():
    for k in (0, 2, 4, 6, 8):
        for sigma in (0.5, 1.0, 2.0):
            assert gaussian_moment(k, sigma) == pytest.approx(
                quad_moment(k, sigma), rel=1e-12)


def test_halfline_and_tilted_moments_match_quadrature():
    x, w = np.polynomial.legendre.leggauss(400)
    for k in (0, 1, 2, 3, 5):
        sigma = 0.8
        xs = 7.0 * sigma * (x + 1.0)  # (0, 14 sigma)
        dens = np.exp(-xs**2 / (2 * sigma**2)) / math.sqrt(2 * math.pi) / sigma
        quad = 7.0 * sigma * float(np.dot(w, xs**k * dens))
        assert gaussian_halfline_moment(k, sigma) == pytest.approx(quad, rel=1e-12)
    for k, theta in ((0, 0.7), (1, -0.4), (3, 1.1)):
        sigma = 0.6
        xs = 14.0 * sigma * x
        dens = np.exp(-xs**2 / (2 * sigma**2)) / math.sqrt(2 * math.pi) / sigma
        quad = 14.0 * sigma * float(np.dot(w, xs**k * np.exp(theta * xs) * dens))
        assert gaussian_tilted_moment(k, sigma, theta) == pytest.approx(quad, rel=1e-11)


def test_integrate_polynomial_examples(weights):
    assert integrate_polynomial(SparsePolynomial.constant(1.0), weights) == 1.0
    assert integrate_polynomial(SparsePolynomial.x(1, 2), weights) == 0.25
    cross = SparsePolynomial.x(1) * SparsePolynomial.x(2)
    assert integrate_polynomial(cross, weights) == 0.0


def test_exact_rational_mode():
    w = WeightSequence.geometric()
    p = SparsePolynomial({(): Fraction(1, 3)}) + \
        SparsePolynomial.x(1, 2) * Fraction(2, 5)
    val = integrate_polynomial(p, w, r=Fraction(1))
    # weights are floats; coerce the variance by hand for the exact check
    assert float(val) == pytest.approx(1 / 3 + 2 / 5 * 0.25, rel=1e-15)


def test_polynomial_shift_is_exact(rng):
    f = random_polynomial(rng, 3, 4, 5)
    s = 0.3125  # dyadic so float arithmetic is exact
    g = f.shift(1, s)
    pts = rng.normal(size=(50, 3))
    shifted = pts.copy()
    shifted[:, 0] += s
    assert np.allclose(g.eval_samples(pts), f.eval_samples(shifted), rtol=1e-12)


def test_integration_by_parts_duality_exact(weights, rng):
    # ground oracle for the adjoint derivative used everywhere downstream
    for _ in range(30):
        p = random_polynomial(rng, 4, 4, 4)
        q = random_polynomial(rng, 4, 4, 4)
        i = int(rng.integers(1, 5))
        lhs = integrate_polynomial(p.diff(i) * q, weights)
        rhs = integrate_polynomial(p * adjoint_derivative(q, i, weights), weights)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_oracle_matches_monte_carlo(weights):
    rng = np.random.default_rng(777)
    g = ProductGaussian(weights)
    misses = 0
    for trial in range(100):
        f = random_polynomial(rng, 8, 6, 5)
        exact = float(integrate_polynomial(f, weights))
        st = SampleStream(seed=1000 + trial, dims=8)
        est, se = mc_integrate(g, f.eval_samples, st, 20000)
        if abs(est - exact) > 4.0 * max(se, 1e-15):
            misses += 1
    # 4-sigma misses should be rare; allow a couple out of 100
    assert misses <= 2


def test_dp_distance_examples(weights):
    x = TruncatedPoint.of(0.3, 0.4)
    zero = TruncatedPoint.of()
    assert dp_distance(x, x, 2.0) == 0.0
    assert dp_distance(TruncatedPoint.of(3.0), zero, 2.0) == 1.0
    assert dp_distance(x, zero, 2.0) == pytest.approx(0.5, abs=1e-15)
    assert dp_distance(x, zero, math.inf) == pytest.approx(0.4, abs=1e-15)


def test_dp_distance_metric_properties(rng):
    for p in (1.0, 1.5, 2.0, math.inf):
        for _ in range(50):
            a, b, c = (TruncatedPoint.from_array(rng.normal(size=4))
                       for _ in range(3))
            dab = dp_distance(a, b, p)
            assert dab == pytest.approx(dp_distance(b, a, p), abs=1e-15)
            assert dab <= dp_distance(a, c, p) + dp_distance(c, b, p) + 1e-12


def test_near_infinity_gauge_examples():
    v = TailedSequence.geometric((), 1.0, 2.0)  # v_i = 2^i
    assert near_infinity_gauge(v, 1.0) == pytest.approx(1.0, rel=1e-14)
    vi = TailedSequence.power((), 1.0, 1.0)  # v_i = i
    assert near_infinity_gauge(vi, 2.0) == pytest.approx(math.pi**2 / 6, rel=1e-13)
    with pytest.raises(ZeroCoordinate):
        near_infinity_gauge(TailedSequence.geometric((0.0, 1.0), 1.0, 2.0), 1.0)
    with pytest.raises(NotNearInfinity):
        near_infinity_gauge(TailedSequence.power((), 1.0, 1.0), 1.0)  # harmonic


def test_sample_stream_worker_invariance():
    st = SampleStream(seed=99, chunk_size=1000, dims=4)
    fn = lambda z: np.sum(z**2, axis=1)
    ref = mc_mean_stderr(fn, st, 25_000, workers=1)
    for workers in (2, 3, 7):
        assert mc_mean_stderr(fn, st, 25_000, workers=workers) == ref


def test_sample_stream_reproducible_and_chunks_differ():
    st = SampleStream(seed=5, chunk_size=64, dims=3)
    assert np.array_equal(st.chunk(3), SampleStream(5, 64, 3).chunk(3))
    assert not np.array_equal(st.chunk(0), st.chunk(1))


def test_nonfinite_sample_raises():
    st = SampleStream(seed=5, chunk_size=64, dims=2)
    with np.errstate(invalid="ignore"), pytest.raises(NonFiniteSample):
        mc_mean_stderr(lambda z: np.log(z[:, 0]), st, 500)
