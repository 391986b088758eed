"""Smoothing semigroup, compact sublevel sets, and cut-off properties."""

import math

import numpy as np
import pytest

from ell2kit.cutoff import (CutoffConfig, cutoff_gradient_sum, cutoff_xk,
                            discontinuity_demo,
                            discontinuity_partial_products, gn_estimate,
                            gn_partial, heat_partial, heat_smooth, kn_mass,
                            separating_bump, smoothstep)
from ell2kit.errors import TailDivergent
from ell2kit.measure import ProductGaussian, norm_cdf
from ell2kit.sampling import SampleStream
from ell2kit.weights import TruncatedPoint, WeightSequence


@pytest.fixture(scope="module")
def cfg(weights):
    return CutoffConfig(weights, n_samples=40_000)


@pytest.fixture(scope="module")
def stream():
    return SampleStream(seed=2468, dims=8)


def test_smoothstep_profile():
    H = smoothstep()
    assert H(0.0) == 0.0 and H(0.24) == 0.0 and H(-0.2) == 0.0
    assert H(0.76) == 1.0 and H(2.0) == 1.0 and H(-1.0) == 1.0
    mid = H(0.5)
    assert 0.0 < mid < 1.0
    assert H.sup_deriv > 0
    xs = np.linspace(0.26, 0.74, 100)
    assert np.all(np.diff([H(x) for x in xs]) >= 0)


def test_separating_bump(weights):
    center = TruncatedPoint.of(0.5, -0.5)
    assert separating_bump(center, 0.5, 1.0, center) == 1.0
    far = TruncatedPoint.of(0.5, -0.5, 2.0)
    assert separating_bump(center, 0.5, 1.0, far) == 0.0
    mid = TruncatedPoint.of(0.5, -0.5, 0.75)
    assert 0.0 < separating_bump(center, 0.5, 1.0, mid) < 1.0


def test_cutoff_condition_rejects_slow_c(weights):
    # c_i = a_i^2 makes a_i^2 / c_i constant, which is not summable
    with pytest.raises(TailDivergent):
        CutoffConfig(weights, c_exponent=2.0)


def test_kn_monotone_membership(cfg, rng):
    for _ in range(50):
        x = TruncatedPoint.from_array(rng.normal(size=8) * 0.8)
        for n in range(1, 5):
            if cfg.in_kn(x, n):
                assert cfg.in_kn(x, n + 1)


def test_kn_mass_increases_to_one(cfg, stream):
    masses = [kn_mass(cfg, n, stream.child(n), 40_000)[0] for n in (1, 2, 3, 4)]
    assert all(b >= a for a, b in zip(masses, masses[1:]))
    assert any(m > 0.99 for m in masses)


def test_calibration_level_exists(cfg, stream):
    n1 = cfg.n1(stream.child(0))
    assert 1 <= n1 <= 32
    est, se = kn_mass(cfg, n1, stream.child(50), 40_000)
    assert est > 0.8


def _scaled_points(cfg, rng, level, count, lo, hi):
    c = cfg.c_head(cfg.dims)
    out = []
    for _ in range(count):
        u = rng.standard_normal(cfg.dims)
        q = float(np.sum(u * u / c))
        out.append(TruncatedPoint.from_array(
            u * level / math.sqrt(q) * float(rng.uniform(lo, hi))))
    return out


def test_cutoff_values_by_region(cfg, stream, rng):
    n1 = cfg.n1(stream.child(0))
    k = 2
    for j, x in enumerate(_scaled_points(cfg, rng, k, 20, 0.1, 0.92)):
        assert cutoff_xk(cfg, k, x, stream.child(100 + j), 40_000) == 1.0
    for j, x in enumerate(_scaled_points(cfg, rng, k + 2 * n1, 20, 1.15, 2.5)):
        assert cutoff_xk(cfg, k, x, stream.child(200 + j), 40_000) == 0.0
    vals = [cutoff_xk(cfg, k, x, stream.child(300 + j), 40_000)
            for j, x in enumerate(_scaled_points(cfg, rng, k + n1, 10, 0.95, 1.05))]
    assert all(0.0 <= v <= 1.0 for v in vals)


def test_gradient_bound_and_interior_zero(cfg, stream, rng):
    n1 = cfg.n1(stream.child(0))
    k = 2
    c_sq = smoothstep().sup_deriv ** 2
    deep = _scaled_points(cfg, rng, k, 3, 0.1, 0.5)
    for j, x in enumerate(deep):
        assert cutoff_gradient_sum(cfg, k, x, stream.child(400 + j), 40_000) == 0.0
    shell = _scaled_points(cfg, rng, k + n1, 10, 0.93, 1.07)
    worst = max(cutoff_gradient_sum(cfg, k, x, stream.child(500 + j), 40_000)
                for j, x in enumerate(shell))
    assert worst <= c_sq


def test_gn_partial_matches_finite_difference(cfg, weights, rng):
    # common random numbers make the central difference usable despite the
    # indicator integrand
    n = 3
    st = SampleStream(seed=1357, dims=8)
    x = TruncatedPoint.from_array(rng.normal(size=8) * 1.3)
    i = 2
    h = 1e-3 * 50  # wider step: indicator flip fraction scales with h
    xp = TruncatedPoint.from_array(x.array(8) + h * np.eye(8)[i - 1])
    xm = TruncatedPoint.from_array(x.array(8) - h * np.eye(8)[i - 1])
    gp, _ = gn_estimate(cfg, n, xp, st, 200_000)
    gm, _ = gn_estimate(cfg, n, xm, st, 200_000)
    fd = (gp - gm) / (2 * h)
    di, se = gn_partial(cfg, n, x, i, st.child(1), 200_000)
    # crude bound on the CRN finite-difference noise
    fd_se = math.sqrt(max(gp * (1 - gp), 1e-6) / 200_000) / h
    assert abs(fd - di) <= 4.0 * (se + fd_se) + 5e-3


def test_heat_smooth_examples(cfg, weights, stream):
    g = ProductGaussian(weights, 1.0)
    x = TruncatedPoint.of(0.4, -0.2)
    est, se = heat_smooth(lambda pts: np.ones(len(pts)), 1.0, x, g, stream, 20_000)
    assert est == 1.0 and se == 0.0
    est, se = heat_smooth(lambda pts: pts[:, 0], 1.0, x, g,
                          stream.child(1), 100_000)
    assert abs(est - 0.4) <= 4 * se
    # orthant indicator at the root-weight point: product of CDF values
    xa = TruncatedPoint.from_array(np.sqrt(weights.head(8)))
    est, se = heat_smooth(lambda pts: np.all(pts > 0, axis=1).astype(float),
                          1.0, xa, g, stream.child(2), 100_000)
    closed = math.prod(norm_cdf(1.0 / math.sqrt(weights.a(i)))
                       for i in range(1, 9))
    assert abs(est - closed) <= 4 * se + 1e-3


def test_heat_partial_examples(cfg, weights, stream):
    g = ProductGaussian(weights, 1.0)
    x = TruncatedPoint.of(0.3)
    est, se = heat_partial(lambda pts: np.ones(len(pts)), 1.0, x, 1, g,
                           stream.child(3), 50_000)
    assert abs(est) <= 4 * se
    est, se = heat_partial(lambda pts: pts[:, 0], 1.0, x, 1, g,
                           stream.child(4), 200_000)
    assert abs(est - 1.0) <= 4 * se
    # uniform bound for a bounded integrand
    f = lambda pts: np.tanh(pts[:, 0] + pts[:, 1])
    for i, t in ((1, 1.0), (2, 0.5), (3, 2.0)):
        est, se = heat_partial(f, t, x, i, g, stream.child(10 + i), 50_000)
        assert abs(est) <= 1.0 / (t * weights.a(i)) + 4 * se


def test_heat_partial_matches_finite_difference(cfg, weights):
    g = ProductGaussian(weights, 1.0)
    rng = np.random.default_rng(99)
    for trial in range(5):
        i = int(rng.integers(1, 4))
        x = TruncatedPoint.from_array(rng.normal(size=4) * 0.5)
        freq = rng.normal(size=4)

        def f(pts, freq=freq):
            return np.sin(pts[:, :4] @ freq)

        st = SampleStream(seed=4000 + trial, dims=8)
        h = 1e-3
        xp = TruncatedPoint.from_array(x.array(8) + h * np.eye(8)[i - 1])
        xm = TruncatedPoint.from_array(x.array(8) - h * np.eye(8)[i - 1])
        up, _ = heat_smooth(f, 1.0, xp, g, st, 100_000)
        um, _ = heat_smooth(f, 1.0, xm, g, st, 100_000)
        fd = (up - um) / (2 * h)
        est, se = heat_partial(f, 1.0, x, i, g, st.child(1), 100_000)
        assert abs(est - fd) <= 4 * se + 1e-3


def test_discontinuity_demo(weights):
    low, high = discontinuity_demo(weights, 8)
    assert low == 0.0
    assert 0.0 < high < 1.0
    closed = math.prod(norm_cdf(1.0 / math.sqrt(weights.a(i)))
                       for i in range(1, 40))
    assert high == pytest.approx(closed, rel=1e-10)
    # the alternating construction decays as the truncation grows
    p16 = discontinuity_partial_products(weights, 4, 16)
    p8 = discontinuity_partial_products(weights, 4, 8)
    assert p16 <= p8
