"""Product Gaussian calculus: Hellinger, dichotomy, translation, dilation."""

import math

import numpy as np
import pytest

from ell2kit.errors import TailNotCertified
from ell2kit.measure import (Fernique, ProductGaussian, ShiftedGaussianPair,
                             Verdict, classify_pair, dilation_check,
                             fernique_integral, fernique_threshold,
                             hellinger_1d, hellinger_product, mc_integrate,
                             positivity_smoke, rn_translation,
                             rn_translation_multi)
from ell2kit.polynomials import (SparsePolynomial, integrate_polynomial,
                                 integrate_polynomial_tilted,
                                 random_polynomial)
from ell2kit.sampling import SampleStream
from ell2kit.weights import TailedSequence, TruncatedPoint, WeightSequence


def test_hellinger_1d_examples():
    assert hellinger_1d(1, 1, 1, 0, 0) == 1.0
    assert hellinger_1d(1, 1, 1, 0, 2) == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert hellinger_1d(1, 1, 2, 0, 0) == pytest.approx(math.sqrt(0.8), rel=1e-15)


def test_hellinger_product_branches(weights):
    same = ShiftedGaussianPair(weights, 1.0, 1.0, TailedSequence.zero(),
                               TailedSequence.zero())
    assert hellinger_product(same) == 1.0
    scales = ShiftedGaussianPair(weights, 1.0, 2.0, TailedSequence.zero(),
                                 TailedSequence.zero())
    assert hellinger_product(scales) == 0.0
    # shifts x_{i,1} = a_i^2: factors exp(-a_i^2 / 8)
    sq = ShiftedGaussianPair(weights, 1.0, 1.0,
                             TailedSequence.geometric((), 1.0, 0.25),
                             TailedSequence.zero())
    expected = math.exp(sum(-(0.25**i) ** 2 / (8 * (0.5**i) ** 2)
                            for i in range(1, 400)))
    assert hellinger_product(sq) == pytest.approx(expected, rel=1e-12)


def test_classify_pair_examples(weights):
    sing = classify_pair(ShiftedGaussianPair(weights, 1.0, 2.0,
                                             TailedSequence.zero(),
                                             TailedSequence.zero()))
    assert sing.verdict is Verdict.SINGULAR and sing.hellinger == 0.0
    eq = classify_pair(ShiftedGaussianPair(
        weights, 1.0, 1.0, TailedSequence.geometric((), 1.0, 0.25),
        TailedSequence.zero()))
    assert eq.verdict is Verdict.EQUIVALENT and eq.hellinger > 0
    assert eq.tail_sum == pytest.approx(sum(0.25**i for i in range(1, 200)),
                                        rel=1e-12)
    div = classify_pair(ShiftedGaussianPair(
        weights, 1.0, 1.0, TailedSequence.geometric((), 1.0, 0.5),
        TailedSequence.zero()))
    assert div.verdict is Verdict.SINGULAR and math.isinf(div.tail_sum)


def test_classify_consistency_randomized(weights, rng):
    for _ in range(200):
        branch = rng.integers(0, 3)
        r = float(rng.uniform(0.5, 2.0))
        s = r if branch else float(rng.uniform(0.5, 2.0)) + r
        q = 0.25 if branch == 1 else 0.5
        sh = TailedSequence.geometric(tuple(rng.normal(size=2)),
                                      float(rng.uniform(0.1, 1.0)), q)
        verdict = classify_pair(ShiftedGaussianPair(weights, r, s, sh,
                                                    TailedSequence.zero()))
        assert (verdict.hellinger > 0) == (verdict.verdict is Verdict.EQUIVALENT)


def test_uncertifiable_shift_raises(weights):
    pair = ShiftedGaussianPair(weights, 1.0, 1.0,
                               TailedSequence.power((), 1.0, -3.0),
                               TailedSequence.zero())
    with pytest.raises(TailNotCertified):
        classify_pair(pair)


def test_rn_translation_examples():
    w = WeightSequence.geometric()
    wa1 = WeightSequence(explicit=(1.0,) + w.explicit[1:], tail=w.tail)
    g = ProductGaussian(wa1, 1.0)
    assert rn_translation(g, 1, 0.0, TruncatedPoint.of(0.5)) == 1.0
    assert rn_translation(g, 1, 1.0, TruncatedPoint.of(0.0)) == \
        pytest.approx(math.exp(-0.5), rel=1e-15)
    assert rn_translation(g, 1, -1.0, TruncatedPoint.of(1.0)) == \
        pytest.approx(math.exp(0.5), rel=1e-15)


def test_rn_translation_polynomial_oracle(weights, rng):
    # integral of g(y - s e_i) equals integral of g times the density, exactly
    g = ProductGaussian(weights, 1.0)
    for _ in range(20):
        poly = random_polynomial(rng, 4, 5, 4)
        i = int(rng.integers(1, 5))
        s = float(rng.uniform(-1.5, 1.5))
        ai = weights.a(i)
        lhs = float(integrate_polynomial(poly.shift(i, -s), weights))
        rhs = math.exp(-s * s / (2 * ai * ai)) * integrate_polynomial_tilted(
            poly, weights, 1.0, coord=i, theta=-s / ai**2)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_rn_translation_multi_is_product(weights):
    g = ProductGaussian(weights, 1.0)
    y = TruncatedPoint.of(0.2, -0.3, 0.4)
    multi = rn_translation_multi(g, {1: 0.5, 3: -0.2}, y)
    single = rn_translation(g, 1, 0.5, y) * rn_translation(g, 3, -0.2, y)
    assert multi == pytest.approx(single, rel=1e-15)


def test_dilation_examples():
    w = WeightSequence(explicit=(1.0,), tail=WeightSequence.geometric().tail)
    g = ProductGaussian(w, 1.0)
    lhs, rhs = dilation_check(g, 1.0, {1: (-0.7, 1.3)})
    assert lhs == rhs
    lhs, rhs = dilation_check(g, 2.0, {1: (0.0, 2.0)})
    assert lhs == pytest.approx(rhs, abs=1e-15)
    assert lhs == pytest.approx(0.341344746, abs=1e-8)
    lhs, rhs = dilation_check(g, 0.5, {1: (-1.0, 1.0)})
    assert lhs == pytest.approx(0.954499736, abs=1e-8)


def test_dilation_random_rectangles(weights, rng):
    g = ProductGaussian(weights, 1.0)
    for _ in range(50):
        s = float(rng.uniform(0.3, 3.0))
        event = {}
        for i in rng.choice(np.arange(1, 6), size=2, replace=False):
            lo = float(rng.uniform(-1, 0.5)) * weights.a(int(i))
            event[int(i)] = (lo, lo + float(rng.uniform(0.1, 2.0)) * weights.a(int(i)))
        lhs, rhs = dilation_check(g, s, event)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_fernique_values(weights):
    g = ProductGaussian(weights, 1.0)
    assert fernique_integral(g, 0.0).value == 1.0
    assert fernique_threshold(g) == pytest.approx(2.0, rel=1e-14)
    val = fernique_integral(g, 1.0)
    assert val.finite and val.value == pytest.approx(1.5440955, rel=1e-6)
    assert not fernique_integral(g, 2.0).finite
    assert not fernique_integral(g, 5.0).finite
    assert not fernique_integral(g, 0.5, exponent=2.5).finite


def test_fernique_matches_monte_carlo(weights):
    g = ProductGaussian(weights, 1.0)
    c = 0.5 * fernique_threshold(g)
    closed = fernique_integral(g, c).value
    st = SampleStream(seed=4242, dims=8)
    est, se = mc_integrate(g, lambda x: np.exp(c * np.sum(x * x, axis=1)),
                           st, 400_000)
    assert abs(est - closed) <= 4.0 * se + 0.01 * closed


def test_mc_divergence_growth(weights):
    # beyond the threshold the sample mean grows without bound
    g = ProductGaussian(weights, 1.0)
    c = 2.5
    st = SampleStream(seed=31, dims=8)
    small, _ = mc_integrate(g, lambda x: np.exp(c * np.sum(x * x, axis=1)),
                            st, 10_000)
    big, _ = mc_integrate(g, lambda x: np.exp(c * np.sum(x * x, axis=1)),
                          st, 1_000_000)
    assert big > 5.0 * small


def test_mc_constant_and_positivity(weights):
    g = ProductGaussian(weights, 1.0)
    st = SampleStream(seed=8, dims=8)
    est, se = mc_integrate(g, lambda x: np.ones(len(x)), st, 10_000)
    assert est == 1.0 and se == 0.0
    assert positivity_smoke(g, TruncatedPoint.of(), 3.0, st.child(1)) > 0.99
    assert positivity_smoke(g, TruncatedPoint.of(0.5, 0.5), 0.5,
                            st.child(2)) > 0.0
    assert positivity_smoke(g, TruncatedPoint.of(), 0.0, st.child(3)) == 0.0
