"""Complex form calculus: operators, norms, estimates, and the solver."""

import math

import numpy as np
import pytest

from ell2kit.dbar import (ComplexCutoff, CPoly, Form, apply_dbar,
                          apply_dbar_adjoint, basic_estimate_check, ckey,
                          cpoly_expectation, cpoly_inner, delta_j, form_inner,
                          form_norm_sq, multiplier_identity_check, random_cpoly,
                          random_form, reduce_dimension, reduce_form,
                          solve_dbar)
from ell2kit.errors import BasisTooSmall, NotClosed
from ell2kit.sampling import SampleStream


def test_delta_examples(weights):
    # delta of the constant: -conj(z)/(2 r^2 a^2) with a_1 = 1/2 gives -2 conj(z)
    p = delta_j(CPoly.constant(1.0), 1, weights)
    assert p.terms == {ckey((1, 0, 1)): -2.0}
    q = delta_j(CPoly.z(1), 1, weights)
    assert q.terms == {(): 1.0, ckey((1, 1, 1)): -2.0}


def test_expectation_balanced_only(weights):
    assert cpoly_expectation(CPoly.z(1) * CPoly.zbar(1), weights) == \
        pytest.approx(2 * weights.a(1) ** 2, rel=1e-15)
    assert cpoly_expectation(CPoly.z(1, 2), weights) == 0.0
    assert cpoly_expectation(CPoly.z(1, 2) * CPoly.zbar(1, 2), weights) == \
        pytest.approx(2 * (2 * weights.a(1) ** 2) ** 2, rel=1e-15)


def test_integration_by_parts_exact(weights, rng):
    for _ in range(20):
        f = random_cpoly(rng, 3, 3, 3)
        g = random_cpoly(rng, 3, 3, 3)
        i = int(rng.integers(1, 4))
        lhs = cpoly_inner(f.diff_zbar(i), g, weights)
        rhs = -cpoly_inner(f, delta_j(g, i, weights), weights)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_raise_operator_examples(weights):
    f = Form.scalar(CPoly.zbar(1))
    tf = apply_dbar(f, weights)
    assert tf.comps == {((), (1,)): CPoly.constant(1.0)}
    const = Form(0, 1, {((), (2,)): CPoly.constant(3.0)})
    assert apply_dbar(const, weights).is_zero()


def test_raise_squared_is_zero(weights, rng):
    for _ in range(100):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        f = random_form(rng, s, t, 4, 4)
        assert apply_dbar(apply_dbar(f, weights), weights).is_zero()


def test_adjointness_exact(weights, rng):
    nontrivial = 0
    for _ in range(100):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        u = random_form(rng, s, t, 3, 3, n_comps=3)
        f = apply_dbar(u, weights) + random_form(rng, s, t + 1, 3, 2, n_comps=2)
        lhs = form_inner(apply_dbar_adjoint(f, weights), u, weights)
        rhs = form_inner(f, apply_dbar(u, weights), weights)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
        nontrivial += abs(rhs) > 1e-10
    assert nontrivial > 50


def test_adjoint_sign_on_basis_form(weights):
    # the sign convention is pinned by adjointness on a concrete pair
    f = Form(0, 1, {((), (1,)): CPoly.constant(1.0)})
    u = Form.scalar(CPoly.zbar(1))
    lhs = form_inner(apply_dbar_adjoint(f, weights), u, weights)
    rhs = form_inner(f, apply_dbar(u, weights), weights)
    assert lhs == pytest.approx(rhs, rel=1e-14)
    assert abs(rhs) > 0


def test_form_norm_examples(weights):
    f = Form(0, 1, {((), (1,)): CPoly.constant(1.0)})
    assert form_norm_sq(f, weights) == pytest.approx(0.25, rel=1e-15)
    g = Form(0, 1, {((), (1,)): CPoly.z(1)})
    assert form_norm_sq(g, weights) == pytest.approx(
        weights.a(1) ** 2 * 2 * weights.a(1) ** 2, rel=1e-15)
    assert form_norm_sq(Form(0, 1, {}), weights) == 0.0


def test_basic_estimate(weights, rng):
    f = Form(0, 1, {((), (1,)): CPoly.constant(1.0)})
    lhs, rhs = basic_estimate_check(f, weights)
    assert lhs == pytest.approx(0.125, abs=1e-15)
    assert rhs == pytest.approx(0.125, abs=1e-15)
    strict = Form(0, 1, {((), (2,)): CPoly.zbar(1)})
    lhs, rhs = basic_estimate_check(strict, weights)
    assert lhs < rhs
    for _ in range(200):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        f = random_form(rng, s, t + 1, 3, 3)
        lhs, rhs = basic_estimate_check(f, weights)
        assert lhs <= rhs + 1e-10 * max(1.0, rhs)
    zero = Form(0, 1, {})
    assert basic_estimate_check(zero, weights) == (0.0, 0.0)


def test_reduce_dimension(weights):
    p = CPoly.z(1) + CPoly.z(3)
    assert reduce_dimension(p, 2, weights).terms == CPoly.z(1).terms
    cyl = CPoly.z(1) * CPoly.zbar(2)
    assert reduce_dimension(cyl, 2, weights) == cyl


def test_reduce_contraction_and_convergence(weights, rng):
    for _ in range(20):
        f = random_form(rng, 0, 1, 4, 3, n_comps=2)
        norms = [form_norm_sq(reduce_form(f, n, weights), weights)
                 for n in range(1, 5)]
        full = form_norm_sq(f, weights)
        assert all(n <= full + 1e-12 for n in norms)
        diffs = [form_norm_sq(reduce_form(f, n, weights) - f, weights)
                 for n in range(1, 5)]
        assert all(b <= a + 1e-12 for a, b in zip(diffs, diffs[1:]))
        assert diffs[-1] <= 1e-12


def test_multiplier_identity(weights, rng):
    st = SampleStream(seed=864, dims=6, chunk_size=8192)
    cut = ComplexCutoff(weights, dims=3, n_samples=40_000)
    f = Form(0, 0, {((), ()): random_cpoly(rng, 2, 2, 3)})
    tests = [random_form(rng, 0, 1, 2, 2, n_comps=2, n_terms=2)
             for _ in range(10)]
    for res, se in multiplier_identity_check(f, 2, weights, tests, st,
                                             dims=3, cutoff=cut):
        assert res <= 4.0 * se + 1e-4
    zero = Form(0, 0, {})
    for res, se in multiplier_identity_check(zero, 2, weights, tests[:2],
                                             st.child(9), dims=3, cutoff=cut):
        assert res == 0.0
    # large level: the cut-off is 1 on the sampled region, gradient term absent
    for res, se in multiplier_identity_check(f, 12, weights, tests[:3],
                                             st.child(10), dims=3, cutoff=cut):
        assert res <= 4.0 * se + 1e-4


def test_solver_examples(weights, rng):
    f = Form(0, 1, {((), (1,)): CPoly.constant(1.0)})
    u, ratio = solve_dbar(f, weights, degree_cap=4, dims=1)
    assert set(u.comps) == {((), ())}
    terms = u.comps[((), ())].terms
    assert set(terms) == {ckey((1, 0, 1))}
    assert terms[ckey((1, 0, 1))] == pytest.approx(1.0, rel=1e-10)
    assert ratio <= math.sqrt(2.0) + 1e-8

    f2 = Form(0, 1, {((), (1,)): CPoly.zbar(1)})
    u2, _ = solve_dbar(f2, weights, degree_cap=5, dims=1)
    terms2 = u2.comps[((), ())].terms
    assert terms2[ckey((1, 0, 2))] == pytest.approx(0.5, rel=1e-9)

    # kernel orthogonality against random holomorphic polynomials
    for _ in range(20):
        h = CPoly({ckey((1, int(rng.integers(0, 4)), 0)):
                   complex(rng.normal(), rng.normal())})
        assert abs(cpoly_inner(u2.comps[((), ())], h, weights)) <= 1e-10


def test_solver_zero_and_errors(weights):
    zero = Form(0, 1, {})
    u, ratio = solve_dbar(zero, weights, degree_cap=3, dims=1)
    assert u.is_zero() and ratio == 0.0
    not_closed = Form(0, 1, {((), (1,)): CPoly.zbar(2)})
    with pytest.raises(NotClosed):
        solve_dbar(not_closed, weights, degree_cap=4, dims=2)
    too_big = Form(0, 1, {((), (1,)): CPoly.zbar(1, 7)})
    with pytest.raises(BasisTooSmall):
        solve_dbar(too_big, weights, degree_cap=4, dims=1)


def test_solver_two_variables(weights):
    # component-coupled closed form: f = zbar_2 dzbar_1 + zbar_1 dzbar_2
    f = Form(0, 1, {((), (1,)): CPoly.zbar(2), ((), (2,)): CPoly.zbar(1)})
    assert apply_dbar(f, weights).is_zero()
    u, ratio = solve_dbar(f, weights, degree_cap=4, dims=2)
    tu = apply_dbar(u, weights, max_var=2)
    assert form_norm_sq(tu - f, weights) ** 0.5 <= 1e-8
    assert ratio <= math.sqrt(2.0) + 1e-8
