"""Sparse multivariate polynomials and the exact Gaussian moment oracle.

A multi-index is a sorted tuple of ``(variable, exponent)`` pairs with all
exponents >= 1; the empty tuple is the constant term.  Polynomials are
dictionaries multi-index -> coefficient with no stored zeros, so addition,
multiplication and differentiation are exact (coefficients may be floats or
``fractions.Fraction`` for the exact-rational mode).

The moment oracle integrates any such polynomial against the product Gaussian
with per-coordinate standard deviation ``r * a_i`` in closed form; variants
cover half-space restriction in one coordinate, coordinate shifts, and
exponential tilts.  These closed forms are the ground truth that the Monte
Carlo estimators elsewhere are tested against.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

MultiIndex = tuple  # sorted tuple of (var, exp) pairs


def mi(*pairs) -> MultiIndex:
    """Build a multi-index from (variable, exponent) pairs."""
    kept = tuple(sorted((v, e) for v, e in pairs if e != 0))
    if any(e < 0 for _, e in kept):
        raise ValueError("exponents must be nonnegative")
    return kept


def mi_degree(alpha: MultiIndex) -> int:
    return sum(e for _, e in alpha)


def mi_mul(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    d = dict(alpha)
    for v, e in beta:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class SparsePolynomial:
    """Cylinder polynomial in finitely many real coordinates x_1, x_2, ...

    Terms map multi-indices to coefficients; zero coefficients are dropped.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, c in (terms.items() if isinstance(terms, dict) else terms):
                if c != 0:
                    self.terms[k] = self.terms.get(k, 0) + c
            self.terms = {k: c for k, c in self.terms.items() if c != 0}

    # -- constructors -----------------------------------------------------
    @staticmethod
    def constant(c) -> "SparsePolynomial":
        return SparsePolynomial({(): c} if c != 0 else {})

    @staticmethod
    def x(var: int, exp: int = 1) -> "SparsePolynomial":
        return SparsePolynomial({mi((var, exp)): 1})

    @staticmethod
    def zero() -> "SparsePolynomial":
        return SparsePolynomial()

    # -- algebra -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return SparsePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for k1 in sorted(self.terms):
            c1 = self.terms[k1]
            for k2 in sorted(other.terms):
                k = mi_mul(k1, k2)
                out[k] = out.get(k, 0) + c1 * other.terms[k2]
        return SparsePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = SparsePolynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, SparsePolynomial) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms):
            mon = "*".join(f"x{v}^{e}" for v, e in k) or "1"
            bits.append(f"{self.terms[k]}*{mon}")
        return " + ".join(bits)

    # -- calculus ----------------------------------------------------------
    def diff(self, var: int) -> "SparsePolynomial":
        """Exact partial derivative with respect to x_var."""
        out = {}
        for k, c in self.terms.items():
            d = dict(k)
            e = d.get(var, 0)
            if e == 0:
                continue
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            kk = tuple(sorted(d.items()))
            out[kk] = out.get(kk, 0) + c * e
        return SparsePolynomial(out)

    def shift(self, var: int, s) -> "SparsePolynomial":
        """Exact substitution x_var -> x_var + s."""
        out = SparsePolynomial.zero()
        for k, c in sorted(self.terms.items()):
            d = dict(k)
            e = d.pop(var, 0)
            rest = tuple(sorted(d.items()))
            if e == 0:
                out = out + SparsePolynomial({rest: c})
                continue
            for j in range(e + 1):
                coeff = c * math.comb(e, j) * s ** (e - j)
                key = mi_mul(rest, mi((var, j)))
                out = out + SparsePolynomial({key: coeff})
        return out

    def support_vars(self):
        vs = set()
        for k in self.terms:
            vs.update(v for v, _ in k)
        return sorted(vs)

    def degree(self) -> int:
        return max((mi_degree(k) for k in self.terms), default=0)

    def eval(self, x) -> float:
        """Evaluate at a point (1-based coordinate access via x[v-1])."""
        total = 0.0
        for k, c in self.terms.items():
            m = c
            for v, e in k:
                m = m * (x[v - 1] ** e)
            total += m
        return total

    def eval_samples(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (n, dims) sample array."""
        total = np.zeros(len(xs))
        for k, c in self.terms.items():
            m = np.full(len(xs), float(c))
            for v, e in k:
                m *= xs[:, v - 1] ** e
            total += m
        return total


def _coerce(p) -> SparsePolynomial:
    if isinstance(p, SparsePolynomial):
        return p
    return SparsePolynomial.constant(p)


# ---------------------------------------------------------------------------
# Gaussian moment oracle
# ---------------------------------------------------------------------------

def gaussian_moment(k: int, sigma) -> float:
    """k-th central moment of a one-dimensional Gaussian with std dev sigma.

    Returns (k-1)!! * sigma**k for even k and exactly 0 for odd k (the odd
    branch is analytically forced by symmetry and is never computed).
    """
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k % 2 == 1:
        return 0 if isinstance(sigma, Fraction) else 0.0
    if isinstance(sigma, Fraction):
        return _double_factorial(k - 1) * sigma**k
    return float(_double_factorial(k - 1)) * float(sigma) ** k


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def gaussian_abs_moment(k: int, sigma: float) -> float:
    """E|X|^k for X ~ N(0, sigma^2)."""
    return 2.0 * gaussian_halfline_moment(k, sigma)


def gaussian_halfline_moment(k: int, sigma) -> float:
    """integral_0^inf x^k * density(x) dx for N(0, sigma^2).

    Recursion M_k = (k-1) sigma^2 M_{k-2} with M_0 = 1/2, M_1 = sigma/sqrt(2 pi).
    """
    if k == 0:
        return 0.5
    if k == 1:
        return float(sigma) / math.sqrt(2.0 * math.pi)
    return (k - 1) * float(sigma) ** 2 * gaussian_halfline_moment(k - 2, sigma)


def gaussian_shifted_moment(k: int, sigma, mu) -> float:
    """E[(X + mu)^k] for X ~ N(0, sigma^2), exact binomial expansion."""
    total = 0 * (sigma * mu)
    for j in range(0, k + 1, 2):
        total += math.comb(k, j) * gaussian_moment(j, sigma) * mu ** (k - j)
    return total


def gaussian_tilted_moment(k: int, sigma: float, theta: float) -> float:
    """E[X^k * exp(theta X)] for X ~ N(0, sigma^2).

    Completing the square: equals exp(theta^2 sigma^2 / 2) * E[(Y + theta
    sigma^2)^k] with Y ~ N(0, sigma^2).
    """
    s2 = float(sigma) ** 2
    return math.exp(0.5 * theta * theta * s2) * gaussian_shifted_moment(
        k, sigma, theta * s2
    )


def integrate_polynomial(p: SparsePolynomial, weights, r=1.0):
    """Exact expectation of a cylinder polynomial under the product Gaussian.

    Coordinate x_i is N(0, (r * a_i)^2) independent over i; the expectation of
    each monomial is the product of one-dimensional moments.

    Parameters
    ----------
    p : SparsePolynomial
    weights : WeightSequence
    r : float or Fraction
        Global scale of the measure.
    """
    total = 0
    for k, c in sorted(p.terms.items()):
        m = c
        for v, e in k:
            m = m * gaussian_moment(e, r * weights.a(v))
            if m == 0:
                break
        total = total + m
    return total


def integrate_polynomial_halfspace(p: SparsePolynomial, weights, r=1.0,
                                   coord: int = 1, positive: bool = True):
    """Exact integral of p over the half-space {x_coord > 0} (or < 0).

    All coordinates except ``coord`` use full Gaussian moments; ``coord`` uses
    half-line moments (with sign flip for the negative side).
    """
    total = 0.0
    for k, c in sorted(p.terms.items()):
        m = c
        e_half = 0
        for v, e in k:
            if v == coord:
                e_half = e
            else:
                m = m * gaussian_moment(e, r * weights.a(v))
            if m == 0:
                break
        if m == 0:
            continue
        half = gaussian_halfline_moment(e_half, r * weights.a(coord))
        if not positive and e_half % 2 == 1:
            half = -half
        total += m * half
    return total


def integrate_polynomial_tilted(p: SparsePolynomial, weights, r=1.0,
                                coord: int = 1, theta: float = 0.0):
    """Exact E[p(x) * exp(theta * x_coord)] under the product Gaussian."""
    total = 0.0
    touched = False
    for k, c in sorted(p.terms.items()):
        m = c
        e_t = 0
        for v, e in k:
            if v == coord:
                e_t = e
            else:
                m = m * gaussian_moment(e, r * weights.a(v))
            if m == 0:
                break
        if m == 0:
            continue
        total += m * gaussian_tilted_moment(e_t, r * weights.a(coord), theta)
        touched = True
    if not touched and not p.terms:
        return 0.0
    return total


def adjoint_derivative(p: SparsePolynomial, i: int, weights) -> SparsePolynomial:
    """The Gaussian adjoint derivative -D_i p + (x_i / a_i^2) p, exact."""
    ai2 = weights.a(i) ** 2
    return -p.diff(i) + SparsePolynomial.x(i) * p * (1.0 / ai2)


def random_polynomial(rng, dims: int, degree: int, n_terms: int,
                      coeff_scale: float = 1.0) -> SparsePolynomial:
    """Seeded random sparse polynomial for property tests."""
    terms = {}
    for _ in range(n_terms):
        n_vars = int(rng.integers(0, min(dims, degree) + 1))
        vs = rng.choice(np.arange(1, dims + 1), size=n_vars, replace=False)
        budget = degree
        pairs = []
        for v in vs:
            if budget <= 0:
                break
            e = int(rng.integers(1, budget + 1))
            budget -= e
            pairs.append((int(v), e))
        key = mi(*pairs)
        terms[key] = terms.get(key, 0.0) + float(rng.normal()) * coeff_scale
    return SparsePolynomial(terms)
