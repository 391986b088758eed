"""Weighted Sobolev norms, translation identities, and boundary-flattening charts.

Weak derivatives of cylinder polynomials coincide with the symbolic ones (the
duality against the Gaussian adjoint derivative is checked exactly by the
moment oracle), so norms over the full space and the half-space are closed
form.  Translation by a fixed vector is an unbounded operation on the order-1
space; the demo reproduces the sharp two-sided decay bracket.  A chart that
flattens a sphere patch onto the half-space carries explicit Jacobians whose
product identity and norm-equivalence constants are verified numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .cutoff import CutoffConfig, smoothstep
from .errors import ConditionViolated
from .measure import ProductGaussian
from .polynomials import (SparsePolynomial, adjoint_derivative,
                          integrate_polynomial, integrate_polynomial_halfspace,
                          integrate_polynomial_tilted)
from .sampling import SampleStream
from .weights import WeightSequence

__all__ = [
    "adjoint_derivative", "sobolev_norm_sq", "translation_identity_check",
    "translation_unboundedness_demo", "SphereChart", "chart_norm_equivalence",
    "cutoff_stability_curve",
]


def _alpha_iter(vars_, m):
    """Multi-indices 1 <= |alpha| <= m over the given variables."""
    for total in range(1, m + 1):
        for combo in combinations_with_replacement(vars_, total):
            counts = {}
            for v in combo:
                counts[v] = counts.get(v, 0) + 1
            yield tuple(sorted(counts.items()))


def sobolev_norm_sq(f: SparsePolynomial, m: int, weights: WeightSequence,
                    r: float = 1.0, domain: str = "full") -> float:
    """Squared order-m weighted Sobolev norm of a cylinder polynomial.

    sum over |alpha| <= m of (prod a_i^(2 alpha_i)) * integral of |D^alpha f|^2,
    with the integral exact over the full space or the half-space {x_1 > 0}.
    """
    if domain == "full":
        integrate = lambda p: integrate_polynomial(p, weights, r)
    elif domain == "halfspace":
        integrate = lambda p: integrate_polynomial_halfspace(p, weights, r, coord=1)
    else:
        raise ValueError("domain must be 'full' or 'halfspace'")
    total = float(integrate(f * f))
    for alpha in _alpha_iter(f.support_vars(), m):
        g = f
        aw = 1.0
        for v, e in alpha:
            for _ in range(e):
                g = g.diff(v)
            aw *= weights.a(v) ** (2 * e)
        if g.terms:
            total += aw * float(integrate(g * g))
    return total


def weak_derivative_residual(f: SparsePolynomial, i: int, tests,
                             weights: WeightSequence, r: float = 1.0) -> float:
    """Max defect of the duality that defines the weak derivative.

    For polynomials the weak derivative is the symbolic one; the duality
    integral of f against the adjoint derivative of each test function must
    match the integral of D_i f against the test exactly.
    """
    worst = 0.0
    df = f.diff(i)
    for phi in tests:
        lhs = integrate_polynomial(f * adjoint_derivative(phi, i, weights),
                                   weights, r)
        rhs = integrate_polynomial(df * phi, weights, r)
        scale = max(abs(lhs), abs(rhs), 1.0)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def translation_identity_check(f: SparsePolynomial, t: float,
                               weights: WeightSequence, r: float = 1.0) -> tuple:
    """Both sides of the shifted-square identity, by independent exact routes.

    lhs integrates |f(x + t e_1)|^2 directly (polynomial shift), rhs is
    exp(-t^2/(2 a_1^2)) times the exponentially tilted integral of |f|^2.
    """
    a1 = r * weights.a(1)
    shifted = f.shift(1, t)
    lhs = float(integrate_polynomial(shifted * shifted, weights, r))
    tilted = integrate_polynomial_tilted(f * f, weights, r, coord=1,
                                         theta=t / (a1 * a1))
    rhs = math.exp(-t * t / (2.0 * a1 * a1)) * tilted
    return lhs, rhs


# ---------------------------------------------------------------------------
# unboundedness of translation on the order-1 space
# ---------------------------------------------------------------------------


def _bump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = (u > 0.0) & (u < 1.0)
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (ui * (1.0 - ui)))
    return out


def _bump_deriv(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = (u > 0.0) & (u < 1.0)
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (ui * (1.0 - ui))) * (1.0 - 2.0 * ui) / (ui * (1.0 - ui)) ** 2
    return out


def _bump_h1_norm_sq(n: int, a1: float, quad_order: int = 200) -> float:
    """Order-1 norm squared of x -> bump(x_1 + n) under N(0, a_1^2)."""
    x, w = np.polynomial.legendre.leggauss(quad_order)
    u = 0.5 * (x + 1.0)
    dens = np.exp(-((u - n) ** 2) / (2 * a1 * a1)) / math.sqrt(2 * math.pi * a1 * a1)
    vals = (_bump(u) ** 2 + a1 * a1 * _bump_deriv(u) ** 2) * dens
    return float(0.5 * np.dot(w, vals))


def translation_unboundedness_demo(n: int, weights: WeightSequence) -> tuple:
    """(lower bound, ratio, upper bound) for the n-th translated bump.

    The ratio compares the order-1 norm of the bump shifted by n+1 against
    the bump shifted by n; the proof's bracket is
    exp(-1/(4 a_1^2) - n/(2 a_1^2)) <= ratio <= exp(1/(4 a_1^2) - n/(2 a_1^2)).
    """
    a1 = weights.a(1)
    num = _bump_h1_norm_sq(n + 1, a1)
    den = _bump_h1_norm_sq(n, a1)
    ratio = math.sqrt(num / den)
    lower = math.exp(-1.0 / (4 * a1 * a1) - n / (2 * a1 * a1))
    upper = math.exp(1.0 / (4 * a1 * a1) - n / (2 * a1 * a1))
    return lower, ratio, upper


# ---------------------------------------------------------------------------
# boundary-flattening chart for the unit sphere patch
# ---------------------------------------------------------------------------


@dataclass
class SphereChart:
    """Chart flattening a patch of the unit sphere onto the half-space.

    Works at truncation dimension ``dims``; the patch is the ball of radius
    1/3 around the first basis vector.  The flattening replaces x_1 by the
    signed distance ||x|| - 1 and keeps the other coordinates; its inverse
    reconstructs x_1 = sqrt((xh_1 + 1)^2 - sum_{i>=2} xh_i^2).
    """

    weights: WeightSequence
    dims: int = 2

    @property
    def delta(self) -> float:
        tail_sq = sum(self.weights.a(i) ** 2 for i in range(2, self.dims + 1))
        return max(4.0 / 3.0, 2.0, 8.0,
                   64.0 * self.weights.a(1) ** 2 / 9.0 + tail_sq / 9.0)

    @property
    def c1(self) -> float:
        d = self.delta
        return math.exp(-d * d / self.weights.a(1) ** 2) / d

    @property
    def c2(self) -> float:
        d = self.delta
        return d * math.exp(d * d)

    @property
    def equivalence_constant(self) -> float:
        d = self.delta
        a1sq = self.weights.a(1) ** 2
        return max(math.sqrt(2 * self.c2 * (1 + d * d + d**3 / a1sq)),
                   math.sqrt(2 * self.c2 * (1 + d / a1sq)))

    # geometry -------------------------------------------------------------
    def g(self, x: np.ndarray) -> np.ndarray:
        return np.linalg.norm(x, axis=-1) - 1.0

    def in_patch(self, x: np.ndarray) -> np.ndarray:
        e1 = np.zeros(self.dims)
        e1[0] = 1.0
        return np.linalg.norm(x - e1, axis=-1) < 1.0 / 3.0

    def psi(self, x: np.ndarray) -> np.ndarray:
        out = np.array(x, dtype=float, copy=True)
        out[..., 0] = self.g(x)
        return out

    def h(self, xh: np.ndarray) -> np.ndarray:
        rest = np.sum(np.asarray(xh[..., 1:]) ** 2, axis=-1)
        return np.sqrt((xh[..., 0] + 1.0) ** 2 - rest)

    def tau(self, xh: np.ndarray) -> np.ndarray:
        out = np.array(xh, dtype=float, copy=True)
        out[..., 0] = self.h(xh)
        return out

    def d1g(self, x: np.ndarray) -> np.ndarray:
        return x[..., 0] / np.linalg.norm(x, axis=-1)

    def d1h(self, xh: np.ndarray) -> np.ndarray:
        return (xh[..., 0] + 1.0) / self.h(xh)

    def dih(self, xh: np.ndarray, i: int) -> np.ndarray:
        if i == 1:
            return self.d1h(xh)
        return -xh[..., i - 1] / self.h(xh)

    def jacobian_tau(self, xh: np.ndarray) -> np.ndarray:
        """Density of the pull-back by tau: |D_1 h| exp((xh_1^2 - h^2)/(2 a_1^2))."""
        a1 = self.weights.a(1)
        return np.abs(self.d1h(xh)) * np.exp(
            (xh[..., 0] ** 2 - self.h(xh) ** 2) / (2 * a1 * a1))

    def jacobian_psi(self, x: np.ndarray) -> np.ndarray:
        a1 = self.weights.a(1)
        return np.abs(self.d1g(x)) * np.exp(
            (x[..., 0] ** 2 - self.g(x) ** 2) / (2 * a1 * a1))

    def jacobian_product_max_defect(self, n_points: int, seed: int = 7) -> float:
        """max |  |D_1 h(psi(x))| |D_1 g(x)| - 1 | over sampled patch points."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        got = 0
        while got < n_points:
            x = rng.normal(size=(4 * n_points, self.dims)) * 0.12
            x[:, 0] += 1.0
            keep = self.in_patch(x)
            x = x[keep][: n_points - got]
            if len(x) == 0:
                continue
            got += len(x)
            prod = np.abs(self.d1h(self.psi(x))) * np.abs(self.d1g(x))
            worst = max(worst, float(np.max(np.abs(prod - 1.0))))
        return worst

    def condition_check(self, n_points: int = 2000, seed: int = 11) -> None:
        """Verify the chart bound delta on sampled patch points."""
        rng = np.random.default_rng(seed)
        d = self.delta
        x = rng.normal(size=(n_points, self.dims)) * 0.12
        x[:, 0] += 1.0
        x = x[self.in_patch(x)]
        xh = self.psi(x)
        a = self.weights.head(self.dims)
        checks = [
            np.all(np.abs(self.g(x)) < d),
            np.all(np.abs(self.h(xh)) < d),
            np.all((self.d1g(x) > 1 / d) & (self.d1g(x) < d)),
            np.all((self.d1h(xh) > 1 / d) & (self.d1h(xh) < d)),
        ]
        grad_sum = np.zeros(len(xh))
        for i in range(1, self.dims + 1):
            grad_sum += a[i - 1] ** 2 * self.dih(xh, i) ** 2
        checks.append(bool(np.all(grad_sum < d)))
        if not all(checks):
            raise ConditionViolated("chart bounds fail on sampled points")


def _grid2(box, n):
    (lo1, hi1), (lo2, hi2) = box
    xs = np.linspace(lo1, hi1, n, endpoint=False) + (hi1 - lo1) / (2 * n)
    ys = np.linspace(lo2, hi2, n, endpoint=False) + (hi2 - lo2) / (2 * n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    w = (hi1 - lo1) * (hi2 - lo2) / (n * n)
    return np.stack([X.ravel(), Y.ravel()], axis=1), w


def chart_norm_equivalence(chart: SphereChart, f: SparsePolynomial,
                           grid_n: int = 400) -> tuple:
    """(C, patch norm, flattened norm) for the order-1 norms of f and f(tau).

    Both norms are midpoint-grid quadratures at truncation dimension 2: the
    patch norm integrates over the sphere-side region, the flattened norm
    over its image in the half-space.  The suite asserts the two-sided bound
    with the proof's constant C.
    """
    if chart.dims != 2:
        raise ValueError("norm comparison implemented at truncation 2")
    a = chart.weights.head(2)
    d1f, d2f = f.diff(1), f.diff(2)

    def gauss(pts):
        return np.prod(
            np.exp(-(pts**2) / (2 * a**2)) / np.sqrt(2 * math.pi * a**2), axis=1)

    # sphere-side region: patch ball intersect outside-unit-sphere
    pts, w = _grid2(((2 / 3, 4 / 3), (-1 / 3, 1 / 3)), grid_n)
    keep = chart.in_patch(pts) & (chart.g(pts) > 0)
    p = pts[keep]
    val = f.eval_samples(p) ** 2 + a[0] ** 2 * d1f.eval_samples(p) ** 2 \
        + a[1] ** 2 * d2f.eval_samples(p) ** 2
    norm_patch = math.sqrt(float(np.sum(val * gauss(p)) * w))

    # flattened region: xh_1 > 0 and tau(xh) in the patch
    pts_h, wh = _grid2(((0.0, 1 / 3), (-1 / 3, 1 / 3)), grid_n)
    x_back = chart.tau(pts_h)
    keep_h = chart.in_patch(x_back)
    ph = pts_h[keep_h]
    xb = x_back[keep_h]
    d1h = chart.d1h(ph)
    d2h = chart.dih(ph, 2)
    ftau = f.eval_samples(xb)
    d1ftau = d1f.eval_samples(xb) * d1h
    d2ftau = d2f.eval_samples(xb) + d1f.eval_samples(xb) * d2h
    val_h = ftau**2 + a[0] ** 2 * d1ftau**2 + a[1] ** 2 * d2ftau**2
    norm_flat = math.sqrt(float(np.sum(val_h * gauss(ph)) * wh))

    return chart.equivalence_constant, norm_patch, norm_flat


def change_of_variables_check(chart: SphereChart, f: SparsePolynomial,
                              grid_n: int = 400) -> tuple:
    """Integral of f over the patch vs pulled-back integral with the Jacobian."""
    a = chart.weights.head(2)

    def gauss(pts):
        return np.prod(
            np.exp(-(pts**2) / (2 * a**2)) / np.sqrt(2 * math.pi * a**2), axis=1)

    pts, w = _grid2(((2 / 3, 4 / 3), (-1 / 3, 1 / 3)), grid_n)
    keep = chart.in_patch(pts) & (chart.g(pts) > 0)
    p = pts[keep]
    lhs = float(np.sum(f.eval_samples(p) * gauss(p)) * w)

    pts_h, wh = _grid2(((0.0, 1 / 3), (-1 / 3, 1 / 3)), grid_n)
    xb = chart.tau(pts_h)
    keep_h = chart.in_patch(xb)
    ph = pts_h[keep_h]
    rhs = float(np.sum(f.eval_samples(xb[keep_h]) * chart.jacobian_tau(ph)
                       * gauss(ph)) * wh)
    return lhs, rhs


# ---------------------------------------------------------------------------
# cut-off stability in the order-1 norm
# ---------------------------------------------------------------------------


def cutoff_stability_curve(f: SparsePolynomial, levels, cfg: CutoffConfig,
                           stream: SampleStream, n_outer: int = 192,
                           n_inner: int = 20000) -> list:
    """MC estimates of ||X_n f - f||_{H^1}^2 along the given cut-off levels.

    Each outer sample point needs inner Monte Carlo for the cut-off value and
    its partial derivatives; the estimate decreases toward zero as the level
    grows because the cut-offs converge to one with vanishing gradients.
    Returns a list of (level, estimate, stderr).
    """
    dims = cfg.dims
    g = ProductGaussian(cfg.weights, 1.0)
    a = cfg.weights.head(dims)
    # fixed outer sample (common random numbers across levels)
    outer = stream.chunk(0)[:n_outer] * a
    f_vals = f.eval_samples(outer)
    df_vals = np.stack([f.diff(i + 1).eval_samples(outer) for i in range(dims)])

    inner_stream = stream.child(1)
    n1 = cfg.n1()
    step = smoothstep()
    out = []
    for level in levels:
        n = level + n1
        gvals = np.zeros(n_outer)
        dg = np.zeros((dims, n_outer))
        done = 0
        chunk_idx = 0
        c = cfg.c_head(dims)
        qx = np.sum(outer * outer / c, axis=1)
        while done < n_inner:
            y = inner_stream.chunk(chunk_idx)[: min(inner_stream.chunk_size,
                                                    n_inner - done)] * a
            chunk_idx += 1
            done += len(y)
            qy = np.sum(y * y / c, axis=1)
            cross = (outer / c) @ y.T
            inside = ((qx[:, None] + qy[None, :] - 2.0 * cross) <= n * n).astype(float)
            gvals += inside.sum(axis=1)
            dg -= (inside @ (y / a**2)).T
        gvals /= done
        dg /= done
        xk = np.array([step(v) for v in gvals])
        hp = np.array([step.deriv(v) for v in gvals])
        sq = (xk - 1.0) ** 2 * f_vals**2
        for i in range(dims):
            sq += a[i] ** 2 * ((xk - 1.0) * df_vals[i] + f_vals * hp * dg[i]) ** 2
        est = float(np.mean(sq))
        se = float(np.std(sq) / math.sqrt(n_outer))
        out.append((level, est, se))
    return out
