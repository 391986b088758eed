"""Exact complex-polynomial calculus for (s,t)-forms under the product Gaussian.

Coordinates are complex, z_j = x_j + i y_j with x_j, y_j independent
N(0, (r a_j)^2); monomials in z and conjugate-z have closed-form expectations
E[z^m conj(z)^n] = delta_{mn} m! (2 r^2 a^2)^m, which makes every inner
product in this module exact.  On top of that sit the Gaussian-adjusted
derivative delta_j, the degree-raising operator (applied as T or S), its
adjoint, the weighted norms, the basic lower estimate, and a least-norm
solver for the degree-raising equation on a truncated monomial basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import BasisTooSmall, NotClosed
from .weights import WeightSequence

# ---------------------------------------------------------------------------
# complex cylinder polynomials
# ---------------------------------------------------------------------------


def ckey(*triples) -> tuple:
    """Canonical key from (var, z_exp, conj_exp) triples."""
    kept = tuple(sorted((v, a, b) for v, a, b in triples if (a, b) != (0, 0)))
    if any(a < 0 or b < 0 for _, a, b in kept):
        raise ValueError("exponents must be nonnegative")
    return kept


class CPoly:
    """Sparse polynomial in finitely many z_j and conj(z_j)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, c in (terms.items() if isinstance(terms, dict) else terms):
                if c != 0:
                    self.terms[k] = self.terms.get(k, 0) + c
            self.terms = {k: c for k, c in self.terms.items() if c != 0}

    @staticmethod
    def constant(c) -> "CPoly":
        return CPoly({(): c} if c != 0 else {})

    @staticmethod
    def z(var: int, exp: int = 1) -> "CPoly":
        return CPoly({ckey((var, exp, 0)): 1.0})

    @staticmethod
    def zbar(var: int, exp: int = 1) -> "CPoly":
        return CPoly({ckey((var, 0, exp)): 1.0})

    def __add__(self, other):
        other = other if isinstance(other, CPoly) else CPoly.constant(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return CPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return CPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, CPoly) else CPoly.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, CPoly):
            return CPoly({k: c * other for k, c in self.terms.items()})
        out = {}
        for k1 in sorted(self.terms):
            for k2 in sorted(other.terms):
                d = {v: (a, b) for v, a, b in k1}
                for v, a, b in k2:
                    pa, pb = d.get(v, (0, 0))
                    d[v] = (pa + a, pb + b)
                k = ckey(*((v, a, b) for v, (a, b) in d.items()))
                out[k] = out.get(k, 0) + self.terms[k1] * other.terms[k2]
        return CPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CPoly) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def conj(self) -> "CPoly":
        return CPoly({ckey(*((v, b, a) for v, a, b in k)): np.conj(c)
                      for k, c in self.terms.items()})

    def diff_z(self, j: int) -> "CPoly":
        out = {}
        for k, c in self.terms.items():
            d = {v: (a, b) for v, a, b in k}
            a, b = d.get(j, (0, 0))
            if a == 0:
                continue
            d[j] = (a - 1, b)
            kk = ckey(*((v, aa, bb) for v, (aa, bb) in d.items()))
            out[kk] = out.get(kk, 0) + c * a
        return CPoly(out)

    def diff_zbar(self, j: int) -> "CPoly":
        out = {}
        for k, c in self.terms.items():
            d = {v: (a, b) for v, a, b in k}
            a, b = d.get(j, (0, 0))
            if b == 0:
                continue
            d[j] = (a, b - 1)
            kk = ckey(*((v, aa, bb) for v, (aa, bb) in d.items()))
            out[kk] = out.get(kk, 0) + c * b
        return CPoly(out)

    def support_vars(self):
        vs = set()
        for k in self.terms:
            vs.update(v for v, _, _ in k)
        return sorted(vs)

    def degree(self) -> int:
        return max((sum(a + b for _, a, b in k) for k in self.terms), default=0)

    def eval_samples(self, zs: np.ndarray) -> np.ndarray:
        """Evaluate on an (n, dims) complex sample array."""
        total = np.zeros(len(zs), dtype=complex)
        for k, c in self.terms.items():
            m = np.full(len(zs), complex(c))
            for v, a, b in k:
                col = zs[:, v - 1]
                if a:
                    m *= col**a
                if b:
                    m *= np.conj(col) ** b
            total += m
        return total


def cpoly_expectation(p: CPoly, weights: WeightSequence, r: float = 1.0):
    """Exact expectation under the complex product Gaussian.

    Only balanced monomials (equal z and conjugate exponents in every
    variable) survive; each contributes m! (2 r^2 a_v^2)^m per variable.
    """
    total = 0.0 + 0.0j
    for k, c in sorted(p.terms.items()):
        m = complex(c)
        for v, a, b in k:
            if a != b:
                m = 0.0
                break
            m *= math.factorial(a) * (2.0 * r * r * weights.a(v) ** 2) ** a
        total += m
    return total


def cpoly_inner(p: CPoly, q: CPoly, weights: WeightSequence, r: float = 1.0):
    """Exact L^2 pairing E[p * conj(q)]."""
    return cpoly_expectation(p * q.conj(), weights, r)


def delta_j(p: CPoly, j: int, weights: WeightSequence, r: float = 1.0) -> CPoly:
    """Gaussian-adjusted complex derivative d/dz_j - conj(z_j)/(2 r^2 a_j^2)."""
    scale = 1.0 / (2.0 * r * r * weights.a(j) ** 2)
    return p.diff_z(j) - CPoly.zbar(j) * p * scale


# ---------------------------------------------------------------------------
# (s,t)-forms
# ---------------------------------------------------------------------------


def epsilon_sign(j: int, jj: tuple, kk: tuple) -> int:
    """Sign of the permutation sorting (j, *jj) into kk; 0 if sets mismatch."""
    if j in jj:
        return 0
    if tuple(sorted(jj + (j,))) != tuple(kk):
        return 0
    pos = sum(1 for t in jj if t < j)
    return -1 if pos % 2 else 1


@dataclass
class Form:
    """Sparse (s,t)-form: strictly increasing index pairs -> CPoly coefficients."""

    s: int
    t: int
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (ii, jj), p in self.comps.items():
            ii, jj = tuple(ii), tuple(jj)
            if len(ii) != self.s or len(jj) != self.t:
                raise ValueError("index tuple lengths must match (s, t)")
            if list(ii) != sorted(set(ii)) or list(jj) != sorted(set(jj)):
                raise ValueError("index tuples must be strictly increasing")
            if not p.is_zero():
                clean[(ii, jj)] = p
        self.comps = clean

    @staticmethod
    def scalar(p: CPoly) -> "Form":
        return Form(0, 0, {((), ()): p})

    def add_term(self, ii, jj, p: CPoly) -> None:
        key = (tuple(ii), tuple(jj))
        cur = self.comps.get(key)
        new = p if cur is None else cur + p
        if new.is_zero():
            self.comps.pop(key, None)
        else:
            self.comps[key] = new

    def __add__(self, other: "Form") -> "Form":
        if (self.s, self.t) != (other.s, other.t):
            raise ValueError("degree mismatch")
        out = Form(self.s, self.t, dict(self.comps))
        for (ii, jj), p in other.comps.items():
            out.add_term(ii, jj, p)
        return out

    def __sub__(self, other: "Form") -> "Form":
        neg = Form(other.s, other.t,
                   {k: -p for k, p in other.comps.items()})
        return self + neg

    def scale(self, c) -> "Form":
        return Form(self.s, self.t, {k: p * c for k, p in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps


def a_weight(ii: tuple, jj: tuple, weights: WeightSequence) -> float:
    out = 1.0
    for i in ii:
        out *= weights.a(i) ** 2
    for j in jj:
        out *= weights.a(j) ** 2
    return out


def apply_dbar(f: Form, weights: WeightSequence, max_var: int | None = None) -> Form:
    """The degree-raising operator (T on (s,t)-forms, S one degree up).

    Component K of the result collects (-1)^s * sign * dbar_j of component J
    over all j with K = J u {j}.
    """
    out = Form(f.s, f.t + 1, {})
    sgn_s = -1.0 if f.s % 2 else 1.0
    for (ii, jj), p in sorted(f.comps.items()):
        vars_ = p.support_vars() if max_var is None else list(range(1, max_var + 1))
        for j in vars_:
            if j in jj:
                continue
            g = p.diff_zbar(j)
            if g.is_zero():
                continue
            kk = tuple(sorted(jj + (j,)))
            eps = epsilon_sign(j, jj, kk)
            out.add_term(ii, kk, g * (sgn_s * eps))
    return out


def apply_dbar_adjoint(f: Form, weights: WeightSequence, r: float = 1.0) -> Form:
    """Adjoint of the degree-raising operator on (s,t+1)-forms.

    Component K of the result is (-1)^(s-1) sum_j a_j^2 delta_j of the
    sign-adjusted component with conjugate index set {j} u K.
    """
    if f.t < 1:
        raise ValueError("adjoint needs conjugate degree at least 1")
    out = Form(f.s, f.t - 1, {})
    sgn_s = -1.0 if (f.s - 1) % 2 else 1.0
    for (ii, jj), p in sorted(f.comps.items()):
        for j in jj:
            kk = tuple(x for x in jj if x != j)
            eps = epsilon_sign(j, kk, jj)
            contrib = delta_j(p, j, weights, r) * (sgn_s * eps * weights.a(j) ** 2)
            out.add_term(ii, kk, contrib)
    return out


def form_inner(f: Form, g: Form, weights: WeightSequence, r: float = 1.0):
    """Exact weighted inner product sum over common components."""
    if (f.s, f.t) != (g.s, g.t):
        raise ValueError("degree mismatch")
    total = 0.0 + 0.0j
    for key in sorted(set(f.comps) & set(g.comps)):
        ii, jj = key
        total += a_weight(ii, jj, weights) * cpoly_inner(
            f.comps[key], g.comps[key], weights, r)
    return total


def form_norm_sq(f: Form, weights: WeightSequence, r: float = 1.0) -> float:
    return float(np.real(form_inner(f, f, weights, r)))


def basic_estimate_check(f: Form, weights: WeightSequence, r: float = 1.0) -> tuple:
    """Both sides of the lower estimate for (s,t+1)-forms, exactly.

    lhs = (t+1)/(2 r^2) ||f||^2, rhs = ||T* f||^2 + ||S f||^2 where t+1 is the
    conjugate degree of f.
    """
    t_plus_1 = f.t
    lhs = t_plus_1 / (2.0 * r * r) * form_norm_sq(f, weights, r)
    tstar = apply_dbar_adjoint(f, weights, r)
    sf = apply_dbar(f, weights)
    rhs = form_norm_sq(tstar, weights, r) + form_norm_sq(sf, weights, r)
    return lhs, rhs


def reduce_dimension(p: CPoly, n: int, weights: WeightSequence, r: float = 1.0) -> CPoly:
    """Conditional expectation onto the first n complex coordinates, exact.

    Variables beyond n are integrated out monomial by monomial.
    """
    out = {}
    for k, c in p.terms.items():
        keep = []
        factor = complex(c)
        for v, a, b in k:
            if v <= n:
                keep.append((v, a, b))
            else:
                if a != b:
                    factor = 0.0
                    break
                factor *= math.factorial(a) * (2 * r * r * weights.a(v) ** 2) ** a
        if factor != 0.0:
            kk = ckey(*keep)
            out[kk] = out.get(kk, 0) + factor
    return CPoly(out)


def reduce_form(f: Form, n: int, weights: WeightSequence, r: float = 1.0) -> Form:
    out = Form(f.s, f.t, {})
    for (ii, jj), p in f.comps.items():
        if ii and max(ii) > n or jj and max(jj) > n:
            continue
        out.add_term(ii, jj, reduce_dimension(p, n, weights, r))
    return out


# ---------------------------------------------------------------------------
# least-norm solver for the degree-raising equation
# ---------------------------------------------------------------------------


def _monomial_keys(n_vars: int, max_deg: int):
    """All (var, z_exp, conj_exp) exponent patterns with total degree <= max_deg."""
    slots = []
    for v in range(1, n_vars + 1):
        slots.append(("z", v))
        slots.append(("w", v))

    keys = []

    def rec(slot: int, budget: int, acc):
        if slot == len(slots):
            d = {}
            for (kind, v), e in acc:
                a, b = d.get(v, (0, 0))
                d[v] = (a + e, b) if kind == "z" else (a, b + e)
            keys.append(ckey(*((v, a, b) for v, (a, b) in d.items())))
            return
        for e in range(budget + 1):
            rec(slot + 1, budget - e, acc + [(slots[slot], e)] if e else acc)

    rec(0, max_deg, [])
    return sorted(set(keys))


def _mono_inner(k1: tuple, k2: tuple, weights: WeightSequence, r: float) -> float:
    """E[mono(k1) * conj(mono(k2))], exact."""
    d = {}
    for v, a, b in k1:
        d[v] = (a, b)
    for v, a, b in k2:
        pa, pb = d.get(v, (0, 0))
        d[v] = (pa + b, pb + a)  # conjugation swaps exponents of k2
    out = 1.0
    for v, (a, b) in d.items():
        if a != b:
            return 0.0
        out *= math.factorial(a) * (2 * r * r * weights.a(v) ** 2) ** a
    return out


def solve_dbar(f: Form, weights: WeightSequence, r: float = 1.0,
               degree_cap: int = 6, dims: int = 2,
               residual_tol: float = 1e-8) -> tuple:
    """Least-norm u with Tu = f on the truncated monomial basis.

    Requires f to be annihilated exactly by the degree-raising operator.
    Builds all (s, t)-form monomials of degree <= degree_cap in the first
    ``dims`` variables, assembles the operator matrix and the exact Gram
    matrices, and solves the minimum-norm constrained problem by normal
    equations.  Returns (u, norm_ratio).
    """
    if f.t < 1:
        raise ValueError("right-hand side must have conjugate degree >= 1")
    closed = apply_dbar(f, weights)
    if not closed.is_zero():
        raise NotClosed("right-hand side is not annihilated by the raising operator")

    i_sets = sorted({ii for (ii, _) in f.comps}) or [()]
    k_sets = [tuple(sorted(c)) for c in combinations(range(1, dims + 1), f.t - 1)]
    monos = _monomial_keys(dims, degree_cap)

    basis = [(ii, kk, m) for ii in i_sets for kk in k_sets for m in monos]

    # operator columns and right-hand side in the target component/monomial space
    rows = {}

    def row_of(comp_key, mono):
        key = (comp_key, mono)
        if key not in rows:
            rows[key] = len(rows)
        return rows[key]

    cols = []
    for ii, kk, m in basis:
        u_elem = Form(f.s, f.t - 1, {(ii, kk): CPoly({m: 1.0})})
        tu = apply_dbar(u_elem, weights, max_var=dims)
        col = {}
        for ck, p in tu.comps.items():
            for mk, c in p.terms.items():
                col[row_of(ck, mk)] = col.get(row_of(ck, mk), 0) + c
        cols.append(col)

    y = {}
    for ck, p in f.comps.items():
        for mk, c in p.terms.items():
            y[row_of(ck, mk)] = c

    n_rows, n_cols = len(rows), len(basis)
    a_mat = np.zeros((n_rows, n_cols), dtype=complex)
    for c, col in enumerate(cols):
        for rr, v in col.items():
            a_mat[rr, c] = v
    y_vec = np.zeros(n_rows, dtype=complex)
    for rr, v in y.items():
        y_vec[rr] = v

    # Gram matrix of the basis under the weighted inner product (block diag)
    gram = np.zeros((n_cols, n_cols))
    for p in range(n_cols):
        ii, kk, m1 = basis[p]
        aw = a_weight(ii, kk, weights)
        for q in range(p, n_cols):
            jj, ll, m2 = basis[q]
            if (ii, kk) != (jj, ll):
                continue
            val = aw * _mono_inner(m1, m2, weights, r)
            gram[p, q] = val
            gram[q, p] = val

    # least-norm KKT: c = G^-1 A^H lam with (A G^-1 A^H) lam = y
    g_inv_ah = np.linalg.solve(gram, a_mat.conj().T)
    m_mat = a_mat @ g_inv_ah
    lam, *_ = np.linalg.lstsq(m_mat, y_vec, rcond=None)
    c_vec = g_inv_ah @ lam

    u = Form(f.s, f.t - 1, {})
    floor = 1e-9 * max(np.max(np.abs(c_vec)), 1e-300)
    for (ii, kk, m), c in zip(basis, c_vec):
        if abs(c) > floor:
            u.add_term(ii, kk, CPoly({m: c}))

    tu = apply_dbar(u, weights, max_var=dims)
    resid = form_norm_sq(tu - f, weights, r) ** 0.5
    f_norm = form_norm_sq(f, weights, r) ** 0.5
    if resid > residual_tol * max(f_norm, 1e-300):
        raise BasisTooSmall(
            f"residual {resid:.3e} exceeds {residual_tol:.1e} x ||f|| = "
            f"{residual_tol * f_norm:.3e}")
    u_norm = form_norm_sq(u, weights, r) ** 0.5
    ratio = u_norm / f_norm if f_norm > 0 else 0.0
    return u, ratio


# ---------------------------------------------------------------------------
# multiplier identity against the smooth cut-offs (Monte Carlo)
# ---------------------------------------------------------------------------


class ComplexCutoff:
    """Smooth cut-offs on the complex sequence space.

    Same construction as the real case with the sublevel sets
    sum_i (x_i^2 + y_i^2)/c_i <= n^2 smoothed by the unit-scale complex
    product Gaussian; evaluation is by inner Monte Carlo shared across the
    requested points.
    """

    def __init__(self, weights: WeightSequence, dims: int = 6,
                 c_exponent: float = 0.5, n_samples: int = 60_000):
        self.weights = weights
        self.dims = dims
        self.c = weights.head(dims) ** c_exponent
        self.n_samples = n_samples
        self._n1 = None

    def _inner(self, stream, count):
        a = self.weights.head(self.dims)
        chunks = []
        got = 0
        idx = 0
        while got < count:
            z = stream.chunk(idx)
            zz = z[:, : self.dims] + 1j * stream.child(10_000 + idx).chunk(0)[:, : self.dims]
            chunks.append(zz * a)
            got += len(zz)
            idx += 1
        return np.concatenate(chunks)[:count]

    def n1(self, stream) -> int:
        if self._n1 is not None:
            return self._n1
        y = self._inner(stream.child(31337), self.n_samples)
        q = np.sum((y.real**2 + y.imag**2) / self.c, axis=1)
        for n in range(1, 64):
            est = float(np.mean(q <= n * n))
            se = math.sqrt(est * (1 - est) / len(q))
            if est > 0.8 + 5 * se:
                self._n1 = n
                return n
        raise RuntimeError("no calibration level below 64")

    def eval_with_dbar(self, pts: np.ndarray, level: int, stream) -> tuple:
        """(X_k values, dbar_i X_k values) at the given complex points.

        Returns (xk, dbar) with dbar of shape (npts, dims); derivatives use
        the differentiated-convolution integrand on the shared inner sample.
        """
        from .cutoff import smoothstep

        n = level + self.n1(stream)
        a = self.weights.head(self.dims)
        y = self._inner(stream.child(555), self.n_samples)
        npts = len(pts)
        g = np.zeros(npts)
        dgx = np.zeros((npts, self.dims))
        dgy = np.zeros((npts, self.dims))
        # |z - y|^2/c expands into two quadratics and one cross gemm
        zc = pts / self.c
        qz = np.sum((pts.real**2 + pts.imag**2) / self.c, axis=1)
        block = 4096
        for lo in range(0, self.n_samples, block):
            yy = y[lo: lo + block]
            qy = np.sum((yy.real**2 + yy.imag**2) / self.c, axis=1)
            cross = np.real(zc @ yy.conj().T)
            inside = (qz[:, None] + qy[None, :] - 2.0 * cross) <= n * n
            inside = inside.astype(float)
            g += inside.sum(axis=1)
            dgx -= inside @ (yy.real / a**2)
            dgy -= inside @ (yy.imag / a**2)
        g /= self.n_samples
        dgx /= self.n_samples
        dgy /= self.n_samples
        step = smoothstep()
        xk = np.array([step(v) for v in g])
        hp = np.array([step.deriv(v) for v in g])
        dbar = 0.5 * hp[:, None] * (dgx + 1j * dgy)
        return xk, dbar


def multiplier_identity_check(f: Form, level: int, weights: WeightSequence,
                              tests, stream, r: float = 1.0, dims: int = 4,
                              n_outer: int = 4096,
                              cutoff: ComplexCutoff | None = None) -> list:
    """Weak-form Monte Carlo residuals of the cut-off product rule.

    For each polynomial test form g, estimates
    (X_k f, T* g) - (X_k (T f), g) - ((T X_k) ^ f, g)
    on a shared sample; the identity says each residual is zero.  Returns a
    list of (residual, stderr) pairs.
    """
    cut = cutoff or ComplexCutoff(weights, dims=dims)
    a = weights.head(dims) * r
    zx = stream.chunk(0)[:n_outer, :dims]
    zy = stream.child(1).chunk(0)[:n_outer, :dims]
    pts = (zx + 1j * zy) * a
    xk, dbar = cut.eval_with_dbar(pts, level, stream.child(2))

    tf = apply_dbar(f, weights)
    out = []
    for g in tests:
        if (g.s, g.t) != (f.s, f.t + 1):
            raise ValueError("test form degree must be one above f")
        tstar_g = apply_dbar_adjoint(g, weights, r)
        vals = np.zeros(n_outer, dtype=complex)
        # (X_k f, T* g)
        for key in set(f.comps) & set(tstar_g.comps):
            aw = a_weight(*key, weights)
            vals += aw * xk * f.comps[key].eval_samples(pts) \
                * np.conj(tstar_g.comps[key].eval_samples(pts))
        # - (X_k (T f), g)
        for key in set(tf.comps) & set(g.comps):
            aw = a_weight(*key, weights)
            vals -= aw * xk * tf.comps[key].eval_samples(pts) \
                * np.conj(g.comps[key].eval_samples(pts))
        # - ((T X_k) ^ f, g): component (I,K) is (-1)^s sum_i eps f_{I,J} dbar_i X_k
        sgn_s = -1.0 if f.s % 2 else 1.0
        for (ii, kk), gp in g.comps.items():
            acc = np.zeros(n_outer, dtype=complex)
            for (fi, jj), fp in f.comps.items():
                if fi != ii:
                    continue
                for i in range(1, dims + 1):
                    eps = epsilon_sign(i, jj, kk)
                    if eps == 0:
                        continue
                    acc += sgn_s * eps * fp.eval_samples(pts) * dbar[:, i - 1]
            if np.any(acc):
                aw = a_weight(ii, kk, weights)
                vals -= aw * acc * np.conj(gp.eval_samples(pts))
        mean = complex(np.mean(vals))
        se = float(np.sqrt((np.var(vals.real) + np.var(vals.imag)) / n_outer))
        out.append((abs(mean), se))
    return out


def random_cpoly(rng, dims: int, degree: int, n_terms: int) -> CPoly:
    """Seeded random complex cylinder polynomial."""
    terms = {}
    for _ in range(n_terms):
        triples = []
        budget = degree
        for v in range(1, dims + 1):
            if budget <= 0:
                break
            a = int(rng.integers(0, budget + 1))
            budget -= a
            b = int(rng.integers(0, budget + 1))
            budget -= b
            if (a, b) != (0, 0):
                triples.append((v, a, b))
        k = ckey(*triples)
        coeff = complex(rng.normal(), rng.normal())
        terms[k] = terms.get(k, 0) + coeff
    return CPoly(terms)


def random_form(rng, s: int, t: int, dims: int, degree: int,
                n_comps: int = 2, n_terms: int = 3) -> Form:
    """Seeded random (s,t)-form with polynomial coefficients."""
    out = Form(s, t, {})
    for _ in range(n_comps):
        ii = tuple(sorted(rng.choice(np.arange(1, dims + 1), size=s, replace=False))) if s else ()
        jj = tuple(sorted(rng.choice(np.arange(1, dims + 1), size=t, replace=False))) if t else ()
        out.add_term(tuple(int(x) for x in ii), tuple(int(x) for x in jj),
                     random_cpoly(rng, dims, degree, n_terms))
    return out
