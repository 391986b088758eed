"""Monomial series in infinitely many variables and the majorant-method solver.

Series live over the variables (t, x_1, x_2, ...) with t stored as variable 0.
A first-order linear Cauchy problem

    d_t u = sum_i A_i d_{x_i} u + A_0 u,   u(0, x) = Phi(x)

determines the solution coefficients by an explicit recursion in the t-degree;
the solver runs that recursion up to a degree cap.  Convergence certificates
come from the classical majorant reduction: replace all coefficients by their
absolute values, collapse the space variables onto a single direction weighted
by the frame scales, solve the resulting two-variable problem, and ratio-test
its diagonal coefficient sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotNearInfinity, RatioTestInconclusive
from .metrics import near_infinity_gauge
from .polynomials import SparsePolynomial, mi, mi_degree
from .weights import TailedSequence

T_VAR = 0  # the time variable's index inside multi-indices


class MonomialSeries:
    """Truncated monomial series: sparse exponents -> coefficient, degree cap.

    Multiplication is the Cauchy product with terms above the cap dropped and
    their absolute mass accumulated in ``lost_mass``.
    """

    __slots__ = ("terms", "cap", "lost_mass")

    def __init__(self, terms=None, cap: int = 12, lost_mass: float = 0.0):
        self.cap = cap
        self.lost_mass = lost_mass
        self.terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                if c == 0:
                    continue
                if mi_degree(k) > cap:
                    self.lost_mass += abs(c)
                    continue
                self.terms[k] = self.terms.get(k, 0) + c
            self.terms = {k: c for k, c in self.terms.items() if c != 0}

    @staticmethod
    def constant(c, cap: int = 12) -> "MonomialSeries":
        return MonomialSeries({(): c}, cap)

    @staticmethod
    def var(v: int, cap: int = 12) -> "MonomialSeries":
        return MonomialSeries({mi((v, 1)): 1}, cap)

    def copy(self) -> "MonomialSeries":
        return MonomialSeries(dict(self.terms), self.cap, self.lost_mass)

    def __add__(self, other):
        other = other if isinstance(other, MonomialSeries) else \
            MonomialSeries.constant(other, self.cap)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return MonomialSeries(out, min(self.cap, other.cap),
                              self.lost_mass + other.lost_mass)

    __radd__ = __add__

    def __neg__(self):
        return MonomialSeries({k: -c for k, c in self.terms.items()},
                              self.cap, self.lost_mass)

    def __sub__(self, other):
        other = other if isinstance(other, MonomialSeries) else \
            MonomialSeries.constant(other, self.cap)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MonomialSeries):
            return MonomialSeries({k: c * other for k, c in self.terms.items()},
                                  self.cap, self.lost_mass)
        cap = min(self.cap, other.cap)
        out = {}
        lost = self.lost_mass + other.lost_mass
        # canonical accumulation order: identical results for permuted inputs
        for k1 in sorted(self.terms):
            c1 = self.terms[k1]
            for k2 in sorted(other.terms):
                d = dict(k1)
                for v, e in k2:
                    d[v] = d.get(v, 0) + e
                k = tuple(sorted(d.items()))
                if mi_degree(k) > cap:
                    lost += abs(c1 * other.terms[k2])
                    continue
                out[k] = out.get(k, 0) + c1 * other.terms[k2]
        return MonomialSeries(out, cap, lost)

    __rmul__ = __mul__

    def diff(self, v: int) -> "MonomialSeries":
        out = {}
        for k, c in self.terms.items():
            d = dict(k)
            e = d.get(v, 0)
            if e == 0:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            kk = tuple(sorted(d.items()))
            out[kk] = out.get(kk, 0) + c * e
        return MonomialSeries(out, self.cap, 0.0)

    def t_slice(self, m: int) -> dict:
        """Coefficients of t^m as a map from space-only multi-indices."""
        out = {}
        for k, c in self.terms.items():
            d = dict(k)
            if d.pop(T_VAR, 0) == m:
                out[tuple(sorted(d.items()))] = c
        return out

    def coefficient(self, k) -> float:
        return self.terms.get(tuple(sorted(k)), 0)

    def abs_coeffs(self) -> "MonomialSeries":
        return MonomialSeries({k: abs(c) for k, c in self.terms.items()}, self.cap)

    def support_space_vars(self):
        vs = set()
        for k in self.terms:
            vs.update(v for v, _ in k if v != T_VAR)
        return sorted(vs)

    def max_degree(self) -> int:
        return max((mi_degree(k) for k in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, MonomialSeries) and self.terms == other.terms

    def __repr__(self):
        return f"MonomialSeries({len(self.terms)} terms, cap={self.cap})"


@dataclass(frozen=True)
class MajorantFrame:
    """Scales collapsing the space variables onto one majorant direction.

    rho0 = gauge^(-1/p) and s_i = rho0/|v_i|, so that sum_i s_i^p = 1 holds by
    construction (the toolkit re-verifies it from the closed forms).
    """

    p: float
    rho0: float
    v: TailedSequence

    def s(self, i: int) -> float:
        return self.rho0 / abs(self.v.value(i))

    def scale_sum(self) -> float:
        """sum_i s_i^p, from the certified closed form of the gauge."""
        return self.rho0**self.p * near_infinity_gauge(self.v, self.p)


def majorant_frame(v: TailedSequence, p: float) -> MajorantFrame:
    """Build the frame from a near-infinity witness; gauge must be finite."""
    if p < 1:
        raise ValueError("frame exponent must be at least 1")
    gauge = near_infinity_gauge(v, p)  # raises NotNearInfinity or ZeroCoordinate
    rho0 = gauge ** (-1.0 / p)
    return MajorantFrame(p=p, rho0=rho0, v=v)


@dataclass
class LinearCauchyProblem:
    """d_t u = sum_i A_i d_{x_i} u + A_0 u with analytic initial datum Phi.

    ``a0`` and the finitely many ``a`` coefficients are monomial series in
    (t, x); ``phi`` is a series in x only.
    """

    a0: MonomialSeries
    a: dict  # space index i -> MonomialSeries coefficient of d_{x_i}
    phi: MonomialSeries
    frame: MajorantFrame | None = None

    def __post_init__(self):
        if any(v == T_VAR for k in self.phi.terms for v, _ in k):
            raise ValueError("initial datum must not depend on t")


def ck_solve(problem: LinearCauchyProblem, degree_cap: int = 12,
             dims: int = 6) -> MonomialSeries:
    """Power-series solution up to total degree ``degree_cap``.

    The t-degree recursion is total for linear problems: the coefficient of
    t^(m+1) is the t^m slice of (sum_i A_i d_i u + A_0 u) divided by m+1.
    Coefficients of the data are truncated to the first ``dims`` space
    variables.
    """
    cap = degree_cap
    phi = _restrict_dims(problem.phi, dims, cap)
    a0 = _restrict_dims(problem.a0, dims, cap)
    acoef = {i: _restrict_dims(s, dims, cap) for i, s in sorted(problem.a.items())
             if i <= dims}

    u = phi.copy()
    one = _as_exact_one(phi)
    for m in range(cap):
        rhs = a0 * u
        for i in sorted(acoef):
            rhs = rhs + acoef[i] * u.diff(i)
        slice_m = {k: c for k, c in rhs.t_slice(m).items()
                   if mi_degree(k) + m + 1 <= cap}
        if not slice_m:
            continue
        inv = one / (m + 1) if isinstance(one, Fraction) else 1.0 / (m + 1)
        upd = {}
        for k, c in slice_m.items():
            d = dict(k)
            d[T_VAR] = m + 1
            upd[tuple(sorted(d.items()))] = c * inv
        u = u + MonomialSeries(upd, cap)
    return u


def _as_exact_one(series: MonomialSeries):
    for c in series.terms.values():
        if isinstance(c, Fraction):
            return Fraction(1)
    return 1.0


def _restrict_dims(series: MonomialSeries, dims: int, cap: int) -> MonomialSeries:
    out = {}
    for k, c in series.terms.items():
        if any(v != T_VAR and v > dims for v, _ in k):
            continue
        out[k] = c
    return MonomialSeries(out, cap)


def pde_residual(problem: LinearCauchyProblem, u: MonomialSeries,
                 dims: int) -> MonomialSeries:
    """d_t u - sum A_i d_i u - A_0 u, with the data truncated as in the solve."""
    cap = u.cap
    a0 = _restrict_dims(problem.a0, dims, cap)
    res = u.diff(T_VAR) - a0 * u
    for i, s in sorted(problem.a.items()):
        if i <= dims:
            res = res - _restrict_dims(s, dims, cap) * u.diff(i)
    return res


def residual_max_below(res: MonomialSeries, degree: int) -> float:
    """Largest |coefficient| of the residual in total degree < degree."""
    worst = 0.0
    for k, c in res.terms.items():
        if mi_degree(k) < degree:
            worst = max(worst, abs(float(c)))
    return worst


def abs_problem(problem: LinearCauchyProblem) -> LinearCauchyProblem:
    """The same problem with every data coefficient replaced by its absolute value."""
    return LinearCauchyProblem(
        a0=problem.a0.abs_coeffs(),
        a={i: s.abs_coeffs() for i, s in problem.a.items()},
        phi=problem.phi.abs_coeffs(),
    )


# ---------------------------------------------------------------------------
# majorant reduction and the convergence certificate
# ---------------------------------------------------------------------------


def _collapse_to_direction(series: MonomialSeries, frame: MajorantFrame,
                           cap: int) -> MonomialSeries:
    """Majorant collapse: |coeff|, x_i -> y / s_i, onto variables (t, y).

    A monomial t^a prod x_i^(b_i) maps to |c| / prod s_i^(b_i) * t^a y^(sum b).
    Variable 1 plays the role of y in the output.
    """
    out = {}
    for k, c in series.terms.items():
        a = 0
        b_total = 0
        scale = 1.0
        for v, e in k:
            if v == T_VAR:
                a = e
            else:
                b_total += e
                scale /= frame.s(v) ** e
        key = mi((T_VAR, a), (1, b_total))
        val = abs(float(c)) * scale
        out[key] = out.get(key, 0.0) + val
    return MonomialSeries(out, cap)


def majorant_problem(problem: LinearCauchyProblem, frame: MajorantFrame,
                     cap: int) -> LinearCauchyProblem:
    """The reduced two-variable majorant problem of a linear Cauchy problem.

    Solutions of the form U(t, y) with y the collapsed direction satisfy
    d_t U = (sum_i s_i Ahat_i) d_y U + Ahat_0 U where each Ahat replaces
    coefficients by absolute values and substitutes the frame direction.
    """
    a0_hat = _collapse_to_direction(problem.a0, frame, cap)
    a_y = MonomialSeries({}, cap)
    for i, s in sorted(problem.a.items()):
        a_y = a_y + _collapse_to_direction(s, frame, cap) * frame.s(i)
    phi_hat = _collapse_to_direction(problem.phi, frame, cap)
    return LinearCauchyProblem(a0=a0_hat, a={1: a_y}, phi=phi_hat)


def convergence_certificate(problem: LinearCauchyProblem,
                            frame: MajorantFrame, degree_cap: int = 16,
                            window: int = 6, spread_tol: float = 0.25) -> float:
    """Radius on which the majorant series certifies absolute convergence.

    Solves the reduced two-variable problem, forms the diagonal coefficient
    sums S_d = sum_{a+b=d} C_{a,b}, and ratio-tests the last ``window``
    nonzero diagonals.  Returns +inf when the majorant terminates (entire
    case); raises RatioTestInconclusive when the ratios do not settle.
    """
    red = majorant_problem(problem, frame, degree_cap)
    u_hat = ck_solve(red, degree_cap=degree_cap, dims=1)
    diag = [0.0] * (degree_cap + 1)
    for k, c in u_hat.terms.items():
        diag[mi_degree(k)] += abs(float(c))
    # strip trailing zeros: polynomial majorant means entire solution
    while diag and diag[-1] == 0.0:
        diag.pop()
    if len(diag) <= window:
        return math.inf
    ratios = []
    for d in range(len(diag) - window, len(diag)):
        if diag[d - 1] <= 0:
            ratios = []
            break
        ratios.append(diag[d] / diag[d - 1])
    if not ratios or any(r <= 0 for r in ratios):
        raise RatioTestInconclusive("diagonal sums vanish irregularly")
    mean = sum(ratios) / len(ratios)
    if mean <= 0 or max(ratios) - min(ratios) > spread_tol * mean:
        raise RatioTestInconclusive("diagonal ratios did not settle")
    return 1.0 / mean
