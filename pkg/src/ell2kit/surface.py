"""Index-set algebra, finite-perturbation determinants, and surface measures.

Surfaces are coordinate graphs: a chart index set I carries the free
coordinates and the complementary coordinates are given by a graph map.  The
surface measure integrates (area density) x (Gaussian weight of the graphed
coordinates) against the Gaussian on the chart coordinates.  Gauss-Green and
Stokes identities are then verified numerically at truncation, with the
boundary-orientation sign pinned once by an analytic oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (ChartMismatch, LocalFinitenessViolated, MalformedBlock,
                     TailDivergent, UnsupportedCodimension)
from .measure import norm_cdf
from .polynomials import (SparsePolynomial, integrate_polynomial,
                          integrate_polynomial_halfspace)
from .sampling import SampleStream, mc_mean_stderr
from .series import certified_sum
from .weights import WeightSequence

# ---------------------------------------------------------------------------
# index sets
# ---------------------------------------------------------------------------

FINITE, COFINITE, ODDS, EVENS = "finite", "cofinite", "odds", "evens"


@dataclass(frozen=True)
class IndexSet:
    """A subset of the positive integers with decidable finite differences.

    ``base`` is one of: finite (members listed), cofinite (complement
    listed), or the named infinite sets odds/evens; ``plus``/``minus`` are
    finite patches applied on top of the base.
    """

    base: str
    listed: frozenset = frozenset()
    plus: frozenset = frozenset()
    minus: frozenset = frozenset()

    @staticmethod
    def finite(*members) -> "IndexSet":
        return IndexSet(FINITE, frozenset(int(m) for m in members))

    @staticmethod
    def cofinite(*complement) -> "IndexSet":
        return IndexSet(COFINITE, frozenset(int(m) for m in complement))

    @staticmethod
    def odds() -> "IndexSet":
        return IndexSet(ODDS)

    @staticmethod
    def evens() -> "IndexSet":
        return IndexSet(EVENS)

    def contains(self, i: int) -> bool:
        if i in self.plus:
            return True
        if i in self.minus:
            return False
        if self.base == FINITE:
            return i in self.listed
        if self.base == COFINITE:
            return i not in self.listed
        if self.base == ODDS:
            return i % 2 == 1
        return i % 2 == 0

    def patch(self, add=(), remove=()) -> "IndexSet":
        plus = (self.plus | frozenset(add)) - frozenset(remove)
        minus = (self.minus | frozenset(remove)) - frozenset(add)
        return IndexSet(self.base, self.listed, plus, minus)

    def _core_difference(self, other: "IndexSet"):
        """Elements of self.base minus other.base, or None if infinite."""
        a, b = self.base, other.base
        if a == b and self.listed == other.listed:
            return frozenset()
        if a == FINITE:
            return frozenset(i for i in self.listed
                             if not IndexSet(b, other.listed).contains(i))
        if b == FINITE:
            return None  # infinite base minus finite set is infinite
        if a == COFINITE and b == COFINITE:
            return frozenset(i for i in other.listed
                             if IndexSet(COFINITE, self.listed).contains(i))
        if a == COFINITE:  # minus odds/evens leaves an infinite set
            return None
        if b == COFINITE:
            return frozenset(i for i in other.listed
                             if IndexSet(a).contains(i))
        return None  # odds minus evens (or vice versa) is infinite

    def difference_size(self, other: "IndexSet"):
        """|self - other| if finite, else None."""
        core = self._core_difference(other)
        if core is None:
            return None
        diff = set(core)
        for i in self.plus:
            if not other.contains(i) and self.contains(i):
                diff.add(i)
        for i in self.minus:
            diff.discard(i)
        for i in other.plus:
            diff.discard(i)
        for i in other.minus:
            if self.contains(i):
                diff.add(i)
        return len(diff)


def index_equivalent(i1: IndexSet, i2: IndexSet) -> bool:
    """True iff the two index sets differ by finitely many swaps.

    Equivalent means both set differences are finite with equal cardinality.
    """
    d12 = i1.difference_size(i2)
    d21 = i2.difference_size(i1)
    return d12 is not None and d21 is not None and d12 == d21


# ---------------------------------------------------------------------------
# determinants of identity-plus-finite-rank coordinate changes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePerturbationMap:
    """Bounded map P_I1 -> P_I2 equal to the identity off a finite block.

    ``rows``/``cols`` are the sorted exceptional coordinates I0 u (I2 - I1)
    and I0 u (I1 - I2); ``block[r, c]`` is the coefficient of e_rows[r] in the
    image of e_cols[c].
    """

    rows: tuple
    cols: tuple
    block: tuple  # row-major tuple of tuples
    identity_set: frozenset = frozenset()  # finite probe of identity indices

    @staticmethod
    def build(i1: IndexSet, i2: IndexSet, exceptional, block) -> "FinitePerturbationMap":
        d12 = i1.difference_size(i2)
        d21 = i2.difference_size(i1)
        if d12 is None or d21 is None or d12 != d21:
            raise MalformedBlock("index sets are not finitely equivalent")
        exceptional = frozenset(exceptional)
        for i in exceptional:
            if not (i1.contains(i) and i2.contains(i)):
                raise MalformedBlock("exceptional set must lie in the intersection")
        only1 = _finite_diff(i1, i2)
        only2 = _finite_diff(i2, i1)
        rows = tuple(sorted(exceptional | only2))
        cols = tuple(sorted(exceptional | only1))
        m = np.asarray(block, dtype=float)
        if m.shape != (len(rows), len(cols)):
            raise MalformedBlock(f"block must be {len(rows)}x{len(cols)}")
        return FinitePerturbationMap(rows, cols, tuple(map(tuple, m.tolist())))

    def matrix(self) -> np.ndarray:
        return np.array(self.block, dtype=float)

    def apply_basis(self, i: int) -> dict:
        """Image of e_i as a sparse row-index -> coefficient mapping."""
        if i in self.cols:
            c = self.cols.index(i)
            return {r: self.block[k][c] for k, r in enumerate(self.rows)
                    if self.block[k][c] != 0.0}
        return {i: 1.0}


def _finite_diff(i1: IndexSet, i2: IndexSet) -> frozenset:
    core = i1._core_difference(i2)
    if core is None:
        raise MalformedBlock("infinite set difference")
    diff = set(core)
    for i in i1.plus:
        if i1.contains(i) and not i2.contains(i):
            diff.add(i)
    for i in i1.minus:
        diff.discard(i)
    for i in i2.plus:
        diff.discard(i)
    for i in i2.minus:
        if i1.contains(i):
            diff.add(i)
    return frozenset(diff)


def det_f(t: FinitePerturbationMap) -> float:
    """Finite determinant over the exceptional block; 1 for an empty block."""
    if len(t.rows) == 0:
        return 1.0
    return float(np.linalg.det(t.matrix()))


def compose(t2: FinitePerturbationMap, t1: FinitePerturbationMap,
            i1: IndexSet, i2: IndexSet, i3: IndexSet) -> FinitePerturbationMap:
    """The composite map P_I1 -> P_I3 with its canonical exceptional block."""
    exc1 = frozenset(t1.rows) | frozenset(t1.cols)
    exc2 = frozenset(t2.rows) | frozenset(t2.cols)
    # candidate exceptional set: everything touched, intersected with I1 n I3
    touched = exc1 | exc2
    e0 = frozenset(i for i in touched if i1.contains(i) and i3.contains(i))
    only1 = _finite_diff(i1, i3)
    only3 = _finite_diff(i3, i1)
    cols = tuple(sorted(e0 | only1))
    rows = tuple(sorted(e0 | only3))
    m = np.zeros((len(rows), len(cols)))
    for c, i in enumerate(cols):
        mid = t1.apply_basis(i)
        out = {}
        for k, w in mid.items():
            for r, w2 in t2.apply_basis(k).items():
                out[r] = out.get(r, 0.0) + w * w2
        for rr, w in out.items():
            if rr in rows:
                m[rows.index(rr), c] = w
            elif abs(w) > 1e-14:
                raise MalformedBlock("composite image leaves the finite block")
    return FinitePerturbationMap(rows, cols, tuple(map(tuple, m.tolist())))


# ---------------------------------------------------------------------------
# Gaussian complement weight
# ---------------------------------------------------------------------------

def log_gauss_weight_term(a: float, x: float) -> float:
    """ln of the one-coordinate Gaussian density factor at x."""
    return -math.log(math.sqrt(2.0 * math.pi) * a) - x * x / (2.0 * a * a)


def balanced_coordinate(a: float) -> float:
    """The coordinate value making the log density factor vanish.

    Solves x^2 = 2 a^2 ln(1/(sqrt(2 pi) a)); only defined for a below
    1/sqrt(2 pi), which every decaying tail eventually satisfies.
    """
    l = -math.log(math.sqrt(2.0 * math.pi) * a)
    if l < 0:
        raise ValueError("no balanced coordinate for a >= 1/sqrt(2 pi)")
    return math.sqrt(2.0 * a * a * l)


def f_weight(weights: WeightSequence, head: dict, tail_mode: str = "balanced",
             tail_start: int | None = None) -> float:
    """Product Gaussian density weight over a co-finite coordinate set.

    ``head`` maps coordinate -> value for the explicitly specified part of
    the set; beyond ``tail_start`` the values follow ``tail_mode``:

    - ``"balanced"``: coordinates sit where the log factor vanishes, so the
      tail contributes exactly 0 to the log sum;
    - ``"zero"``: coordinates are zero; for summable weights the log factors
      then grow without bound and the weight is +inf (returned as such);
    - ``"none"``: the set is finite, no tail.

    Raises TailDivergent if a certified finite value is impossible to
    produce for reasons other than the documented +inf zero-tail case.
    """
    log_head = 0.0
    for i, x in sorted(head.items()):
        log_head += log_gauss_weight_term(weights.a(i), x)
    if tail_mode == "none":
        return math.exp(log_head)
    if tail_start is None:
        tail_start = max(head, default=0) + 1
    if tail_mode == "balanced":
        return math.exp(log_head)  # tail log terms vanish identically
    if tail_mode == "zero":
        # sum of ln(1/(sqrt(2 pi) a_i)) diverges to +inf for decaying weights
        probe = [log_gauss_weight_term(weights.a(i), 0.0)
                 for i in range(tail_start, tail_start + 8)]
        if all(p > 0 for p in probe) and probe == sorted(probe):
            return math.inf
        raise TailDivergent("zero tail with non-decaying weights")
    raise ValueError(f"unknown tail mode {tail_mode!r}")


# ---------------------------------------------------------------------------
# concrete surfaces
# ---------------------------------------------------------------------------

class AffineLineBundle:
    """The flagship surface: odd coordinates free, even coordinates affine.

    S = { x_I + x0_J + x_1 * dx_J } with I the odds and J the evens.  The
    even head values are user-chosen; beyond the head both the base point
    and the direction follow closed-form rules (balanced base coordinates
    and dx_j = a_j^3) so that the Gaussian weight of the graphed
    coordinates is finite and the squared direction norm is summable.
    """

    def __init__(self, weights: WeightSequence, x0_head: dict, dx_head: dict,
                 tail_start: int = 10):
        self.weights = weights
        self.chart = IndexSet.odds()
        if any(j % 2 or j >= tail_start for j in list(x0_head) + list(dx_head)):
            raise ValueError("head values must be even indices below tail_start")
        self.x0_head = dict(x0_head)
        self.dx_head = dict(dx_head)
        self.tail_start = tail_start
        if any(v == 0.0 for v in self.dx_head.values()):
            raise ValueError("direction coordinates must be nonzero")

    def x0(self, j: int) -> float:
        if j in self.x0_head:
            return self.x0_head[j]
        return balanced_coordinate(self.weights.a(j))

    def dx(self, j: int) -> float:
        if j in self.dx_head:
            return self.dx_head[j]
        return self.weights.a(j) ** 3

    def even_indices_head(self):
        return [j for j in range(2, self.tail_start) if j % 2 == 0]

    def dx_norm_sq(self) -> float:
        head = sum(self.dx(j) ** 2 for j in self.even_indices_head())
        start = self.tail_start if self.tail_start % 2 == 0 else self.tail_start + 1
        tail = certified_sum(
            lambda k: self.weights.a(2 * k) ** 6, start // 2)
        return head + tail

    def area_density(self) -> float:
        """sqrt(1 + ||dx||^2): the rank-one graph has only 1x1 minors."""
        return math.sqrt(1.0 + self.dx_norm_sq())

    def log_f_weight(self, x1: float) -> float:
        """ln of the even-coordinate Gaussian weight at chart point x1."""
        total = 0.0
        for j in self.even_indices_head():
            total += log_gauss_weight_term(self.weights.a(j), self.x0(j) + x1 * self.dx(j))
        start = self.tail_start if self.tail_start % 2 == 0 else self.tail_start + 1

        def term(k):
            j = 2 * k
            a = self.weights.a(j)
            # balanced base: log term reduces to the x1-dependent part
            s = balanced_coordinate(a)
            d = a**3
            return -(2.0 * s * (x1 * d) + (x1 * d) ** 2) / (2.0 * a * a)

        total += certified_sum(term, start // 2)
        return total

    def measure(self, lo: float, hi: float, quad_order: int = 64) -> float:
        """Surface measure of the slab {x_1 in (lo, hi)} of S.

        Chart integral of (area density) x (graph weight) x (chart Gaussian);
        chart coordinates other than x_1 integrate to one.
        """
        if hi <= lo:
            return 0.0
        nI = self.area_density()
        a1 = self.weights.a(1)
        x, w = np.polynomial.legendre.leggauss(quad_order)
        xs = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
        vals = np.array([
            nI * math.exp(self.log_f_weight(t)) *
            math.exp(-t * t / (2 * a1 * a1)) / math.sqrt(2 * math.pi * a1 * a1)
            for t in xs
        ])
        if not np.all(np.isfinite(vals)):
            raise LocalFinitenessViolated("density-weight product not finite on region")
        return float(0.5 * (hi - lo) * np.dot(w, vals))

    def measure_swapped_chart(self, j: int, lo: float, hi: float,
                              quad_order: int = 64) -> float:
        """The same slab evaluated in the chart that trades x_1 for x_j.

        On the swapped chart the surface solves x_1 = (x_j - x0_j)/dx_j; the
        area density divides by |dx_j| and the weight now covers coordinate 1
        and the evens other than j, while x_j carries the chart Gaussian.
        """
        if j % 2 or not (2 <= j < self.tail_start):
            raise ChartMismatch("swap index must be an even head index")
        dj = self.dx(j)
        nIp = self.area_density() / abs(dj)
        a1 = self.weights.a(1)
        aj = self.weights.a(j)
        u_lo, u_hi = sorted((self.x0(j) + lo * dj, self.x0(j) + hi * dj))

        x, w = np.polynomial.legendre.leggauss(quad_order)
        us = 0.5 * (u_hi + u_lo) + 0.5 * (u_hi - u_lo) * x

        def integrand(u):
            x1 = (u - self.x0(j)) / dj
            # weight over complement {1} u evens-minus-j
            log_w = log_gauss_weight_term(a1, x1) + self.log_f_weight(x1) \
                - log_gauss_weight_term(aj, self.x0(j) + x1 * dj)
            return nIp * math.exp(log_w) * math.exp(-u * u / (2 * aj * aj)) \
                / math.sqrt(2 * math.pi * aj * aj)

        vals = np.array([integrand(u) for u in us])
        return float(0.5 * (u_hi - u_lo) * np.dot(w, vals))

    def chart_change_det(self, j: int) -> float:
        """det of the chart-change derivative from the x_1 chart to the x_j chart."""
        return self.dx(j)

    def area_density_swapped(self, j: int) -> float:
        return self.area_density() / abs(self.dx(j))


class PolyGraphSurface:
    """Finite-truncation graph surface: x_j = f_j(chart coords) for j in J.

    The chart coordinates are everything except the graphed set J; only
    finitely many chart coordinates appear in the graph polynomials.  The
    ambient truncation is the coordinates up to ``dims``; the common weight
    factor of coordinates beyond ``dims`` is dropped (it cancels in every
    identity this class is used to verify).
    """

    def __init__(self, weights: WeightSequence, graph: dict, dims: int):
        self.weights = weights
        self.graph = {int(j): p for j, p in graph.items()}
        self.dims = dims
        if len(self.graph) > 2:
            raise UnsupportedCodimension("desk-scale limit is co-dimension 2")
        self.chart_vars = [i for i in range(1, dims + 1) if i not in self.graph]

    def jacobian(self, x: dict) -> np.ndarray:
        """Rows = graphed coords (sorted), cols = chart vars, at chart point x."""
        xs = np.zeros(self.dims)
        for v, val in x.items():
            xs[v - 1] = val
        rows = []
        for j in sorted(self.graph):
            rows.append([self.graph[j].diff(i).eval(xs) for i in self.chart_vars])
        return np.array(rows)

    def area_density(self, x: dict) -> float:
        """sqrt(1 + sum of squared k x k minors of the graph Jacobian)."""
        jac = self.jacobian(x)
        total = 1.0
        nrows = jac.shape[0]
        from itertools import combinations
        for k in range(1, nrows + 1):
            for rr in combinations(range(nrows), k):
                for cc in combinations(range(jac.shape[1]), k):
                    total += float(np.linalg.det(jac[np.ix_(rr, cc)])) ** 2
        return math.sqrt(total)

    def graph_weight(self, x: dict) -> float:
        """Gaussian density factors of the graphed coordinates at chart point x."""
        xs = np.zeros(self.dims)
        for v, val in x.items():
            xs[v - 1] = val
        out = 1.0
        for j in sorted(self.graph):
            a = self.weights.a(j)
            val = self.graph[j].eval(xs)
            out *= math.exp(-val * val / (2 * a * a)) / math.sqrt(2 * math.pi * a * a)
        return out

    def measure(self, region: dict, quad_order: int = 32) -> float:
        """Surface measure of a chart rectangle.

        ``region`` maps chart var -> (lo, hi).  Chart vars appearing in
        neither the region nor the graph integrate to one; bounded vars not
        in the graph contribute CDF factors.
        """
        active = sorted(set(v for p in self.graph.values()
                            for v in p.support_vars() if v in self.chart_vars))
        cdf_factor = 1.0
        quad_vars = []
        for v, (lo, hi) in sorted(region.items()):
            if v not in self.chart_vars:
                raise ChartMismatch(f"var {v} is not a chart coordinate")
            if hi <= lo:
                return 0.0
            if v in active:
                quad_vars.append((v, lo, hi))
            else:
                a = self.weights.a(v)
                cdf_factor *= norm_cdf(hi / a) - norm_cdf(lo / a)
        for v in active:
            if v not in region:
                # unbounded active var: integrate over a wide window
                a = self.weights.a(v)
                quad_vars.append((v, -12.0 * a, 12.0 * a))
        if not quad_vars:
            dens = self.area_density({}) * self.graph_weight({})
            return dens * cdf_factor
        x, w = np.polynomial.legendre.leggauss(quad_order)
        grids = []
        for v, lo, hi in quad_vars:
            grids.append((v, 0.5 * (hi + lo) + 0.5 * (hi - lo) * x,
                          0.5 * (hi - lo) * w))
        total = 0.0
        sup_check = 0.0
        idx = [0] * len(grids)
        # tensor loop (desk scale: at most 2 active vars)
        import itertools
        for combo in itertools.product(*(range(len(x)) for _ in grids)):
            pt = {}
            wt = 1.0
            for (v, xs, ws), k in zip(grids, combo):
                pt[v] = xs[k]
                a = self.weights.a(v)
                wt *= ws[k] * math.exp(-pt[v] ** 2 / (2 * a * a)) / math.sqrt(2 * math.pi * a * a)
            dens = self.area_density(pt) * self.graph_weight(pt)
            sup_check = max(sup_check, dens)
            total += wt * dens
        if not math.isfinite(sup_check):
            raise LocalFinitenessViolated("unbounded density on region")
        return total * cdf_factor


# ---------------------------------------------------------------------------
# Gauss-Green checks
# ---------------------------------------------------------------------------

def gauss_green_halfspace(f: SparsePolynomial, i: int, weights: WeightSequence,
                          r: float = 1.0) -> tuple:
    """Exact both-sides evaluation of the divergence identity on {x_1 > 0}.

    Returns (lhs, rhs, residual) with lhs the volume integral of D_i f, and
    rhs the weighted-volume term plus the boundary term.  The boundary of
    {x_1 > 0} has outward normal -e_1, and only i = 1 sees a boundary term.
    """
    lhs = integrate_polynomial_halfspace(f.diff(i), weights, r, coord=1)
    vol = integrate_polynomial_halfspace(
        SparsePolynomial.x(i) * f * (1.0 / (r * weights.a(i)) ** 2),
        weights, r, coord=1)
    bdry = 0.0
    if i == 1:
        a1 = r * weights.a(1)
        f0 = f.shift(1, 0.0)  # copy
        # restrict to x_1 = 0: drop terms containing x_1
        f0 = SparsePolynomial({k: c for k, c in f.terms.items()
                               if all(v != 1 for v, _ in k)})
        rest = integrate_polynomial(f0, weights, r)
        bdry = -rest / math.sqrt(2.0 * math.pi * a1 * a1)
    rhs = vol + bdry
    return lhs, rhs, abs(lhs - rhs)


def gauss_green_halfspace_quadrature(weights: WeightSequence, r: float = 1.0,
                                     quad_order: int = 200) -> tuple:
    """The f = 1, i = 1 oracle case with the volume term by 1-D quadrature.

    0 = integral_{x>0} x/a^2 dN(0, a^2) - density(0); fixes the sign of the
    outward normal.  Returns (lhs, rhs, residual).
    """
    a = r * weights.a(1)
    x, w = np.polynomial.legendre.leggauss(quad_order)
    lo, hi = 0.0, 14.0 * a
    xs = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
    dens = np.exp(-(xs**2) / (2 * a * a)) / math.sqrt(2 * math.pi * a * a)
    vol = 0.5 * (hi - lo) * float(np.dot(w, xs / (a * a) * dens))
    bdry = -1.0 / math.sqrt(2.0 * math.pi * a * a)
    return 0.0, vol + bdry, abs(vol + bdry)


def _sphere_area(n: int, radius: float) -> float:
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0) * radius ** (n - 1)


def gauss_green_ball(f: SparsePolynomial, i: int, weights: WeightSequence,
                     radius: float, dims: int, stream: SampleStream,
                     n: int = 200_000) -> tuple:
    """MC verification of the divergence identity on a truncated ball.

    V restricts the first ``dims`` coordinates to the ball of the given
    radius; f must be supported on those coordinates.  Returns (lhs, rhs,
    residual, stderr) with stderr the combined standard error of the three
    Monte Carlo integrals.
    """
    if any(v > dims for v in f.support_vars()) or i > dims:
        raise ChartMismatch("f and i must live on the ball coordinates")
    sig = weights.head(dims)

    def vol_term(poly):
        def fn(z):
            pts = z[:, :dims] * sig
            inside = np.sum(pts * pts, axis=1) < radius * radius
            return inside * poly.eval_samples(pts)
        return mc_mean_stderr(fn, stream.child(hash(repr(poly.terms)) % 99991), n)

    lhs, se1 = vol_term(f.diff(i))
    vol, se2 = vol_term(SparsePolynomial.x(i) * f * (1.0 / weights.a(i) ** 2))

    # boundary: uniform sphere sampling, integrand f * nu_i * gaussian density
    area = _sphere_area(dims, radius)

    def bdry_fn(z):
        u = z[:, :dims]
        u = u / np.linalg.norm(u, axis=1, keepdims=True)
        pts = radius * u
        dens = np.prod(
            np.exp(-(pts**2) / (2 * sig**2)) / np.sqrt(2 * math.pi * sig**2),
            axis=1)
        return f.eval_samples(pts) * (pts[:, i - 1] / radius) * dens * area

    bdry, se3 = mc_mean_stderr(bdry_fn, stream.child(777), n)
    rhs = vol + bdry
    stderr = math.sqrt(se1**2 + se2**2 + se3**2)
    return lhs, rhs, abs(lhs - rhs), stderr


def sphere_normal_magnitude_check(weights: WeightSequence, dims: int,
                                  radius: float, rng) -> float:
    """Max deviation between the det-based normal size and |x_i| / radius.

    On the sphere, the chart through the largest coordinate j gives area
    density radius/|x_j| and chart-change determinant -x_i/x_j, so the
    normalized determinant must equal x_i/radius in magnitude.
    """
    worst = 0.0
    for _ in range(200):
        u = rng.standard_normal(dims)
        u = radius * u / np.linalg.norm(u)
        j = int(np.argmax(np.abs(u)))
        nI = radius / abs(u[j])
        for i in range(dims):
            det = 1.0 if i == j else abs(-u[i] / u[j])
            worst = max(worst, abs(det / nI - abs(u[i]) / radius))
    return worst


# ---------------------------------------------------------------------------
# Stokes-type checks (co-dimension <= 2, truncation <= 4)
# ---------------------------------------------------------------------------

#: Boundary pairing orientation, pinned by the constant-function half-plane
#: oracle below; with this sign both sides of the identity agree.
BOUNDARY_SIGN = -1.0


def stokes_halfplane(f: SparsePolynomial, weights: WeightSequence,
                     tilt: tuple = (0.0, 0.0), dims: int = 4,
                     quad_order: int = 80, half_width: float = 10.0) -> tuple:
    """Boundary-vs-interior identity on a graph over the upper half-plane.

    The surface is { (x1, x2, c1 x1 + c2 x2, 0, ...) : x2 > 0 } at the given
    truncation; its boundary is the x2 = 0 slice.  Both sides are evaluated
    by tensor quadrature in the chart; the common Gaussian weight of the
    coordinates beyond the graph is dropped from both sides.  Returns
    (lhs, rhs, residual, scale).
    """
    if dims > 4:
        raise UnsupportedCodimension("truncation above 4 not supported here")
    c1, c2 = tilt
    a = weights.head(3)
    graph = SparsePolynomial.x(1) * c1 + SparsePolynomial.x(2) * c2
    n_area = math.sqrt(1.0 + c1 * c1 + c2 * c2)

    # normal functionals in the chart {1,2}: only i = 2 and i = 3 contribute
    n2 = -1.0 / n_area
    n3 = -c2 / n_area

    def w_density(x1, x2):
        x3 = c1 * x1 + c2 * x2
        out = 1.0
        for val, ai in zip((x1, x2, x3), a):
            out *= math.exp(-val * val / (2 * ai * ai)) / math.sqrt(2 * math.pi * ai * ai)
        return out

    def delta(poly, i):
        return poly.diff(i) - SparsePolynomial.x(i) * poly * (1.0 / a[i - 1] ** 2)

    d2f = delta(f, 2)
    d3f = delta(f, 3)

    x, w = np.polynomial.legendre.leggauss(quad_order)
    xs1 = half_width * x
    ws1 = half_width * w
    xs2 = 0.5 * half_width * (x + 1.0)
    ws2 = 0.5 * half_width * w

    lhs = 0.0
    mass = 0.0
    for u1, w1 in zip(xs1, ws1):
        for u2, w2 in zip(xs2, ws2):
            pt = np.array([u1, u2, c1 * u1 + c2 * u2, 0.0])
            val = d2f.eval(pt) * n2 + d3f.eval(pt) * n3
            lhs -= w1 * w2 * val * n_area * w_density(u1, u2)
            mass += abs(w1 * w2 * val * n_area * w_density(u1, u2))

    # boundary: x2 = 0 line, chart {1}; area density of the boundary graph
    nb_area = math.sqrt(1.0 + c1 * c1)
    rhs = 0.0
    for u1, w1 in zip(xs1, ws1):
        pt = np.array([u1, 0.0, c1 * u1, 0.0])
        x3 = c1 * u1
        dens = 1.0
        for val, ai in zip((u1, 0.0, x3), a):
            dens *= math.exp(-val * val / (2 * ai * ai)) / math.sqrt(2 * math.pi * ai * ai)
        rhs += w1 * f.eval(pt) * (1.0 / nb_area) * nb_area * dens
    rhs *= BOUNDARY_SIGN

    scale = max(abs(lhs), abs(rhs), mass, 1e-30)
    return float(lhs), float(rhs), float(abs(lhs - rhs)), float(scale)


def stokes_circle(f: SparsePolynomial, weights: WeightSequence, radius: float,
                  quad_n: int = 1024) -> tuple:
    """Closed-curve case: the boundary term vanishes, so the bulk term must.

    S is the circle of the given radius in the first two coordinates; with
    the consistently oriented tangent (t_1, t_2) = (-sin, cos) the weighted
    bulk integral of the Gaussian-adjusted gradient is an exact derivative
    around the loop.  Returns (lhs, scale).
    """
    a1, a2 = weights.a(1), weights.a(2)
    thetas = np.linspace(0.0, 2.0 * math.pi, quad_n, endpoint=False)
    total = 0.0
    scale = 0.0
    d1f = f.diff(1) - SparsePolynomial.x(1) * f * (1.0 / a1**2)
    d2f = f.diff(2) - SparsePolynomial.x(2) * f * (1.0 / a2**2)
    for th in thetas:
        x1, x2 = radius * math.cos(th), radius * math.sin(th)
        pt = np.array([x1, x2])
        w = math.exp(-x1 * x1 / (2 * a1 * a1) - x2 * x2 / (2 * a2 * a2)) \
            / (2 * math.pi * a1 * a2)
        n1, n2 = -math.sin(th), math.cos(th)
        val = (d1f.eval(pt) * n1 + d2f.eval(pt) * n2) * w
        total += val
        scale += abs(val)
    step = 2.0 * math.pi / quad_n * radius
    return float(-total * step), float(max(scale * step, 1e-30))
