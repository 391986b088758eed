"""Named verification suites with machine-readable, byte-stable reports.

Every suite check is a pure function of a :class:`RunConfig`; given the same
configuration and seed the emitted CSV is byte-identical across runs and
worker counts.  Wall times are tracked on the records for logging but are
excluded from the CSV so that reports stay reproducible.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import time
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np

from . import ck as ckmod
from . import cutoff as cutmod
from . import dbar as dbmod
from . import measure as msmod
from . import sobolev as sbmod
from . import surface as sfmod
from .errors import ConfigError
from .polynomials import (SparsePolynomial, integrate_polynomial,
                          random_polynomial, mi)
from .sampling import SampleStream
from .weights import TailedSequence, TruncatedPoint, WeightSequence

SUITES = ("measure", "cutoff", "surface", "dbar", "ck", "sobolev")


@dataclass
class RunConfig:
    """Weights, truncation, Monte Carlo budget, seed, and suite selection."""

    weights_ratio: float = 0.5
    weights_explicit: int = 8
    dims: int = 8
    seed: int = 20240201
    mc_light: int = 40_000
    mc_heavy: int = 1_000_000
    suites: tuple = SUITES
    out: str = "report.csv"

    @staticmethod
    def from_json(text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"bad config JSON: {e}") from e
        cfg = RunConfig()
        for k, v in data.items():
            if not hasattr(cfg, k):
                raise ConfigError(f"unknown config key {k!r}")
            setattr(cfg, k, tuple(v) if k == "suites" else v)
        return cfg

    def to_json(self) -> str:
        d = asdict(self)
        d["suites"] = list(d["suites"])
        return json.dumps(d, sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:12]

    def weights(self) -> WeightSequence:
        return WeightSequence.geometric(self.weights_explicit, self.weights_ratio)

    def stream(self, tag: int) -> SampleStream:
        return SampleStream(seed=self.seed, dims=self.dims).child(tag)


@dataclass
class CheckRecord:
    suite: str
    check: str
    anchor: str
    inputs: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""
    wall_ms: float = field(default=0.0, compare=False)

    def csv_row(self) -> list:
        return [self.suite, self.check, self.anchor, self.inputs,
                repr(float(self.value)), repr(float(self.tolerance)),
                "pass" if self.passed else "FAIL", self.detail]


CSV_COLUMNS = ["suite", "check", "anchor", "inputs", "value", "tolerance",
               "status", "detail"]


@dataclass
class Report:
    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for r in self.records:
            cells = []
            for cell in r.csv_row():
                cell = str(cell)
                if "," in cell or '"' in cell:
                    cell = '"' + cell.replace('"', '""') + '"'
                cells.append(cell)
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([asdict(r) for r in self.records], sort_keys=True,
                          indent=1)

    @staticmethod
    def from_json(text: str) -> "Report":
        return Report([CheckRecord(**d) for d in json.loads(text)])

    def digest(self) -> str:
        return hashlib.sha256(self.to_csv().encode()).hexdigest()


def _record(cfg, suite, check, anchor, value, tol, passed, detail, t0):
    return CheckRecord(suite=suite, check=check, anchor=anchor,
                       inputs=cfg.digest(), value=float(value),
                       tolerance=float(tol), passed=bool(passed),
                       detail=detail, wall_ms=(time.perf_counter() - t0) * 1e3)


# ---------------------------------------------------------------------------
# measure suite (criteria 1-4)
# ---------------------------------------------------------------------------


def _hellinger_quadrature(a, r, s, x1, x2, order=400):
    x, w = np.polynomial.legendre.leggauss(order)
    span = 14.0 * max(r, s) * a + abs(x1) + abs(x2)
    xs = span * x
    p = np.exp(-((xs + x1) ** 2) / (2 * r * r * a * a)) / math.sqrt(2 * math.pi * r * r * a * a)
    q = np.exp(-((xs + x2) ** 2) / (2 * s * s * a * a)) / math.sqrt(2 * math.pi * s * s * a * a)
    return float(span * np.dot(w, np.sqrt(p * q)))


def check_hellinger_closed_form(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 1)
    worst = 0.0
    for _ in range(100):
        a = float(rng.uniform(0.2, 2.0))
        r = float(rng.uniform(0.5, 2.0))
        s = float(rng.uniform(0.5, 2.0))
        x1 = float(rng.uniform(-2, 2))
        x2 = float(rng.uniform(-2, 2))
        closed = msmod.hellinger_1d(a, r, s, x1, x2)
        quad = _hellinger_quadrature(a, r, s, x1, x2)
        worst = max(worst, abs(closed - quad))
    exact_one = msmod.hellinger_1d(0.7, 1.3, 1.3, 0.4, 0.4)
    ok = worst <= 1e-8 and exact_one == 1.0
    return _record(cfg, "measure", "hellinger-closed-form", "hellinger-1d",
                   worst, 1e-8, ok,
                   f"max |closed-quadrature|={worst:.3e}; identical case={exact_one!r}",
                   t0)


def check_dichotomy(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 2)
    w = cfg.weights()
    bad = 0
    n_eq = n_sing = 0
    for _ in range(200):
        branch = rng.integers(0, 3)
        if branch == 0:  # distinct scales
            r, s = 1.0, float(rng.uniform(1.1, 2.0))
            sh1 = sh2 = TailedSequence.zero()
        elif branch == 1:  # same scale, summable weighted shift
            r = s = float(rng.uniform(0.5, 1.5))
            sh1 = TailedSequence.geometric(
                tuple(rng.normal(size=3)), float(rng.uniform(0.2, 0.9)),
                cfg.weights_ratio ** 2)
            sh2 = TailedSequence.zero()
        else:  # same scale, divergent weighted shift
            r = s = float(rng.uniform(0.5, 1.5))
            sh1 = TailedSequence.geometric(
                tuple(rng.normal(size=2)), float(rng.uniform(0.2, 0.9)),
                cfg.weights_ratio)
            sh2 = TailedSequence.zero()
        pair = msmod.ShiftedGaussianPair(w, r, s, sh1, sh2)
        verdict = msmod.classify_pair(pair)
        n_eq += verdict.verdict is msmod.Verdict.EQUIVALENT
        n_sing += verdict.verdict is msmod.Verdict.SINGULAR
        consistent = (verdict.hellinger > 0) == \
            (verdict.verdict is msmod.Verdict.EQUIVALENT)
        bad += not consistent
    ok = bad == 0 and n_eq > 0 and n_sing > 0
    return _record(cfg, "measure", "kakutani-dichotomy", "hellinger-vs-verdict",
                   bad, 0, ok,
                   f"{n_eq} equivalent / {n_sing} singular; {bad} inconsistent",
                   t0)


def check_translation_density(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 3)
    w = cfg.weights()
    worst = 0.0
    from .polynomials import integrate_polynomial_tilted
    for _ in range(20):
        g = random_polynomial(rng, 4, 5, 4)
        i = int(rng.integers(1, 5))
        s = float(rng.uniform(-1.5, 1.5))
        ai = w.a(i)
        # direct side: integral of g(y - s e_i)
        lhs = float(integrate_polynomial(g.shift(i, -s), w, 1.0))
        # density side: exp(-s^2/(2 a^2)) * tilted integral with theta = -s/a^2
        tilted = integrate_polynomial_tilted(g, w, 1.0, coord=i, theta=-s / ai**2)
        rhs = math.exp(-s * s / (2 * ai * ai)) * tilted
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    ok = worst <= 1e-12
    return _record(cfg, "measure", "translation-density", "shift-vs-density",
                   worst, 1e-12, ok, f"max relative defect {worst:.3e}", t0)


def check_fernique(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    w = cfg.weights()
    g = msmod.ProductGaussian(w, 1.0)
    thr = msmod.fernique_threshold(g)
    c = 0.5 * thr
    closed = msmod.fernique_integral(g, c)
    st = cfg.stream(4)
    est, _ = msmod.mc_integrate(
        g, lambda x: np.exp(c * np.sum(x * x, axis=1)), st, cfg.mc_heavy)
    rel = abs(est - closed.value) / closed.value
    at_thr = msmod.fernique_integral(g, thr)
    above = msmod.fernique_integral(g, thr * 1.5)
    below = msmod.fernique_integral(g, thr * 0.999)
    power = msmod.fernique_integral(g, 0.1, exponent=2.5)
    flags_ok = (not at_thr.finite) and (not above.finite) and below.finite \
        and (not power.finite)
    ok = rel <= 0.02 and flags_ok
    return _record(cfg, "measure", "fernique", "exp-square-integrability",
                   rel, 0.02, ok,
                   f"closed={closed.value:.6f} mc={est:.6f} rel={rel:.4f}; "
                   f"divergence flags ok={flags_ok}", t0)


def measure_suite(cfg: RunConfig) -> list:
    return [check_hellinger_closed_form(cfg), check_dichotomy(cfg),
            check_translation_density(cfg), check_fernique(cfg)]


# ---------------------------------------------------------------------------
# cutoff suite (criterion 5)
# ---------------------------------------------------------------------------


def _shell_points(ccfg, rng, level, count, lo=0.9, hi=1.1):
    pts = []
    c = ccfg.c_head(ccfg.dims)
    while len(pts) < count:
        u = rng.standard_normal(ccfg.dims)
        q = float(np.sum(u * u / c))
        scale = level / math.sqrt(q) * float(rng.uniform(lo, hi))
        pts.append(TruncatedPoint.from_array(u * scale))
    return pts


def check_cutoffs(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    w = cfg.weights()
    ccfg = cutmod.CutoffConfig(w, dims=cfg.dims, n_samples=cfg.mc_light)
    st = cfg.stream(5)
    rng = np.random.default_rng(cfg.seed + 5)
    n1 = ccfg.n1(st.child(0))
    k = 2
    inside = _shell_points(ccfg, rng, k, 100, 0.05, 0.95)
    outside = _shell_points(ccfg, rng, k + 2 * n1, 100, 1.12, 3.0)
    bad_in = sum(cutmod.cutoff_xk(ccfg, k, x, st.child(10 + j), cfg.mc_light) != 1.0
                 for j, x in enumerate(inside))
    bad_out = sum(cutmod.cutoff_xk(ccfg, k, x, st.child(300 + j), cfg.mc_light) != 0.0
                  for j, x in enumerate(outside))
    shell = _shell_points(ccfg, rng, k + n1, 100, 0.93, 1.07)
    worst = cutmod.cutoff_gradient_bound(ccfg, k, shell, st.child(600),
                                         cfg.mc_light)
    c_sq = cutmod.smoothstep().sup_deriv ** 2
    ok = bad_in == 0 and bad_out == 0 and worst <= c_sq
    return _record(cfg, "cutoff", "cutoff-plateau-support-gradient",
                   "smooth-cutoff", worst, c_sq, ok,
                   f"plateau misses={bad_in}, support misses={bad_out}, "
                   f"max weighted grad sum={worst:.3f} <= C^2={c_sq:.3f}", t0)


def cutoff_suite(cfg: RunConfig) -> list:
    return [check_cutoffs(cfg)]


# ---------------------------------------------------------------------------
# surface suite (criteria 6-8)
# ---------------------------------------------------------------------------


def check_determinants(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 6)
    worst_mult = 0.0
    for _ in range(100):
        base = list(rng.choice(np.arange(1, 12), size=4, replace=False))
        i1 = sfmod.IndexSet.finite(base[0], base[1])
        i2 = sfmod.IndexSet.finite(base[0], base[2])
        i3 = sfmod.IndexSet.finite(base[1], base[2], base[3]).patch(remove=[base[3]])
        t1 = sfmod.FinitePerturbationMap.build(
            i1, i2, {base[0]}, rng.normal(size=(2, 2)) + np.eye(2))
        t2 = sfmod.FinitePerturbationMap.build(
            i2, i3, {base[2]}, rng.normal(size=(2, 2)) + np.eye(2))
        t21 = sfmod.compose(t2, t1, i1, i2, i3)
        lhs = sfmod.det_f(t21)
        rhs = sfmod.det_f(t2) * sfmod.det_f(t1)
        worst_mult = max(worst_mult, abs(lhs - rhs) / max(1.0, abs(rhs)))
    # reciprocal identity on random line-bundle chart swaps
    w = cfg.weights()
    worst_rec = 0.0
    for _ in range(100):
        dxv = float(rng.uniform(0.05, 0.5)) * (1 if rng.random() < 0.5 else -1)
        lb = sfmod.AffineLineBundle(w, x0_head={2: float(rng.normal())},
                                    dx_head={2: dxv})
        det_fwd = lb.chart_change_det(2)
        worst_rec = max(worst_rec, abs(det_fwd * (1.0 / det_fwd) - 1.0))
    worst = max(worst_mult, worst_rec)
    ok = worst <= 1e-10
    return _record(cfg, "surface", "determinant-identities",
                   "multiplicativity-and-reciprocal", worst, 1e-10, ok,
                   f"mult defect {worst_mult:.2e}, reciprocal defect {worst_rec:.2e}",
                   t0)


def check_chart_independence(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    w = cfg.weights()
    lb = sfmod.AffineLineBundle(w, x0_head={2: 0.3, 4: -0.2},
                                dx_head={2: 0.125, 4: 0.05})
    a_val = lb.measure(-0.5, 0.8)
    b_val = lb.measure_swapped_chart(2, -0.5, 0.8)
    rel = abs(a_val - b_val) / max(abs(a_val), 1e-30)
    ok = rel <= 1e-3
    return _record(cfg, "surface", "chart-independence", "two-chart-agreement",
                   rel, 1e-3, ok,
                   f"chart A {a_val:.10e} vs chart B {b_val:.10e}", t0)


def check_gauss_green(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 8)
    w = cfg.weights()
    # analytic constant-function halfspace oracle, by quadrature
    _, _, res0 = sfmod.gauss_green_halfspace_quadrature(w)
    failures = []
    worst = res0
    for trial in range(15):
        dims = int(rng.integers(2, 9))
        f = random_polynomial(rng, dims, 4, 4)
        i = int(rng.integers(1, dims + 1))
        lhs, rhs, res = sfmod.gauss_green_halfspace(f, i, w)
        scale = max(abs(lhs), abs(rhs), 1.0)
        if res / scale > 1e-10:
            failures.append(f"halfspace trial {trial}: {res:.2e}")
        worst = max(worst, res / scale)
    st = cfg.stream(8)
    for trial in range(15):
        dims = int(rng.integers(2, 5))
        f = random_polynomial(rng, dims, 3, 3)
        i = int(rng.integers(1, dims + 1))
        radius = float(rng.uniform(0.4, 1.2))
        lhs, rhs, res, se = sfmod.gauss_green_ball(
            f, i, w, radius, dims, st.child(trial), 200_000)
        if res > max(4.0 * se, 1e-12):
            failures.append(f"ball trial {trial}: res {res:.2e} vs 4se {4*se:.2e}")
    ok = not failures and res0 <= 1e-10
    return _record(cfg, "surface", "gauss-green", "divergence-identity",
                   worst, 1e-10, ok,
                   f"f=1 oracle residual {res0:.2e}; " +
                   ("; ".join(failures) if failures else "all residuals in tolerance"),
                   t0)


def check_stokes(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 9)
    w = cfg.weights()
    worst = 0.0
    for _ in range(8):
        f = random_polynomial(rng, 3, 3, 4)
        tilt = (float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-0.5, 0.5)))
        _, _, res, scale = sfmod.stokes_halfplane(f, w, tilt=tilt)
        worst = max(worst, res / scale)
    for _ in range(8):
        f = random_polynomial(rng, 2, 4, 4)
        val, scale = sfmod.stokes_circle(f, w, float(rng.uniform(0.5, 1.2)))
        worst = max(worst, abs(val) / scale)
    ok = worst <= 1e-3
    return _record(cfg, "surface", "stokes", "boundary-vs-interior",
                   worst, 1e-3, ok, f"max relative residual {worst:.2e}", t0)


def surface_suite(cfg: RunConfig) -> list:
    return [check_determinants(cfg), check_chart_independence(cfg),
            check_gauss_green(cfg), check_stokes(cfg)]


# ---------------------------------------------------------------------------
# dbar suite (criteria 9-10)
# ---------------------------------------------------------------------------


def check_dbar_calculus(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 10)
    w = cfg.weights()
    ss_bad = 0
    for _ in range(100):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        f = dbmod.random_form(rng, s, t, 4, 3)
        if not dbmod.apply_dbar(dbmod.apply_dbar(f, w), w).is_zero():
            ss_bad += 1
    adj_worst = 0.0
    for _ in range(100):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        u = dbmod.random_form(rng, s, t, 3, 3, n_comps=3)
        f = dbmod.apply_dbar(u, w) + dbmod.random_form(rng, s, t + 1, 3, 2,
                                                       n_comps=2)
        lhs = dbmod.form_inner(dbmod.apply_dbar_adjoint(f, w), u, w)
        rhs = dbmod.form_inner(f, dbmod.apply_dbar(u, w), w)
        adj_worst = max(adj_worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    est_bad = 0
    for _ in range(200):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        f = dbmod.random_form(rng, s, t + 1, 3, 3)
        lhs, rhs = dbmod.basic_estimate_check(f, w)
        if lhs > rhs + 1e-10 * max(1.0, rhs):
            est_bad += 1
    eq = dbmod.Form(0, 1, {((), (1,)): dbmod.CPoly.constant(1.0)})
    lhs_eq, rhs_eq = dbmod.basic_estimate_check(eq, w)
    eq_def = max(abs(lhs_eq - 0.125), abs(rhs_eq - 0.125))
    worst = max(adj_worst, eq_def)
    ok = ss_bad == 0 and est_bad == 0 and adj_worst <= 1e-12 and eq_def <= 1e-12
    return _record(cfg, "dbar", "complex-calculus",
                   "ss-zero-adjointness-basic-estimate", worst, 1e-12, ok,
                   f"SS!=0: {ss_bad}; adjoint defect {adj_worst:.2e}; estimate "
                   f"violations {est_bad}; equality case lhs={lhs_eq} rhs={rhs_eq}",
                   t0)


def check_dbar_solve(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 11)
    w = cfg.weights()
    bound = math.sqrt(2.0)
    details = []
    worst_ratio_excess = 0.0
    worst_orth = 0.0
    worst_resid = 0.0
    for name, poly in [("one", dbmod.CPoly.constant(1.0)),
                       ("zbar", dbmod.CPoly.zbar(1)),
                       ("zbar-sq", dbmod.CPoly.zbar(1, 2)),
                       ("mixed", dbmod.CPoly.z(1) * dbmod.CPoly.zbar(1))]:
        f = dbmod.Form(0, 1, {((), (1,)): poly})
        u, ratio = dbmod.solve_dbar(f, w, degree_cap=6, dims=1)
        worst_ratio_excess = max(worst_ratio_excess, ratio - bound)
        tu = dbmod.apply_dbar(u, w, max_var=1)
        worst_resid = max(worst_resid,
                          dbmod.form_norm_sq(tu - f, w) ** 0.5
                          / dbmod.form_norm_sq(f, w) ** 0.5)
        for _ in range(20):
            h = dbmod.CPoly({dbmod.ckey((1, int(rng.integers(0, 4)), 0)):
                             complex(rng.normal(), rng.normal())})
            ip = dbmod.cpoly_inner(u.comps.get(((), ()), dbmod.CPoly.constant(0)),
                                   h, w)
            worst_orth = max(worst_orth, abs(ip))
        details.append(f"{name}: ratio {ratio:.6f}")
    ok = worst_ratio_excess <= 1e-8 and worst_orth <= 1e-10 \
        and worst_resid <= 1e-8
    return _record(cfg, "dbar", "least-norm-solve", "solver-bound-orthogonality",
                   max(worst_ratio_excess, 0.0), 1e-8, ok,
                   "; ".join(details) + f"; orth defect {worst_orth:.2e}", t0)


def dbar_suite(cfg: RunConfig) -> list:
    return [check_dbar_calculus(cfg), check_dbar_solve(cfg)]


# ---------------------------------------------------------------------------
# ck suite (criterion 11)
# ---------------------------------------------------------------------------


def _random_fraction_series(rng, dims, degree, n_terms, cap, with_t=True):
    terms = {}
    lo = 0 if with_t else 1  # variable 0 is time
    for _ in range(n_terms):
        n_vars = int(rng.integers(0, 3))
        pairs = []
        budget = degree
        for _ in range(n_vars):
            v = int(rng.integers(lo, dims + 1))
            e = int(rng.integers(1, max(budget, 1) + 1))
            budget -= e
            if budget < 0:
                break
            pairs.append((v, e))
        key = mi(*pairs)
        terms[key] = terms.get(key, Fraction(0)) + Fraction(int(rng.integers(-8, 9)), 8)
    return ckmod.MonomialSeries(terms, cap)


def check_ck_solver(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 12)
    cap = 12
    worst_res = 0.0
    for _ in range(50):
        phi = _random_fraction_series(rng, 4, 3, 3, cap, with_t=False) + \
            ckmod.MonomialSeries({mi((1, 1)): Fraction(1, 2)}, cap)
        prob = ckmod.LinearCauchyProblem(
            a0=_random_fraction_series(rng, 4, 2, 2, cap),
            a={i: _random_fraction_series(rng, 4, 2, 2, cap)
               for i in range(1, int(rng.integers(1, 4)) + 1)},
            phi=phi)
        u = ckmod.ck_solve(prob, cap, dims=6)
        res = ckmod.pde_residual(prob, u, dims=6)
        worst_res = max(worst_res, ckmod.residual_max_below(res, cap))
    # closed forms: transport and exponential
    tr = ckmod.LinearCauchyProblem(
        a0=ckmod.MonomialSeries({}, cap),
        a={1: ckmod.MonomialSeries.constant(1.0, cap)},
        phi=ckmod.MonomialSeries({mi((1, 1)): 1.0}, cap))
    u_tr = ckmod.ck_solve(tr, cap, dims=2)
    tr_def = max(abs(u_tr.coefficient(mi((0, 1))) - 1.0),
                 abs(u_tr.coefficient(mi((1, 1))) - 1.0),
                 sum(abs(float(c)) for k, c in u_tr.terms.items()
                     if k not in (mi((0, 1)), mi((1, 1)))))
    ex = ckmod.LinearCauchyProblem(
        a0=ckmod.MonomialSeries.constant(1.0, cap), a={},
        phi=ckmod.MonomialSeries.constant(1.0, cap))
    u_ex = ckmod.ck_solve(ex, cap, dims=1)
    ex_def = max(abs(u_ex.coefficient(mi((0, k))) - 1.0 / math.factorial(k))
                 for k in range(cap + 1))
    v = TailedSequence.geometric((), 1.0, 2.0)
    frame = ckmod.majorant_frame(v, 1.5)
    frame_def = abs(frame.scale_sum() - 1.0)
    worst = max(tr_def, ex_def, frame_def)
    ok = worst_res == 0.0 and worst <= 1e-12
    return _record(cfg, "ck", "power-series-solver",
                   "residual-closed-forms-frame", worst, 1e-12, ok,
                   f"max residual coeff {worst_res:.1e}; transport {tr_def:.1e}; "
                   f"exponential {ex_def:.1e}; frame sum defect {frame_def:.1e}",
                   t0)


def ck_suite(cfg: RunConfig) -> list:
    return [check_ck_solver(cfg)]


# ---------------------------------------------------------------------------
# sobolev suite (criterion 12)
# ---------------------------------------------------------------------------


def check_sobolev(cfg: RunConfig) -> CheckRecord:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 13)
    w = cfg.weights()
    trans_worst = 0.0
    for _ in range(100):
        f = random_polynomial(rng, 4, 4, 4)
        t = float(rng.uniform(-2, 2))
        lhs, rhs = sbmod.translation_identity_check(f, t, w)
        trans_worst = max(trans_worst, abs(lhs - rhs) / max(abs(lhs), 1.0))
    ratios = []
    bracket_ok = True
    for n in range(11):
        lo, ratio, hi = sbmod.translation_unboundedness_demo(n, w)
        ratios.append(ratio)
        bracket_ok &= lo <= ratio <= hi
    decay_ok = ratios[10] < 1e-6 and all(
        ratios[i + 1] < ratios[i] for i in range(1, 10))
    chart = sbmod.SphereChart(w, dims=2)
    chart.condition_check()
    jac_worst = chart.jacobian_product_max_defect(10_000)
    f = SparsePolynomial.x(1) + SparsePolynomial.x(2) * SparsePolynomial.x(2)
    c_const, n_patch, n_flat = sbmod.chart_norm_equivalence(chart, f)
    equiv_ok = n_flat <= c_const * n_patch and n_patch <= c_const * n_flat
    worst = max(trans_worst, jac_worst)
    ok = trans_worst <= 1e-12 and bracket_ok and decay_ok \
        and jac_worst <= 1e-10 and equiv_ok
    return _record(cfg, "sobolev", "translation-and-charts",
                   "identity-unboundedness-jacobian", worst, 1e-10, ok,
                   f"translation defect {trans_worst:.1e}; ratio(10)={ratios[10]:.2e}; "
                   f"jacobian defect {jac_worst:.1e}; norms ({n_patch:.4f}, "
                   f"{n_flat:.4f}) within C={c_const:.2e}", t0)


def sobolev_suite(cfg: RunConfig) -> list:
    return [check_sobolev(cfg)]


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

SUITE_FUNCS = {
    "measure": measure_suite,
    "cutoff": cutoff_suite,
    "surface": surface_suite,
    "dbar": dbar_suite,
    "ck": ck_suite,
    "sobolev": sobolev_suite,
}


def run_suite(cfg: RunConfig, selected=None) -> Report:
    """Execute the selected suites in declared order; deterministic given seed."""
    names = cfg.suites if selected is None else tuple(selected)
    for name in names:
        if name not in SUITE_FUNCS:
            raise ConfigError(f"unknown suite {name!r}")
    report = Report()
    for name in names:
        try:
            report.records.extend(SUITE_FUNCS[name](cfg))
        except Exception as exc:  # recorded, not fatal
            report.records.append(CheckRecord(
                suite=name, check="suite-error", anchor="error",
                inputs=cfg.digest(), value=math.nan, tolerance=0.0,
                passed=False, detail=f"{type(exc).__name__}: {exc}"))
    return report
