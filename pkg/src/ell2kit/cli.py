"""Command-line interface: per-module demos plus the batch verification runner.

Subcommand groups mirror the library modules; the ``verify run`` report path
writes a byte-stable CSV and can render the diagnostic figures next to it.
"""

from __future__ import annotations

import json
import math
import os
import sys
from fractions import Fraction

import click
import numpy as np

from . import ck as ckmod
from . import cutoff as cutmod
from . import dbar as dbmod
from . import measure as msmod
from . import sobolev as sbmod
from . import surface as sfmod
from .polynomials import SparsePolynomial, mi, random_polynomial
from .sampling import SampleStream
from .verify import SUITES, Report, RunConfig, run_suite
from .weights import TailedSequence, TruncatedPoint, WeightSequence


def _weights(ratio: float, n: int) -> WeightSequence:
    return WeightSequence.geometric(n, ratio)


def _poly_from_json(data) -> SparsePolynomial:
    terms = {}
    for item in data:
        key = mi(*[(int(v), int(e)) for v, e in item["alpha"]])
        terms[key] = terms.get(key, 0.0) + float(item["c"])
    return SparsePolynomial(terms)


def _series_from_json(data, cap: int) -> ckmod.MonomialSeries:
    terms = {}
    for item in data:
        key = mi(*[(int(v), int(e)) for v, e in item["alpha"]])
        c = item["c"]
        c = Fraction(c) if isinstance(c, str) else float(c)
        terms[key] = terms.get(key, 0) + c
    return ckmod.MonomialSeries(terms, cap)


def _series_to_json(series: ckmod.MonomialSeries) -> list:
    out = []
    for k in sorted(series.terms):
        c = series.terms[k]
        out.append({"alpha": [list(p) for p in k],
                    "c": str(c) if isinstance(c, Fraction) else float(c)})
    return out


def _form_from_json(data) -> dbmod.Form:
    comps = {}
    for comp in data["components"]:
        ii = tuple(int(x) for x in comp["I"])
        jj = tuple(int(x) for x in comp["J"])
        terms = {}
        for t in comp["terms"]:
            key = dbmod.ckey(*[(int(v), int(a), int(b)) for v, a, b in t["key"]])
            terms[key] = terms.get(key, 0) + complex(t.get("re", 0.0), t.get("im", 0.0))
        comps[(ii, jj)] = dbmod.CPoly(terms)
    return dbmod.Form(int(data["s"]), int(data["t"]), comps)


def _form_to_json(f: dbmod.Form) -> dict:
    comps = []
    for (ii, jj) in sorted(f.comps):
        p = f.comps[(ii, jj)]
        comps.append({
            "I": list(ii), "J": list(jj),
            "terms": [{"key": [list(t) for t in k],
                       "re": float(np.real(c)), "im": float(np.imag(c))}
                      for k, c in sorted(p.terms.items())],
        })
    return {"s": f.s, "t": f.t, "components": comps}


@click.group()
def main():
    """Numerical toolkit for product-Gaussian analysis on sequence space."""


def _weight_options(fn):
    fn = click.option("--ratio", default=0.5, show_default=True,
                      help="geometric weight ratio")(fn)
    fn = click.option("--n-explicit", default=8, show_default=True,
                      help="explicit weight head length")(fn)
    return fn


# ---------------------------------------------------------------------------
# measure group
# ---------------------------------------------------------------------------


@main.group()
def measure():
    """Product Gaussian closed forms: Hellinger, dichotomy, integrability."""


@measure.command("hellinger")
@click.option("--a", default=1.0, show_default=True)
@click.option("--r", default=1.0, show_default=True)
@click.option("--s", default=1.0, show_default=True)
@click.option("--x1", default=0.0, show_default=True)
@click.option("--x2", default=0.0, show_default=True)
def measure_hellinger(a, r, s, x1, x2):
    value = msmod.hellinger_1d(a, r, s, x1, x2)
    click.echo(json.dumps({"inputs": {"a": a, "r": r, "s": s, "x1": x1, "x2": x2},
                           "value": value, "verdict": None}, sort_keys=True))


@measure.command("classify")
@_weight_options
@click.option("--r", default=1.0, show_default=True)
@click.option("--s", default=1.0, show_default=True)
@click.option("--shift-scale", default=0.25, show_default=True,
              help="geometric ratio of the first shift sequence")
@click.option("--shift-coeff", default=1.0, show_default=True)
def measure_classify(ratio, n_explicit, r, s, shift_scale, shift_coeff):
    w = _weights(ratio, n_explicit)
    pair = msmod.ShiftedGaussianPair(
        w, r, s, TailedSequence.geometric((), shift_coeff, shift_scale),
        TailedSequence.zero())
    verdict = msmod.classify_pair(pair)
    click.echo(json.dumps({
        "inputs": {"r": r, "s": s, "shift_scale": shift_scale,
                   "shift_coeff": shift_coeff},
        "value": verdict.hellinger,
        "verdict": verdict.verdict.value,
        "tail_sum": None if math.isinf(verdict.tail_sum) else verdict.tail_sum,
    }, sort_keys=True))


@measure.command("fernique")
@_weight_options
@click.option("--r", default=1.0, show_default=True)
@click.option("--c", default=1.0, show_default=True)
def measure_fernique(ratio, n_explicit, r, c):
    g = msmod.ProductGaussian(_weights(ratio, n_explicit), r)
    result = msmod.fernique_integral(g, c)
    click.echo(json.dumps({
        "inputs": {"r": r, "c": c, "threshold": msmod.fernique_threshold(g)},
        "value": result.value if result.finite else None,
        "verdict": "finite" if result.finite else "divergent",
    }, sort_keys=True))


# ---------------------------------------------------------------------------
# cutoff group
# ---------------------------------------------------------------------------


@main.group()
def cutoff():
    """Smooth cut-offs built from compact sublevel sets."""


@cutoff.command("verify")
@_weight_options
@click.option("--k", default=2, show_default=True, help="cut-off level")
@click.option("--seed", default=20240201, show_default=True)
@click.option("--points", default=8, show_default=True)
@click.option("--n-samples", default=40000, show_default=True)
def cutoff_verify(ratio, n_explicit, k, seed, points, n_samples):
    """CSV of (point-class, cutoff value, weighted gradient sum) rows."""
    w = _weights(ratio, n_explicit)
    ccfg = cutmod.CutoffConfig(w, n_samples=n_samples)
    st = SampleStream(seed=seed, dims=ccfg.dims)
    rng = np.random.default_rng(seed)
    n1 = ccfg.n1(st.child(0))
    click.echo("point_class,cutoff_value,weighted_gradient_sum")
    classes = [("plateau", k, 0.05, 0.9), ("shell", k + n1, 0.93, 1.07),
               ("exterior", k + 2 * n1, 1.15, 2.5)]
    c = ccfg.c_head(ccfg.dims)
    tag = 0
    for name, level, lo, hi in classes:
        for _ in range(points):
            u = rng.standard_normal(ccfg.dims)
            q = float(np.sum(u * u / c))
            x = TruncatedPoint.from_array(
                u * level / math.sqrt(q) * float(rng.uniform(lo, hi)))
            val = cutmod.cutoff_xk(ccfg, k, x, st.child(10 + tag), n_samples)
            grad = cutmod.cutoff_gradient_sum(ccfg, k, x, st.child(500 + tag),
                                              n_samples)
            tag += 1
            click.echo(f"{name},{val!r},{grad!r}")


# ---------------------------------------------------------------------------
# surface group
# ---------------------------------------------------------------------------


@main.group()
def surface():
    """Surface measures and boundary identities."""


@surface.command("measure")
@click.option("--scene", type=click.Path(exists=True), required=True,
              help="JSON scene description")
def surface_measure(scene):
    """Evaluate a surface measure from a JSON scene; CSV result row."""
    with open(scene) as fh:
        data = json.load(fh)
    w = _weights(data.get("ratio", 0.5), data.get("n_explicit", 8))
    click.echo("chart,value")
    if data["kind"] == "line-bundle":
        lb = sfmod.AffineLineBundle(
            w, {int(k): float(v) for k, v in data.get("x0", {}).items()},
            {int(k): float(v) for k, v in data.get("dx", {}).items()})
        lo, hi = float(data["lo"]), float(data["hi"])
        click.echo(f"base,{lb.measure(lo, hi)!r}")
        for j in data.get("swaps", []):
            click.echo(f"swap-{j},{lb.measure_swapped_chart(int(j), lo, hi)!r}")
    elif data["kind"] == "graph":
        graph = {int(j): _poly_from_json(p) for j, p in data["graph"].items()}
        srf = sfmod.PolyGraphSurface(w, graph, int(data["dims"]))
        region = {int(v): tuple(b) for v, b in data.get("region", {}).items()}
        click.echo(f"base,{srf.measure(region)!r}")
    else:
        raise click.ClickException(f"unknown scene kind {data['kind']!r}")


@surface.command("gauss-green")
@click.option("--scene", type=click.Path(exists=True), required=True)
@click.option("--seed", default=20240201, show_default=True)
def surface_gauss_green(scene, seed):
    """CSV residual report for the divergence identity."""
    with open(scene) as fh:
        data = json.load(fh)
    w = _weights(data.get("ratio", 0.5), data.get("n_explicit", 8))
    f = _poly_from_json(data["f"])
    i = int(data["i"])
    click.echo("geometry,lhs,rhs,residual,stderr")
    if data["geometry"] == "halfspace":
        lhs, rhs, res = sfmod.gauss_green_halfspace(f, i, w)
        click.echo(f"halfspace,{lhs!r},{rhs!r},{res!r},0.0")
    elif data["geometry"] == "ball":
        dims = int(data.get("dims", 3))
        st = SampleStream(seed=seed, dims=dims)
        lhs, rhs, res, se = sfmod.gauss_green_ball(
            f, i, w, float(data.get("radius", 1.0)), dims, st,
            int(data.get("samples", 200000)))
        click.echo(f"ball,{lhs!r},{rhs!r},{res!r},{se!r}")
    else:
        raise click.ClickException("geometry must be halfspace or ball")


@surface.command("stokes")
@click.option("--scene", type=click.Path(exists=True), required=True)
def surface_stokes(scene):
    """CSV residual report for the boundary-vs-interior identity."""
    with open(scene) as fh:
        data = json.load(fh)
    w = _weights(data.get("ratio", 0.5), data.get("n_explicit", 8))
    f = _poly_from_json(data["f"])
    click.echo("case,lhs,rhs,residual,scale")
    if data["case"] == "halfplane":
        tilt = tuple(data.get("tilt", (0.0, 0.0)))
        lhs, rhs, res, scale = sfmod.stokes_halfplane(f, w, tilt=tilt)
        click.echo(f"halfplane,{lhs!r},{rhs!r},{res!r},{scale!r}")
    elif data["case"] == "circle":
        val, scale = sfmod.stokes_circle(f, w, float(data.get("radius", 1.0)))
        click.echo(f"circle,{val!r},0.0,{abs(val)!r},{scale!r}")
    else:
        raise click.ClickException("case must be halfplane or circle")


# ---------------------------------------------------------------------------
# dbar group
# ---------------------------------------------------------------------------


@main.group()
def dbar():
    """Complex form calculus: estimates and the least-norm solver."""


@dbar.command("estimate")
@_weight_options
@click.option("--trials", default=50, show_default=True)
@click.option("--seed", default=20240201, show_default=True)
def dbar_estimate(ratio, n_explicit, trials, seed):
    """CSV of (lhs, rhs, ratio) rows for the basic lower estimate."""
    w = _weights(ratio, n_explicit)
    rng = np.random.default_rng(seed)
    click.echo("lhs,rhs,ratio")
    for _ in range(trials):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        f = dbmod.random_form(rng, s, t + 1, 3, 3)
        lhs, rhs = dbmod.basic_estimate_check(f, w)
        ratio_val = lhs / rhs if rhs > 0 else math.nan
        click.echo(f"{lhs!r},{rhs!r},{ratio_val!r}")


@dbar.command("solve")
@_weight_options
@click.option("--input", "input_path", type=click.Path(exists=True), required=True,
              help="form JSON (components with I, J, terms)")
@click.option("--cap", default=6, show_default=True)
@click.option("--dims", default=2, show_default=True)
def dbar_solve(ratio, n_explicit, input_path, cap, dims):
    """Solve the degree-raising equation; emits the solution form as JSON."""
    w = _weights(ratio, n_explicit)
    with open(input_path) as fh:
        f = _form_from_json(json.load(fh))
    u, ratio_val = dbmod.solve_dbar(f, w, degree_cap=cap, dims=dims)
    out = _form_to_json(u)
    out["norm_ratio"] = ratio_val
    out["norm_bound"] = math.sqrt(2.0 / f.t)
    click.echo(json.dumps(out, sort_keys=True))


# ---------------------------------------------------------------------------
# ck group
# ---------------------------------------------------------------------------


@main.group()
def ck():
    """Majorant-method power series solver."""


@ck.command("solve")
@click.option("--problem", type=click.Path(exists=True), required=True)
@click.option("--cap", default=12, show_default=True)
@click.option("--dims", default=6, show_default=True)
def ck_solve_cmd(problem, cap, dims):
    """Solve a linear Cauchy problem; emits solution and certificate JSON."""
    with open(problem) as fh:
        data = json.load(fh)
    prob = ckmod.LinearCauchyProblem(
        a0=_series_from_json(data.get("a0", []), cap),
        a={int(i): _series_from_json(s, cap) for i, s in data.get("a", {}).items()},
        phi=_series_from_json(data["phi"], cap))
    u = ckmod.ck_solve(prob, cap, dims)
    out = {"solution": _series_to_json(u)}
    if "frame" in data:
        fr = data["frame"]
        v = TailedSequence.geometric(tuple(fr.get("explicit", ())),
                                     float(fr["c"]), float(fr["q"]))
        frame = ckmod.majorant_frame(v, float(fr.get("p", 1.0)))
        try:
            radius = ckmod.convergence_certificate(prob, frame)
            out["certificate"] = {"radius": None if math.isinf(radius) else radius,
                                  "entire": math.isinf(radius)}
        except Exception as exc:
            out["certificate"] = {"error": f"{type(exc).__name__}: {exc}"}
    click.echo(json.dumps(out, sort_keys=True))


# ---------------------------------------------------------------------------
# sobolev group
# ---------------------------------------------------------------------------


@main.group()
def sobolev():
    """Weighted Sobolev norms and translation demos."""


@sobolev.command("norm")
@_weight_options
@click.option("--poly", required=True,
              help='polynomial JSON, e.g. [{"alpha": [[1, 1]], "c": 1.0}]')
@click.option("--order", default=1, show_default=True)
@click.option("--domain", default="full", show_default=True,
              type=click.Choice(["full", "halfspace"]))
def sobolev_norm_cmd(ratio, n_explicit, poly, order, domain):
    w = _weights(ratio, n_explicit)
    f = _poly_from_json(json.loads(poly))
    val = math.sqrt(sbmod.sobolev_norm_sq(f, order, w, domain=domain))
    click.echo("order,domain,norm")
    click.echo(f"{order},{domain},{val!r}")


@sobolev.command("translate-demo")
@_weight_options
@click.option("--n", default=10, show_default=True, help="max translation index")
def sobolev_translate_demo(ratio, n_explicit, n):
    """CSV rows (n, ratio, lower, upper) for the unbounded translation family."""
    w = _weights(ratio, n_explicit)
    click.echo("n,ratio,lower,upper")
    for k in range(n + 1):
        lo, r_, hi = sbmod.translation_unboundedness_demo(k, w)
        click.echo(f"{k},{r_!r},{lo!r},{hi!r}")


@sobolev.command("chart-check")
@_weight_options
@click.option("--points", default=10000, show_default=True)
def sobolev_chart_check(ratio, n_explicit, points):
    """CSV summary of the sphere-chart Jacobian identities."""
    w = _weights(ratio, n_explicit)
    chart = sbmod.SphereChart(w, dims=2)
    chart.condition_check()
    defect = chart.jacobian_product_max_defect(points)
    click.echo("check,value")
    click.echo(f"jacobian_product_defect,{defect!r}")
    click.echo(f"delta,{chart.delta!r}")
    click.echo(f"equivalence_constant,{chart.equivalence_constant!r}")


# ---------------------------------------------------------------------------
# verify group
# ---------------------------------------------------------------------------


@main.group()
def verify():
    """Batch verification suites with reproducible reports."""


@verify.command("run")
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON run configuration")
@click.option("--suite", "suite_name", default="all", show_default=True,
              help="suite name or 'all' or 'none'")
@click.option("--out", default="report.csv", show_default=True)
@click.option("--json-out", default=None, help="also write the JSON report here")
@click.option("--figures", "figures_dir", default=None,
              help="render diagnostic figures into this directory")
def verify_run(config_path, suite_name, out, json_out, figures_dir):
    """Run verification suites; exit status 1 if any check fails."""
    if config_path:
        with open(config_path) as fh:
            cfg = RunConfig.from_json(fh.read())
    else:
        cfg = RunConfig()
    env_seed = os.environ.get("ELL2KIT_SEED")
    if env_seed is not None:
        cfg.seed = int(env_seed)
    if suite_name == "all":
        selected = SUITES
    elif suite_name in ("none", ""):
        selected = ()
    else:
        selected = tuple(suite_name.split(","))
    report = run_suite(cfg, selected)
    with open(out, "w") as fh:
        fh.write(report.to_csv())
    if json_out:
        with open(json_out, "w") as fh:
            fh.write(report.to_json())
    if figures_dir:
        from .figures import render_all
        for path in render_all(cfg, figures_dir):
            click.echo(f"figure: {path}", err=True)
    for r in report.records:
        status = "pass" if r.passed else "FAIL"
        click.echo(f"[{status}] {r.suite}/{r.check}: value={r.value:.3e} "
                   f"tol={r.tolerance:.1e} ({r.wall_ms:.0f} ms)", err=True)
    click.echo(f"report: {out} (digest {report.digest()[:16]})", err=True)
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":
    main()
