"""Matplotlib figures rendered alongside the delimited verification reports.

Each function draws one diagnostic panel from the same primitives the checks
use and writes a PNG into the requested directory.  All randomness is seeded
through the run configuration, so re-rendering is reproducible.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import cutoff as cutmod  # noqa: E402
from . import dbar as dbmod  # noqa: E402
from . import measure as msmod  # noqa: E402
from . import sobolev as sbmod  # noqa: E402
from .verify import RunConfig  # noqa: E402


def fig_kn_mass(cfg: RunConfig, path: str) -> None:
    """Measure of the compact sublevel sets versus their level."""
    w = cfg.weights()
    ccfg = cutmod.CutoffConfig(w, dims=cfg.dims, n_samples=cfg.mc_light)
    st = cfg.stream(901)
    levels = list(range(1, 7))
    masses, errs = [], []
    for n in levels:
        est, se = cutmod.kn_mass(ccfg, n, st.child(n))
        masses.append(est)
        errs.append(se)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.errorbar(levels, masses, yerr=[4 * e for e in errs], marker="o")
    ax.axhline(0.8, color="gray", ls="--", lw=0.8, label="4/5 calibration line")
    ax.set_xlabel("level n")
    ax.set_ylabel("mass of K_n")
    ax.set_ylim(0, 1.02)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_cutoff_profile(cfg: RunConfig, path: str) -> None:
    """The fixed smooth transition and its derivative."""
    step = cutmod.smoothstep()
    xs = np.linspace(0.0, 1.0, 400)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(xs, [step(x) for x in xs], label="H")
    ax.plot(xs, [step.deriv(x) / step.sup_deriv for x in xs],
            label="H' / sup|H'|", ls="--")
    ax.axvline(0.25, color="gray", lw=0.6)
    ax.axvline(0.75, color="gray", lw=0.6)
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_hellinger_partials(cfg: RunConfig, path: str) -> None:
    """Partial Hellinger products for an equivalent and a singular pair."""
    w = cfg.weights()
    r = 1.0
    shifts_eq = [w.a(i) ** 2 for i in range(1, 33)]
    shifts_sg = [w.a(i) for i in range(1, 33)]
    partials_eq, partials_sg, p1, p2 = [], [], 1.0, 1.0
    for i in range(1, 33):
        p1 *= msmod.hellinger_1d(w.a(i), r, r, shifts_eq[i - 1], 0.0)
        p2 *= msmod.hellinger_1d(w.a(i), r, r, shifts_sg[i - 1], 0.0)
        partials_eq.append(p1)
        partials_sg.append(p2)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(range(1, 33), partials_eq, marker=".", label="summable shift (equivalent)")
    ax.plot(range(1, 33), partials_sg, marker=".", label="weight-sized shift (singular)")
    ax.set_xlabel("number of factors")
    ax.set_ylabel("partial Hellinger product")
    ax.set_ylim(0, 1.02)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_unboundedness(cfg: RunConfig, path: str) -> None:
    """Translated-bump norm ratios against the two-sided decay bracket."""
    w = cfg.weights()
    ns = list(range(11))
    lows, ratios, highs = [], [], []
    for n in ns:
        lo, ratio, hi = sbmod.translation_unboundedness_demo(n, w)
        lows.append(lo)
        ratios.append(ratio)
        highs.append(hi)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.semilogy(ns, ratios, marker="o", label="norm ratio")
    ax.semilogy(ns, lows, ls="--", color="gray", label="bracket")
    ax.semilogy(ns, highs, ls="--", color="gray")
    ax.set_xlabel("translation index n")
    ax.set_ylabel("order-1 norm ratio")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_basic_estimate(cfg: RunConfig, path: str) -> None:
    """Scatter of both sides of the lower estimate over random forms."""
    rng = np.random.default_rng(cfg.seed + 99)
    w = cfg.weights()
    lhs, rhs = [], []
    for _ in range(200):
        s = int(rng.integers(0, 2))
        t = int(rng.integers(0, 2))
        f = dbmod.random_form(rng, s, t + 1, 3, 3)
        a, b = dbmod.basic_estimate_check(f, w)
        if b > 0:
            lhs.append(a)
            rhs.append(b)
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.loglog(rhs, lhs, ".", ms=4, alpha=0.7)
    span = [min(rhs) * 0.5, max(rhs) * 2]
    ax.loglog(span, span, color="gray", lw=0.8, label="equality")
    ax.set_xlabel("adjoint + raise norms")
    ax.set_ylabel("weighted form norm x (t+1)/(2r^2)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


FIGURES = {
    "kn_mass.png": fig_kn_mass,
    "cutoff_profile.png": fig_cutoff_profile,
    "hellinger_partials.png": fig_hellinger_partials,
    "unboundedness.png": fig_unboundedness,
    "basic_estimate.png": fig_basic_estimate,
}


def render_all(cfg: RunConfig, out_dir: str) -> list:
    """Render every diagnostic figure into ``out_dir``; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, fn in FIGURES.items():
        path = os.path.join(out_dir, name)
        fn(cfg, path)
        written.append(path)
    return written
