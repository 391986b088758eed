"""Desk-scale numerical toolkit for product-Gaussian analysis on sequence space.

Submodules
----------
weights      weight sequences, truncated points, tailed sequences
polynomials  sparse polynomial algebra and the exact Gaussian moment oracle
metrics      the capped coordinate metrics and the near-infinity gauge
sampling     deterministic chunked Monte Carlo streams
measure      the product Gaussian: Hellinger, dichotomy, translation, dilation
cutoff       smoothing semigroup, compact sublevel sets, smooth cut-offs
surface      index-set determinants, surface measures, Gauss-Green, Stokes
dbar         complex (s,t)-form calculus, the basic estimate, least-norm solve
ck           monomial series and the majorant-method Cauchy problem solver
sobolev      weighted Sobolev norms, translation identities, flattening charts
verify       named reproducible check suites with CSV/JSON reports
"""

from .weights import TailedSequence, TruncatedPoint, WeightSequence  # noqa: F401

__version__ = "0.1.0"
