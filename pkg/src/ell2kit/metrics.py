"""The d_p metric family and the near-infinity gauge."""

from __future__ import annotations

import math

from .errors import NotNearInfinity, ZeroCoordinate  # noqa: F401 (re-export)
from .series import DIVERGENT
from .weights import TailedSequence, TruncatedPoint


def dp_distance(x: TruncatedPoint, y: TruncatedPoint, p: float) -> float:
    """Capped coordinatewise distance min{1, (sum |x_i-y_i|^p)^(1/max(1,p))}.

    For p = inf the inner sum is replaced by the supremum.  Both arguments are
    truncated points, so the sums are finite.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    d = max(len(x), len(y))
    diffs = [abs(x.coord(i) - y.coord(i)) for i in range(1, d + 1)]
    if math.isinf(p):
        core = max(diffs, default=0.0)
    else:
        core = sum(t**p for t in diffs) ** (1.0 / max(1.0, p))
    return min(1.0, core)


def near_infinity_gauge(v: TailedSequence, p: float) -> float:
    """sum_i 1/|v_i|^p with the tail summed by closed form.

    Finiteness of the gauge certifies that v is "near infinity": the gauge is
    exactly the quantity whose finiteness gives a majorant frame.  Raises
    ZeroCoordinate if any coordinate vanishes and NotNearInfinity if the sum
    provably diverges.
    """
    if p <= 0 or math.isinf(p):
        raise ValueError("p must be finite and positive")
    total = v.sum_pow_reciprocal(p)
    if total is DIVERGENT:
        raise NotNearInfinity("reciprocal-power gauge diverges")
    return total
