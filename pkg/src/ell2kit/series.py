"""Closed-form sequence rules and certified tail summation.

Everything in the toolkit that mentions an infinite sum reduces to a head of
explicit terms plus a tail generated by a closed-form rule.  Two rule shapes
cover all uses: geometric ``c * q**i`` and power ``c * i**s``.  Tail sums of
these (and of their termwise powers) are either evaluated to near machine
precision with a rigorous remainder bound, or reported as divergent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import TailNotCertified

#: Relative accuracy target for certified tail sums.
TAIL_TOL = 1e-15

#: Sentinel returned by sums that provably diverge to +infinity.
DIVERGENT = math.inf


@dataclass(frozen=True)
class SeqRule:
    """Closed-form rule ``i -> value`` for the tail of a sequence.

    kind
        ``"geometric"``: value(i) = c * q**i  (q > 0), or
        ``"power"``:     value(i) = c * i**s.
    """

    kind: str
    c: float
    q: float = 0.0
    s: float = 0.0

    def __post_init__(self):
        if self.kind not in ("geometric", "power"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "geometric" and self.q <= 0:
            raise ValueError("geometric ratio must be positive")

    def value(self, i: int) -> float:
        if self.kind == "geometric":
            return self.c * self.q**i
        return self.c * float(i) ** self.s

    def sum_pow(self, p: float, start: int) -> float:
        """Certified value of sum_{i >= start} |value(i)|**p, or DIVERGENT."""
        if self.c == 0.0:
            return 0.0
        cp = abs(self.c) ** p
        if self.kind == "geometric":
            qp = self.q**p
            if qp >= 1.0:
                return DIVERGENT
            return cp * qp**start / (1.0 - qp)
        sp = self.s * p
        if sp >= -1.0:
            return DIVERGENT
        return cp * _zeta_tail(-sp, start)

    def sum_pow_log_gauss(self, p: float, start: int) -> float:
        """Certified sum_{i >= start} value(i)**p * |ln(1/(sqrt(2*pi)*value(i)))|.

        Used by the compact-set calibration condition; requires a decaying
        positive rule.
        """
        if self.c <= 0.0:
            raise TailNotCertified("rule must be positive")
        if self.kind == "geometric":
            if self.q >= 1.0 or self.q**p >= 1.0:
                return DIVERGENT
            # term_i = c^p q^(p i) * |A + B i| with A = -ln(sqrt(2pi) c), B = -ln q
            qp = self.q**p
            A = -math.log(math.sqrt(2 * math.pi) * self.c)
            B = -math.log(self.q)
            # beyond i0 the absolute value resolves to A + B i (B > 0)
            i0 = start
            while A + B * i0 < 0:
                i0 += 1
            head = sum(
                self.value(i) ** p * abs(A + B * i) for i in range(start, i0)
            )
            # sum_{i>=i0} q^(pi) (A + B i) in closed form
            g0 = qp**i0 / (1.0 - qp)
            g1 = qp**i0 * (i0 - (i0 - 1) * qp) / (1.0 - qp) ** 2
            return head + abs(self.c) ** p * (A * g0 + B * g1)
        raise TailNotCertified("log-weighted tails only for geometric rules")


def _zeta_tail(a: float, start: int) -> float:
    """sum_{i >= start} i**(-a) for a > 1 via Euler-Maclaurin."""
    n = max(start, 256)
    head = sum(float(i) ** (-a) for i in range(start, n))
    # remainder from n: integral + half-term + two EM corrections
    rem = (n ** (1.0 - a) / (a - 1.0) + 0.5 * n ** (-a)
           + (a / 12.0) * n ** (-a - 1.0)
           - a * (a + 1.0) * (a + 2.0) / 720.0 * n ** (-a - 3.0))
    return head + rem


def certified_sum(term, start: int, tol: float = TAIL_TOL, max_terms: int = 20000):
    """Sum ``term(i)`` for i >= start with a measured geometric certificate.

    Terms must be eventually dominated by a geometric sequence with ratio
    bounded away from 1; once a stretch of consecutive ratios stays below a
    bound rho < 1 the remainder is capped by the geometric majorant and
    summation stops.  Raises TailNotCertified otherwise.
    """
    total = 0.0
    prev = None
    calm = 0
    rho = 0.0
    for k in range(max_terms):
        t = term(start + k)
        total += t
        at = abs(t)
        if prev is not None and prev > 0:
            r = at / prev
            if r < 0.999:
                calm += 1
                rho = max(rho, r) if calm > 1 else r
            else:
                calm = 0
                rho = 0.0
        prev = at
        if calm >= 8:
            bound = at * rho / (1.0 - rho)
            if bound <= tol * max(1.0, abs(total)):
                return total
        if at == 0.0 and k > 4:
            return total
    raise TailNotCertified("no geometric tail certificate after max_terms")


def log_product_tail(log_term, start: int, tol: float = TAIL_TOL) -> float:
    """Certified sum of logarithms for an infinite product's tail.

    Returns the tail log-sum; the caller exponentiates.  Divergence to -inf
    (product collapsing to zero) is signalled by returning ``-math.inf`` when
    the partial sums pass below a floor with non-shrinking terms.
    """
    total = 0.0
    prev = None
    calm = 0
    rho = 0.0
    for k in range(20000):
        t = log_term(start + k)
        total += t
        if total < -750.0:
            return -math.inf
        at = abs(t)
        if prev is not None and prev > 0:
            r = at / prev
            if r < 0.999:
                calm += 1
                rho = max(rho, r) if calm > 1 else r
            else:
                calm = 0
                rho = 0.0
        prev = at
        if calm >= 8:
            bound = at * rho / (1.0 - rho)
            if bound <= tol:
                return total
        if at == 0.0 and k > 4:
            return total
    raise TailNotCertified("infinite product tail did not certify")
