"""Weight sequences, truncated points, and tailed coordinate sequences.

The positive summable weights ``a_1, a_2, ...`` drive every measure and norm
in the toolkit.  A :class:`WeightSequence` stores finitely many explicit
values plus a closed-form tail rule used only by tail-sum estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TailDivergent, ZeroCoordinate
from .series import DIVERGENT, SeqRule


@dataclass(frozen=True)
class WeightSequence:
    """Positive summable weights a_i with a certified closed-form tail.

    Parameters
    ----------
    explicit : tuple of float
        a_1 .. a_n, all positive.
    tail : SeqRule
        Rule generating a_i for i > n.  Must certify sum(a_i) < inf.
    """

    explicit: tuple
    tail: SeqRule

    def __post_init__(self):
        if any(a <= 0 for a in self.explicit):
            raise ValueError("weights must be positive")
        if self.tail.sum_pow(1.0, len(self.explicit) + 1) is DIVERGENT:
            raise TailDivergent("weight tail is not summable")

    @staticmethod
    def geometric(n: int = 8, ratio: float = 0.5) -> "WeightSequence":
        """The default weights a_i = ratio**i with n explicit entries."""
        return WeightSequence(
            explicit=tuple(ratio**i for i in range(1, n + 1)),
            tail=SeqRule("geometric", c=1.0, q=ratio),
        )

    def a(self, i: int) -> float:
        """Weight a_i for any index i >= 1."""
        if i <= len(self.explicit):
            return self.explicit[i - 1]
        return self.tail.value(i)

    def head(self, n: int) -> np.ndarray:
        return np.array([self.a(i) for i in range(1, n + 1)])

    def sup(self) -> float:
        """Supremum of the weights (tail rule must be non-increasing)."""
        tail_start = len(self.explicit) + 1
        t0 = self.tail.value(tail_start)
        t1 = self.tail.value(tail_start + 1)
        tail_sup = t0 if t1 <= t0 else DIVERGENT
        return max(max(self.explicit), tail_sup)

    def sum_pow(self, p: float, start: int = 1) -> float:
        """sum_{i >= start} a_i**p (certified; DIVERGENT sentinel if infinite)."""
        n = len(self.explicit)
        head = sum(self.a(i) ** p for i in range(start, n + 1))
        tail = self.tail.sum_pow(p, max(start, n + 1))
        return DIVERGENT if tail is DIVERGENT else head + tail


@dataclass(frozen=True)
class TruncatedPoint:
    """A point of the sequence space with finitely many explicit coordinates.

    Coordinates beyond the stored ones are exactly zero.
    """

    coords: tuple = field(default_factory=tuple)

    @staticmethod
    def of(*coords: float) -> "TruncatedPoint":
        return TruncatedPoint(tuple(float(c) for c in coords))

    @staticmethod
    def from_array(arr) -> "TruncatedPoint":
        return TruncatedPoint(tuple(float(c) for c in arr))

    def coord(self, i: int) -> float:
        """Coordinate x_i (1-based); zero beyond the explicit range."""
        return self.coords[i - 1] if 1 <= i <= len(self.coords) else 0.0

    def __len__(self) -> int:
        return len(self.coords)

    def array(self, dims: int | None = None) -> np.ndarray:
        d = len(self.coords) if dims is None else dims
        out = np.zeros(d)
        m = min(d, len(self.coords))
        out[:m] = self.coords[:m]
        return out

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coords))

    def sub(self, other: "TruncatedPoint") -> "TruncatedPoint":
        d = max(len(self), len(other))
        return TruncatedPoint(tuple(self.coord(i) - other.coord(i) for i in range(1, d + 1)))


@dataclass(frozen=True)
class TailedSequence:
    """A full coordinate sequence: explicit head plus closed-form tail rule.

    Unlike :class:`TruncatedPoint` the tail is given by ``rule`` rather than
    being zero, so reciprocal-power gauges and shift tails stay closed-form.
    """

    explicit: tuple
    rule: SeqRule

    @staticmethod
    def geometric(explicit, c: float, q: float) -> "TailedSequence":
        return TailedSequence(tuple(explicit), SeqRule("geometric", c=c, q=q))

    @staticmethod
    def power(explicit, c: float, s: float) -> "TailedSequence":
        return TailedSequence(tuple(explicit), SeqRule("power", c=c, s=s))

    @staticmethod
    def zero(dims: int = 0) -> "TailedSequence":
        return TailedSequence((0.0,) * dims, SeqRule("geometric", c=0.0, q=0.5))

    def value(self, i: int) -> float:
        if i <= len(self.explicit):
            return self.explicit[i - 1]
        return self.rule.value(i)

    def head(self, n: int) -> np.ndarray:
        return np.array([self.value(i) for i in range(1, n + 1)])

    def check_nonzero(self, probe: int = 64) -> None:
        for i in range(1, len(self.explicit) + probe):
            if self.value(i) == 0.0:
                raise ZeroCoordinate(f"coordinate {i} is zero")
        if self.rule.c == 0.0:
            raise ZeroCoordinate("tail rule is identically zero")

    def sum_pow_reciprocal(self, p: float) -> float:
        """sum_i 1/|value(i)|**p, certified closed form; DIVERGENT if infinite."""
        self.check_nonzero()
        n = len(self.explicit)
        head = sum(abs(self.value(i)) ** (-p) for i in range(1, n + 1))
        inv = _invert_rule(self.rule)
        tail = inv.sum_pow(p, n + 1)
        return DIVERGENT if tail is DIVERGENT else head + tail

    def sum_pow(self, p: float) -> float:
        """sum_i |value(i)|**p, certified; DIVERGENT if infinite."""
        n = len(self.explicit)
        head = sum(abs(self.value(i)) ** p for i in range(1, n + 1))
        tail = self.rule.sum_pow(p, n + 1)
        return DIVERGENT if tail is DIVERGENT else head + tail


def _invert_rule(rule: SeqRule) -> SeqRule:
    # 1/(c q^i) = (1/c) (1/q)^i ; 1/(c i^s) = (1/c) i^(-s)
    if rule.kind == "geometric":
        return SeqRule("geometric", c=1.0 / rule.c, q=1.0 / rule.q)
    return SeqRule("power", c=1.0 / rule.c, s=-rule.s)
