"""Deterministic chunked sampling for Monte Carlo estimators.

A :class:`SampleStream` derives an independent generator for every chunk index
from (seed, chunk); the draw for a given (seed, chunk) is identical no matter
how chunks are scheduled across workers.  Estimators therefore accumulate
per-chunk partial sums and merge them in ascending chunk order, which makes
every estimate bitwise reproducible for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteSample


@dataclass(frozen=True)
class SampleStream:
    """Seeded source of standard-normal chunks.

    Parameters
    ----------
    seed : int
        64-bit base seed.
    chunk_size : int
        Rows per chunk.
    dims : int
        Truncation dimension (columns per chunk).
    """

    seed: int
    chunk_size: int = 4096
    dims: int = 8

    def chunk(self, index: int) -> np.ndarray:
        """Standard-normal array of shape (chunk_size, dims) for this index."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(index,))
        return np.random.default_rng(ss).standard_normal((self.chunk_size, self.dims))

    def child(self, tag: int) -> "SampleStream":
        """An independent stream for a sub-task, derived deterministically."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(0x5EED, tag))
        return SampleStream(int(ss.generate_state(1)[0]), self.chunk_size, self.dims)


def mc_mean_stderr(fn, stream: SampleStream, n: int, workers: int = 1):
    """Mean and standard error of fn over n samples, worker-invariant.

    ``fn`` maps a (m, dims) standard-normal array to a length-m vector.  Chunks
    are assigned round-robin to ``workers`` logical workers but merged in
    ascending chunk order, so the result is identical for any worker count.
    """
    n_chunks = -(-n // stream.chunk_size)
    partial = {}
    for w in range(workers):
        for idx in range(w, n_chunks, workers):
            z = stream.chunk(idx)
            if idx == n_chunks - 1 and n % stream.chunk_size:
                z = z[: n % stream.chunk_size]
            vals = np.asarray(fn(z), dtype=float)
            if not np.all(np.isfinite(vals)):
                raise NonFiniteSample("integrand returned NaN or infinity")
            partial[idx] = (len(vals), vals.sum(), np.square(vals).sum())
    cnt = 0
    s1 = 0.0
    s2 = 0.0
    for idx in sorted(partial):
        c, a, b = partial[idx]
        cnt += c
        s1 += a
        s2 += b
    mean = s1 / cnt
    var = max(s2 / cnt - mean * mean, 0.0)
    stderr = np.sqrt(var / cnt)
    return float(mean), float(stderr)
