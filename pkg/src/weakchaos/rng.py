"""Counter-based deterministic random numbers.

Draws are a pure function of (seed, stream, index), so results never depend
on batching, call order, or parallel decomposition: worker j can generate
indices [a, b) of stream s and get bit-identical values to a single-threaded
run. The mixing function is the SplitMix64 finalizer.

uniform values lie in the half-open-from-zero interval (0, 1]: the raw 53-bit
mantissa is shifted up by one before scaling, so 0.0 is never produced (safe
to take logs) and 1.0 is produced with probability 2**-53.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def _finalize_array(z: np.ndarray) -> np.ndarray:
    # Same mixing as _finalize, vectorized over uint64.  Multiplication
    # wraps mod 2**64 natively; numpy warns on that overflow, so silence it
    # locally — the wrap is the point.
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int) -> int:
    """Derive the 64-bit key for one named stream of a seed."""
    return _finalize((_finalize(seed) + (stream * _GAMMA)) & _MASK)


def raw_u64(seed: int, stream: int, index: int) -> int:
    """The index-th raw 64-bit word of a stream."""
    key = stream_key(seed, stream)
    return _finalize((key + ((index + 1) * _GAMMA)) & _MASK)


def uniform(seed: int, stream: int, index: int) -> float:
    """The index-th uniform draw of a stream, in (0, 1]."""
    return ((raw_u64(seed, stream, index) >> 11) + 1) * 2.0**-53


@dataclass(frozen=True)
class CounterRNG:
    """One stream of counter-based uniforms.

    Args:
        seed: global experiment seed.
        stream: sub-stream id (e.g. trial number); distinct streams are
            statistically independent.
    """

    seed: int
    stream: int = 0

    def uniform_block(self, start: int, count: int) -> np.ndarray:
        """Uniforms for indices [start, start + count), vectorized."""
        if count <= 0:
            return np.empty(0, dtype=np.float64)
        key = np.uint64(stream_key(self.seed, self.stream))
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = key + idx * np.uint64(_GAMMA)
        words = _finalize_array(z)
        return ((words >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53

    def uniform_at(self, index: int) -> float:
        return uniform(self.seed, self.stream, index)


def normal_block(seed: int, stream: int, count: int) -> np.ndarray:
    """`count` standard normal draws via Box-Muller on one stream.

    Consumes uniform indices [0, 2*count) of the stream, so one stream
    should not mix normal_block with other draws.
    """
    if count <= 0:
        return np.empty(0, dtype=np.float64)
    u = CounterRNG(seed, stream).uniform_block(0, 2 * count)
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    theta = 2.0 * np.pi * u[1::2]
    return radius * np.cos(theta)
