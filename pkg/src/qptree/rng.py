"""Counter-based deterministic random numbers.

Sample ``i`` of a stream is a pure function of ``(seed, i)``: the splitmix64
output function applied to the state ``seed + (i + 1) * GOLDEN``, which is
exactly the canonical splitmix64 sequence started from ``seed``.  Because
each draw depends only on its index, any partition of an index range
produces bit-identical uniforms to a single full-range draw, so sampling can
be chunked or parallelised without changing results.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "splitmix64"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_STREAM_SALT = np.uint64(0xD1B54A32D192ED03)


def _finalize(state: np.ndarray) -> np.ndarray:
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _as_u64(seed: int) -> np.uint64:
    return np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform float64 draws in [0, 1) for stream indices [start, start+count)."""
    if start < 0 or count < 0:
        raise ValueError("start and count must be nonnegative")
    idx = np.arange(start, start + count, dtype=np.uint64)
    state = _as_u64(seed) + (idx + np.uint64(1)) * _GOLDEN
    return (_finalize(state) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, stream: int) -> int:
    """Derive a substream seed; deterministic in (seed, stream)."""
    # 1-element arrays: numpy wraps array uint64 arithmetic silently
    salt = (np.array([_as_u64(stream)]) + np.uint64(1)) * _STREAM_SALT
    return int(_finalize(np.array([_as_u64(seed)]) ^ salt)[0])
