"""Counter-based random streams for reproducible stochastic dynamics.

Every random number the engine ever draws is addressed by
``(seed, stream, step, word)``, so the value a given particle receives at a
given step is a pure function of those four integers. Nothing depends on how
many draws happened before, on evaluation order, or on worker count, and two
runs with the same seed replay the same stochastic trajectory exactly.

The concrete scheme is frozen; tests pin exact values against it:

- raw 64-bit words come from numpy's Philox (4x64) with
  ``key = (seed, 0)`` and initial counter ``(0, 0, stream, step)``;
  word ``k`` of a request is the k-th word of that counter block
- a raw word maps to an open-interval uniform via
  ``u = ((raw >> 11) + 0.5) * 2**-53``, so u is never exactly 0 or 1
- a standard normal is the inverse normal CDF (scipy's ndtri) of a uniform,
  one word per variate

Streams used by the engine:

- stream 0: thermostat draws. At step s the block supplies n uniforms
  (words 0..n-1, the per-particle redraw decisions) followed by 3n normal
  words (word n + 3*i + c belongs to particle i, component c).
- stream 1: initial velocity draws at step 0, 3n normal words laid out the
  same particle-major way.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

STREAM_THERMOSTAT = 0
STREAM_INIT_VELOCITIES = 1

_U64 = np.uint64
_TWO64 = 1 << 64


def _block(seed: int, stream: int, step: int):
    key = np.array([int(seed) % _TWO64, 0], dtype=_U64)
    counter = np.array([0, 0, int(stream) % _TWO64, int(step) % _TWO64],
                       dtype=_U64)
    return np.random.Philox(counter=counter, key=key)


def raw_words(seed: int, stream: int, step: int, count: int):
    """First ``count`` raw 64-bit words of the (seed, stream, step) block."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0:
        return np.empty(0, dtype=_U64)
    return _block(seed, stream, step).random_raw(count)


def uniforms(seed: int, stream: int, step: int, count: int,
             word_offset: int = 0):
    """Open-interval (0, 1) uniforms from words [offset, offset + count)."""
    words = raw_words(seed, stream, step, word_offset + count)[word_offset:]
    return ((words >> _U64(11)).astype(np.float64) + 0.5) * np.float64(2.0 ** -53)


def normals(seed: int, stream: int, step: int, count: int,
            word_offset: int = 0):
    """Standard normals, one word per variate, via the inverse normal CDF."""
    return ndtri(uniforms(seed, stream, step, count, word_offset))
