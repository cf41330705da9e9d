"""Deterministic, schedule-independent random streams.

Every sampled configuration owns a stream keyed by the full coordinate tuple
(seed, trial, target, element, fragment, configuration), so a result never
depends on which worker drew it or in what order.  Keys come from a splitmix64
absorption chain; Gaussian draws map one counter-hashed 64-bit word through the
inverse normal CDF, which keeps ensemble generation fully vectorized.  Binomial
draws (which need a stateful algorithm) seed a PCG64 generator with the same
key.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INIT = 0x243F6A8885A308D3

_U64_GOLDEN = np.uint64(_GOLDEN)
_U64_INIT = np.uint64(_INIT)


def _mix_int(h: int) -> int:
    """splitmix64 finalizer on a Python int."""
    h &= _MASK
    h ^= h >> 30
    h = (h * 0xBF58476D1CE4E5B9) & _MASK
    h ^= h >> 27
    h = (h * 0x94D049BB133111EB) & _MASK
    h ^= h >> 31
    return h


def stream_key(*fields: int) -> int:
    """Absorb integer fields into a 64-bit stream key."""
    h = _INIT
    for f in fields:
        h = _mix_int((h + _GOLDEN + (int(f) & _MASK)) & _MASK)
    return h


def _mix_array(h: np.ndarray) -> np.ndarray:
    h = h.copy()
    h ^= h >> np.uint64(30)
    h *= np.uint64(0xBF58476D1CE4E5B9)
    h ^= h >> np.uint64(27)
    h *= np.uint64(0x94D049BB133111EB)
    h ^= h >> np.uint64(31)
    return h


def stream_keys(*fields) -> np.ndarray:
    """Vectorized stream_key over broadcastable integer arrays."""
    shape = np.broadcast_shapes(*(np.shape(f) for f in fields))
    h = np.full(shape, _U64_INIT, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for f in fields:
            col = np.asarray(f, dtype=np.int64).astype(np.uint64)
            h = _mix_array(h + _U64_GOLDEN + col)
    return h


def uniforms(keys: np.ndarray, counter: int = 0) -> np.ndarray:
    """Open-interval (0,1) uniforms, one per key, at the given draw counter."""
    with np.errstate(over="ignore"):
        h = _mix_array(
            np.asarray(keys, dtype=np.uint64)
            + np.uint64((counter + 1) * _GOLDEN & _MASK)
        )
    return (h >> np.uint64(11)) * 2.0**-53 + 2.0**-54


def normals(keys: np.ndarray, counter: int = 0) -> np.ndarray:
    """Standard normal draws via inverse CDF of the counter-hashed uniform."""
    return ndtri(uniforms(keys, counter))


def generator(key: int) -> np.random.Generator:
    """Stateful generator for draws that need one (binomial mode)."""
    return np.random.Generator(np.random.PCG64(key))
