"""Deterministic, splittable random numbers.

A counter-based construction: draw ``i`` of stream ``s`` under seed
``k`` is a pure function ``mix64(base(k, s) + i * GOLDEN)`` built from
the splitmix64 finalizer.  Identical ``(seed, stream_index)`` therefore
give an identical sequence on every platform and under any degree of
parallelism, and any draw can be generated without generating its
predecessors.  Gaussians come from the inverse normal CDF applied to
53-bit uniforms (no rejection step, so the draw count per variate is
fixed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import norm_quantile_fast

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_STREAM_GAMMA = np.uint64(0xC2B2AE3D27D4EB4F)
_SEED_SALT = np.uint64(0x8AC7230489E7FFD9)
_CHILD_SALT = np.uint64(0xD1B54A32D192ED03)

_U64 = np.uint64
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


_MASK64 = (1 << 64) - 1


def _mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, elementwise on uint64."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _U64(30)
    z *= _U64(0xBF58476D1CE4E5B9)
    z ^= z >> _U64(27)
    z *= _U64(0x94D049BB133111EB)
    z ^= z >> _U64(31)
    return z


def _mix64_int(z: int) -> int:
    """Same finalizer on a Python int (scalar path, no overflow warnings)."""
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def _stream_base(seed: int, stream_index: int) -> np.uint64:
    key = _mix64_int((seed & _MASK64) ^ int(_SEED_SALT))
    return _U64(_mix64_int(key + (stream_index & _MASK64) * int(_STREAM_GAMMA)))


def derive_stream(stream_index: int, salt: int) -> int:
    """A child stream id, decorrelated from `stream_index` and other salts."""
    z = _mix64_int((stream_index & _MASK64) ^ int(_CHILD_SALT))
    return _mix64_int(z + (salt & _MASK64) * int(_STREAM_GAMMA))


@dataclass
class RngState:
    """Position in one deterministic stream: (seed, stream_index, counter).

    The counter advances as draws are consumed; the triple is plain data
    and can be copied or shipped to worker processes freely.
    """

    seed: int
    stream_index: int = 0
    counter: int = 0

    def child(self, salt: int) -> "RngState":
        """Fresh state on a derived stream (counter reset to 0)."""
        return RngState(self.seed, derive_stream(self.stream_index, salt), 0)


def uniforms(state: RngState, n: int) -> np.ndarray:
    """`n` uniforms on the open interval (0, 1); advances the state."""
    out = uniform_block(state.seed, state.stream_index, state.counter, n)
    state.counter += n
    return out


def gaussians(state: RngState, n: int) -> np.ndarray:
    """`n` standard normal draws via inverse CDF; advances the state."""
    out = gaussian_block(state.seed, state.stream_index, state.counter, n)
    state.counter += n
    return out


def next_gaussian(state: RngState) -> float:
    """One standard normal draw; advances the state by one counter step."""
    return float(gaussians(state, 1)[0])


def uniform_block(seed: int, stream_index: int, offset: int, n: int) -> np.ndarray:
    """Stateless bulk access: draws offset..offset+n-1 of one stream."""
    base = _stream_base(seed, stream_index)
    counters = base + (_U64(offset % (1 << 64)) + np.arange(n, dtype=np.uint64)) * _GOLDEN
    bits = _mix64(counters)
    return ((bits >> _U64(11)).astype(np.float64) + 0.5) * _INV_2_53


def gaussian_block(seed: int, stream_index: int, offset: int, n: int) -> np.ndarray:
    return norm_quantile_fast(uniform_block(seed, stream_index, offset, n))


def gaussian_matrix(seed: int, stream_indices, n: int, offset: int = 0) -> np.ndarray:
    """Matrix of draws: row p holds draws offset..offset+n-1 of stream p.

    Row p is bit-identical to ``gaussian_block(seed, stream_indices[p],
    offset, n)``, so batching over paths never changes a path's draws.
    """
    streams = np.asarray(stream_indices, dtype=np.uint64)
    bases = np.empty(streams.shape, dtype=np.uint64)
    for i, s in enumerate(streams):
        bases[i] = _stream_base(seed, int(s))
    counters = (_U64(offset % (1 << 64)) + np.arange(n, dtype=np.uint64)) * _GOLDEN
    bits = _mix64(bases[:, None] + counters[None, :])
    u = ((bits >> _U64(11)).astype(np.float64) + 0.5) * _INV_2_53
    return norm_quantile_fast(u)


def uniform_matrix(seed: int, stream_indices, n: int, offset: int = 0) -> np.ndarray:
    streams = np.asarray(stream_indices, dtype=np.uint64)
    bases = np.empty(streams.shape, dtype=np.uint64)
    for i, s in enumerate(streams):
        bases[i] = _stream_base(seed, int(s))
    counters = (_U64(offset % (1 << 64)) + np.arange(n, dtype=np.uint64)) * _GOLDEN
    bits = _mix64(bases[:, None] + counters[None, :])
    return ((bits >> _U64(11)).astype(np.float64) + 0.5) * _INV_2_53
