"""Counter-based deterministic random numbers (SplitMix64).

The generator state is a 64-bit Weyl counter; output i of a stream with
initial state s is mix64(s + i * GAMMA). The compiled kernels implement the
identical arithmetic, so simulation traces are bit-for-bit reproducible
across backends. Per-trial streams are derived from (seed, trial index) so
trial results do not depend on execution order.
"""

from __future__ import annotations

import numpy as np

M64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB
STREAM_SALT = 0xD1B54A32D192ED03

# 2^-53, turning the top 53 bits of a draw into a double in [0, 1)
_INV53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """The SplitMix64 finalizer."""
    z &= M64
    z = ((z ^ (z >> 30)) * MIX_A) & M64
    z = ((z ^ (z >> 27)) * MIX_B) & M64
    return z ^ (z >> 31)


def stream_state(seed: int, index: int) -> int:
    """Initial state of per-trial stream `index` under a master seed."""
    return mix64((seed & M64) ^ mix64((index & M64) ^ STREAM_SALT))


class SplitMix:
    """Scalar generator; one mix per draw."""

    __slots__ = ("state",)

    def __init__(self, state: int) -> None:
        self.state = state & M64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & M64
        return mix64(self.state)

    def below(self, m: int) -> int:
        """Uniform integer in [0, m) via the multiply-shift reduction."""
        if m < 1:
            raise ValueError(f"range must be positive, got {m}")
        return (self.next_u64() * m) >> 64

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * _INV53


def raw_block(state0: int, offset: int, count: int) -> np.ndarray:
    """Draws offset+1 .. offset+count of the stream, vectorized (uint64)."""
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    z = np.uint64(state0 & M64) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_A)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_B)
    return z ^ (z >> np.uint64(31))


def below_block(raws: np.ndarray, ranges: np.ndarray) -> np.ndarray:
    """Vectorized multiply-shift reduction; ranges must fit in 32 bits."""
    if np.any(ranges >> np.uint64(32)):
        raise ValueError("vectorized reduction supports ranges below 2^32 only")
    hi = raws >> np.uint64(32)
    lo = raws & np.uint64(0xFFFFFFFF)
    return ((hi * ranges + ((lo * ranges) >> np.uint64(32))) >> np.uint64(32)).astype(
        np.int64
    )


class DrawStream:
    """Buffered stream serving the same draws as SplitMix, batch-generated."""

    __slots__ = ("state0", "consumed", "_buf", "_pos", "_chunk")

    def __init__(self, state0: int, chunk: int = 4096) -> None:
        self.state0 = state0 & M64
        self.consumed = 0
        self._buf: list[int] = []
        self._pos = 0
        self._chunk = chunk

    def next_u64(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = raw_block(self.state0, self.consumed, self._chunk).tolist()
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        self.consumed += 1
        return value

    def below(self, m: int) -> int:
        if m < 1:
            raise ValueError(f"range must be positive, got {m}")
        return (self.next_u64() * m) >> 64

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * _INV53
