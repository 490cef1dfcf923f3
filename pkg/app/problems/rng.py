"""Deterministic splitmix64 streams with named substreams for instance generation."""

from __future__ import annotations
import hashlib
import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def _mix_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MUL1) & _MASK
    z = ((z ^ (z >> 27)) * _MUL2) & _MASK
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps modulo 2**64
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


def _tag_key(tag: str) -> int:
    digest = hashlib.sha256(tag.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], byteorder="big")


class SplitMixStream:
    """Counter-based stream keyed by (seed, purpose tag).

    Draw number c of the stream is mix(key + (c + 1) * golden); uniforms use
    the top 53 bits, so they lie in [0, 1).
    """

    def __init__(self, seed: int, tag: str) -> None:
        self.seed = int(seed)
        self.tag = tag
        self._key = _mix_int((self.seed & _MASK) ^ _tag_key(tag))
        self._counter = 0

    def next_uint64(self, count: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + count + 1, dtype=np.uint64)
        self._counter += count
        return _mix_array(np.uint64(self._key) + idx * np.uint64(_GOLDEN))

    def uniform(self, shape) -> np.ndarray:
        size = int(np.prod(shape))
        bits = self.next_uint64(size) >> np.uint64(11)
        return (bits.astype(np.float64) * 2.0 ** -53).reshape(shape)
