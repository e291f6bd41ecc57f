import logging
import math
import struct
from functools import lru_cache

import numpy as np

from .schemas import A_RANGE, K_RANGE, CipherKeys, KeySpace

logger = logging.getLogger(__name__)

# A <- (K * A) * (1 - A) in binary64, in exactly that operation order
KEY_SCALE = 1e14
BYTE_MODULUS = 256
STREAM_CACHE_SIZE = 16


class KeystreamState:
    """Evolving logistic-map value plus the number of bytes emitted so far.

    A state is strictly sequential; use one state per thread.
    """

    def __init__(self, keys: CipherKeys):
        self.current = keys.a
        self.k = keys.k
        self.count = 0

    def next_byte(self) -> int:
        """Advance the map once and return the derived byte"""
        self.current = self.k * self.current * (1.0 - self.current)
        self.count += 1
        return int(KEY_SCALE * self.current) % BYTE_MODULUS

    def skip(self, n: int) -> None:
        """Advance n positions, discarding the bytes"""
        if n < 0:
            raise ValueError(f"Cannot skip a negative number of bytes ({n})")
        current, k = self.current, self.k
        for _ in range(n):
            current = k * current * (1.0 - current)
        self.current = current
        self.count += n

    def take(self, n: int) -> np.ndarray:
        """Emit the next n bytes as a uint8 array"""
        out = bytearray(n)
        current, k = self.current, self.k
        for i in range(n):
            current = k * current * (1.0 - current)
            out[i] = int(KEY_SCALE * current) % BYTE_MODULUS
        self.current = current
        self.count += n
        return np.frombuffer(bytes(out), dtype=np.uint8)

    def __repr__(self) -> str:
        return f"KeystreamState(current={self.current!r}, k={self.k!r}, count={self.count})"


def keystream_new(keys: CipherKeys) -> KeystreamState:
    """Start a keystream at the key seed, re-checking the key ranges"""
    # model_construct() skips validation, so run the validators again here
    keys = CipherKeys(a=keys.a, k=keys.k)
    return KeystreamState(keys)


@lru_cache(maxsize=STREAM_CACHE_SIZE)
def _stream_bytes(a: float, k: float, count: int, offset: int) -> bytes:
    logger.debug(f"Generating {count} keystream bytes from position {offset}")
    state = keystream_new(CipherKeys(a=a, k=k))
    state.skip(offset)
    return state.take(count).tobytes()


def generate(keys: CipherKeys, count: int, offset: int = 0) -> np.ndarray:
    """Bytes [offset, offset + count) of the stream seeded by keys, as a read-only array"""
    if count < 0:
        raise ValueError(f"Cannot generate a negative number of bytes ({count})")
    if offset < 0:
        raise ValueError(f"Stream offset must not be negative ({offset})")
    return np.frombuffer(_stream_bytes(keys.a, keys.k, count, offset), dtype=np.uint8)


def _ordinal(value: float) -> int:
    """Position of a non-negative double in the ordered set of doubles"""
    return struct.unpack("<q", struct.pack("<d", value))[0]


def key_space() -> KeySpace:
    """Count the binary64 keys strictly inside the valid A and K ranges"""
    a_values = _ordinal(A_RANGE[1]) - _ordinal(A_RANGE[0]) - 1
    k_values = _ordinal(K_RANGE[1]) - _ordinal(K_RANGE[0]) - 1
    return KeySpace(
        a_values=a_values,
        k_values=k_values,
        bits=math.log2(a_values) + math.log2(k_values),
    )
