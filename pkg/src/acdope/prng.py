"""Seedable deterministic randomness over arbitrary-precision integer ranges.

Stream construction (format "sha256-ctr/1", fixed): the raw byte stream is
the concatenation of SHA-256(seed || block_index) blocks, with the block
index an 8-byte big-endian counter starting at 0.  Seeds are 32 bytes.  The
stream is a pure function of the seed, so draws made while encrypting can be
replayed bit-exactly while decrypting, on any platform.

Generators are single-owner.  Independent streams come from child seeds via
derive_seed(), never from sharing one generator between tasks.
"""

from __future__ import annotations

import hashlib
import hmac
import os
from dataclasses import dataclass
from fractions import Fraction

SEED_BYTES = 32
STREAM_FORMAT = "sha256-ctr/1"

_BLOCK = hashlib.sha256().digest_size


class RangeError(ValueError):
    """uniform_int called with lo > hi."""


class PrecisionError(ValueError):
    """uniform_fraction called with precision_bits < 1."""


@dataclass(frozen=True)
class Seed:
    data: bytes

    def __post_init__(self):
        if len(self.data) != SEED_BYTES:
            raise ValueError(f"seed must be {SEED_BYTES} bytes, got {len(self.data)}")

    @classmethod
    def from_hex(cls, text: str) -> "Seed":
        return cls(bytes.fromhex(text))

    def hex(self) -> str:
        return self.data.hex()


def fresh_seed() -> Seed:
    """A new seed from system entropy (keygen only; everything else derives)."""
    return Seed(os.urandom(SEED_BYTES))


def derive_seed(parent: Seed, label: bytes) -> Seed:
    """Child seed for an independent stream, keyed off the parent."""
    return Seed(hmac.new(parent.data, label, hashlib.sha256).digest())


def seed_from_material(material: bytes) -> Seed:
    """Map arbitrary byte material (e.g. a short user-supplied hex string)
    onto a full-width seed."""
    if len(material) == SEED_BYTES:
        return Seed(material)
    return Seed(hashlib.sha256(material).digest())


class DeterministicGenerator:
    """Byte/integer stream that is a pure function of its seed."""

    __slots__ = ("_seed", "_counter", "_buf", "_pos")

    def __init__(self, seed: Seed):
        self._seed = seed.data
        self._counter = 0
        self._buf = b""
        self._pos = 0

    @classmethod
    def from_seed(cls, seed: Seed) -> "DeterministicGenerator":
        return cls(seed)

    def bytes(self, n: int) -> bytes:
        out = bytearray()
        while n > 0:
            if self._pos >= len(self._buf):
                self._buf = hashlib.sha256(
                    self._seed + self._counter.to_bytes(8, "big")
                ).digest()
                self._counter += 1
                self._pos = 0
            take = min(n, len(self._buf) - self._pos)
            out += self._buf[self._pos : self._pos + take]
            self._pos += take
            n -= take
        return bytes(out)

    def bits(self, k: int) -> int:
        """Uniform integer in [0, 2^k)."""
        if k <= 0:
            return 0
        nbytes = (k + 7) // 8
        v = int.from_bytes(self.bytes(nbytes), "big")
        excess = nbytes * 8 - k
        return v >> excess

    def uniform_int(self, lo: int, hi: int) -> int:
        """Exactly uniform on [lo, hi] via rejection sampling (no modulo bias)."""
        if lo > hi:
            raise RangeError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        if span == 1:
            return lo
        k = (span - 1).bit_length()
        while True:
            v = self.bits(k)
            if v < span:
                return lo + v

    def uniform_fraction(self, precision_bits: int) -> Fraction:
        """Dyadic rational j / 2^precision_bits, j uniform on [0, 2^precision_bits).

        Always strictly below 1; never a binary float.
        """
        if precision_bits < 1:
            raise PrecisionError("precision_bits must be >= 1")
        return Fraction(self.bits(precision_bits), 1 << precision_bits)
