"""Deterministic counter-mode randomness.

Blocks are SHA-256(key || counter) with the key derived from an integer
seed and a path label, so runs are reproducible across platforms and
Python versions.  Values are mapped to bounded ranges by rejection
sampling, which keeps every draw exactly uniform.  Child streams forked
with distinct labels are independent and order-insensitive.
"""

from __future__ import annotations

import hashlib


class SeededStream:
    def __init__(self, seed: int, label: str = ""):
        self.seed = int(seed)
        self.label = label
        self._key = hashlib.sha256(
            b"tracepir:" + str(self.seed).encode() + b"/" + label.encode()
        ).digest()
        self._counter = 0
        self._buffer = 0
        self._bits = 0

    def fork(self, label: str) -> "SeededStream":
        """Independent child stream addressed by a path label."""
        return SeededStream(self.seed, f"{self.label}/{label}")

    def _refill(self):
        block = hashlib.sha256(self._key + self._counter.to_bytes(8, "big")).digest()
        self._counter += 1
        self._buffer |= int.from_bytes(block, "big") << self._bits
        self._bits += 256

    def getbits(self, nbits: int) -> int:
        while self._bits < nbits:
            self._refill()
        value = self._buffer & ((1 << nbits) - 1)
        self._buffer >>= nbits
        self._bits -= nbits
        return value

    def randrange(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        nbits = (bound - 1).bit_length() or 1
        while True:
            value = self.getbits(nbits)
            if value < bound:
                return value

    def randrange_excluding(self, bound: int, excluded: int) -> int:
        """Uniform over [0, bound) minus one excluded value."""
        if bound < 2:
            raise ValueError("need at least two values to exclude one")
        value = self.randrange(bound - 1)
        return value + 1 if value >= excluded else value

    def field_element(self, field):
        """Uniform element of a PrimeField (int) or ExtField (tuple)."""
        if hasattr(field, "s"):
            return tuple(self.randrange(field.q) for _ in range(field.s))
        return self.randrange(field.q)

    def sample(self, n: int, count: int) -> tuple:
        """Uniform `count`-subset of range(n), returned sorted."""
        if count > n:
            raise ValueError("sample larger than population")
        pool = list(range(n))
        picked = []
        for i in range(count):
            j = self.randrange(n - i)
            picked.append(pool.pop(j))
        return tuple(sorted(picked))
