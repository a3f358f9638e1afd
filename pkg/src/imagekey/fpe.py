"""Format-preserving encryption over 3-digit decimal numerals (0..999).

The construction is an alternating unbalanced Feistel network on the digit
split v = A*100 + B with A one digit and B two digits, frozen as follows so
that ciphertexts are reproducible everywhere:

* 10 rounds by default; round i modifies A when i is even, B when i is odd:

      even i:  A <- (A + F(i, B)) mod 10
      odd  i:  B <- (B + F(i, A)) mod 100

* the round function F(i, x) reduces the keystream PRF
  ``SHA256(password || "|prf|" || "ffx" || i_byte || x_be2)`` taken as a
  big-endian 64-bit integer, modulo 10 or 100.

Each round adds an invertible amount to one half, so encryption is a
bijection on {0..999}; decryption subtracts in reverse round order. Round
values over the tiny domains are precomputed per cipher, making exhaustive
sweeps cheap.
"""

from __future__ import annotations

import numpy as np

from .keystream import SecretKey, derive_subkey, prf_bytes

DOMAIN = 1000
DEFAULT_ROUNDS = 10

# password behind the shipped golden-vector file (data/fpe_golden.csv)
GOLDEN_PASSWORD = b"imagekey fpe golden vectors v1"


def _round_value(password: bytes, rnd: int, x: int, modulus: int) -> int:
    msg = b"ffx" + bytes([rnd]) + x.to_bytes(2, "big")
    digest = prf_bytes(password, msg)
    return int.from_bytes(digest[:8], "big") % modulus


class FpeCipher:
    """Keyed bijection on {0..999}; immutable after construction."""

    def __init__(self, password: bytes, rounds: int = DEFAULT_ROUNDS):
        if not password:
            raise ValueError("password must be non-empty")
        self.password = bytes(password)
        self.rounds = rounds
        # per-round lookup tables: even rounds map B (0..99) to a digit
        # increment, odd rounds map A (0..9) to a two-digit increment
        self._tables = []
        for rnd in range(rounds):
            if rnd % 2 == 0:
                table = [_round_value(self.password, rnd, b, 10) for b in range(100)]
            else:
                table = [_round_value(self.password, rnd, a, 100) for a in range(10)]
            self._tables.append(table)

    @classmethod
    def from_key(cls, key: SecretKey, label: str = "FFX", rounds: int = DEFAULT_ROUNDS):
        return cls(derive_subkey(key, label).master, rounds)

    def encrypt(self, value: int) -> int:
        if not 0 <= value < DOMAIN:
            raise ValueError(f"value {value} outside 0..{DOMAIN - 1}")
        a, b = divmod(value, 100)
        for rnd in range(self.rounds):
            if rnd % 2 == 0:
                a = (a + self._tables[rnd][b]) % 10
            else:
                b = (b + self._tables[rnd][a]) % 100
        return a * 100 + b

    def decrypt(self, value: int) -> int:
        if not 0 <= value < DOMAIN:
            raise ValueError(f"value {value} outside 0..{DOMAIN - 1}")
        a, b = divmod(value, 100)
        for rnd in range(self.rounds - 1, -1, -1):
            if rnd % 2 == 0:
                a = (a - self._tables[rnd][b]) % 10
            else:
                b = (b - self._tables[rnd][a]) % 100
        return a * 100 + b

    def encrypt_table(self) -> np.ndarray:
        """enc(v) for all v in 0..999 as an int64 array (handy for images)."""
        return np.array([self.encrypt(v) for v in range(DOMAIN)], dtype=np.int64)


def fpe_encrypt(value: int, cipher: FpeCipher) -> int:
    return cipher.encrypt(value)


def fpe_decrypt(value: int, cipher: FpeCipher) -> int:
    return cipher.decrypt(value)
