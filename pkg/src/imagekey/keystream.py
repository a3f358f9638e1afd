"""Deterministic key-driven randomness: subkeys, permutations, masks, and codes.

Every generator here is a pure function of (key, label, length, mode). The
stream construction is frozen so that golden vectors stay valid across
platforms and releases:

* subkey derivation:  ``HMAC-SHA256(master, label-utf8)`` (32 bytes)
* byte stream:        counter mode, block ``i`` = ``SHA256(master || b"|ks|" || i_be8)``
* keyed PRF:          ``SHA256(master || b"|prf|" || message)``
* uniform integers:   4-byte big-endian words from the stream, rejection
  sampled below the largest multiple of the bound (no modulo bias)
* bits:               stream bytes unpacked MSB-first

Permutations use the inside-out Fisher-Yates construction and are returned
with 1-based entries: a permutation ``v`` of length n satisfies
``sorted(v) == [1..n]``, and "apply" means ``out[k] = src[v[k]]``.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, InvalidKeyError

MIN_MASTER_BYTES = 16

BERNOULLI_HALF = "bernoulli-half"
BALANCED_EXACT = "balanced-exact"


@dataclass(frozen=True)
class SecretKey:
    """An opaque master secret. Subkeys are derived per label, never reused."""

    master: bytes

    def __post_init__(self):
        if not isinstance(self.master, bytes) or len(self.master) < MIN_MASTER_BYTES:
            raise InvalidKeyError(
                f"master key must be at least {MIN_MASTER_BYTES} bytes"
            )

    @classmethod
    def generate(cls, nbytes: int = 32) -> "SecretKey":
        """Fresh random key from the OS entropy source."""
        return cls(secrets.token_bytes(max(nbytes, MIN_MASTER_BYTES)))

    @classmethod
    def from_seed(cls, seed: str | bytes) -> "SecretKey":
        """Deterministic key from an arbitrary seed string (SHA-256 of the seed)."""
        data = seed.encode("utf-8") if isinstance(seed, str) else seed
        return cls(hashlib.sha256(data).digest())

    @classmethod
    def from_hex(cls, text: str) -> "SecretKey":
        try:
            return cls(bytes.fromhex(text))
        except ValueError as exc:
            raise InvalidKeyError(f"bad hex key material: {exc}") from exc

    def to_hex(self) -> str:
        return self.master.hex()


def derive_subkey(key: SecretKey, label: str) -> SecretKey:
    """Label-separated subkey: HMAC-SHA256(master, label). Deterministic."""
    digest = hmac.new(key.master, label.encode("utf-8"), hashlib.sha256).digest()
    return SecretKey(digest)


def prf_bytes(key: "SecretKey | bytes", message: bytes) -> bytes:
    """Keyed PRF: SHA256(key || "|prf|" || message).

    Accepts raw bytes so the Feistel cipher can use passwords of any length.
    """
    master = key.master if isinstance(key, SecretKey) else key
    return hashlib.sha256(master + b"|prf|" + message).digest()


class KeyStream:
    """Counter-mode byte stream over SHA-256, with helpers for uniform draws.

    Stateful cursor over an unbounded deterministic stream; construct one per
    generated object so outputs never depend on call order.
    """

    def __init__(self, key: SecretKey):
        self._master = key.master
        self._counter = 0
        self._buf = b""

    def take(self, n: int) -> bytes:
        while len(self._buf) < n:
            block = hashlib.sha256(
                self._master + b"|ks|" + self._counter.to_bytes(8, "big")
            ).digest()
            self._counter += 1
            self._buf += block
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def uniform(self, bound: int) -> int:
        """Uniform integer in [0, bound) via 32-bit rejection sampling."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        if bound == 1:
            return 0
        limit = (1 << 32) - ((1 << 32) % bound)
        while True:
            word = int.from_bytes(self.take(4), "big")
            if word < limit:
                return word % bound

    def bits(self, n: int) -> np.ndarray:
        """n stream bits as a uint8 array of 0/1, MSB-first within each byte."""
        raw = np.frombuffer(self.take((n + 7) // 8), dtype=np.uint8)
        return np.unpackbits(raw)[:n]


def gen_permutation(key: SecretKey, n: int) -> np.ndarray:
    """Keyed uniform permutation of {1..n} (inside-out Fisher-Yates).

    Entry semantics follow the shuffle convention out[k] = src[v[k]].
    """
    if n < 1:
        raise ValueError("permutation needs n >= 1")
    stream = KeyStream(key)
    perm = np.empty(n, dtype=np.int64)
    perm[0] = 1
    for i in range(1, n):
        j = stream.uniform(i + 1)
        perm[i] = perm[j]
        perm[j] = i + 1
    return perm


def invert_permutation(perm: np.ndarray) -> np.ndarray:
    """Inverse of a 1-based permutation vector."""
    inv = np.empty_like(perm)
    inv[perm - 1] = np.arange(1, len(perm) + 1)
    return inv


def gen_binary_mask(key: SecretKey, n: int, mode: str = BERNOULLI_HALF) -> np.ndarray:
    """Keyed binary mask of length n as a uint8 array of 0/1.

    ``bernoulli-half``: each bit independent with probability exactly 1/2.
    ``balanced-exact``: exactly ceil(n/2) ones, keyed positions.
    """
    if n < 1:
        raise ValueError("mask needs n >= 1")
    stream = KeyStream(key)
    if mode == BERNOULLI_HALF:
        return stream.bits(n)
    if mode == BALANCED_EXACT:
        ones = (n + 1) // 2
        mask = np.zeros(n, dtype=np.uint8)
        mask[:ones] = 1
        # classic downward Fisher-Yates on the fixed-popcount vector
        for i in range(n - 1, 0, -1):
            j = stream.uniform(i + 1)
            mask[i], mask[j] = mask[j], mask[i]
        return mask
    raise ValueError(f"unknown mask mode: {mode!r}")


def gen_codes(key: SecretKey, n: int, bound: int) -> np.ndarray:
    """n keyed uniform integers in [0, bound) as an int64 array."""
    if n < 1:
        raise ValueError("need n >= 1")
    stream = KeyStream(key)
    return np.array([stream.uniform(bound) for _ in range(n)], dtype=np.int64)


def gen_color_codes(key: SecretKey, n: int) -> np.ndarray:
    """n keyed color-shuffle codes, each uniform over 0..5."""
    return gen_codes(key, n, 6)


def load_key(path) -> SecretKey:
    """Read a key file: a JSON object {"master": "<hex>"}.

    Malformed files raise FormatError; structurally valid files with bad key
    material (non-hex, too short) raise InvalidKeyError.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "master" not in obj:
        raise FormatError(f"{path}: key file must be a JSON object with 'master'")
    return SecretKey.from_hex(obj["master"])


def save_key(key: SecretKey, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"master": key.to_hex()}, fh)
        fh.write("\n")
