"""Independent scalar replay of the format-preserving cipher and the FFX
image path. Deliberately imports nothing from the package: every hash,
rejection draw, and Feistel round is spelled out here from the frozen
construction, so the two routes can only agree if both are right.

Run as a script to (re)generate the golden-vector CSV:

    python3 tests/fpe_oracle.py src/imagekey/data/fpe_golden.csv
"""

import hashlib
import hmac
import sys

GOLDEN_PASSWORD = b"imagekey fpe golden vectors v1"


def oracle_prf(password: bytes, message: bytes) -> bytes:
    return hashlib.sha256(bytes(password) + b"|prf|" + bytes(message)).digest()


def oracle_round(password: bytes, rnd: int, x: int, modulus: int) -> int:
    digest = oracle_prf(password, b"ffx" + bytes([rnd]) + x.to_bytes(2, "big"))
    return int.from_bytes(digest[:8], "big") % modulus


def oracle_encrypt(password: bytes, value: int, rounds: int = 10) -> int:
    a, b = divmod(value, 100)
    for rnd in range(rounds):
        if rnd % 2 == 0:
            a = (a + oracle_round(password, rnd, b, 10)) % 10
        else:
            b = (b + oracle_round(password, rnd, a, 100)) % 100
    return a * 100 + b


def oracle_decrypt(password: bytes, value: int, rounds: int = 10) -> int:
    a, b = divmod(value, 100)
    for rnd in range(rounds - 1, -1, -1):
        if rnd % 2 == 0:
            a = (a - oracle_round(password, rnd, b, 10)) % 10
        else:
            b = (b - oracle_round(password, rnd, a, 100)) % 100
    return a * 100 + b


class OracleStream:
    """Scalar copy of the counter-mode byte stream and its rejection draw."""

    def __init__(self, master: bytes):
        self.master = master
        self.counter = 0
        self.buf = b""

    def take(self, n: int) -> bytes:
        while len(self.buf) < n:
            block = hashlib.sha256(
                self.master + b"|ks|" + self.counter.to_bytes(8, "big")
            ).digest()
            self.counter += 1
            self.buf += block
        out, self.buf = self.buf[:n], self.buf[n:]
        return out

    def uniform(self, bound: int) -> int:
        if bound == 1:
            return 0
        limit = (1 << 32) - ((1 << 32) % bound)
        while True:
            word = int.from_bytes(self.take(4), "big")
            if word < limit:
                return word % bound


def oracle_subkey(master: bytes, label: str) -> bytes:
    return hmac.new(master, label.encode("utf-8"), hashlib.sha256).digest()


def oracle_balanced_mask(master: bytes, n: int) -> list:
    ones = (n + 1) // 2
    mask = [1] * ones + [0] * (n - ones)
    stream = OracleStream(master)
    for i in range(n - 1, 0, -1):
        j = stream.uniform(i + 1)
        mask[i], mask[j] = mask[j], mask[i]
    return mask


def oracle_ffx_image(pixels, master: bytes, m: int):
    """FFX path on one image, one pixel at a time.

    `pixels` is a (c, H, W) nested int structure; returns the same structure
    of floats in [0, 1]. Walks the image block by block in raster order,
    flattening each block channel-major, exactly as documented.
    """
    c = len(pixels)
    height = len(pixels[0])
    width = len(pixels[0][0])
    subkey = oracle_subkey(master, "FFX")
    mask = oracle_balanced_mask(subkey, c * m * m)
    values = [[[0] * width for _ in range(height)] for _ in range(c)]
    peak = 0
    for top in range(0, height, m):
        for left in range(0, width, m):
            flat_pos = 0
            for ch in range(c):
                for dy in range(m):
                    for dx in range(m):
                        p = pixels[ch][top + dy][left + dx]
                        v = oracle_encrypt(subkey, p) if mask[flat_pos] else p
                        values[ch][top + dy][left + dx] = v
                        peak = max(peak, v)
                        flat_pos += 1
    return [
        [[values[ch][yy][xx] / peak for xx in range(width)] for yy in range(height)]
        for ch in range(c)
    ]


def write_golden_csv(path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("v,enc\n")
        for v in range(1000):
            fh.write(f"{v},{oracle_encrypt(GOLDEN_PASSWORD, v)}\n")


if __name__ == "__main__":
    write_golden_csv(sys.argv[1] if len(sys.argv) > 1 else "fpe_golden.csv")
