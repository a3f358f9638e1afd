"""Bit-exact binary PGM (P5) and PPM (P6) reading and writing, maxval 255 only."""

from __future__ import annotations

import numpy as np

from .errors import FormatError
from .image import as_image

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _tokens(data: bytes, count: int):
    """Yield `count` header tokens, skipping whitespace and # comments.

    Returns (tokens, offset of first payload byte). Per the netpbm format a
    single whitespace byte separates the last header token from the payload.
    """
    toks = []
    i = 0
    while len(toks) < count:
        if i >= len(data):
            raise FormatError("truncated header")
        ch = data[i : i + 1]
        if ch in _WHITESPACE:
            i += 1
        elif ch == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        else:
            j = i
            while j < len(data) and data[j : j + 1] not in _WHITESPACE:
                j += 1
            toks.append(data[i:j])
            i = j
            if len(toks) == count:
                # exactly one whitespace byte before the raster
                if i >= len(data) or data[i : i + 1] not in _WHITESPACE:
                    raise FormatError("missing whitespace before pixel data")
                i += 1
    return toks, i


def read_image(path) -> np.ndarray:
    """Read a binary PGM/PPM file into a (c, H, W) uint8 image."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] == b"P5":
        channels = 1
    elif data[:2] == b"P6":
        channels = 3
    else:
        raise FormatError(f"{path}: not a binary PGM (P5) or PPM (P6) file")
    toks, offset = _tokens(data[2:], 3)
    try:
        width, height, maxval = (int(t) for t in toks)
    except ValueError as exc:
        raise FormatError(f"{path}: malformed header: {exc}") from exc
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise FormatError(f"{path}: unsupported maxval {maxval} (only 255)")
    payload = data[2 + offset :]
    expected = width * height * channels
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    pixels = np.frombuffer(payload, dtype=np.uint8)
    # file order is row-major, channel-interleaved per pixel
    return np.ascontiguousarray(
        pixels.reshape(height, width, channels).transpose(2, 0, 1)
    )


def write_image(img: np.ndarray, path) -> None:
    """Write a (c, H, W) uint8 image as binary PGM (c=1) or PPM (c=3)."""
    img = as_image(img)
    c, height, width = img.shape
    magic = b"P5" if c == 1 else b"P6"
    header = magic + b"\n%d %d\n255\n" % (width, height)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(img.transpose(1, 2, 0)).tobytes())
