"""Block-scrambling image encryption (color and grayscale variants) and its
key-space calculator.

The color cipher applies four keyed steps to the block sequence of an RGB
image: block scrambling (subkey K1), per-block rotation/inversion (K2),
per-block negative-positive transform shared by all three channels (K3), and
per-block color-component shuffling (K4). Decryption runs the exact inverses
in reverse order, so ``decrypt(encrypt(x)) == x`` bit-exactly.

The grayscale variants first pack the three RGB channels into one tall
single-channel image, either directly (``grayscale-rgb``, lossless) or via
full-range BT.601 YCbCr (``grayscale-ycbcr``, round trip within +/-1 per
channel), then apply steps K1-K3 only. A single-channel input is treated as
already packed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .image import MAX_VALUE, as_image, join_blocks, split_blocks
from .keystream import (
    BERNOULLI_HALF,
    SecretKey,
    derive_subkey,
    gen_binary_mask,
    gen_codes,
    gen_color_codes,
    gen_permutation,
)

VARIANT_COLOR = "color"
VARIANT_GRAY_RGB = "grayscale-rgb"
VARIANT_GRAY_YCBCR = "grayscale-ycbcr"
VARIANTS = (VARIANT_COLOR, VARIANT_GRAY_RGB, VARIANT_GRAY_YCBCR)

# Output channel composition per color-shuffle code: row k lists, for each
# output channel (R', G', B'), the source channel index it takes.
COLOR_TABLE = (
    (0, 1, 2),  # R G B
    (0, 2, 1),  # R B G
    (1, 0, 2),  # G R B
    (1, 2, 0),  # G B R
    (2, 0, 1),  # B R G
    (2, 1, 0),  # B G R
)

# Dihedral code = 4*flip + quarter_turns: rotate clockwise by 90deg
# `quarter_turns` times, then mirror left-right if `flip`. Code 0 is the
# identity; reflections (codes 4..7) are involutions.
DIHEDRAL_INVERSE = (0, 3, 2, 1, 4, 5, 6, 7)

STEP_SCRAMBLE = "scramble"
STEP_ROTATE = "rotate"
STEP_NEGPOS = "negpos"
STEP_COLOR = "color"
ALL_STEPS = (STEP_SCRAMBLE, STEP_ROTATE, STEP_NEGPOS, STEP_COLOR)


@dataclass(frozen=True)
class EtcConfig:
    """Which cipher variant to run, its block size, and the key.

    `steps` selects which of the four keyed steps run (all by default);
    they always execute in the canonical scramble/rotate/negpos/color
    order no matter how the tuple is written. The subkey for each step is
    independent of the selection, so dropping a step never reshuffles the
    others. Grayscale variants ignore the color step.
    """

    variant: str
    bx: int
    by: int
    key: SecretKey
    steps: tuple = ALL_STEPS

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected {VARIANTS}")
        if self.bx < 1 or self.by < 1:
            raise DimensionError("block dimensions must be >= 1")
        unknown = set(self.steps) - set(ALL_STEPS)
        if unknown:
            raise ValueError(f"unknown steps {sorted(unknown)}, expected {ALL_STEPS}")
        ordered = tuple(s for s in ALL_STEPS if s in set(self.steps))
        object.__setattr__(self, "steps", ordered)


@dataclass(frozen=True)
class KeySpaceReport:
    n: int
    log2_keyspace: float


def negpos(value, bit, bits: int = 8):
    """Negative-positive transform: XOR with 2^bits - 1 when bit is 1.

    Works on scalars and arrays; for 8-bit values this is p -> 255 - p.
    """
    top = (1 << bits) - 1
    arr = np.asarray(value)
    if np.any(arr > top) or np.any(arr < 0):
        raise ValueError(f"value out of range for {bits}-bit transform")
    out = np.where(np.asarray(bit) == 1, arr ^ top, arr)
    return out if out.ndim else out[()]


def color_shuffle(rgb, code: int):
    """Permute the three color components along the first axis.

    Accepts a length-3 triple or any (3, ...) array.
    """
    arr = np.asarray(rgb)
    if arr.shape[0] != 3:
        raise DimensionError("color_shuffle expects 3 components on axis 0")
    return arr[list(COLOR_TABLE[code])]


def color_unshuffle(rgb, code: int):
    inverse = np.argsort(COLOR_TABLE[code])
    return np.asarray(rgb)[list(inverse)]


def dihedral_apply(block: np.ndarray, code: int) -> np.ndarray:
    """Apply one of the 8 square symmetries to the last two axes."""
    if not 0 <= code <= 7:
        raise ValueError(f"dihedral code must be 0..7, got {code}")
    arr = np.asarray(block)
    turns = code % 4
    if turns % 2 and arr.shape[-2] != arr.shape[-1]:
        raise DimensionError("quarter-turn rotation needs square blocks")
    out = np.rot90(arr, k=-turns, axes=(-2, -1))
    if code >= 4:
        out = out[..., ::-1]
    return np.ascontiguousarray(out)


def dihedral_inverse(code: int) -> int:
    return DIHEDRAL_INVERSE[code]


def scramble_blocks(blocks: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Gather semantics: output block k is input block perm[k] (1-based)."""
    return blocks[perm - 1]


def unscramble_blocks(blocks: np.ndarray, perm: np.ndarray) -> np.ndarray:
    out = np.empty_like(blocks)
    out[perm - 1] = blocks
    return out


def _dihedral_blocks(blocks, codes, invert=False):
    out = np.empty_like(blocks)
    for code in range(8):
        sel = codes == code
        if np.any(sel):
            eff = dihedral_inverse(code) if invert else code
            out[sel] = dihedral_apply(blocks[sel], eff)
    return out


def _color_blocks(blocks, codes, invert=False):
    out = np.empty_like(blocks)
    for code in range(6):
        sel = codes == code
        if np.any(sel):
            order = np.argsort(COLOR_TABLE[code]) if invert else list(COLOR_TABLE[code])
            out[sel] = blocks[sel][:, order]
    return out


def _streams(cfg: EtcConfig, n: int, with_color: bool):
    perm = gen_permutation(derive_subkey(cfg.key, "K1"), n)
    rotcodes = gen_codes(derive_subkey(cfg.key, "K2"), n, 8)
    mask = gen_binary_mask(derive_subkey(cfg.key, "K3"), n, BERNOULLI_HALF)
    colcodes = gen_color_codes(derive_subkey(cfg.key, "K4"), n) if with_color else None
    return perm, rotcodes, mask, colcodes


def _require_square(cfg: EtcConfig):
    # rotation mixes rows and columns, so it needs square blocks
    if STEP_ROTATE in cfg.steps and cfg.bx != cfg.by:
        raise DimensionError("rotation step needs square blocks (bx == by)")


def encrypt_color(img: np.ndarray, cfg: EtcConfig) -> np.ndarray:
    if cfg.variant != VARIANT_COLOR:
        raise ValueError(f"config variant is {cfg.variant!r}, expected 'color'")
    _require_square(cfg)
    img = as_image(img)
    if img.shape[0] != 3:
        raise DimensionError("color encryption needs a 3-channel image")
    _, height, width = img.shape
    blocks = split_blocks(img, cfg.by, cfg.bx)
    perm, rotcodes, mask, colcodes = _streams(cfg, len(blocks), with_color=True)
    if STEP_SCRAMBLE in cfg.steps:
        blocks = scramble_blocks(blocks, perm)
    if STEP_ROTATE in cfg.steps:
        blocks = _dihedral_blocks(blocks, rotcodes)
    if STEP_NEGPOS in cfg.steps:
        blocks[mask == 1] ^= MAX_VALUE
    if STEP_COLOR in cfg.steps:
        blocks = _color_blocks(blocks, colcodes)
    return join_blocks(blocks, height, width)


def decrypt_color(img: np.ndarray, cfg: EtcConfig) -> np.ndarray:
    if cfg.variant != VARIANT_COLOR:
        raise ValueError(f"config variant is {cfg.variant!r}, expected 'color'")
    _require_square(cfg)
    img = as_image(img)
    if img.shape[0] != 3:
        raise DimensionError("color decryption needs a 3-channel image")
    _, height, width = img.shape
    blocks = split_blocks(img, cfg.by, cfg.bx)
    perm, rotcodes, mask, colcodes = _streams(cfg, len(blocks), with_color=True)
    if STEP_COLOR in cfg.steps:
        blocks = _color_blocks(blocks, colcodes, invert=True)
    if STEP_NEGPOS in cfg.steps:
        blocks[mask == 1] ^= MAX_VALUE
    if STEP_ROTATE in cfg.steps:
        blocks = _dihedral_blocks(blocks, rotcodes, invert=True)
    if STEP_SCRAMBLE in cfg.steps:
        blocks = unscramble_blocks(blocks, perm)
    return join_blocks(blocks, height, width)


def pack_grayscale_rgb(img: np.ndarray) -> np.ndarray:
    """Stack the R, G, B planes vertically into one (1, 3H, W) image."""
    img = as_image(img)
    if img.shape[0] != 3:
        raise DimensionError("packing needs a 3-channel image")
    return img.reshape(1, 3 * img.shape[1], img.shape[2])


def unpack_grayscale_rgb(img: np.ndarray) -> np.ndarray:
    img = as_image(img)
    if img.shape[0] != 1 or img.shape[1] % 3:
        raise DimensionError("packed image must be single-channel with H divisible by 3")
    return img.reshape(3, img.shape[1] // 3, img.shape[2])


def _round_clip(values: np.ndarray) -> np.ndarray:
    # round half away from zero; on the clamped 0..255 range floor(x + 0.5)
    # is identical and branch-free
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


def rgb_to_ycbcr(img: np.ndarray) -> np.ndarray:
    """Full-range BT.601 forward transform with round-half-away-from-zero."""
    img = as_image(img)
    if img.shape[0] != 3:
        raise DimensionError("conversion needs a 3-channel image")
    r, g, b = img.astype(np.float64)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b
    return np.stack([_round_clip(y), _round_clip(cb), _round_clip(cr)])


def ycbcr_to_rgb(img: np.ndarray) -> np.ndarray:
    img = as_image(img)
    if img.shape[0] != 3:
        raise DimensionError("conversion needs a 3-channel image")
    y, cb, cr = img.astype(np.float64)
    r = y + 1.402 * (cr - 128.0)
    g = y - 0.344136 * (cb - 128.0) - 0.714136 * (cr - 128.0)
    b = y + 1.772 * (cb - 128.0)
    return np.stack([_round_clip(r), _round_clip(g), _round_clip(b)])


def pack_grayscale_ycbcr(img: np.ndarray) -> np.ndarray:
    """Convert to YCbCr, then stack Y, Cb, Cr vertically into (1, 3H, W)."""
    return pack_grayscale_rgb(rgb_to_ycbcr(img))


def unpack_grayscale_ycbcr(img: np.ndarray) -> np.ndarray:
    return ycbcr_to_rgb(unpack_grayscale_rgb(img))


def _pack(img: np.ndarray, cfg: EtcConfig) -> np.ndarray:
    img = as_image(img)
    if img.shape[0] == 1:
        return img  # already packed
    if cfg.variant == VARIANT_GRAY_RGB:
        return pack_grayscale_rgb(img)
    return pack_grayscale_ycbcr(img)


def encrypt_grayscale(img: np.ndarray, cfg: EtcConfig) -> np.ndarray:
    """Steps K1-K3 on the packed single-channel image; output has c=1."""
    if cfg.variant not in (VARIANT_GRAY_RGB, VARIANT_GRAY_YCBCR):
        raise ValueError(f"config variant is {cfg.variant!r}, expected a grayscale one")
    _require_square(cfg)
    packed = _pack(img, cfg)
    _, height, width = packed.shape
    blocks = split_blocks(packed, cfg.by, cfg.bx)
    perm, rotcodes, mask, _ = _streams(cfg, len(blocks), with_color=False)
    if STEP_SCRAMBLE in cfg.steps:
        blocks = scramble_blocks(blocks, perm)
    if STEP_ROTATE in cfg.steps:
        blocks = _dihedral_blocks(blocks, rotcodes)
    if STEP_NEGPOS in cfg.steps:
        blocks[mask == 1] ^= MAX_VALUE
    return join_blocks(blocks, height, width)


def decrypt_grayscale(img: np.ndarray, cfg: EtcConfig, unpack: bool = True) -> np.ndarray:
    """Invert steps K3-K1; with `unpack`, also undo the channel packing.

    Unpacking is exact for grayscale-rgb and within +/-1 per channel for
    grayscale-ycbcr (the color transform rounds); the cipher itself is
    bijective on the packed image either way.
    """
    if cfg.variant not in (VARIANT_GRAY_RGB, VARIANT_GRAY_YCBCR):
        raise ValueError(f"config variant is {cfg.variant!r}, expected a grayscale one")
    _require_square(cfg)
    img = as_image(img)
    if img.shape[0] != 1:
        raise DimensionError("grayscale decryption expects a single-channel image")
    _, height, width = img.shape
    blocks = split_blocks(img, cfg.by, cfg.bx)
    perm, rotcodes, mask, _ = _streams(cfg, len(blocks), with_color=False)
    if STEP_NEGPOS in cfg.steps:
        blocks[mask == 1] ^= MAX_VALUE
    if STEP_ROTATE in cfg.steps:
        blocks = _dihedral_blocks(blocks, rotcodes, invert=True)
    if STEP_SCRAMBLE in cfg.steps:
        blocks = unscramble_blocks(blocks, perm)
    packed = join_blocks(blocks, height, width)
    if not unpack:
        return packed
    if cfg.variant == VARIANT_GRAY_RGB:
        return unpack_grayscale_rgb(packed)
    return unpack_grayscale_ycbcr(packed)


def encrypt(img: np.ndarray, cfg: EtcConfig) -> np.ndarray:
    """Variant dispatch for the three ciphers."""
    if cfg.variant == VARIANT_COLOR:
        return encrypt_color(img, cfg)
    return encrypt_grayscale(img, cfg)


def decrypt(img: np.ndarray, cfg: EtcConfig, **kwargs) -> np.ndarray:
    if cfg.variant == VARIANT_COLOR:
        return decrypt_color(img, cfg)
    return decrypt_grayscale(img, cfg, **kwargs)


def position_map(cfg: EtcConfig, shape: tuple[int, int, int]):
    """The cipher's action as a signed permutation of flat pixel positions.

    For an input of the given (c, H, W) shape -- the packed shape for the
    grayscale variants -- returns (src, flip) flat arrays such that

        encrypted.ravel()[k] == negpos(plain.ravel()[src[k]], flip[k])

    Replays the real pipeline steps on an index array, so it stays in sync
    with the cipher by construction.
    """
    c, height, width = shape
    with_color = cfg.variant == VARIANT_COLOR
    if with_color and c != 3:
        raise DimensionError("color cipher maps 3-channel shapes")
    if not with_color and c != 1:
        raise DimensionError("grayscale cipher maps packed single-channel shapes")
    _require_square(cfg)
    idx = np.arange(c * height * width, dtype=np.int64).reshape(shape)
    flp = np.zeros(shape, dtype=np.uint8)
    iblocks = split_blocks(idx, cfg.by, cfg.bx)
    fblocks = split_blocks(flp, cfg.by, cfg.bx)
    perm, rotcodes, mask, colcodes = _streams(cfg, len(iblocks), with_color)
    if STEP_SCRAMBLE in cfg.steps:
        iblocks = scramble_blocks(iblocks, perm)
    if STEP_ROTATE in cfg.steps:
        iblocks = _dihedral_blocks(iblocks, rotcodes)
    if STEP_NEGPOS in cfg.steps:
        # flips start all-zero, so scramble/rotate on them are no-ops and
        # the mask lands directly on the post-scramble block slots
        fblocks[mask == 1] ^= 1
    if with_color and STEP_COLOR in cfg.steps:
        iblocks = _color_blocks(iblocks, colcodes)
        fblocks = _color_blocks(fblocks, colcodes)
    src = join_blocks(iblocks, height, width).ravel()
    flip = join_blocks(fblocks, height, width).ravel()
    return src, flip


def keyspace_color(x: int, y: int, bx: int, by: int) -> KeySpaceReport:
    """Brute-force key space of the color cipher, in bits.

    n = floor((X/Bx) * (Y/By)) blocks; the space counts n! block orderings
    times 8^n rotations/inversions, 2^n negative-positive choices, and 6^n
    color shuffles. Evaluated through log-gamma, so it never overflows.
    """
    if bx < 1 or by < 1:
        raise DimensionError("block dimensions must be >= 1")
    if x < 1 or y < 1:
        raise DimensionError("image dimensions must be >= 1")
    n = math.floor((x / bx) * (y / by))
    log2_perm = math.lgamma(n + 1) / math.log(2)
    log2_rest = n * (math.log2(8) + math.log2(2) + math.log2(6))
    return KeySpaceReport(n=n, log2_keyspace=log2_perm + log2_rest)
