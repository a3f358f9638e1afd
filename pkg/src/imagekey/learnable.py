"""Keyed transforms that keep images trainable: pixel-wise encryption and the
block-wise SHF / NEG / FFX family.

All block variants share one key-derived vector across every block of the
image. Blocks are flattened channel-major to length c*M*M, transformed, and
put back, so output dimensions always equal input dimensions:

* SHF: one permutation v (subkey "SHF"); out[k] = in[v[k]] per block.
* NEG: one exactly-balanced binary vector r (subkey "NEG"); positions with
  r[k] = 1 are negated (p -> 255 - p).
* FFX: one balanced vector r (subkey "FFX"); positions with r[k] = 1 go
  through the 3-digit format-preserving cipher, which may exceed 255, and
  the whole image is then divided by its maximum value. The result is a
  float image in [0, 1] and is not invertible (the maximum is not kept).

The pixel-wise transform negates each channel sample independently (subkey
"K3", Bernoulli-half mask of length 3*H*W) and then shuffles the color
components of every pixel (subkey "K4").
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionError, NotInvertibleError
from .fpe import FpeCipher
from .image import MAX_VALUE, as_image, join_blocks, split_blocks
from .keystream import (
    BALANCED_EXACT,
    BERNOULLI_HALF,
    SecretKey,
    derive_subkey,
    gen_binary_mask,
    gen_color_codes,
    gen_permutation,
    invert_permutation,
)

VARIANT_PIXELWISE = "pixelwise"
VARIANT_SHF = "shf"
VARIANT_NEG = "neg"
VARIANT_FFX = "ffx"
VARIANTS = (VARIANT_PIXELWISE, VARIANT_SHF, VARIANT_NEG, VARIANT_FFX)


@dataclass(frozen=True)
class TransformSpec:
    """Transform family, square block size M, and the key."""

    variant: str
    key: SecretKey
    block: int = 1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected {VARIANTS}")
        if self.block < 1:
            raise ValueError("block size must be >= 1")

    def with_key(self, key: SecretKey) -> "TransformSpec":
        return replace(self, key=key)


def _pixelwise_streams(key: SecretKey, c: int, height: int, width: int):
    mask = gen_binary_mask(
        derive_subkey(key, "K3"), c * height * width, BERNOULLI_HALF
    ).reshape(c, height, width)
    codes = gen_color_codes(derive_subkey(key, "K4"), height * width).reshape(
        height, width
    )
    return mask, codes


def _shuffle_pixels(img, codes, invert=False):
    from .etc import COLOR_TABLE  # local import avoids a cycle at module load

    out = np.empty_like(img)
    for code in range(6):
        sel = codes == code
        if np.any(sel):
            order = np.argsort(COLOR_TABLE[code]) if invert else list(COLOR_TABLE[code])
            out[:, sel] = img[order][:, sel]
    return out


def pixelwise_encrypt(img: np.ndarray, key: SecretKey) -> np.ndarray:
    """Per-sample negative-positive transform, then per-pixel color shuffle."""
    img = as_image(img)
    if img.shape[0] != 3:
        raise DimensionError("pixel-wise encryption needs a 3-channel image")
    c, height, width = img.shape
    mask, codes = _pixelwise_streams(key, c, height, width)
    out = img.copy()
    out[mask == 1] ^= MAX_VALUE
    return _shuffle_pixels(out, codes)


def pixelwise_decrypt(img: np.ndarray, key: SecretKey) -> np.ndarray:
    img = as_image(img)
    if img.shape[0] != 3:
        raise DimensionError("pixel-wise decryption needs a 3-channel image")
    c, height, width = img.shape
    mask, codes = _pixelwise_streams(key, c, height, width)
    out = _shuffle_pixels(img, codes, invert=True)
    out[mask == 1] ^= MAX_VALUE
    return out


def _flat_blocks(img: np.ndarray, m: int):
    img = as_image(img)
    c, height, width = img.shape
    blocks = split_blocks(img, m, m)
    return blocks.reshape(len(blocks), c * m * m), (c, height, width)


def _from_flat(flat: np.ndarray, shape, m: int):
    c, height, width = shape
    return join_blocks(flat.reshape(len(flat), c, m, m), height, width)


def ffx_values(img: np.ndarray, spec: TransformSpec) -> np.ndarray:
    """FFX-transformed pixel values before max-normalization (int64, 0..999)."""
    if spec.variant != VARIANT_FFX:
        raise ValueError("spec variant must be 'ffx'")
    flat, shape = _flat_blocks(img, spec.block)
    subkey = derive_subkey(spec.key, "FFX")
    mask = gen_binary_mask(subkey, flat.shape[1], BALANCED_EXACT)
    table = FpeCipher(subkey.master).encrypt_table()
    vals = flat.astype(np.int64)
    vals[:, mask == 1] = table[flat[:, mask == 1]]
    return _from_flat(vals, shape, spec.block)


def block_transform(img: np.ndarray, spec: TransformSpec) -> np.ndarray:
    """Apply the spec's transform; uint8 out for shf/neg/pixelwise, float for ffx."""
    if spec.variant == VARIANT_PIXELWISE:
        return pixelwise_encrypt(img, spec.key)
    if spec.variant == VARIANT_FFX:
        vals = ffx_values(img, spec)
        peak = vals.max()
        if peak == 0:
            raise ValueError("image encrypts to all zeros; maximum undefined")
        return vals / peak
    flat, shape = _flat_blocks(img, spec.block)
    if spec.variant == VARIANT_SHF:
        perm = gen_permutation(derive_subkey(spec.key, "SHF"), flat.shape[1])
        flat = flat[:, perm - 1]
    else:  # NEG
        mask = gen_binary_mask(derive_subkey(spec.key, "NEG"), flat.shape[1], BALANCED_EXACT)
        flat = flat.copy()
        flat[:, mask == 1] ^= MAX_VALUE
    return _from_flat(flat, shape, spec.block)


def block_transform_invert(img: np.ndarray, spec: TransformSpec) -> np.ndarray:
    """Exact inverse for shf/neg/pixelwise; ffx raises (the max is not stored)."""
    if spec.variant == VARIANT_FFX:
        raise NotInvertibleError("ffx discards its pre-normalization maximum")
    if spec.variant == VARIANT_PIXELWISE:
        return pixelwise_decrypt(img, spec.key)
    flat, shape = _flat_blocks(img, spec.block)
    if spec.variant == VARIANT_SHF:
        perm = gen_permutation(derive_subkey(spec.key, "SHF"), flat.shape[1])
        flat = flat[:, invert_permutation(perm) - 1]
    else:
        mask = gen_binary_mask(derive_subkey(spec.key, "NEG"), flat.shape[1], BALANCED_EXACT)
        flat = flat.copy()
        flat[:, mask == 1] ^= MAX_VALUE
    return _from_flat(flat, shape, spec.block)


def position_map(spec: TransformSpec, shape: tuple[int, int, int]):
    """Signed-permutation view of shf/neg/pixelwise (see etc.position_map).

    FFX is not a signed permutation of pixel positions, so it has no map.
    """
    c, height, width = shape
    if spec.variant == VARIANT_FFX:
        raise NotInvertibleError("ffx is not a signed permutation")
    if spec.variant == VARIANT_PIXELWISE:
        if c != 3:
            raise DimensionError("pixel-wise transform maps 3-channel shapes")
        mask, codes = _pixelwise_streams(spec.key, c, height, width)
        idx = np.arange(c * height * width, dtype=np.int64).reshape(shape)
        src = _shuffle_pixels(idx, codes)
        flip = _shuffle_pixels(mask, codes)
        return src.ravel(), flip.ravel()
    idx = np.arange(c * height * width, dtype=np.int64).reshape(shape)
    iflat, _ = _index_blocks(idx, spec.block)
    d = iflat.shape[1]
    if spec.variant == VARIANT_SHF:
        perm = gen_permutation(derive_subkey(spec.key, "SHF"), d)
        src = _from_flat(iflat[:, perm - 1], shape, spec.block)
        flip = np.zeros(c * height * width, dtype=np.uint8)
        return src.ravel(), flip
    mask = gen_binary_mask(derive_subkey(spec.key, "NEG"), d, BALANCED_EXACT)
    src = _from_flat(iflat, shape, spec.block)
    fflat = np.broadcast_to(mask, iflat.shape)
    flip = _from_flat(fflat.copy(), shape, spec.block)
    return src.ravel(), flip.ravel()


def _index_blocks(idx: np.ndarray, m: int):
    c, height, width = idx.shape
    blocks = split_blocks(idx, m, m)
    return blocks.reshape(len(blocks), c * m * m), (c, height, width)
