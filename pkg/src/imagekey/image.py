"""Image representation, block partitioning, and flattening conventions.

Images are numpy uint8 arrays of shape (channels, height, width) with
channels in {1, 3} and 8-bit depth. Flattening is always C-order on that
layout, i.e. planar/channel-major: every pixel of channel 0 in row-major
order, then channel 1, then channel 2. Blocks of a partitioned image come
back in raster order (block rows top to bottom, blocks left to right).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

BIT_DEPTH = 8
MAX_VALUE = (1 << BIT_DEPTH) - 1


def as_image(arr) -> np.ndarray:
    """Validate and return an image as a (c, H, W) uint8 array.

    Accepts (H, W) for grayscale and promotes it to (1, H, W).
    """
    a = np.asarray(arr)
    if a.ndim == 2:
        a = a[np.newaxis, :, :]
    if a.ndim != 3 or a.shape[0] not in (1, 3):
        raise DimensionError(f"expected (c, H, W) with c in {{1,3}}, got {a.shape}")
    if a.size == 0:
        raise DimensionError("empty image")
    if a.dtype != np.uint8:
        if np.any((a < 0) | (a > MAX_VALUE)):
            raise ValueError(f"pixel values must be in 0..{MAX_VALUE}")
        a = a.astype(np.uint8)
    return a


def block_counts(height: int, width: int, by: int, bx: int) -> tuple[int, int]:
    """Blocks per axis, requiring exact divisibility (no silent cropping)."""
    if by < 1 or bx < 1:
        raise DimensionError("block dimensions must be >= 1")
    if height % by or width % bx:
        raise DimensionError(
            f"image {height}x{width} is not divisible into {by}x{bx} blocks"
        )
    return height // by, width // bx


def split_blocks(arr: np.ndarray, by: int, bx: int) -> np.ndarray:
    """Raster-order block view of any (c, H, W) array; dtype is preserved."""
    c, height, width = arr.shape
    rows, cols = block_counts(height, width, by, bx)
    blocks = arr.reshape(c, rows, by, cols, bx)
    # (row, col, channel, y, x) then collapse the grid axes
    return np.ascontiguousarray(blocks.transpose(1, 3, 0, 2, 4)).reshape(
        rows * cols, c, by, bx
    )


def join_blocks(blocks: np.ndarray, height: int, width: int) -> np.ndarray:
    """Inverse of :func:`split_blocks` for the given target size."""
    n, c, by, bx = blocks.shape
    rows, cols = block_counts(height, width, by, bx)
    if rows * cols != n:
        raise DimensionError(f"{n} blocks cannot tile a {height}x{width} image")
    grid = blocks.reshape(rows, cols, c, by, bx).transpose(2, 0, 3, 1, 4)
    return np.ascontiguousarray(grid).reshape(c, height, width)


def partition(img: np.ndarray, bx: int, by: int) -> np.ndarray:
    """Split an image into its raster-order block sequence.

    Returns an array of shape (n, c, by, bx) where n = (H/by) * (W/bx).
    """
    return split_blocks(as_image(img), by, bx)


def reassemble(blocks: np.ndarray, height: int, width: int) -> np.ndarray:
    """Inverse of :func:`partition` for the given target image size."""
    return join_blocks(blocks, height, width)


def flatten_block(block: np.ndarray) -> np.ndarray:
    """Flatten a (c, by, bx) block to a length c*by*bx vector, channel-major."""
    if block.ndim != 3:
        raise DimensionError(f"expected (c, by, bx) block, got shape {block.shape}")
    return block.reshape(-1)


def unflatten_block(flat: np.ndarray, c: int, by: int, bx: int) -> np.ndarray:
    flat = np.asarray(flat)
    if flat.size != c * by * bx:
        raise DimensionError(
            f"flat length {flat.size} does not match block shape ({c},{by},{bx})"
        )
    return flat.reshape(c, by, bx)
