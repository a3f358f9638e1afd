"""Analytic checks that keyed transforms preserve what classical ML consumes:
pairwise Euclidean distances, inner products, and per-feature orderings.

A dataset here is simply a matrix X of shape (N, d) holding one flattened
image per row (see :func:`vectorize`), with labels in a parallel sequence.
Distance and inner-product computations stay in int64 whenever both sides
are integer images, so "preserved exactly" is checked in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import etc, learnable
from .errors import DimensionError
from .etc import EtcConfig
from .image import as_image
from .learnable import TransformSpec


def vectorize(img: np.ndarray) -> np.ndarray:
    """Flatten an image to a feature vector: (p(0,0), ..., p(H-1,W-1)) per
    channel, channel-major. Integer images become int64, floats float64."""
    arr = np.asarray(img)
    if np.issubdtype(arr.dtype, np.integer):
        return arr.reshape(-1).astype(np.int64)
    return arr.reshape(-1).astype(np.float64)


def euclid_dist2(x: np.ndarray, y: np.ndarray):
    """Squared Euclidean distance ||x - y||^2."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise DimensionError(f"length mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    return np.dot(diff, diff)


def inner(x: np.ndarray, y: np.ndarray):
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise DimensionError(f"length mismatch: {x.shape} vs {y.shape}")
    return np.dot(x, y)


def zscore(X: np.ndarray) -> np.ndarray:
    """Per-feature standardization to mean 0 and population std 1.

    Features with zero variance map to 0 rather than raising.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or len(X) < 2:
        raise DimensionError("zscore needs an (N, d) matrix with N >= 2")
    mean = X.mean(axis=0)
    std = X.std(axis=0)  # population (1/N) per the normalization definition
    centered = X - mean
    out = np.zeros_like(centered)
    nz = std > 0
    out[:, nz] = centered[:, nz] / std[nz]
    return out


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2)."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    return float(np.exp(-gamma * euclid_dist2(np.asarray(x, float), np.asarray(y, float))))


def poly_kernel(x: np.ndarray, y: np.ndarray, degree: int) -> float:
    """(1 + x.y)^degree."""
    if not isinstance(degree, (int, np.integer)) or degree < 1:
        raise ValueError("degree must be an integer >= 1")
    return float((1.0 + inner(np.asarray(x, float), np.asarray(y, float))) ** degree)


def rbf_gram(X: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise RBF kernel matrix of the rows of X."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    X = np.asarray(X, dtype=np.float64)
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    return np.exp(-gamma * np.maximum(d2, 0.0))


def poly_gram(X: np.ndarray, degree: int) -> np.ndarray:
    if not isinstance(degree, (int, np.integer)) or degree < 1:
        raise ValueError("degree must be an integer >= 1")
    X = np.asarray(X, dtype=np.float64)
    return (1.0 + X @ X.T) ** degree


def knn_classify(train_X: np.ndarray, train_y, query: np.ndarray, k: int):
    """Majority label among the k nearest training rows (squared distance).

    Neighbor ties at equal distance go to the lower sample index; vote ties
    go to the label whose best neighbor ranks first, then to the smaller
    label. Deterministic by construction.
    """
    train_X = np.asarray(train_X)
    if train_X.ndim != 2 or len(train_X) == 0:
        raise DimensionError("training set must be a non-empty (N, d) matrix")
    if not 1 <= k <= len(train_X):
        raise ValueError(f"k must be in 1..{len(train_X)}")
    diff = train_X.astype(np.float64) - np.asarray(query, dtype=np.float64)
    d2 = np.einsum("ij,ij->i", diff, diff)
    order = np.argsort(d2, kind="stable")
    counts: dict = {}
    first_rank: dict = {}
    for rank, idx in enumerate(order[:k]):
        label = train_y[idx]
        counts[label] = counts.get(label, 0) + 1
        first_rank.setdefault(label, rank)
    return min(counts, key=lambda lbl: (-counts[lbl], first_rank[lbl], lbl))


def knn_predict(train_X: np.ndarray, train_y, queries: np.ndarray, k: int) -> list:
    return [knn_classify(train_X, train_y, q, k) for q in np.asarray(queries)]


def knn_accuracy(train_X, train_y, test_X, test_y, k: int) -> float:
    preds = knn_predict(train_X, train_y, test_X, k)
    return float(np.mean([p == t for p, t in zip(preds, test_y)]))


def apply_transform(img: np.ndarray, transform) -> np.ndarray:
    """Run either cipher family on one image."""
    if isinstance(transform, EtcConfig):
        return etc.encrypt(img, transform)
    if isinstance(transform, TransformSpec):
        return learnable.block_transform(img, transform)
    raise TypeError(f"unsupported transform {type(transform).__name__}")


def with_key(transform, key):
    """The same transform under a different key."""
    from dataclasses import replace

    return replace(transform, key=key)


def signed_position_map(transform, shape):
    """(src, flip) when the transform acts as a signed permutation on the
    flat coordinates of inputs with this shape, else None.

    The grayscale-rgb packing is a pure reshape, so its map stays valid for
    3-channel inputs; the YCbCr packing changes values and has no map unless
    the input is already packed (c = 1). FFX has no map at all.
    """
    c = shape[0]
    if isinstance(transform, TransformSpec):
        if transform.variant == learnable.VARIANT_FFX:
            return None
        return learnable.position_map(transform, shape)
    if isinstance(transform, EtcConfig):
        if transform.variant == etc.VARIANT_COLOR:
            return etc.position_map(transform, shape)
        if c == 1:
            return etc.position_map(transform, shape)
        if transform.variant == etc.VARIANT_GRAY_RGB:
            packed = (1, 3 * shape[1], shape[2])
            return etc.position_map(transform, packed)
        return None
    raise TypeError(f"unsupported transform {type(transform).__name__}")


@dataclass
class PropertyReport:
    """Worst-case deviations of the ML-relevant quantities over a dataset."""

    max_abs_distance_dev: float
    max_abs_inner_dev: float
    max_rel_inner_dev_zscored: float
    order_preserved: bool | None
    features_preserved: int = 0
    features_reversed: int = 0
    features_violating: int = 0
    order_per_feature: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "max_abs_distance_dev": self.max_abs_distance_dev,
            "max_abs_inner_dev": self.max_abs_inner_dev,
            "max_rel_inner_dev_zscored": self.max_rel_inner_dev_zscored,
            "order_preserved": self.order_preserved,
            "features_preserved": self.features_preserved,
            "features_reversed": self.features_reversed,
            "features_violating": self.features_violating,
        }


def _gram(X: np.ndarray) -> np.ndarray:
    return X @ X.T


def _pair_dist2(X: np.ndarray) -> np.ndarray:
    g = _gram(X)
    diag = np.diagonal(g)
    return diag[:, None] + diag[None, :] - 2 * g


def _rank_pattern_match(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Per column: does B carry exactly A's cross-sample ordering (with the
    same tie structure)? Returns a boolean per feature."""
    order = np.argsort(A, axis=0, kind="stable")
    a_sorted = np.take_along_axis(A, order, axis=0)
    b_sorted = np.take_along_axis(B, order, axis=0)
    nondecreasing = np.all(np.diff(b_sorted, axis=0) >= 0, axis=0)
    same_ties = np.all(
        (np.diff(a_sorted, axis=0) == 0) == (np.diff(b_sorted, axis=0) == 0), axis=0
    )
    return nondecreasing & same_ties


def verify_properties(images, transform) -> PropertyReport:
    """Transform every image with one key and measure what survives.

    Reports the maximum absolute deviation of all pairwise squared distances
    and inner products (exact integer arithmetic when both sides are 8-bit
    images), the maximum relative deviation of the inner products after
    z-score normalization, and whether every feature's cross-sample order is
    preserved or exactly reversed (None when the transform admits no
    positional correspondence, e.g. FFX or YCbCr packing of RGB inputs).
    """
    imgs = [as_image(img) for img in images]
    if len(imgs) < 2:
        raise DimensionError("need at least two images")
    shape = imgs[0].shape
    if any(img.shape != shape for img in imgs):
        raise DimensionError("all images must share one shape")
    enc = [apply_transform(img, transform) for img in imgs]

    X = np.stack([vectorize(img) for img in imgs])
    Xe = np.stack([vectorize(img) for img in enc])
    if Xe.dtype != X.dtype:  # ffx yields floats; compare in float64 then
        X = X.astype(np.float64)
        Xe = Xe.astype(np.float64)

    dist_dev = np.abs(_pair_dist2(X) - _pair_dist2(Xe)).max()
    inner_dev = np.abs(_gram(X) - _gram(Xe)).max()

    gz = _gram(zscore(X))
    gze = _gram(zscore(Xe))
    scale = np.abs(gz).max()
    rel_dev = float(np.abs(gz - gze).max() / scale) if scale > 0 else 0.0

    mapping = signed_position_map(transform, shape)
    if mapping is None:
        order_ok = None
        preserved = reversed_ = violating = 0
        per_feature = None
    else:
        src, flip = mapping
        ref = X[:, src].astype(np.float64)
        out = Xe.astype(np.float64)
        kept = _rank_pattern_match(ref, out)
        mirrored = _rank_pattern_match(ref, -out)
        per_feature = kept | mirrored
        order_ok = bool(per_feature.all())
        preserved = int(kept.sum())
        reversed_ = int((mirrored & ~kept).sum())
        violating = int((~per_feature).sum())

    return PropertyReport(
        max_abs_distance_dev=float(dist_dev),
        max_abs_inner_dev=float(inner_dev),
        max_rel_inner_dev_zscored=rel_dev,
        order_preserved=order_ok,
        features_preserved=preserved,
        features_reversed=reversed_,
        features_violating=violating,
        order_per_feature=per_feature,
    )
