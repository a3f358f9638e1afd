"""Model-protection checks: does a classifier keep working only when inputs
are transformed with the right key, and can that be read off as a watermark?

The watermark statistic is plain agreement between two prediction sequences.
A model trained to accept key-transformed inputs answers consistently with a
reference model on matching keys and near-randomly on wrong ones, so the
agreement fraction doubles as an ownership signal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .keystream import SecretKey
from .mlprops import apply_transform, knn_predict, vectorize, with_key


def watermark_detect(preds_a, preds_b) -> float:
    """Fraction of positions where the two prediction sequences agree."""
    a = list(preds_a)
    b = list(preds_b)
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        raise DimensionError("empty prediction sequences")
    return sum(x == y for x, y in zip(a, b)) / len(a)


def _matrix(images, transform=None) -> np.ndarray:
    if transform is None:
        return np.stack([vectorize(img) for img in images]).astype(np.float64)
    return np.stack(
        [vectorize(apply_transform(img, transform)) for img in images]
    ).astype(np.float64)


def _random_keys(count: int, seed: int) -> list[SecretKey]:
    rng = random.Random(seed)
    return [SecretKey(rng.randbytes(32)) for _ in range(count)]


@dataclass
class KeySensitivityReport:
    accuracy_correct_key: float
    accuracy_incorrect_key_mean: float
    accuracy_plain: float
    trials: int

    def to_dict(self) -> dict:
        return {
            "accuracy_correct_key": self.accuracy_correct_key,
            "accuracy_incorrect_key_mean": self.accuracy_incorrect_key_mean,
            "accuracy_plain": self.accuracy_plain,
            "trials": self.trials,
        }


def evaluate_key_sensitivity(
    train_images,
    train_labels,
    test_images,
    test_labels,
    transform,
    trials: int = 100,
    seed: int = 0,
    k: int = 3,
) -> KeySensitivityReport:
    """Train a kNN surrogate on key-transformed images, then probe it with
    test inputs transformed under the correct key, under `trials` random
    incorrect keys, and not at all."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    train_labels = list(train_labels)
    test_labels = list(test_labels)
    train_X = _matrix(train_images, transform)

    def accuracy(test_X: np.ndarray) -> float:
        preds = knn_predict(train_X, train_labels, test_X, k)
        return float(np.mean([p == t for p, t in zip(preds, test_labels)]))

    acc_correct = accuracy(_matrix(test_images, transform))
    acc_plain = accuracy(_matrix(test_images))
    wrong = [
        accuracy(_matrix(test_images, with_key(transform, key)))
        for key in _random_keys(trials, seed)
    ]
    return KeySensitivityReport(
        accuracy_correct_key=acc_correct,
        accuracy_incorrect_key_mean=float(np.mean(wrong)),
        accuracy_plain=acc_plain,
        trials=trials,
    )


@dataclass
class WatermarkReport:
    tau_correct: float
    tau_wrong: float

    def to_dict(self) -> dict:
        return {"tau_correct": self.tau_correct, "tau_wrong": self.tau_wrong}


def evaluate_watermark(
    train_images,
    train_labels,
    test_images,
    transform,
    wrong_key: SecretKey | None = None,
    k: int = 3,
    seed: int = 0,
) -> WatermarkReport:
    """Agreement of a key-aware model with its plain reference.

    The model is a kNN trained on plain and correct-key-transformed copies of
    the training set. tau_correct compares its answers on correct-key test
    inputs against its answers on plain test inputs; tau_wrong does the same
    with a mismatched key.
    """
    train_labels = list(train_labels)
    if wrong_key is None:
        wrong_key = _random_keys(1, seed)[0]
    train_X = np.vstack([_matrix(train_images), _matrix(train_images, transform)])
    train_y = train_labels + train_labels
    preds_plain = knn_predict(train_X, train_y, _matrix(test_images), k)
    preds_correct = knn_predict(train_X, train_y, _matrix(test_images, transform), k)
    preds_wrong = knn_predict(
        train_X, train_y, _matrix(test_images, with_key(transform, wrong_key)), k
    )
    return WatermarkReport(
        tau_correct=watermark_detect(preds_correct, preds_plain),
        tau_wrong=watermark_detect(preds_wrong, preds_plain),
    )
