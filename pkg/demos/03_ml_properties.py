"""What survives each keyed transform: pairwise distances, inner products,
per-feature order, kernel matrices, and nearest-neighbor decisions.

Runs every transform over one synthetic dataset and prints the measured
deviations next to a plain/encrypted kNN comparison.
"""

import numpy as np

from imagekey import (
    EtcConfig,
    SecretKey,
    TransformSpec,
    apply_transform,
    knn_predict,
    rbf_gram,
    poly_gram,
    vectorize,
    verify_properties,
    zscore,
)

KEY = SecretKey.from_seed("demo ml properties")


def make_dataset(n=24, seed=3):
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for i in range(n):
        img = rng.integers(40, 120, size=(3, 16, 16), dtype=np.uint8)
        if i % 2:  # class 1 carries a bright band
            img[:, 4:8, :] = rng.integers(180, 240, size=(3, 4, 16))
        images.append(img)
        labels.append(i % 2)
    return images, labels


def transforms():
    yield "etc color", EtcConfig(variant="color", bx=8, by=8, key=KEY)
    yield "etc scramble only", EtcConfig(
        variant="color", bx=8, by=8, key=KEY, steps=("scramble",)
    )
    yield "pixelwise", TransformSpec(variant="pixelwise", key=KEY)
    yield "shf", TransformSpec(variant="shf", key=KEY, block=8)
    yield "neg", TransformSpec(variant="neg", key=KEY, block=8)
    yield "ffx", TransformSpec(variant="ffx", key=KEY, block=8)


def main():
    images, labels = make_dataset()
    print(f"{'transform':18s} {'dist dev':>10s} {'inner dev':>11s} "
          f"{'zscored':>9s}  order")
    for name, spec in transforms():
        r = verify_properties(images, spec)
        order = {True: "preserved", False: "violated", None: "n/a"}[r.order_preserved]
        if r.order_preserved:
            order += f" ({r.features_preserved} kept, {r.features_reversed} reversed)"
        print(
            f"{name:18s} {r.max_abs_distance_dev:10.3g} {r.max_abs_inner_dev:11.3g} "
            f"{r.max_rel_inner_dev_zscored:9.2e}  {order}"
        )

    # nearest neighbor sees identical distances, so identical decisions
    cfg = EtcConfig(variant="color", bx=8, by=8, key=KEY)
    train_i, train_y = images[:16], labels[:16]
    test_i = images[16:]
    X = np.stack([vectorize(i) for i in train_i]).astype(float)
    Q = np.stack([vectorize(i) for i in test_i]).astype(float)
    Xe = np.stack([vectorize(apply_transform(i, cfg)) for i in train_i]).astype(float)
    Qe = np.stack([vectorize(apply_transform(i, cfg)) for i in test_i]).astype(float)
    plain = knn_predict(X, train_y, Q, k=3)
    encd = knn_predict(Xe, train_y, Qe, k=3)
    print(f"\nkNN plain:     {plain}")
    print(f"kNN encrypted: {encd}")
    print(f"agreement: {float(np.mean([p == e for p, e in zip(plain, encd)])):.0%}")

    Z, Ze = zscore(np.vstack([X, Q])), zscore(np.vstack([Xe, Qe]))
    rbf_dev = np.abs(rbf_gram(Z, 0.01) - rbf_gram(Ze, 0.01)).max()
    poly_dev = np.abs(poly_gram(Z, 3) - poly_gram(Ze, 3)).max()
    print(f"kernel Gram deviation after zscore: rbf {rbf_dev:.2e}, poly {poly_dev:.2e}")


if __name__ == "__main__":
    main()
