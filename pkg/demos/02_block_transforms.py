"""The four learnable transforms on 8x8 blocks: what each one changes, what
it keeps, and which ones can be undone.

pixelwise  negate-or-keep each pixel, then shuffle each pixel's channels
shf        permute pixel positions inside every block (one shared key)
neg        negate-or-keep a fixed half of every block's positions
ffx        format-preserving encryption of half the positions, then divide
           by the image maximum; output is float in [0, 1] and one-way
"""

from pathlib import Path

import numpy as np

from imagekey import (
    SecretKey,
    TransformSpec,
    block_transform,
    block_transform_invert,
    NotInvertibleError,
)
from imagekey.netpbm import write_image

OUT = Path(__file__).parent / "output"


def main():
    OUT.mkdir(exist_ok=True)
    rng = np.random.default_rng(2)
    img = rng.integers(0, 256, size=(3, 64, 64), dtype=np.uint8)
    # paint coarse white squares so block structure is visible after shuffling
    for i in range(0, 64, 16):
        img[:, i : i + 8, i : i + 8] = 255
    write_image(img, OUT / "blocks-plain.ppm")
    key = SecretKey.from_seed("demo transforms")

    for variant in ("pixelwise", "shf", "neg"):
        spec = TransformSpec(variant=variant, key=key, block=1 if variant == "pixelwise" else 8)
        out = block_transform(img, spec)
        write_image(out, OUT / f"blocks-{variant}.ppm")
        back = block_transform_invert(out, spec)
        wrong = block_transform_invert(
            out, TransformSpec(variant=spec.variant, key=SecretKey.from_seed("oops"), block=spec.block)
        )
        print(
            f"{variant:10s} changed {float(np.mean(out != img)):5.1%} of pixels; "
            f"right key recovers {float(np.mean(back == img)):.1%}, "
            f"wrong key {float(np.mean(wrong == img)):5.1%}"
        )

    spec = TransformSpec(variant="ffx", key=key, block=8)
    values = block_transform(img, spec)
    print(
        f"{'ffx':10s} float output in [{values.min():.4f}, {values.max():.4f}], "
        f"dtype {values.dtype}"
    )
    write_image((values * 255).round().astype(np.uint8), OUT / "blocks-ffx-preview.ppm")
    try:
        block_transform_invert(values, spec)
    except NotInvertibleError as exc:
        print(f"{'':10s} inverting ffx raises NotInvertibleError: {exc}")


if __name__ == "__main__":
    main()
