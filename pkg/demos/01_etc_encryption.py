"""Walk through the block-scrambling cipher: encrypt a synthetic photo with
all three variants, decrypt it back, and size the key space.

Writes its images to demos/output/ as PPM/PGM so they can be eyeballed with
any netpbm viewer.
"""

from pathlib import Path

import numpy as np

from imagekey import EtcConfig, SecretKey, decrypt, encrypt, keyspace_color
from imagekey.netpbm import write_image

OUT = Path(__file__).parent / "output"


def make_scene(height=96, width=96):
    """A recognizable test card: sky gradient, sun disc, striped ground."""
    yy, xx = np.mgrid[0:height, 0:width]
    r = np.clip(120 + 120 * yy / height, 0, 255)
    g = np.clip(80 + 140 * yy / height, 0, 255)
    b = np.clip(220 - 140 * yy / height, 0, 255)
    img = np.stack([r, g, b]).astype(np.uint8)
    sun = (yy - 24) ** 2 + (xx - 68) ** 2 <= 14**2
    img[0][sun], img[1][sun], img[2][sun] = 250, 220, 60
    ground = yy > 70
    stripes = ((xx // 8) % 2 == 0) & ground
    img[:, ground] = 60
    img[1][stripes] = 160
    return img


def main():
    OUT.mkdir(exist_ok=True)
    key = SecretKey.from_seed("demo etc key")
    scene = make_scene()
    write_image(scene, OUT / "scene.ppm")
    print(f"scene: {scene.shape[2]}x{scene.shape[1]} RGB -> {OUT / 'scene.ppm'}")

    for variant in ("color", "grayscale-rgb", "grayscale-ycbcr"):
        cfg = EtcConfig(variant=variant, bx=8, by=8, key=key)
        enc = encrypt(scene, cfg)
        suffix = "ppm" if enc.shape[0] == 3 else "pgm"
        write_image(enc, OUT / f"encrypted-{variant}.{suffix}")
        dec = decrypt(enc, cfg)
        exact = np.array_equal(dec, scene)
        worst = int(np.abs(dec.astype(int) - scene.astype(int)).max())
        print(
            f"{variant:16s} ciphertext {enc.shape[2]}x{enc.shape[1]}x{enc.shape[0]}, "
            f"decrypt {'bit-exact' if exact else f'within +/-{worst} (color rounding)'}"
        )
        write_image(dec, OUT / f"decrypted-{variant}.{suffix}")

    wrong = decrypt(
        encrypt(scene, EtcConfig(variant="color", bx=8, by=8, key=key)),
        EtcConfig(variant="color", bx=8, by=8, key=SecretKey.from_seed("not the key")),
    )
    match = float(np.mean(wrong == scene))
    write_image(wrong, OUT / "wrong-key-attempt.ppm")
    print(f"decrypting with a wrong key recovers {match:.1%} of pixels")

    report = keyspace_color(scene.shape[2], scene.shape[1], 8, 8)
    print(f"key space for this grid: {report.n} blocks, 2^{report.log2_keyspace:.1f} keys")


if __name__ == "__main__":
    main()
