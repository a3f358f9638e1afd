import numpy as np
import pytest

from fpe_oracle import oracle_ffx_image
from imagekey.errors import DimensionError, NotInvertibleError
from imagekey.keystream import (
    BALANCED_EXACT,
    SecretKey,
    derive_subkey,
    gen_binary_mask,
    gen_permutation,
)
from imagekey.learnable import (
    TransformSpec,
    block_transform,
    block_transform_invert,
    ffx_values,
    pixelwise_decrypt,
    pixelwise_encrypt,
    position_map,
)

KEY = SecretKey.from_seed("learnable tests")


def random_image(shape, seed):
    return np.random.default_rng(seed).integers(0, 256, size=shape, dtype=np.uint8)


class TestPixelwise:
    def test_round_trip(self):
        img = random_image((3, 24, 20), 0)
        assert np.array_equal(pixelwise_decrypt(pixelwise_encrypt(img, KEY), KEY), img)

    def test_changes_image(self):
        img = random_image((3, 24, 20), 1)
        assert not np.array_equal(pixelwise_encrypt(img, KEY), img)

    def test_single_pixel_composition(self):
        # hand-evaluated: (0,128,255) negated per (1,1,1) is (255,127,0);
        # color code 5 (B G R) turns that into (0,127,255)
        pixel = np.array([0, 128, 255], dtype=np.uint8).reshape(3, 1, 1)
        negated = pixel ^ 255
        from imagekey.etc import color_shuffle

        out = color_shuffle(negated, 5)
        assert out[:, 0, 0].tolist() == [0, 127, 255]

    def test_identity_when_streams_degenerate(self, monkeypatch):
        # all-zero mask and all-zero codes make the transform the identity
        import imagekey.learnable as mod

        def fake_streams(key, c, height, width):
            return (
                np.zeros((c, height, width), dtype=np.uint8),
                np.zeros((height, width), dtype=np.int64),
            )

        monkeypatch.setattr(mod, "_pixelwise_streams", fake_streams)
        img = random_image((3, 8, 8), 2)
        assert np.array_equal(pixelwise_encrypt(img, KEY), img)

    def test_needs_three_channels(self):
        with pytest.raises(DimensionError):
            pixelwise_encrypt(random_image((1, 8, 8), 3), KEY)

    def test_via_transform_spec(self):
        img = random_image((3, 8, 8), 4)
        spec = TransformSpec(variant="pixelwise", key=KEY)
        assert np.array_equal(block_transform(img, spec), pixelwise_encrypt(img, KEY))
        assert np.array_equal(
            block_transform_invert(block_transform(img, spec), spec), img
        )


class TestShf:
    def test_round_trip_many(self):
        spec = TransformSpec(variant="shf", key=KEY, block=8)
        for seed in range(100):
            img = random_image((3, 16, 16), seed)
            assert np.array_equal(
                block_transform_invert(block_transform(img, spec), spec), img
            )

    def test_identity_permutation_block(self):
        # c=1 with M=1 flattens to length-1 vectors, so v is the identity
        spec = TransformSpec(variant="shf", key=KEY, block=1)
        img = random_image((1, 8, 8), 5)
        assert np.array_equal(block_transform(img, spec), img)

    def test_multiset_per_block_preserved(self):
        spec = TransformSpec(variant="shf", key=KEY, block=8)
        img = random_image((3, 32, 32), 6)
        out = block_transform(img, spec)
        a = img.reshape(3, 4, 8, 4, 8)
        b = out.reshape(3, 4, 8, 4, 8)
        for row in range(4):
            for col in range(4):
                src = np.sort(a[:, row, :, col, :], axis=None)
                dst = np.sort(b[:, row, :, col, :], axis=None)
                assert np.array_equal(src, dst)

    def test_same_permutation_every_block(self):
        spec = TransformSpec(variant="shf", key=KEY, block=4)
        img = random_image((1, 8, 8), 7)
        out = block_transform(img, spec)
        perm = gen_permutation(derive_subkey(KEY, "SHF"), 16)
        for top in range(0, 8, 4):
            for left in range(0, 8, 4):
                blk = img[0, top : top + 4, left : left + 4].reshape(-1)
                expect = blk[perm - 1]
                got = out[0, top : top + 4, left : left + 4].reshape(-1)
                assert np.array_equal(got, expect)

    def test_divisibility_enforced(self):
        spec = TransformSpec(variant="shf", key=KEY, block=5)
        with pytest.raises(DimensionError):
            block_transform(random_image((3, 16, 16), 8), spec)


class TestNeg:
    def test_involution(self):
        spec = TransformSpec(variant="neg", key=KEY, block=8)
        img = random_image((3, 16, 16), 9)
        assert np.array_equal(block_transform(block_transform(img, spec), spec), img)

    def test_invert_round_trip(self):
        spec = TransformSpec(variant="neg", key=KEY, block=8)
        for seed in range(100):
            img = random_image((3, 16, 16), seed + 200)
            assert np.array_equal(
                block_transform_invert(block_transform(img, spec), spec), img
            )

    def test_mask_is_balanced(self):
        mask = gen_binary_mask(derive_subkey(KEY, "NEG"), 3 * 8 * 8, BALANCED_EXACT)
        assert int(mask.sum()) == 3 * 8 * 8 // 2

    def test_squared_differences_preserved(self):
        # (p'_i - p'_j)^2 = (p_i - p_j)^2 whenever i and j share a mask bit
        spec = TransformSpec(variant="neg", key=KEY, block=8)
        img = random_image((1, 8, 8), 10)
        out = block_transform(img, spec)
        mask = gen_binary_mask(derive_subkey(KEY, "NEG"), 64, BALANCED_EXACT)
        p = img.reshape(-1).astype(np.int64)
        q = out.reshape(-1).astype(np.int64)
        for bit in (0, 1):
            (positions,) = np.nonzero(mask == bit)
            dp = p[positions, None] - p[None, positions]
            dq = q[positions, None] - q[None, positions]
            assert np.array_equal(dp * dp, dq * dq)


class TestWrongKey:
    # Structural recovery rates differ by variant. A mismatched SHF key only
    # matches by position/value coincidence. Two balanced NEG masks agree on
    # about half their bits, so about half the pixels come back. Pixelwise
    # combines a bernoulli mask (1/2) with a random channel shuffle (1/3
    # expected fixed points), so roughly a sixth survives. None approaches
    # full recovery.
    @pytest.mark.parametrize(
        "variant,ceiling", [("shf", 0.05), ("neg", 0.70), ("pixelwise", 0.30)]
    )
    def test_recovery_stays_partial(self, variant, ceiling):
        block = 1 if variant == "pixelwise" else 8
        worst = 0.0
        for trial in range(30):
            img = random_image((3, 32, 32), trial + 500)
            k1 = SecretKey.from_seed(f"wk-a-{trial}")
            k2 = SecretKey.from_seed(f"wk-b-{trial}")
            out = block_transform(img, TransformSpec(variant=variant, key=k1, block=block))
            back = block_transform_invert(
                out, TransformSpec(variant=variant, key=k2, block=block)
            )
            worst = max(worst, float(np.mean(back == img)))
        assert worst < ceiling


class TestFfx:
    def test_output_in_unit_interval(self):
        spec = TransformSpec(variant="ffx", key=KEY, block=8)
        out = block_transform(random_image((3, 16, 16), 11), spec)
        assert out.dtype == np.float64
        assert float(out.min()) >= 0.0
        assert float(out.max()) == 1.0  # the max pixel divides itself

    def test_matches_scalar_oracle(self):
        img = random_image((3, 16, 16), 12)
        spec = TransformSpec(variant="ffx", key=KEY, block=8)
        lib = block_transform(img, spec)
        orc = np.array(oracle_ffx_image(img.tolist(), KEY.master, 8))
        assert np.array_equal(lib, orc)

    def test_values_before_normalization(self):
        spec = TransformSpec(variant="ffx", key=KEY, block=8)
        img = random_image((3, 16, 16), 13)
        vals = ffx_values(img, spec)
        assert vals.dtype == np.int64
        assert vals.min() >= 0 and vals.max() <= 999
        out = block_transform(img, spec)
        assert np.array_equal(out, vals / vals.max())

    def test_unmasked_positions_pass_through(self):
        spec = TransformSpec(variant="ffx", key=KEY, block=8)
        img = random_image((1, 8, 8), 14)
        vals = ffx_values(img, spec)
        mask = gen_binary_mask(derive_subkey(KEY, "FFX"), 64, BALANCED_EXACT)
        flat_in = img.reshape(-1).astype(np.int64)
        flat_out = vals.reshape(-1)
        assert np.array_equal(flat_out[mask == 0], flat_in[mask == 0])
        assert not np.array_equal(flat_out[mask == 1], flat_in[mask == 1])

    def test_not_invertible(self):
        spec = TransformSpec(variant="ffx", key=KEY, block=8)
        out = block_transform(random_image((3, 16, 16), 15), spec)
        with pytest.raises(NotInvertibleError):
            block_transform_invert((out * 255).astype(np.uint8), spec)

    def test_wrong_variant_for_values(self):
        with pytest.raises(ValueError):
            ffx_values(random_image((1, 8, 8), 16), TransformSpec(variant="neg", key=KEY, block=8))


class TestSpecValidation:
    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            TransformSpec(variant="rot13", key=KEY)

    def test_block_must_be_positive(self):
        with pytest.raises(ValueError):
            TransformSpec(variant="shf", key=KEY, block=0)

    def test_with_key(self):
        other = SecretKey.from_seed("other")
        spec = TransformSpec(variant="shf", key=KEY, block=8)
        assert spec.with_key(other).key is other
        assert spec.with_key(other).variant == "shf"


class TestPositionMap:
    @pytest.mark.parametrize(
        "variant,shape,block",
        [
            ("pixelwise", (3, 16, 16), 1),
            ("shf", (3, 16, 16), 8),
            ("shf", (1, 32, 32), 4),
            ("neg", (3, 16, 16), 8),
        ],
    )
    def test_matches_transform(self, variant, shape, block):
        spec = TransformSpec(variant=variant, key=KEY, block=block)
        img = random_image(shape, 17)
        src, flip = position_map(spec, shape)
        replay = img.ravel()[src]
        replay[flip == 1] ^= 255
        assert np.array_equal(replay.reshape(shape), block_transform(img, spec))

    def test_ffx_has_no_map(self):
        with pytest.raises(NotInvertibleError):
            position_map(TransformSpec(variant="ffx", key=KEY, block=8), (3, 16, 16))
