import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imagekey.errors import DimensionError
from imagekey.image import (
    as_image,
    block_counts,
    flatten_block,
    partition,
    reassemble,
    unflatten_block,
)


class TestAsImage:
    def test_promotes_2d(self):
        img = as_image(np.zeros((4, 6), dtype=np.uint8))
        assert img.shape == (1, 4, 6)

    def test_rejects_bad_channel_count(self):
        with pytest.raises(DimensionError):
            as_image(np.zeros((2, 4, 4), dtype=np.uint8))
        with pytest.raises(DimensionError):
            as_image(np.zeros((4, 4, 4, 4), dtype=np.uint8))

    def test_rejects_empty(self):
        with pytest.raises(DimensionError):
            as_image(np.zeros((3, 0, 4), dtype=np.uint8))

    def test_casts_in_range_ints(self):
        img = as_image(np.array([[0, 255], [7, 9]], dtype=np.int64))
        assert img.dtype == np.uint8

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            as_image(np.array([[0, 256]]))
        with pytest.raises(ValueError):
            as_image(np.array([[-1, 0]]))


class TestBlockCounts:
    def test_counts(self):
        assert block_counts(768, 1024, 16, 16) == (48, 64)
        assert 48 * 64 == 3072  # the canonical example grid

    def test_divisibility_required(self):
        with pytest.raises(DimensionError):
            block_counts(10, 16, 3, 4)
        with pytest.raises(DimensionError):
            block_counts(16, 10, 4, 3)

    def test_bad_block_dims(self):
        with pytest.raises(DimensionError):
            block_counts(16, 16, 0, 4)


class TestPartition:
    def test_block_shape_and_count(self):
        img = np.arange(3 * 24 * 16, dtype=np.int64).reshape(3, 24, 16) % 256
        blocks = partition(img, 8, 8)
        assert blocks.shape == (6, 3, 8, 8)

    def test_raster_order(self):
        # 1 channel, 4x4 image, 2x2 blocks: block 1 must be the top-right one
        img = np.arange(16, dtype=np.uint8).reshape(1, 4, 4)
        blocks = partition(img, 2, 2)
        assert blocks[0, 0].tolist() == [[0, 1], [4, 5]]
        assert blocks[1, 0].tolist() == [[2, 3], [6, 7]]
        assert blocks[2, 0].tolist() == [[8, 9], [12, 13]]

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        img = rng.integers(0, 256, size=(3, 32, 48), dtype=np.uint8)
        assert np.array_equal(reassemble(partition(img, 8, 4), 32, 48), img)

    def test_wrong_block_count_on_reassemble(self):
        img = np.zeros((1, 8, 8), dtype=np.uint8)
        blocks = partition(img, 4, 4)
        with pytest.raises(DimensionError):
            reassemble(blocks, 16, 16)

    @given(
        st.sampled_from([1, 3]),
        st.integers(1, 4),
        st.integers(1, 4),
        st.integers(1, 5),
        st.integers(1, 5),
    )
    @settings(max_examples=30, deadline=None)
    def test_round_trip_any_grid(self, c, by, bx, rows, cols):
        rng = np.random.default_rng(by * 31 + bx)
        img = rng.integers(0, 256, size=(c, by * rows, bx * cols), dtype=np.uint8)
        assert np.array_equal(
            reassemble(partition(img, bx, by), by * rows, bx * cols), img
        )


class TestFlatten:
    def test_channel_major_order(self):
        # hand-enumerated 3-channel 2x2 block
        block = np.array(
            [[[1, 2], [3, 4]], [[5, 6], [7, 8]], [[9, 10], [11, 12]]],
            dtype=np.uint8,
        )
        assert flatten_block(block).tolist() == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        block = rng.integers(0, 256, size=(3, 4, 4), dtype=np.uint8)
        assert np.array_equal(unflatten_block(flatten_block(block), 3, 4, 4), block)

    def test_length_check(self):
        with pytest.raises(DimensionError):
            unflatten_block(np.zeros(5, dtype=np.uint8), 3, 2, 2)
        with pytest.raises(DimensionError):
            flatten_block(np.zeros((2, 2), dtype=np.uint8))
