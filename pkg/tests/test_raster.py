import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracdim.raster import (
    GRAY8,
    MONO,
    GrayRaster,
    histogram,
    order0_entropy,
    to_monochrome,
    trim_margins,
)


def gray(arr):
    return GrayRaster(np.asarray(arr, np.uint8))


small_rasters = arrays(
    np.uint8,
    st.tuples(st.integers(1, 12), st.integers(1, 12)),
    elements=st.integers(0, 255),
).map(GrayRaster)


class TestGrayRaster:
    def test_dimensions(self):
        r = gray([[1, 2, 3], [4, 5, 6]])
        assert (r.width, r.height, r.pixel_count) == (3, 2, 6)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            GrayRaster(np.zeros((0, 3), np.uint8))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            GrayRaster(np.array([[300]]))

    def test_mono_constrains_values(self):
        GrayRaster(np.array([[0, 255]], np.uint8), colorspace=MONO)
        with pytest.raises(ValueError):
            GrayRaster(np.array([[0, 254]], np.uint8), colorspace=MONO)

    def test_pixels_immutable(self):
        r = gray([[1]])
        with pytest.raises(ValueError):
            r.pixels[0, 0] = 2


class TestToMonochrome:
    def test_boundary_pixel_equal_to_threshold_is_background(self):
        r = gray(np.full((3, 3), 128))
        assert (to_monochrome(r, 128).pixels == 255).all()

    def test_identity_on_black(self):
        r = gray(np.zeros((2, 2)))
        assert (to_monochrome(r, 1).pixels == 0).all()

    def test_splits_around_threshold(self):
        r = gray([[10, 200]])
        assert to_monochrome(r, 128).pixels.tolist() == [[0, 255]]

    def test_output_is_mono(self):
        assert to_monochrome(gray([[7]]), 128).colorspace == MONO

    def test_threshold_range_checked(self):
        with pytest.raises(ValueError):
            to_monochrome(gray([[0]]), 256)

    @given(small_rasters, st.integers(0, 255))
    def test_idempotent_on_mono(self, r, threshold):
        once = to_monochrome(r, threshold)
        assert to_monochrome(once, threshold) == once


class TestTrimMargins:
    def test_fully_blank_collapses_to_single_pixel(self):
        r = gray(np.full((5, 5), 255))
        out = trim_margins(r, 255)
        assert out.pixels.tolist() == [[255]]

    def test_single_pixel_bounding_box(self):
        px = np.full((3, 3), 255, np.uint8)
        px[1, 1] = 0
        out = trim_margins(GrayRaster(px), 255)
        assert out.pixels.tolist() == [[0]]

    def test_two_pixel_bounding_box(self):
        px = np.full((4, 4), 255, np.uint8)
        px[1, 1] = 0
        px[2, 2] = 0
        out = trim_margins(GrayRaster(px), 255)
        assert out.pixels.shape == (2, 2)
        assert out.pixels[0, 0] == 0 and out.pixels[1, 1] == 0

    def test_preserves_colorspace(self):
        r = GrayRaster(np.full((2, 2), 255, np.uint8), colorspace=MONO)
        assert trim_margins(r).colorspace == MONO

    @given(small_rasters, st.integers(0, 255))
    def test_idempotent(self, r, background):
        once = trim_margins(r, background)
        assert trim_margins(once, background) == once


class TestOrder0Entropy:
    def test_constant_raster_is_zero(self):
        assert order0_entropy(gray(np.full((4, 7), 42))) == 0.0

    def test_fair_binary_source_is_one_bit(self):
        px = np.zeros((2, 4), np.uint8)
        px[1] = 255
        assert order0_entropy(GrayRaster(px)) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_alphabet_is_eight_bits(self):
        px = np.arange(256, dtype=np.uint8).reshape(16, 16)
        assert order0_entropy(GrayRaster(px)) == pytest.approx(8.0, abs=1e-12)

    @given(small_rasters, st.randoms(use_true_random=False))
    def test_permutation_invariant(self, r, rnd):
        flat = list(r.pixels.ravel())
        rnd.shuffle(flat)
        shuffled = GrayRaster(np.array(flat, np.uint8).reshape(r.pixels.shape))
        assert order0_entropy(shuffled) == pytest.approx(order0_entropy(r), abs=1e-9)

    @given(small_rasters)
    def test_bounded_by_log_alphabet(self, r):
        distinct = len(np.unique(r.pixels))
        assert order0_entropy(r) <= np.log2(distinct) + 1e-9

    def test_range(self):
        px = np.array([[0, 1, 2, 255]], np.uint8)
        assert 0.0 <= order0_entropy(GrayRaster(px)) <= 8.0


class TestHistogram:
    def test_counts_and_total(self):
        h = histogram(gray([[0, 0, 7]]))
        assert h.total == 3
        assert h.counts[0] == 2 and h.counts[7] == 1 and h.counts.sum() == 3

    def test_total_mismatch_rejected(self):
        from fracdim.raster import Histogram

        with pytest.raises(ValueError):
            Histogram(counts=np.zeros(256, np.int64), total=5)
