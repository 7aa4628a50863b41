"""Grayscale raster data model: thresholding, margin trimming, and order-0 entropy.

A raster is a rectangular grid of 8-bit intensities. Foreground (the object
being measured) is black (0) on a white (255) background throughout the
package; monochrome rasters are constrained to the two extreme values.
"""

from dataclasses import dataclass, field

import numpy as np

GRAY8 = "gray8"
MONO = "mono"

FOREGROUND = 0
BACKGROUND = 255

DEFAULT_THRESHOLD = 128


@dataclass(frozen=True)
class GrayRaster:
    """Immutable 8-bit image, pixels stored row-major as a (height, width) array."""

    pixels: np.ndarray
    colorspace: str = GRAY8

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"raster must be 2-D with positive dims, got shape {px.shape}")
        if self.colorspace not in (GRAY8, MONO):
            raise ValueError(f"unknown colorspace {self.colorspace!r}")
        if self.colorspace == MONO:
            if not np.isin(px, (0, 255)).all():
                raise ValueError("mono raster may only contain values 0 and 255")
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def pixel_count(self) -> int:
        return self.pixels.size

    def __eq__(self, other):
        if not isinstance(other, GrayRaster):
            return NotImplemented
        return (
            self.colorspace == other.colorspace
            and self.pixels.shape == other.pixels.shape
            and bool((self.pixels == other.pixels).all())
        )


@dataclass(frozen=True)
class Histogram:
    """256-bin intensity histogram of a raster."""

    counts: np.ndarray = field(repr=False)
    total: int = 0

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (256,):
            raise ValueError("histogram needs exactly 256 bins")
        if (counts < 0).any():
            raise ValueError("negative bin count")
        if int(counts.sum()) != self.total:
            raise ValueError("histogram total does not match bin sum")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)


def histogram(r: GrayRaster) -> Histogram:
    counts = np.bincount(r.pixels.ravel(), minlength=256)
    return Histogram(counts=counts, total=r.pixel_count)


def to_monochrome(r: GrayRaster, threshold: int = DEFAULT_THRESHOLD) -> GrayRaster:
    """Threshold to mono: pixel < threshold becomes 0 (foreground), else 255."""
    if not 0 <= threshold <= 255:
        raise ValueError(f"threshold must be in [0, 255], got {threshold}")
    out = np.where(r.pixels < threshold, FOREGROUND, BACKGROUND).astype(np.uint8)
    return GrayRaster(out, colorspace=MONO)


def trim_margins(r: GrayRaster, background: int = BACKGROUND) -> GrayRaster:
    """Crop to the bounding box of all non-background pixels.

    A fully blank raster collapses to a 1x1 background pixel so the result is
    always a valid raster; degenerate inputs are flagged downstream instead.
    """
    mask = r.pixels != background
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    if rows.size == 0:
        return GrayRaster(np.full((1, 1), background, np.uint8), colorspace=r.colorspace)
    sub = r.pixels[rows[0] : rows[-1] + 1, cols[0] : cols[-1] + 1]
    return GrayRaster(sub.copy(), colorspace=r.colorspace)


def order0_entropy(r: GrayRaster) -> float:
    """Shannon entropy of the pixel-value distribution, in bits per pixel."""
    counts = histogram(r).counts
    p = counts[counts > 0] / r.pixel_count
    return float(-(p * np.log2(p)).sum())
