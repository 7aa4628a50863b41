"""Deterministic percentage downscaling of rasters.

Two filters are provided. The box filter averages source pixels over each
output pixel's exact preimage rectangle (fractional boundaries included), the
behaviour of a fixed pixel-averaging downscaler; the triangle filter is a
separable tent with support scaled by the downscale ratio, a reproducible
stand-in for resamplers that interpolate rather than average. Both round
half-up to integers and are bit-deterministic.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .raster import GRAY8, MONO, DEFAULT_THRESHOLD, GrayRaster, to_monochrome

GRAY_BOX = "gray_box"
GRAY_TRIANGLE = "gray_triangle"
MONO_BOX = "mono_box"

MODES = (GRAY_BOX, GRAY_TRIANGLE, MONO_BOX)


@dataclass(frozen=True)
class ScaleSpec:
    """A single downscale step: target percentage and filter mode."""

    percent: float
    mode: str = GRAY_BOX

    def __post_init__(self):
        _check_percent(self.percent)
        if self.mode not in MODES:
            raise ValueError(f"unknown scale mode {self.mode!r}")


def _check_percent(percent):
    if not 0 < percent <= 100:
        raise ValueError(f"percent must be in (0, 100], got {percent}")


def _round_half_up_exact(fr: Fraction) -> int:
    # floor(x + 1/2) without float error
    return (2 * fr.numerator + fr.denominator) // (2 * fr.denominator)


def target_dims(w: int, h: int, percent) -> tuple[int, int]:
    """Output (width, height) for a percentage downscale.

    Dimensions are round-half-up of dim*percent/100, floored at 1 pixel.
    """
    if w < 1 or h < 1:
        raise ValueError("source dimensions must be >= 1")
    _check_percent(percent)
    frac = Fraction(percent) / 100
    return (
        max(1, _round_half_up_exact(w * frac)),
        max(1, _round_half_up_exact(h * frac)),
    )


def _round_to_u8(values: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


class BoxScaler:
    """Reusable exact box downscaler for one source raster.

    Precomputes integer prefix-sum tables once so that each scale evaluates
    in time proportional to the output size. The average over an output
    pixel's preimage rectangle is recovered from the bilinear extension of
    the 2-D prefix sum at the rectangle's (possibly fractional) corners;
    table entries are exact int64 sums, so integer-aligned boundaries incur
    no rounding error at all and fractional ones stay within float64
    accumulation error of the exact area-weighted mean.
    """

    def __init__(self, r: GrayRaster):
        self.source = r
        f = r.pixels.astype(np.int64)
        h, w = f.shape
        self._f = f
        # block[iy, ix]: sum over full pixels with row < iy and col < ix
        block = np.zeros((h + 1, w + 1), np.int64)
        np.cumsum(np.cumsum(f, axis=0), axis=1, out=block[1:, 1:])
        self._block = block
        # col_strip[iy, ix]: sum over rows < iy within column ix
        col_strip = np.zeros((h + 1, w), np.int64)
        np.cumsum(f, axis=0, out=col_strip[1:, :])
        self._col_strip = col_strip
        # row_strip[iy, ix]: sum over cols < ix within row iy
        row_strip = np.zeros((h, w + 1), np.int64)
        np.cumsum(f, axis=1, out=row_strip[:, 1:])
        self._row_strip = row_strip

    def _antiderivative(self, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
        """Integral of the piecewise-constant image over [0,y) x [0,x) grids."""
        h, w = self._f.shape
        iy = np.floor(ys).astype(np.int64)
        ix = np.floor(xs).astype(np.int64)
        fy = ys - iy
        fx = xs - ix
        iyc = np.minimum(iy, h - 1)
        ixc = np.minimum(ix, w - 1)
        out = self._block[np.ix_(iy, ix)].astype(np.float64)
        out += fx[None, :] * self._col_strip[np.ix_(iy, ixc)]
        out += fy[:, None] * self._row_strip[np.ix_(iyc, ix)]
        out += (fy[:, None] * fx[None, :]) * self._f[np.ix_(iyc, ixc)]
        return out

    def scale(self, percent) -> GrayRaster:
        src = self.source
        ow, oh = target_dims(src.width, src.height, percent)
        if (ow, oh) == (src.width, src.height):
            return src
        # cell boundaries k*n/m; the endpoints land exactly on 0 and n
        xs = (np.arange(ow + 1) * src.width) / ow
        ys = (np.arange(oh + 1) * src.height) / oh
        antider = self._antiderivative(ys, xs)
        sums = antider[1:, 1:] - antider[:-1, 1:] - antider[1:, :-1] + antider[:-1, :-1]
        area = (src.height / oh) * (src.width / ow)
        return GrayRaster(_round_to_u8(sums / area), colorspace=GRAY8)


def box_scale(r: GrayRaster, percent) -> GrayRaster:
    """Downscale by area-weighted averaging over exact preimage rectangles."""
    return BoxScaler(r).scale(percent)


def mono_scale(r: GrayRaster, percent, threshold: int = DEFAULT_THRESHOLD) -> GrayRaster:
    """Box-downscale, then threshold back to monochrome.

    The thresholding discards the per-pixel occupancy carried by the gray
    averages, so this mode loses information relative to box_scale.
    """
    return to_monochrome(box_scale(r, percent), threshold)


def _axis_triangle(a: np.ndarray, m: int) -> np.ndarray:
    """Tent-filter axis 1 of float array a down to m samples (unrounded)."""
    n = a.shape[1]
    if m == n:
        return a
    ratio = n / m
    centers = (np.arange(m) + 0.5) * ratio - 0.5
    taps = 2 * int(np.ceil(ratio)) + 1
    first = np.ceil(centers - ratio).astype(np.int64)
    idx = first[:, None] + np.arange(taps)[None, :]
    weight = np.maximum(0.0, 1.0 - np.abs(idx - centers[:, None]) / ratio)
    weight[(idx < 0) | (idx >= n)] = 0.0
    weight /= weight.sum(axis=1, keepdims=True)
    idx = np.clip(idx, 0, n - 1)
    out = np.zeros((a.shape[0], m))
    for t in range(taps):
        out += a[:, idx[:, t]] * weight[None, :, t]
    return out


def triangle_scale(r: GrayRaster, percent) -> GrayRaster:
    """Downscale with a separable triangle (tent) filter.

    The tent support is stretched by the per-axis downscale ratio and edge
    taps are renormalized; the horizontal pass runs first and intermediate
    values stay in float until the final half-up rounding.
    """
    ow, oh = target_dims(r.width, r.height, percent)
    if (ow, oh) == (r.width, r.height):
        return r
    horiz = _axis_triangle(r.pixels.astype(np.float64), ow)
    vert = _axis_triangle(np.ascontiguousarray(horiz.T), oh).T
    return GrayRaster(_round_to_u8(vert), colorspace=GRAY8)


def scale_raster(r: GrayRaster, percent, mode: str, threshold: int = DEFAULT_THRESHOLD) -> GrayRaster:
    """Dispatch a single downscale according to mode."""
    if mode == GRAY_BOX:
        return box_scale(r, percent)
    if mode == MONO_BOX:
        return mono_scale(r, percent, threshold)
    if mode == GRAY_TRIANGLE:
        return triangle_scale(r, percent)
    raise ValueError(f"unknown scale mode {mode!r}")
