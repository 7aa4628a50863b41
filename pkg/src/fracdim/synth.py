"""Synthetic fractal generators with known dimensions.

The cosine series W(t) = sum_{n=0}^{M} g^(-n*a) * cos(2*pi*g^n*t) has graph
dimension 2-a in the M -> infinity limit, which makes it a ground truth for
benchmarking estimators; the Sierpinski raster built from the Pascal-mod-2
rule has exactly 3^j occupied boxes at dyadic grid sizes, giving a closed
form for both the grid estimators and the scaling pipeline.
"""

from dataclasses import dataclass

import numpy as np

from .raster import BACKGROUND, FOREGROUND, MONO, GrayRaster, trim_margins

DEFAULT_GAMMA = 5.0
DEFAULT_ORDER = 26
DEFAULT_T_MAX = 1.5


@dataclass(frozen=True)
class WeierstrassParams:
    alpha: float
    gamma: float = DEFAULT_GAMMA
    order: int = DEFAULT_ORDER  # partial-sum truncation M
    n_points: int = 100_000
    t_min: float = 0.0
    t_max: float = DEFAULT_T_MAX

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.gamma <= 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")
        if not self.t_min < self.t_max:
            raise ValueError("need t_min < t_max")

    @property
    def true_dimension(self) -> float:
        return 2.0 - self.alpha


@dataclass(frozen=True)
class Polyline:
    """Sampled curve: equally spaced, strictly increasing abscissae."""

    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.t.shape != self.values.shape or self.t.ndim != 1:
            raise ValueError("t and values must be 1-D arrays of equal length")


def sample_weierstrass(p: WeierstrassParams) -> Polyline:
    """Evaluate the truncated cosine series on an even grid (endpoints included).

    Terms are accumulated in index order n = 0..M in float64.
    """
    t = np.linspace(p.t_min, p.t_max, p.n_points)
    w = np.zeros_like(t)
    for n in range(p.order + 1):
        w += p.gamma ** (-n * p.alpha) * np.cos(2.0 * np.pi * p.gamma**n * t)
    return Polyline(t=t, values=w)


def _to_canvas(coord, lo, hi, span, margin):
    # affine map of [lo, hi] onto [margin, margin+span]; constant input maps
    # to the middle of the band
    if hi == lo:
        return np.full(coord.shape, _round_half_up(margin + span / 2.0), np.int64)
    return _round_half_up(margin + (coord - lo) * (span / (hi - lo)))


def _round_half_up(x):
    return np.floor(np.asarray(x, np.float64) + 0.5).astype(np.int64)


def _line_pixels(px: np.ndarray, py: np.ndarray):
    """All pixels of the midpoint segments joining consecutive points.

    Integer-only arithmetic: along the major axis of each segment the minor
    coordinate is the half-up rounding of the exact linear interpolation, so
    the result is deterministic and matches a classic midpoint stepper one
    segment at a time. Segment end points are emitted once (by the segment
    that starts there, plus the final point).
    """
    dx = np.diff(px)
    dy = np.diff(py)
    steps = np.maximum(np.abs(dx), np.abs(dy))
    total = int(steps.sum())
    if total == 0:
        return px[-1:], py[-1:]
    seg = np.repeat(np.arange(steps.size), steps)
    k = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(steps) - steps, steps)
    sdx, sdy = dx[seg], dy[seg]
    nsteps = steps[seg]
    xmajor = np.abs(sdx) >= np.abs(sdy)
    # round(k*d/n) as floor((2*k*d + n) / (2*n)), exact in int64
    interp_y = py[:-1][seg] + (2 * k * sdy + nsteps) // (2 * nsteps)
    interp_x = px[:-1][seg] + (2 * k * sdx + nsteps) // (2 * nsteps)
    step_x = px[:-1][seg] + np.sign(sdx) * k
    step_y = py[:-1][seg] + np.sign(sdy) * k
    xs = np.where(xmajor, step_x, interp_x)
    ys = np.where(xmajor, interp_y, step_y)
    return np.append(xs, px[-1]), np.append(ys, py[-1])


_CHUNK_PIXELS = 4_000_000


def _draw_polyline(canvas: np.ndarray, px: np.ndarray, py: np.ndarray):
    """Stamp the midpoint segments into the canvas, bounding peak memory by
    rasterizing runs of segments in chunks."""
    steps = np.maximum(np.abs(np.diff(px)), np.abs(np.diff(py)))
    bounds = np.concatenate([[0], np.cumsum(steps)])
    start = 0
    while start < steps.size:
        stop = int(np.searchsorted(bounds, bounds[start] + _CHUNK_PIXELS, side="right")) - 1
        stop = min(max(stop, start + 1), steps.size)
        xs, ys = _line_pixels(px[start : stop + 1], py[start : stop + 1])
        canvas[ys, xs] = FOREGROUND
        start = stop


def rasterize_polyline(line: Polyline, width: int, height: int, margin: int = 0) -> GrayRaster:
    """Plot a polyline as black-on-white pixels and trim the blank margins.

    x and y are scaled independently to fill the canvas minus margins, the
    way a plotting tool fits axes to data.
    """
    if margin < 0 or width - 2 * margin < 1 or height - 2 * margin < 1:
        raise ValueError("margins leave no drawable area")
    if line.t.size < 2:
        raise ValueError("polyline needs at least two points")
    px = _to_canvas(line.t, float(line.t[0]), float(line.t[-1]), width - 1 - 2 * margin, margin)
    vmin, vmax = float(line.values.min()), float(line.values.max())
    # raster rows grow downward, plot values grow upward
    py = _to_canvas(vmax - line.values, 0.0, vmax - vmin, height - 1 - 2 * margin, margin)
    canvas = np.full((height, width), BACKGROUND, np.uint8)
    _draw_polyline(canvas, px, py)
    return trim_margins(GrayRaster(canvas, colorspace=MONO))


def sierpinski_raster(order: int, cell: int = 1) -> GrayRaster:
    """Sierpinski right triangle on a 2^order grid via the Pascal-mod-2 rule.

    Pixel (i, j) is foreground iff i AND j == 0 bitwise; each grid cell is
    expanded to cell x cell pixels. Foreground count is exactly 3^order
    cells.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if cell < 1:
        raise ValueError("cell must be >= 1")
    n = 1 << order
    idx = np.arange(n)
    fg = np.bitwise_and.outer(idx, idx) == 0
    fg = np.repeat(np.repeat(fg, cell, axis=0), cell, axis=1)
    return GrayRaster(np.where(fg, FOREGROUND, BACKGROUND).astype(np.uint8), colorspace=MONO)
