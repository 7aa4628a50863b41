"""Classical grid estimators used as independent cross-checks.

Box counting measures how the number of occupied grid boxes grows as the
grid is refined; the information variant weighs each box by the share of
foreground it holds and tracks the Shannon entropy of that distribution.
"""

from dataclasses import dataclass, field

import numpy as np

from .dimension import FitResult
from .errors import InsufficientDataError
from .fitting import ols_fit
from .raster import DEFAULT_THRESHOLD, GrayRaster


@dataclass(frozen=True)
class GridCounts:
    """Occupancy of one grid: box side length, hit count, per-box foreground mass."""

    box_size: int
    occupied: int
    occupancy_mass: np.ndarray = field(repr=False)  # nonzero per-box counts only


def _foreground(r: GrayRaster, threshold: int) -> np.ndarray:
    return r.pixels < threshold


def grid_counts(r: GrayRaster, box_size: int, threshold: int = DEFAULT_THRESHOLD) -> GridCounts:
    """Count foreground per grid box. Grid is anchored top-left; partial edge
    boxes count like any other."""
    if box_size < 1:
        raise ValueError(f"box_size must be >= 1, got {box_size}")
    fg = _foreground(r, threshold)
    h, w = fg.shape
    nby = -(-h // box_size)
    nbx = -(-w // box_size)
    padded = np.zeros((nby * box_size, nbx * box_size), np.int64)
    padded[:h, :w] = fg
    mass = padded.reshape(nby, box_size, nbx, box_size).sum(axis=(1, 3))
    nonzero = mass[mass > 0]
    return GridCounts(box_size=box_size, occupied=int(nonzero.size), occupancy_mass=nonzero.ravel())


def default_box_sizes(r: GrayRaster) -> list:
    """Powers of two up to min(width, height)/4."""
    limit = min(r.width, r.height) // 4
    sizes = []
    b = 1
    while b <= max(1, limit):
        sizes.append(b)
        b *= 2
    return sizes


def _grid_series(r, box_sizes, threshold):
    box_sizes = list(box_sizes)
    if len(set(box_sizes)) < 2:
        raise ValueError("need at least two distinct box sizes")
    counts = [grid_counts(r, b, threshold) for b in box_sizes]
    if any(g.occupied == 0 for g in counts):
        raise InsufficientDataError("raster has no foreground pixels at the given threshold")
    return box_sizes, counts


def box_count_dimension(r: GrayRaster, box_sizes=None, threshold: int = DEFAULT_THRESHOLD) -> FitResult:
    """Slope of log2(occupied boxes) versus log2(1/box_size)."""
    box_sizes, counts = _grid_series(r, box_sizes if box_sizes is not None else default_box_sizes(r), threshold)
    x = np.log2(1.0 / np.asarray(box_sizes, np.float64))
    y = np.log2([g.occupied for g in counts])
    slope, intercept, rnorm, _ = ols_fit(x, y)
    return FitResult(
        dimension=slope,
        intercept=intercept,
        residual_norm=rnorm,
        used_range=(0, len(box_sizes) - 1),
        n_points=len(box_sizes),
    )


def information_dimension(r: GrayRaster, box_sizes=None, threshold: int = DEFAULT_THRESHOLD) -> FitResult:
    """Slope of the box-occupancy entropy versus log2(1/box_size)."""
    box_sizes, counts = _grid_series(r, box_sizes if box_sizes is not None else default_box_sizes(r), threshold)
    x = np.log2(1.0 / np.asarray(box_sizes, np.float64))
    entropies = []
    for g in counts:
        p = g.occupancy_mass / g.occupancy_mass.sum()
        entropies.append(float(-(p * np.log2(p)).sum()))
    slope, intercept, rnorm, _ = ols_fit(x, entropies)
    return FitResult(
        dimension=slope,
        intercept=intercept,
        residual_norm=rnorm,
        used_range=(0, len(box_sizes) - 1),
        n_points=len(box_sizes),
    )
