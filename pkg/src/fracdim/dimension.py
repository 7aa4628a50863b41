"""The compression-dimension pipeline.

An image is downscaled to a fixed vector of percentages, each copy is
losslessly compressed, and the slope of log2(compressed size) against
log2(scale) over the physically meaningful range is the estimated dimension.
"""

from dataclasses import dataclass

import numpy as np

from . import util
from .codec import DEFLATE, CodecId, compressed_size
from .errors import InsufficientDataError, InvalidRangeError
from .fitting import ols_fit
from .raster import BACKGROUND, DEFAULT_THRESHOLD, GrayRaster
from .rescale import GRAY_BOX, GRAY_TRIANGLE, MODES, MONO_BOX, BoxScaler, to_monochrome, triangle_scale

# the 17 downscale percentages used throughout, roughly log-spaced
V_S = (5, 6, 7, 8, 9, 10, 12, 14, 16, 20, 30, 40, 50, 60, 70, 80, 90)

MIN_WINDOW = 4
DEFAULT_R2 = 0.99


def default_scale_vector() -> list:
    """The standard 17-entry percentage vector."""
    return list(V_S)


def decade_scale_vector() -> list:
    """The coarse 10%..90% variant."""
    return list(range(10, 100, 10))


@dataclass(frozen=True)
class ScaleSample:
    percent: float
    width: int
    height: int
    pixel_count: int
    compressed_bytes: float
    blank: bool

    def __post_init__(self):
        if self.pixel_count != self.width * self.height:
            raise ValueError("pixel_count must equal width*height")
        if self.compressed_bytes < 1:
            raise ValueError("compressed_bytes must be >= 1")


@dataclass(frozen=True)
class ScalingCurve:
    samples: tuple
    mode: str
    codec: CodecId
    source_dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        pct = [s.percent for s in self.samples]
        if any(a >= b for a, b in zip(pct, pct[1:])):
            raise ValueError("sample percents must be strictly increasing")

    def __len__(self):
        return len(self.samples)

    def percents(self):
        return [s.percent for s in self.samples]

    def sizes(self):
        return [s.compressed_bytes for s in self.samples]


@dataclass(frozen=True)
class FitResult:
    dimension: float
    intercept: float
    residual_norm: float
    used_range: tuple
    n_points: int


def _validate_percents(percents):
    percents = list(percents)
    if not percents:
        raise ValueError("percents must be non-empty")
    for p in percents:
        if not 0 < p <= 100:
            raise ValueError(f"percent {p} outside (0, 100]")
    if any(b <= a for a, b in zip(percents, percents[1:])):
        raise ValueError("percents must be strictly increasing")
    return percents


def sample_scaling_curve(
    r: GrayRaster,
    percents=None,
    mode: str = GRAY_BOX,
    codec: CodecId = DEFLATE,
    threshold: int = DEFAULT_THRESHOLD,
) -> ScalingCurve:
    """Downscale to every percent, compress each copy, and record the sizes.

    Scales are processed independently (worker pool, see util) and assembled
    in ascending-percent order, so output is deterministic for any thread
    count.
    """
    percents = _validate_percents(percents if percents is not None else default_scale_vector())
    if mode not in MODES:
        raise ValueError(f"unknown scale mode {mode!r}")

    scaler = BoxScaler(r) if mode in (GRAY_BOX, MONO_BOX) else None

    def one(percent):
        if mode == GRAY_TRIANGLE:
            scaled = triangle_scale(r, percent)
        else:
            scaled = scaler.scale(percent)
            if mode == MONO_BOX:
                scaled = to_monochrome(scaled, threshold)
        return ScaleSample(
            percent=percent,
            width=scaled.width,
            height=scaled.height,
            pixel_count=scaled.pixel_count,
            compressed_bytes=compressed_size(scaled, codec),
            blank=bool((scaled.pixels == BACKGROUND).all()),
        )

    samples = util.ordered_map(one, percents)
    return ScalingCurve(samples=tuple(samples), mode=mode, codec=codec, source_dims=(r.width, r.height))


def _window_ok(samples, i, j):
    return not any(s.blank for s in samples[i : j + 1])


def auto_range(curve: ScalingCurve, r2_threshold: float = DEFAULT_R2) -> tuple:
    """Pick the physical scaling range of a curve, as inclusive indices.

    Leading samples that are blank, or that show no size change from their
    predecessor, carry no information about the object and are skipped. The
    remaining samples are scanned for the longest window (>= 4 points, no
    blanks) whose log-log fit reaches the R^2 threshold; ties prefer the
    smaller starting index. When no window is that clean the curve has no
    announced linear regime, and the widest usable window wins: short
    high-R^2 windows on scattered data are fit noise, so falling back to
    them would overfit.
    """
    samples = curve.samples
    n = len(samples)
    sizes = [s.compressed_bytes for s in samples]

    first = 0
    while first < n and (samples[first].blank or (first > 0 and sizes[first] == sizes[first - 1])):
        first += 1

    if n - first < MIN_WINDOW:
        raise InsufficientDataError(
            f"only {n - first} usable samples after dropping the leading blank/flat segment"
        )

    x = np.log2([s.percent for s in samples])
    y = np.log2(sizes)

    meeting = []
    usable = []
    for i in range(first, n - MIN_WINDOW + 1):
        for j in range(i + MIN_WINDOW - 1, n):
            if not _window_ok(samples, i, j):
                continue
            _, _, _, r2 = ols_fit(x[i : j + 1], y[i : j + 1])
            length = j - i + 1
            if r2 >= r2_threshold:
                meeting.append((length, -i, (i, j)))
            usable.append((length, -i, (i, j)))

    if meeting:
        return max(meeting)[-1]
    if not usable:
        raise InsufficientDataError("no blank-free window of 4 or more samples")
    return max(usable)[-1]


def fit_loglog(curve: ScalingCurve, fit_range: tuple) -> FitResult:
    """Least-squares slope of log2(size) vs log2(percent) over a sample range.

    The abscissa is referenced to the smallest percent in the range, which
    shifts the intercept but cannot change the slope.
    """
    first, last = fit_range
    n = len(curve.samples)
    if not (0 <= first <= last < n):
        raise InvalidRangeError(f"range {fit_range} invalid for a {n}-sample curve")
    if last - first + 1 < 2:
        raise InvalidRangeError("need at least two samples to fit")
    window = curve.samples[first : last + 1]
    for s in window:
        if s.blank:
            raise InvalidRangeError(f"blank sample at {s.percent}% inside fit range")
    ref = window[0].percent
    x = np.log2([s.percent / ref for s in window])
    y = np.log2([s.compressed_bytes for s in window])
    try:
        slope, intercept, residual_norm, _ = ols_fit(x, y)
    except ValueError as exc:
        raise InvalidRangeError(str(exc)) from None
    return FitResult(
        dimension=slope,
        intercept=intercept,
        residual_norm=residual_norm,
        used_range=(first, last),
        n_points=last - first + 1,
    )


def parse_range_policy(text: str):
    """Parse a range policy: 'auto', 'ns=K' (prefix length), or 'I:J' (inclusive)."""
    if text == "auto":
        return "auto"
    if text.startswith("ns="):
        k = int(text[3:])
        return ("ns", k)
    if ":" in text:
        i, j = text.split(":", 1)
        return (int(i), int(j))
    raise ValueError(f"bad range policy {text!r} (expected auto, ns=K, or I:J)")


def resolve_range(curve: ScalingCurve, policy, r2_threshold: float = DEFAULT_R2) -> tuple:
    if policy == "auto":
        return auto_range(curve, r2_threshold)
    if isinstance(policy, tuple) and len(policy) == 2 and policy[0] == "ns":
        k = policy[1]
        if not 2 <= k <= len(curve.samples):
            raise InvalidRangeError(f"ns={k} outside 2..{len(curve.samples)}")
        return (0, k - 1)
    if isinstance(policy, tuple) and len(policy) == 2:
        return (int(policy[0]), int(policy[1]))
    raise ValueError(f"bad range policy {policy!r}")


def compression_dimension(
    r: GrayRaster,
    percents=None,
    mode: str = GRAY_BOX,
    codec: CodecId = DEFLATE,
    range_policy="auto",
    threshold: int = DEFAULT_THRESHOLD,
    r2_threshold: float = DEFAULT_R2,
) -> tuple:
    """Full pipeline: sample the scaling curve, choose a range, fit the slope.

    Returns (FitResult, ScalingCurve) so callers can report the underlying
    samples next to the estimate.
    """
    curve = sample_scaling_curve(r, percents, mode=mode, codec=codec, threshold=threshold)
    fit_range = resolve_range(curve, range_policy, r2_threshold)
    return fit_loglog(curve, fit_range), curve


# ------------------------------------------------------------- curve CSV

CURVE_CSV_HEADER = "scale_percent,width,height,pixels,compressed_bytes,blank"


def curve_to_csv(curve: ScalingCurve) -> str:
    """Render a curve in the fixed CSV layout (LF endings, exact values)."""
    lines = [CURVE_CSV_HEADER]
    for s in curve.samples:
        size = int(s.compressed_bytes) if float(s.compressed_bytes).is_integer() else s.compressed_bytes
        lines.append(
            f"{s.percent},{s.width},{s.height},{s.pixel_count},{size},{'true' if s.blank else 'false'}"
        )
    return "\n".join(lines) + "\n"


def _parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def curve_from_csv(text: str, mode: str = GRAY_BOX, codec: CodecId = DEFLATE) -> ScalingCurve:
    """Parse curve_to_csv output. Mode/codec are not stored in the CSV."""
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != CURVE_CSV_HEADER:
        raise ValueError("not a scaling-curve CSV")
    samples = []
    for ln in lines[1:]:
        pct, w, h, px, size, blank = ln.split(",")
        samples.append(
            ScaleSample(
                percent=_parse_number(pct),
                width=int(w),
                height=int(h),
                pixel_count=int(px),
                compressed_bytes=_parse_number(size),
                blank={"true": True, "false": False}[blank],
            )
        )
    dims = (samples[-1].width, samples[-1].height) if samples else (0, 0)
    return ScalingCurve(samples=tuple(samples), mode=mode, codec=codec, source_dims=dims)
