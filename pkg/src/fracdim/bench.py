"""Systematic accuracy sweep on synthetic cosine-series fractals.

For every combination of plot-point count N and scale-vector prefix length
n_s, the pipeline estimates the dimension of curves with known ground truth
2-alpha over a grid of alpha values; each cell reports the unsigned mean
error and the mean residual norm of its fits. Everything is deterministic,
so two runs of the same config produce identical reports.
"""

import math
from dataclasses import dataclass

from . import util
from .codec import DEFLATE, CodecId
from .dimension import V_S, fit_loglog, sample_scaling_curve
from .errors import InsufficientDataError, InvalidRangeError
from .rescale import GRAY_BOX
from .synth import WeierstrassParams, rasterize_polyline, sample_weierstrass

DEFAULT_ALPHAS = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)

DESK_CANVAS = (2400, 1800)
PAPER_CANVAS = (4800, 3600)

DESK_N_GRID = (3_000, 10_000, 30_000, 100_000, 300_000)
PAPER_N_GRID = (10_000, 30_000, 100_000, 300_000, 1_000_000, 3_000_000)

DESK_NS_GRID = (6, 8, 10, 13, 17)
PAPER_NS_GRID = (4, 6, 8, 10, 12, 14, 17)


@dataclass(frozen=True)
class BenchConfig:
    alphas: tuple = DEFAULT_ALPHAS
    n_grid: tuple = DESK_N_GRID
    ns_grid: tuple = DESK_NS_GRID
    mode: str = GRAY_BOX
    codec: CodecId = DEFLATE
    canvas: tuple = DESK_CANVAS
    gamma: float = 5.0
    order: int = 26
    t_min: float = 0.0
    t_max: float = 1.5

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "n_grid", tuple(sorted(self.n_grid)))
        object.__setattr__(self, "ns_grid", tuple(sorted(self.ns_grid)))
        if not self.alphas or any(not 0 < a < 1 for a in self.alphas):
            raise ValueError("alphas must be a non-empty list of values in (0, 1)")
        if not self.n_grid or any(n < 2 for n in self.n_grid):
            raise ValueError("n_grid values must be >= 2")
        if not self.ns_grid or any(not 4 <= k <= len(V_S) for k in self.ns_grid):
            raise ValueError(f"ns_grid values must be in 4..{len(V_S)}")
        if len(self.canvas) != 2 or any(d < 4 for d in self.canvas):
            raise ValueError("canvas must be (width, height) with dims >= 4")


def desk_config(**overrides) -> BenchConfig:
    """Small preset sized so a full sweep finishes in minutes."""
    return BenchConfig(**overrides)


def paper_config(**overrides) -> BenchConfig:
    """Full-resolution preset (17 Mpx canvas, large N grid). Slow."""
    merged = dict(canvas=PAPER_CANVAS, n_grid=PAPER_N_GRID, ns_grid=PAPER_NS_GRID)
    merged.update(overrides)
    return BenchConfig(**merged)


@dataclass(frozen=True)
class BenchCell:
    n_points: int
    ns: int
    estimates: tuple  # per alpha, None where the fit failed
    residual_norms: tuple
    ume: float  # nan when any alpha failed
    mean_residual_norm: float

    @property
    def failed(self) -> bool:
        return any(e is None for e in self.estimates)


@dataclass(frozen=True)
class BenchReport:
    config: BenchConfig
    cells: tuple  # sorted by (n_points, ns)

    def cell(self, n_points: int, ns: int) -> BenchCell:
        for c in self.cells:
            if c.n_points == n_points and c.ns == ns:
                return c
        raise KeyError((n_points, ns))

    @property
    def best_cell(self) -> BenchCell:
        ok = [c for c in self.cells if not c.failed]
        if not ok:
            raise InsufficientDataError("every bench cell failed")
        return min(ok, key=lambda c: (c.ume, c.n_points, c.ns))


def ume(estimates, alphas) -> float:
    """Unsigned mean error against the 2-alpha ground truth."""
    estimates = list(estimates)
    alphas = list(alphas)
    if len(estimates) != len(alphas) or not alphas:
        raise ValueError("estimates and alphas must have equal nonzero length")
    return sum(abs(d - (2.0 - a)) for d, a in zip(estimates, alphas)) / len(alphas)


def _default_curve_estimates(cfg: BenchConfig, alpha: float, n_points: int):
    """Per-ns (estimate, residual_norm) for one generated image.

    Scans the scale vector once and reuses the curve for every prefix
    length.
    """
    params = WeierstrassParams(
        alpha=alpha,
        gamma=cfg.gamma,
        order=cfg.order,
        n_points=n_points,
        t_min=cfg.t_min,
        t_max=cfg.t_max,
    )
    image = rasterize_polyline(sample_weierstrass(params), cfg.canvas[0], cfg.canvas[1])
    curve = sample_scaling_curve(image, list(V_S), mode=cfg.mode, codec=cfg.codec)
    out = {}
    for ns in cfg.ns_grid:
        try:
            fit = fit_loglog(curve, (0, ns - 1))
            out[ns] = (fit.dimension, fit.residual_norm)
        except (InsufficientDataError, InvalidRangeError):
            out[ns] = (None, None)
    return out


def run_bench(cfg: BenchConfig, estimator=None) -> BenchReport:
    """Run the full sweep.

    `estimator` swaps the whole pipeline for a callable
    (image, ns) -> (dimension, residual_norm); it exists for plumbing tests
    and for comparing against reference estimators. Failed fits mark their
    cell as failed instead of aborting the sweep.
    """

    def job(args):
        n_points, alpha = args
        if estimator is None:
            return _default_curve_estimates(cfg, alpha, n_points)
        params = WeierstrassParams(
            alpha=alpha, gamma=cfg.gamma, order=cfg.order,
            n_points=n_points, t_min=cfg.t_min, t_max=cfg.t_max,
        )
        image = rasterize_polyline(sample_weierstrass(params), cfg.canvas[0], cfg.canvas[1])
        out = {}
        for ns in cfg.ns_grid:
            try:
                out[ns] = tuple(estimator(image, ns))
            except (InsufficientDataError, InvalidRangeError):
                out[ns] = (None, None)
        return out

    jobs = [(n, a) for n in cfg.n_grid for a in cfg.alphas]
    by_job = dict(zip(jobs, util.ordered_map(job, jobs)))

    cells = []
    for n_points in cfg.n_grid:
        for ns in cfg.ns_grid:
            ests = tuple(by_job[(n_points, a)][ns][0] for a in cfg.alphas)
            resids = tuple(by_job[(n_points, a)][ns][1] for a in cfg.alphas)
            if any(e is None for e in ests):
                cell_ume = math.nan
                mean_resid = math.nan
            else:
                cell_ume = ume(ests, cfg.alphas)
                mean_resid = sum(resids) / len(resids)
            cells.append(
                BenchCell(
                    n_points=n_points,
                    ns=ns,
                    estimates=ests,
                    residual_norms=resids,
                    ume=cell_ume,
                    mean_residual_norm=mean_resid,
                )
            )
    return BenchReport(config=cfg, cells=tuple(cells))


# ----------------------------------------------------------------- CSVs

DETAIL_HEADER = "N,ns,alpha,D_true,D_est,residual_norm"
SUMMARY_HEADER = "N,ns,UME,mean_residual_norm"


def _fmt(value) -> str:
    if value is None:
        return "nan"
    return repr(value) if isinstance(value, float) else str(value)


def detail_csv(report: BenchReport) -> str:
    lines = [DETAIL_HEADER]
    for c in report.cells:
        for alpha, est, resid in zip(report.config.alphas, c.estimates, c.residual_norms):
            lines.append(
                f"{c.n_points},{c.ns},{_fmt(alpha)},{_fmt(2.0 - alpha)},{_fmt(est)},{_fmt(resid)}"
            )
    return "\n".join(lines) + "\n"


def summary_csv(report: BenchReport) -> str:
    lines = [SUMMARY_HEADER]
    for c in report.cells:
        lines.append(f"{c.n_points},{c.ns},{_fmt(c.ume)},{_fmt(c.mean_residual_norm)}")
    return "\n".join(lines) + "\n"
