"""Figure rendering for estimates and benchmark reports.

Figures are built straight from Figure objects (no pyplot state) and saved
with a pinned hash salt and no date metadata, so repeated runs emit byte
identical SVG files. The canvas is a fixed 800x600 viewport.
"""

import math

import matplotlib
from matplotlib.figure import Figure

_SALT = "fracdim"
_VIEW = (800 / 72, 600 / 72)  # inches at the SVG backend's 72 dpi


def _figure() -> Figure:
    return Figure(figsize=_VIEW, dpi=72)


def _save(fig: Figure, path) -> None:
    with matplotlib.rc_context({"svg.hashsalt": _SALT}):
        if str(path).lower().endswith(".svg"):
            fig.savefig(path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(path)


def save_scaling_plot(curve, fit, path) -> None:
    """Log-log scaling samples with the fitted line; points outside the fit
    range are drawn hollow."""
    fig = _figure()
    ax = fig.subplots()
    pct = curve.percents()
    sizes = curve.sizes()
    i, j = fit.used_range
    used_x, used_y = pct[i : j + 1], sizes[i : j + 1]
    out_x = pct[:i] + pct[j + 1 :]
    out_y = sizes[:i] + sizes[j + 1 :]
    ax.plot(used_x, used_y, "o", color="C0", label="fit samples")
    if out_x:
        ax.plot(out_x, out_y, "o", mfc="none", mec="C0", label="excluded")
    ref = pct[i]
    line_y = [2.0**fit.intercept * (p / ref) ** fit.dimension for p in (pct[i], pct[j])]
    ax.plot([pct[i], pct[j]], line_y, "-", color="C1", label=f"slope = {fit.dimension:.4f}")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log", base=2)
    ax.set_xlabel("scale (percent of original)")
    ax.set_ylabel("compressed size (bytes)")
    ax.set_title(f"D = {fit.dimension:.4f}   (n = {fit.n_points}, residual norm = {fit.residual_norm:.3g})")
    ax.grid(True, which="both", linewidth=0.3, alpha=0.5)
    ax.legend()
    _save(fig, path)


def save_reference_plot(box_sizes, values, fit, ylabel, path) -> None:
    """Grid-estimator diagnostics: measured values vs inverse box size."""
    fig = _figure()
    ax = fig.subplots()
    x = [1.0 / b for b in box_sizes]
    ax.plot(x, values, "o", color="C0", label="samples")
    x0, x1 = min(x), max(x)
    if "entropy" in ylabel:
        y0 = fit.intercept + fit.dimension * math.log2(x0)
        y1 = fit.intercept + fit.dimension * math.log2(x1)
        ax.set_xscale("log", base=2)
    else:
        y0 = 2.0**fit.intercept * x0**fit.dimension
        y1 = 2.0**fit.intercept * x1**fit.dimension
        ax.set_xscale("log", base=2)
        ax.set_yscale("log", base=2)
    ax.plot([x0, x1], [y0, y1], "-", color="C1", label=f"slope = {fit.dimension:.4f}")
    ax.set_xlabel("1 / box size")
    ax.set_ylabel(ylabel)
    ax.set_title(f"D = {fit.dimension:.4f}")
    ax.grid(True, which="both", linewidth=0.3, alpha=0.5)
    ax.legend()
    _save(fig, path)


def save_bench_ume_plot(report, path) -> None:
    """UME against N, one line per prefix length."""
    fig = _figure()
    ax = fig.subplots()
    for ns in report.config.ns_grid:
        xs, ys = [], []
        for c in report.cells:
            if c.ns == ns and not c.failed:
                xs.append(c.n_points)
                ys.append(c.ume)
        if xs:
            ax.plot(xs, ys, "o-", label=f"n_s = {ns}")
    ax.set_xscale("log")
    ax.set_xlabel("N (curve sample points)")
    ax.set_ylabel("unsigned mean error")
    ax.set_title(f"UME over the sweep ({report.config.mode}, {report.config.codec.name})")
    ax.grid(True, which="both", linewidth=0.3, alpha=0.5)
    ax.legend()
    _save(fig, path)


def save_bench_best_plot(report, path) -> None:
    """True vs estimated dimension per alpha at the best cell."""
    best = report.best_cell
    fig = _figure()
    ax = fig.subplots()
    alphas = list(report.config.alphas)
    ax.plot(alphas, [2.0 - a for a in alphas], "*", markersize=12, color="C2", label="true 2 - alpha")
    ax.plot(alphas, list(best.estimates), "o", mfc="none", mec="C0", label="estimated")
    ax.set_xlabel("alpha")
    ax.set_ylabel("dimension")
    ax.set_title(f"best cell: N = {best.n_points}, n_s = {best.ns}, UME = {best.ume:.4f}")
    ax.grid(True, linewidth=0.3, alpha=0.5)
    ax.legend()
    _save(fig, path)
