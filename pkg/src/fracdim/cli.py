"""Command-line front end.

Subcommands: estimate (scaling-curve dimension of an image), generate
(synthetic fractal images), reference (grid estimators), bench (accuracy
sweep). Every command is a pure function of its inputs and flags; outputs
are CSV files, figures, and a key=value manifest next to each output.

Exit codes: 0 success, 2 input or argument error, 3 insufficient data.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, bench, plots
from .codec import get_codec
from .dimension import (
    compression_dimension,
    curve_to_csv,
    decade_scale_vector,
    default_scale_vector,
    parse_range_policy,
)
from .errors import FracdimError, ImageFormatError, InsufficientDataError
from .imageio import load_raster, save_raster
from .raster import DEFAULT_THRESHOLD
from .reference import box_count_dimension, default_box_sizes, grid_counts, information_dimension
from .rescale import GRAY_BOX, GRAY_TRIANGLE, MONO_BOX
from .synth import WeierstrassParams, rasterize_polyline, sample_weierstrass, sierpinski_raster

_MODES = {"gray": GRAY_BOX, "bw": MONO_BOX, "resize": GRAY_TRIANGLE}

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INSUFFICIENT = 3


def _parse_scales(text: str) -> list:
    if text == "vs":
        return default_scale_vector()
    if text == "decade":
        return decade_scale_vector()
    return [_number(tok) for tok in text.split(",") if tok]


def _number(tok: str):
    value = float(tok)
    return int(value) if value.is_integer() else value


def _parse_canvas(text: str) -> tuple:
    w, _, h = text.partition("x")
    return (int(w), int(h))


def _write_manifest(output_path: Path, entries: dict) -> None:
    lines = [f"{k}={v}" for k, v in entries.items()]
    Path(str(output_path) + ".manifest").write_text("\n".join(lines) + "\n", encoding="ascii")


def _fit_line(fit) -> str:
    i, j = fit.used_range
    return (
        f"D = {fit.dimension:.4f}  "
        f"(n_points={fit.n_points}, range={i}..{j}, residual_norm={fit.residual_norm:.4g})"
    )


def _cmd_estimate(args) -> int:
    raster = load_raster(args.input)
    percents = _parse_scales(args.scales)
    mode = _MODES[args.mode]
    codec = get_codec(args.codec)
    policy = parse_range_policy(args.range)

    fit, curve = compression_dimension(
        raster,
        percents=percents,
        mode=mode,
        codec=codec,
        range_policy=policy,
        threshold=args.threshold,
        r2_threshold=args.r2,
    )
    print(_fit_line(fit))

    manifest = {
        "tool": "fracdim",
        "version": __version__,
        "command": "estimate",
        "input": args.input,
        "scales": ",".join(str(p) for p in percents),
        "mode": mode,
        "codec": codec.name,
        "codec_level": codec.level,
        "range_policy": args.range,
        "r2_threshold": args.r2,
        "threshold": args.threshold,
        "range_used": f"{fit.used_range[0]}..{fit.used_range[1]}",
        "dimension": repr(fit.dimension),
        "residual_norm": repr(fit.residual_norm),
    }
    if isinstance(policy, tuple) and policy[0] == "ns":
        manifest["ns"] = policy[1]

    csv_path = Path(args.csv) if args.csv else Path(args.input).with_name(Path(args.input).stem + "_curve.csv")
    csv_path.write_text(curve_to_csv(curve), encoding="ascii")
    _write_manifest(csv_path, dict(manifest, output=csv_path.name))
    if args.svg:
        plots.save_scaling_plot(curve, fit, args.svg)
        _write_manifest(Path(args.svg), dict(manifest, output=Path(args.svg).name))
    return EXIT_OK


def _cmd_generate(args) -> int:
    if args.kind == "weierstrass":
        if args.alpha is None:
            raise ValueError("weierstrass generation requires --alpha")
        params = WeierstrassParams(
            alpha=args.alpha,
            gamma=args.gamma,
            order=args.terms,
            n_points=args.points,
            t_min=args.t0,
            t_max=args.t1,
        )
        width, height = _parse_canvas(args.canvas)
        raster = rasterize_polyline(sample_weierstrass(params), width, height, args.margin)
        details = {
            "kind": "weierstrass",
            "alpha": args.alpha,
            "gamma": args.gamma,
            "terms": args.terms,
            "points": args.points,
            "t0": args.t0,
            "t1": args.t1,
            "canvas": args.canvas,
            "margin": args.margin,
        }
    else:
        if args.order is None:
            raise ValueError("sierpinski generation requires --order")
        raster = sierpinski_raster(args.order, args.cell)
        details = {"kind": "sierpinski", "order": args.order, "cell": args.cell}

    out = Path(args.out)
    save_raster(raster, out)
    manifest = {"tool": "fracdim", "version": __version__, "command": "generate"}
    manifest.update(details)
    manifest["width"] = raster.width
    manifest["height"] = raster.height
    manifest["output"] = out.name
    _write_manifest(out, manifest)
    return EXIT_OK


def _cmd_reference(args) -> int:
    raster = load_raster(args.input)
    sizes = [int(_number(t)) for t in args.box_sizes.split(",")] if args.box_sizes else default_box_sizes(raster)
    if args.method == "box":
        fit = box_count_dimension(raster, sizes, args.threshold)
    else:
        fit = information_dimension(raster, sizes, args.threshold)
    print(_fit_line(fit))

    manifest = {
        "tool": "fracdim",
        "version": __version__,
        "command": "reference",
        "input": args.input,
        "method": args.method,
        "box_sizes": ",".join(str(b) for b in sizes),
        "threshold": args.threshold,
        "dimension": repr(fit.dimension),
        "residual_norm": repr(fit.residual_norm),
    }

    grids = [grid_counts(raster, b, args.threshold) for b in sizes]
    entropies = []
    for g in grids:
        p = g.occupancy_mass / g.occupancy_mass.sum()
        entropies.append(float(-(p * np.log2(p)).sum()))

    if args.csv:
        lines = ["box_size,occupied,entropy_bits"]
        for g, h in zip(grids, entropies):
            lines.append(f"{g.box_size},{g.occupied},{h!r}")
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="ascii")
        _write_manifest(Path(args.csv), dict(manifest, output=Path(args.csv).name))
    if args.svg:
        if args.method == "box":
            plots.save_reference_plot(sizes, [g.occupied for g in grids], fit, "occupied boxes", args.svg)
        else:
            plots.save_reference_plot(sizes, entropies, fit, "box entropy (bits)", args.svg)
        _write_manifest(Path(args.svg), dict(manifest, output=Path(args.svg).name))
    return EXIT_OK


def _cmd_bench(args) -> int:
    overrides = {}
    if args.alphas:
        overrides["alphas"] = tuple(float(a) for a in args.alphas.split(","))
    if args.N:
        overrides["n_grid"] = tuple(int(n) for n in args.N.split(","))
    if args.ns:
        overrides["ns_grid"] = tuple(int(k) for k in args.ns.split(","))
    if args.mode:
        overrides["mode"] = _MODES[args.mode]
    if args.codec:
        overrides["codec"] = get_codec(args.codec)
    if args.canvas:
        overrides["canvas"] = _parse_canvas(args.canvas)

    cfg = bench.paper_config(**overrides) if args.preset == "paper" else bench.desk_config(**overrides)
    report = bench.run_bench(cfg)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "tool": "fracdim",
        "version": __version__,
        "command": "bench",
        "preset": args.preset,
        "alphas": ",".join(repr(a) for a in cfg.alphas),
        "N_grid": ",".join(str(n) for n in cfg.n_grid),
        "ns_grid": ",".join(str(k) for k in cfg.ns_grid),
        "mode": cfg.mode,
        "codec": cfg.codec.name,
        "codec_level": cfg.codec.level,
        "canvas": f"{cfg.canvas[0]}x{cfg.canvas[1]}",
        "gamma": cfg.gamma,
        "terms": cfg.order,
    }

    detail = outdir / "bench_detail.csv"
    detail.write_text(bench.detail_csv(report), encoding="ascii")
    _write_manifest(detail, dict(manifest, output=detail.name))
    summary = outdir / "bench_summary.csv"
    summary.write_text(bench.summary_csv(report), encoding="ascii")
    _write_manifest(summary, dict(manifest, output=summary.name))

    ume_fig = outdir / "bench_ume.svg"
    plots.save_bench_ume_plot(report, ume_fig)
    _write_manifest(ume_fig, dict(manifest, output=ume_fig.name))

    best = report.best_cell  # raises InsufficientDataError if every cell failed
    best_fig = outdir / "bench_best.svg"
    plots.save_bench_best_plot(report, best_fig)
    _write_manifest(best_fig, dict(manifest, output=best_fig.name))

    print(f"best UME = {best.ume:.4f} at N={best.n_points}, ns={best.ns}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracdim",
        description="Estimate fractal dimensions of images from compressed sizes of downscaled copies.",
    )
    parser.add_argument("--version", action="version", version=f"fracdim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="compression dimension of an image file")
    est.add_argument("input", help="PNG, PGM (P5), or PBM (P4) image")
    est.add_argument("--scales", default="vs", help="'vs' (17-entry default), 'decade' (10..90), or a comma list")
    est.add_argument("--mode", choices=sorted(_MODES), default="gray")
    est.add_argument("--codec", choices=["deflate", "rlehuff"], default="deflate")
    est.add_argument("--range", default="auto", help="'auto', 'ns=K' (scale-vector prefix), or 'I:J' (inclusive)")
    est.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    est.add_argument("--r2", type=float, default=0.99, help="R^2 needed by the automatic range rule")
    est.add_argument("--csv", default=None, help="scaling-curve CSV path (default: <input>_curve.csv)")
    est.add_argument("--svg", default=None, help="write a log-log plot here")
    est.set_defaults(func=_cmd_estimate)

    gen = sub.add_parser("generate", help="write a synthetic fractal image")
    gen.add_argument("kind", choices=["weierstrass", "sierpinski"])
    gen.add_argument("--alpha", type=float, default=None, help="roughness; true dimension is 2-alpha")
    gen.add_argument("--gamma", type=float, default=5.0)
    gen.add_argument("--terms", type=int, default=26, help="series truncation order")
    gen.add_argument("--points", type=int, default=100_000, help="curve sample count")
    gen.add_argument("--t0", type=float, default=0.0)
    gen.add_argument("--t1", type=float, default=1.5)
    gen.add_argument("--canvas", default="4800x3600")
    gen.add_argument("--margin", type=int, default=0)
    gen.add_argument("--order", type=int, default=None, help="sierpinski recursion depth")
    gen.add_argument("--cell", type=int, default=1, help="pixels per sierpinski grid cell")
    gen.add_argument("-o", "--out", required=True, help="output path (.png, .pgm, or .pbm)")
    gen.set_defaults(func=_cmd_generate)

    ref = sub.add_parser("reference", help="classical grid estimators")
    ref.add_argument("input")
    ref.add_argument("--method", choices=["box", "info"], required=True)
    ref.add_argument("--box-sizes", default=None, help="comma list; default: powers of two up to min(w,h)/4")
    ref.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    ref.add_argument("--csv", default=None)
    ref.add_argument("--svg", default=None)
    ref.set_defaults(func=_cmd_reference)

    ben = sub.add_parser("bench", help="accuracy sweep on synthetic curves")
    ben.add_argument("--preset", choices=["desk", "paper"], default="desk")
    ben.add_argument("--alphas", default=None, help="comma list, e.g. 0.2,0.5,0.8")
    ben.add_argument("--N", default=None, help="comma list of curve sample counts")
    ben.add_argument("--ns", default=None, help="comma list of scale-vector prefix lengths")
    ben.add_argument("--mode", choices=sorted(_MODES), default=None)
    ben.add_argument("--codec", choices=["deflate", "rlehuff"], default=None)
    ben.add_argument("--canvas", default=None)
    ben.add_argument("--outdir", default="bench_out")
    ben.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (ImageFormatError, FracdimError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
