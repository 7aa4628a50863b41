"""Fractal dimension estimation for raster images via lossless compression."""

from .bench import BenchConfig, BenchReport, desk_config, paper_config, run_bench, ume
from .codec import (
    DEFLATE,
    RLE_HUFFMAN,
    CodecId,
    CompressedBlob,
    compress,
    compressed_size,
    decompress,
    double_compression_ratio,
    rle_huffman_size,
)
from .dimension import (
    FitResult,
    ScaleSample,
    ScalingCurve,
    auto_range,
    compression_dimension,
    curve_from_csv,
    curve_to_csv,
    decade_scale_vector,
    default_scale_vector,
    fit_loglog,
    sample_scaling_curve,
)
from .errors import FracdimError, ImageFormatError, InsufficientDataError, InvalidRangeError
from .imageio import load_raster, save_raster
from .raster import GrayRaster, Histogram, histogram, order0_entropy, to_monochrome, trim_margins
from .reference import GridCounts, box_count_dimension, grid_counts, information_dimension
from .rescale import ScaleSpec, box_scale, mono_scale, target_dims, triangle_scale
from .synth import Polyline, WeierstrassParams, rasterize_polyline, sample_weierstrass, sierpinski_raster

__version__ = "0.1.0"
