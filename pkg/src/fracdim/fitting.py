"""Ordinary least squares on small 1-D samples, shared by the estimators."""

import math

import numpy as np


def ols_fit(x, y) -> tuple[float, float, float, float]:
    """Fit y = intercept + slope*x; return (slope, intercept, residual_norm, r2).

    residual_norm is the Euclidean norm of the residuals. r2 is defined as
    1.0 when y is constant (the flat line fits exactly).
    """
    x = np.asarray(x, np.float64)
    y = np.asarray(y, np.float64)
    if x.size != y.size or x.size < 2:
        raise ValueError("need at least two paired points")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    if sxx == 0.0:
        raise ValueError("all x values identical")
    slope = float(xc @ yc) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ss_res = float(resid @ resid)
    ss_tot = float(yc @ yc)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, math.sqrt(ss_res), r2
