"""Range kernel, its Gaussian-polynomial approximant, and spatial kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class SpatialKernel:
    """Normalized nonnegative weights on the square window [-W, W]^2.

    ``weights`` is the (2W+1) x (2W+1) array indexed so that weights[W, W] is
    the origin. For separable kinds ``weights_1d`` holds the normalized 1-D
    factor whose outer product equals ``weights``.
    """

    kind: str  # "box" or "gaussian"
    half_width: int
    weights: np.ndarray = field(repr=False)
    weights_1d: np.ndarray = field(repr=False)
    sigma_s: float | None = None

    @property
    def w0(self) -> float:
        """Weight at the origin; enters the filtering-accuracy bound."""
        return float(self.weights[self.half_width, self.half_width])


def range_kernel(t, sigma_r: float):
    """Gaussian range kernel exp(-t^2 / (2 sigma_r^2))."""
    if not (sigma_r > 0):
        raise ParameterError(f"sigma_r must be positive, got {sigma_r}")
    return np.exp(-np.square(np.asarray(t, dtype=np.float64)) / (2.0 * sigma_r**2))


def gauss_poly(t: float, tau: float, order: int, sigma_r: float) -> float:
    """Order-N approximant of the translated range kernel.

    exp(-(t^2 + tau^2) / 2 sigma_r^2) times the first ``order`` Taylor terms of
    exp(t tau / sigma_r^2), accumulated by the multiplicative term recursion so
    no explicit factorial ever overflows.
    """
    if not (sigma_r > 0):
        raise ParameterError(f"sigma_r must be positive, got {sigma_r}")
    if order < 1:
        raise ParameterError(f"order must be >= 1, got {order}")
    x = (t * tau) / sigma_r**2
    term = 1.0
    acc = 1.0
    for n in range(1, order):
        term *= x / n
        acc += term
    return math.exp(-(t * t + tau * tau) / (2.0 * sigma_r**2)) * acc


def make_spatial_kernel(kind: str, *, sigma_s: float | None = None,
                        half_width: int | None = None) -> SpatialKernel:
    """Construct a normalized box or truncated-Gaussian spatial kernel.

    Gaussian: W = ceil(3 sigma_s), weights exp(-||i||^2 / 2 sigma_s^2) on
    [-W, W]^2 normalized to sum 1. Box: uniform 1/(2W+1)^2.
    """
    if kind == "box":
        if half_width is None or int(half_width) != half_width or half_width < 1:
            raise ParameterError(f"box kernel needs integer half_width >= 1, got {half_width}")
        W = int(half_width)
        n = 2 * W + 1
        w1 = np.full(n, 1.0 / n)
        return SpatialKernel(kind="box", half_width=W,
                             weights=np.full((n, n), 1.0 / n**2), weights_1d=w1)
    if kind == "gaussian":
        if sigma_s is None or not (sigma_s > 0):
            raise ParameterError(f"gaussian kernel needs sigma_s > 0, got {sigma_s}")
        W = math.ceil(3.0 * sigma_s)
        offs = np.arange(-W, W + 1, dtype=np.float64)
        g1 = np.exp(-(offs**2) / (2.0 * sigma_s**2))
        w2 = np.outer(g1, g1)
        w2 /= w2.sum()
        return SpatialKernel(kind="gaussian", half_width=W, weights=w2,
                             weights_1d=g1 / g1.sum(), sigma_s=float(sigma_s))
    raise ParameterError(f"unknown spatial kernel kind {kind!r}")
