"""Linear spatial filtering: O(1) box via running sums, separable Gaussian,
and a direct 2-D convolution used as the correctness oracle.

Every path uses the same replicate (clamp-to-edge) boundary; the accuracy
guarantee compares the fast filter against the exact bilateral filter
termwise, which requires identical spatial weights and boundary extension
on both sides.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .image import as_image
from .kernels import SpatialKernel, make_spatial_kernel


def _check_window(img: np.ndarray, W: int) -> None:
    # A dimension of size 1 does not constrain the window: replicate padding
    # makes the filter degenerate along that axis, so 1 x N (or N x 1) inputs
    # behave as 1-D signals of length N.
    limit = min((d for d in img.shape if d > 1), default=1)
    if W >= limit:
        raise ParameterError(
            f"window half-width {W} too large for {img.shape[0]}x{img.shape[1]} image"
        )


def _sliding_sum(padded: np.ndarray, n: int, axis: int) -> np.ndarray:
    """Sum over a length-n sliding window along ``axis`` via prefix sums."""
    cs = np.cumsum(padded, axis=axis, dtype=np.float64)
    zero_shape = list(padded.shape)
    zero_shape[axis] = 1
    cs = np.concatenate([np.zeros(zero_shape), cs], axis=axis)
    upper = [slice(None)] * padded.ndim
    lower = [slice(None)] * padded.ndim
    upper[axis] = slice(n, cs.shape[axis])
    lower[axis] = slice(0, cs.shape[axis] - n)
    return cs[tuple(upper)] - cs[tuple(lower)]


def box_filter(img: np.ndarray, W: int) -> np.ndarray:
    """Normalized (2W+1)^2 box filter, per-pixel cost independent of W."""
    img = as_image(img)
    if int(W) != W or W < 1:
        raise ParameterError(f"W must be an integer >= 1, got {W}")
    W = int(W)
    _check_window(img, W)
    n = 2 * W + 1
    out = np.pad(img, W, mode="edge")
    out = _sliding_sum(out, n, axis=1)
    out = _sliding_sum(out, n, axis=0)
    return out / float(n * n)


def _filter_axis(img: np.ndarray, w1d: np.ndarray, axis: int) -> np.ndarray:
    """Correlate with a symmetric 1-D kernel along ``axis``, replicate boundary."""
    W = (len(w1d) - 1) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (W, W)
    padded = np.pad(img, pad, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, len(w1d), axis=axis)
    return windows @ w1d


def gaussian_filter(img: np.ndarray, sigma_s: float) -> np.ndarray:
    """Separable truncated Gaussian on [-W, W], W = ceil(3 sigma_s)."""
    img = as_image(img)
    kernel = make_spatial_kernel("gaussian", sigma_s=sigma_s)
    _check_window(img, kernel.half_width)
    return apply_spatial(img, kernel)


def apply_spatial(img: np.ndarray, kernel: SpatialKernel) -> np.ndarray:
    """Fast-path filtering with a constructed kernel (box or separable Gaussian)."""
    if kernel.kind == "box":
        return box_filter(img, kernel.half_width)
    out = _filter_axis(img, kernel.weights_1d, axis=1)
    return _filter_axis(out, kernel.weights_1d, axis=0)


def convolve_direct(img: np.ndarray, kernel: SpatialKernel) -> np.ndarray:
    """Literal double-sum convolution out(i) = sum_j w(j) img(i - j); the oracle."""
    img = as_image(img)
    W = kernel.half_width
    _check_window(img, W)
    padded = np.pad(img, W, mode="edge")
    h, w = img.shape
    out = np.zeros_like(img)
    for dy in range(-W, W + 1):
        for dx in range(-W, W + 1):
            # img(i - j) for j = (dy, dx): shift the padded image by -j.
            block = padded[W - dy:W - dy + h, W - dx:W - dx + w]
            out += kernel.weights[W + dy, W + dx] * block
    return out
