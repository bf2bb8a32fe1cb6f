"""Error metrology: kernel-error grid search, tail-bound evaluation, the
filtering-accuracy bound, and image-difference metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundInapplicableError, ParameterError
from .image import as_image
from .order import poisson_tail


@dataclass
class ErrorReport:
    """Difference metrics between two images plus optional bound values."""

    linf: float
    linf_db: float  # 20 log10(linf); -inf when the images agree
    mse_db: float   # 10 log10(mean squared difference); -inf on equality
    kernel_error_sup: float | None = None
    kernel_bound: float | None = None
    accuracy_bound: float | None = None
    runtime_ms: dict = field(default_factory=dict)


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ParameterError(f"image dimensions differ: {a.shape} vs {b.shape}")


def linf_error(a: np.ndarray, b: np.ndarray) -> float:
    """Maximum absolute per-pixel difference."""
    a, b = as_image(a), as_image(b)
    _check_same_shape(a, b)
    return float(np.max(np.abs(a - b)))


def mse_db(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared difference in decibels (10 log10); -inf on exact equality."""
    a, b = as_image(a), as_image(b)
    _check_same_shape(a, b)
    m = float(np.mean(np.square(a - b)))
    return -math.inf if m == 0.0 else 10.0 * math.log10(m)


def error_report(a: np.ndarray, b: np.ndarray) -> ErrorReport:
    linf = linf_error(a, b)
    linf_db = -math.inf if linf == 0.0 else 20.0 * math.log10(linf)
    return ErrorReport(linf=linf, linf_db=linf_db, mse_db=mse_db(a, b))


def psi_eval(s: float, N: int, sigma_r: float) -> float:
    """Tail weight of the truncated expansion at product value s >= 0.

    Equals the Poisson(s / sigma_r^2) tail beyond N, computed via the
    complementary partial sum and clamped to [0, 1]. Non-decreasing in s.
    """
    if not (s >= 0):
        raise ParameterError(f"s must be nonnegative, got {s}")
    if not (sigma_r > 0):
        raise ParameterError(f"sigma_r must be positive, got {sigma_r}")
    if s == 0.0:
        return 0.0 if N >= 1 else 1.0
    return poisson_tail(N, s / sigma_r**2)


def kernel_error_sup(N: int, sigma_r: float, T: float) -> float:
    """Worst-case kernel error over the integer grid t, tau in {-T, ..., T}.

    The error is evaluated through its tail-series form
    exp(-(t^2 + tau^2) / 2 sigma_r^2) * sum_{n >= N} (t tau / sigma_r^2)^n / n!
    rather than by subtracting the approximant from the true kernel: for
    negative t*tau the partial Taylor sum cancels catastrophically while the
    tail series is numerically benign once its terms decrease.
    """
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    if not (sigma_r > 0 and T > 0):
        raise ParameterError("sigma_r and T must be positive")
    grid = np.arange(-math.floor(T), math.floor(T) + 1, dtype=np.float64)
    x = np.outer(grid, grid) / sigma_r**2
    prefactor = np.exp(-(np.square(grid)[:, None] + np.square(grid)[None, :])
                       / (2.0 * sigma_r**2))

    # First tail term x^N / N! via logs; sign tracked separately.
    with np.errstate(divide="ignore"):
        log_absx = np.log(np.abs(x))
    term = np.where(x == 0.0, 0.0,
                    np.sign(x) ** N * np.exp(N * log_absx - math.lgamma(N + 1)))
    total = term.copy()
    xmax = float(np.max(np.abs(x)))
    n = N
    max_iters = int(5 * xmax + 2000)
    for _ in range(max_iters):
        n += 1
        term = term * x / n
        total += term
        if n > xmax and np.max(np.abs(term)) < 1e-30 * max(1.0, np.max(np.abs(total))):
            break
    return float(np.max(np.abs(prefactor * total)))


def accuracy_bound(kernel_err: float, w0: float, T: float) -> float:
    """Worst-case filtering error implied by a kernel error: 2 T e / (w0 - e)."""
    if not (kernel_err >= 0):
        raise ParameterError(f"kernel_err must be nonnegative, got {kernel_err}")
    if not (0.0 < w0 <= 1.0):
        raise ParameterError(f"w0 must lie in (0, 1], got {w0}")
    if not (T > 0):
        raise ParameterError(f"T must be positive, got {T}")
    if kernel_err >= w0:
        raise BoundInapplicableError(
            f"kernel error {kernel_err} >= center weight {w0}; bound is vacuous"
        )
    return 2.0 * T * kernel_err / (w0 - kernel_err)
