"""Fast bilateral filter via the Gaussian-polynomial range-kernel decomposition.

The range kernel is replaced by an order-N Gaussian-polynomial, which turns
the nonlinear filter into N+1 linear spatial filterings of pointwise-
transformed images plus a final pixelwise division.
"""

from __future__ import annotations

import numpy as np

from .conv import apply_spatial
from .errors import NumericRangeError, ParameterError
from .image import RangeSpec, as_image, validate_range
from .kernels import SpatialKernel
from .order import OrderEstimate, epsilon_from_delta, estimate_order

#: Below this |Q| the denominator is considered degenerate and the input
#: pixel is passed through. Only reachable with a caller-forced tiny order.
_Q_FLOOR = 1e-30

#: Default lower bound on sigma_r: below ~10 (at T = 128) the intermediate
#: power images approach the top of the float64 exponent range.
_SIGMA_R_FLOOR = 10.0


def gpa_filter(img: np.ndarray, spatial: SpatialKernel, sigma_r: float, order: int,
               range_spec: RangeSpec | None = None, *,
               allow_small_sigma: bool = False, stats: dict | None = None) -> np.ndarray:
    """Approximate bilateral filtering with an explicit order.

    Centers intensities around range_spec.center, runs the N+1-filtering
    recursion, and shifts back. ``stats``, if given, receives the spatial
    filter call count and the workspace recursions' order.
    """
    img = as_image(img)
    if range_spec is None:
        range_spec = RangeSpec(half_range=128.0, center=128.0)
    validate_range(img, range_spec)
    if not (sigma_r > 0):
        raise ParameterError(f"sigma_r must be positive, got {sigma_r}")
    if sigma_r < _SIGMA_R_FLOOR and not allow_small_sigma:
        raise ParameterError(
            f"sigma_r = {sigma_r} below {_SIGMA_R_FLOOR}; intermediate images may "
            "overflow (pass allow_small_sigma=True to override)"
        )
    if int(order) != order or order < 1:
        raise ParameterError(f"order must be an integer >= 1, got {order}")
    order = int(order)

    h = img - range_spec.center
    # Workspace: six images, allocated once.
    H = h / sigma_r
    F = np.exp(-np.square(h) / (2.0 * sigma_r**2))
    G = np.ones_like(h)
    P = np.zeros_like(h)
    Q = np.zeros_like(h)
    Fbar = apply_spatial(F, spatial)
    n_filterings = 1
    for n in range(1, order + 1):
        Q += G * Fbar
        F *= H
        Fbar = apply_spatial(F, spatial)
        n_filterings += 1
        P += G * Fbar
        G *= H / n

    degenerate = np.abs(Q) < _Q_FLOOR
    safe_Q = np.where(degenerate, 1.0, Q)
    out = sigma_r * (P / safe_Q) + range_spec.center
    if degenerate.any():
        out = np.where(degenerate, img, out)
    if not np.all(np.isfinite(out)):
        raise NumericRangeError(
            f"non-finite output at sigma_r = {sigma_r}, order = {order}"
        )
    if stats is not None:
        stats["spatial_filter_calls"] = n_filterings
        stats["order"] = order
    return out


def gpa_filter_auto(img: np.ndarray, spatial: SpatialKernel, sigma_r: float,
                    delta: float, range_spec: RangeSpec | None = None, *,
                    allow_small_sigma: bool = False,
                    stats: dict | None = None) -> tuple[np.ndarray, OrderEstimate]:
    """Filter to a worst-case per-pixel accuracy of +-delta vs the exact filter.

    Converts delta to a kernel-error budget via the center spatial weight,
    selects the order, and runs :func:`gpa_filter`.
    """
    if range_spec is None:
        range_spec = RangeSpec(half_range=128.0, center=128.0)
    eps = epsilon_from_delta(delta, spatial.w0, range_spec.half_range)
    est = estimate_order(sigma_r, eps, range_spec.half_range)
    out = gpa_filter(img, spatial, sigma_r, est.N0, range_spec,
                     allow_small_sigma=allow_small_sigma, stats=stats)
    return out, est
