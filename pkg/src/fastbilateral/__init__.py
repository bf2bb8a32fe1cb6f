"""Fast, provably accurate bilateral filtering.

The Gaussian range kernel is decomposed into a bivariate Gaussian times a
truncated Taylor polynomial, turning the bilateral filter into N+1 linear
spatial filterings. The order N is selected automatically from a worst-case
per-pixel error target, and an exact brute-force filter plus bound-checking
tools back every accuracy claim.
"""

import os as _os

# Cap numeric thread pools before numpy is first imported so benchmark
# runs are deterministic. Must be set in the environment of this process.
_cap = _os.environ.get("FASTBILATERAL_THREADS")
if _cap:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _cap)

from .analysis import (ErrorReport, accuracy_bound, error_report,
                       kernel_error_sup, linf_error, mse_db, psi_eval)
from .conv import apply_spatial, box_filter, convolve_direct, gaussian_filter
from .engine import gpa_filter, gpa_filter_auto
from .errors import (BoundInapplicableError, NumericRangeError, ParameterError,
                     RangeViolationError)
from .image import (RANGE_8BIT, RangeSpec, as_image, center, load_image,
                    load_pgm, save_image, save_pgm, uncenter)
from .kernels import SpatialKernel, gauss_poly, make_spatial_kernel, range_kernel
from .order import (OrderEstimate, chebyshev_order, chernoff_order_exhaustive,
                    epsilon_from_delta, estimate_order, lambert_w0_series,
                    log_chernoff, order_approx, poisson_tail, yang_order)
from .reference import bilateral_exact

__version__ = "0.1.0"

__all__ = [
    "ErrorReport", "OrderEstimate", "RangeSpec", "SpatialKernel",
    "RANGE_8BIT", "__version__",
    "accuracy_bound", "apply_spatial", "as_image", "bilateral_exact",
    "box_filter", "center", "chebyshev_order", "chernoff_order_exhaustive",
    "convolve_direct", "epsilon_from_delta", "error_report", "estimate_order",
    "gauss_poly", "gaussian_filter", "gpa_filter", "gpa_filter_auto",
    "kernel_error_sup", "lambert_w0_series", "linf_error", "load_image",
    "load_pgm", "log_chernoff", "make_spatial_kernel", "mse_db", "order_approx",
    "poisson_tail", "psi_eval", "range_kernel", "save_image", "save_pgm",
    "uncenter", "yang_order",
    "BoundInapplicableError", "NumericRangeError", "ParameterError",
    "RangeViolationError",
]
