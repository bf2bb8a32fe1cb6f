"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines as they complete.
"""

import math
import statistics
import time

import numpy as np
import pytest

from fastbilateral import (bilateral_exact, box_filter, chernoff_order_exhaustive,
                           convolve_direct, estimate_order, gaussian_filter,
                           gpa_filter, gpa_filter_auto, kernel_error_sup,
                           linf_error, log_chernoff, make_spatial_kernel,
                           poisson_tail, RangeSpec)


def _natural_crop():
    from skimage import data

    return data.camera()[100:228, 100:228].astype(np.float64)


def _report(num, name):
    print(f"\nACCEPTANCE {num} ({name}): PASS")


def test_criterion_1_delta_guarantee():
    rng = np.random.default_rng(20240817)
    images = [np.floor(rng.uniform(0.0, 256.0, (64, 64))), _natural_crop()]
    kernels = [make_spatial_kernel("gaussian", sigma_s=3),
               make_spatial_kernel("gaussian", sigma_s=5),
               make_spatial_kernel("box", half_width=4),
               make_spatial_kernel("box", half_width=10)]
    for img in images:
        for kernel in kernels:
            for sigma_r in (30.0, 50.0):
                exact = bilateral_exact(img, kernel, sigma_r)
                for delta in (0.1, 1.0):
                    fast, est = gpa_filter_auto(img, kernel, sigma_r, delta)
                    err = linf_error(fast, exact)
                    assert err <= delta, (
                        f"{img.shape} {kernel.kind} W={kernel.half_width} "
                        f"sigma_r={sigma_r} delta={delta}: linf={err} N={est.N0}")
    _report(1, "delta guarantee vs exact filter")


def test_criterion_2_closed_form_order_tables():
    from fastbilateral import order_approx, yang_order

    w0 = make_spatial_kernel("gaussian", sigma_s=5).w0
    deltas = (1e-3, 1e-2, 0.05, 0.1, 1.0, 3.0)
    approx_expected = (49, 47, 45, 44, 42, 41)
    yang_expected = (4006, 1267, 566, 401, 127, 73)
    for delta, exp_a, exp_y in zip(deltas, approx_expected, yang_expected):
        assert order_approx(30.0, delta, w0, 128.0).N0 == exp_a
        assert yang_order(30.0, delta).N0 == exp_y
    _report(2, "closed-form order table reproduction")


def test_criterion_3_order_selection_table():
    sigmas = (10, 15, 20, 25, 30, 35, 40, 45, 50)
    expected = (214, 107, 67, 48, 37, 30, 25, 21, 19)
    for sigma_r, exp in zip(sigmas, expected):
        got = estimate_order(sigma_r, 1e-3, 128.0).N0
        assert abs(got - exp) <= 1, f"sigma_r={sigma_r}: {got} vs {exp}"
    # Series-only estimate (Newton seed) at sigma_r = 10.
    seed = estimate_order(10.0, 1e-3, 128.0).newton_trace[0]
    assert math.ceil(seed) == 270
    _report(3, "order-selection table at epsilon 1e-3")


def test_criterion_4_kernel_error_tail_bound():
    # The grid corner t = tau = T attains the bound exactly; allow rounding.
    rtol = 1e-9
    for N, sigma_r in ((40, 30), (20, 50), (10, 70), (214, 10)):
        sup = kernel_error_sup(N, sigma_r, 128.0)
        bound = poisson_tail(N, (128.0 / sigma_r) ** 2)
        assert sup <= bound * (1 + rtol), (N, sigma_r, sup, bound)
    sup = kernel_error_sup(40, 30.0, 128.0)
    bound = poisson_tail(40, (128.0 / 30.0) ** 2)
    assert sup >= bound / 100.0
    _report(4, "Poisson tail bounds the grid kernel error")


def test_criterion_5_fast_convolutions_match_oracle():
    rng = np.random.default_rng(99)
    settings = []
    for W in range(1, 11):
        settings.append(("box", W))
    for sigma_s in range(1, 9):
        settings.append(("gaussian", sigma_s))
    count = 0
    while count < 100:
        kind, param = settings[count % len(settings)]
        img = np.floor(rng.uniform(0.0, 256.0, (32, 32)))
        if kind == "box":
            kernel = make_spatial_kernel("box", half_width=param)
            fast = box_filter(img, param)
        else:
            kernel = make_spatial_kernel("gaussian", sigma_s=float(param))
            fast = gaussian_filter(img, float(param))
        assert np.max(np.abs(fast - convolve_direct(img, kernel))) <= 1e-9
        count += 1
    _report(5, "fast convolutions match direct oracle on 100 images")


def test_criterion_6_box_runtime_independent_of_window():
    rng = np.random.default_rng(5)
    img = np.floor(rng.uniform(0.0, 256.0, (512, 512)))

    def median_runtime(W):
        kernel = make_spatial_kernel("box", half_width=W)
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            gpa_filter(img, kernel, 30.0, 10)
            times.append(time.perf_counter() - t0)
        return statistics.median(times)

    t5 = median_runtime(5)
    t20 = median_runtime(20)
    assert t20 <= 1.25 * t5, f"W=20 median {t20:.4f}s vs W=5 median {t5:.4f}s"
    _report(6, "O(1) box scaling on 512x512")


def test_criterion_7_shift_commutation():
    kernel = make_spatial_kernel("gaussian", sigma_s=2)
    spec = RangeSpec(128.0, 128.0)
    spec0 = RangeSpec(128.0, 0.0)
    rng = np.random.default_rng(7)
    for _ in range(50):
        img = np.floor(rng.uniform(0.0, 256.0, (16, 16)))
        exact = bilateral_exact(img, kernel, 30.0)
        exact_shifted = bilateral_exact(img - 128.0, kernel, 30.0) + 128.0
        assert linf_error(exact, exact_shifted) <= 1e-9
        fast = gpa_filter(img, kernel, 30.0, 30, spec)
        fast_shifted = gpa_filter(img - 128.0, kernel, 30.0, 30, spec0) + 128.0
        assert linf_error(fast, fast_shifted) <= 1e-9
    _report(7, "shift commutation for oracle and fast filter")


def test_criterion_8_monotone_error_decay():
    rng = np.random.default_rng(8)
    img = np.floor(rng.uniform(0.0, 256.0, (64, 64)))
    kernel = make_spatial_kernel("gaussian", sigma_s=5)
    exact = bilateral_exact(img, kernel, 30.0)
    orders = (10, 20, 30, 40, 50, 60)
    errs = [linf_error(gpa_filter(img, kernel, 30.0, n), exact) for n in orders]
    assert all(a >= b for a, b in zip(errs, errs[1:])), errs
    assert errs[0] >= 10.0 * errs[3], f"N=10 err {errs[0]} vs N=40 err {errs[3]}"
    _report(8, "monotone error decay in the order")


def test_criterion_9_fast_order_matches_exhaustive_scan():
    for sigma_r in range(10, 70):
        for eps in (1e-1, 1e-2, 1e-3):
            lam = (128.0 / sigma_r) ** 2
            fast = estimate_order(sigma_r, eps, 128.0).N0
            exact = chernoff_order_exhaustive(lam, eps).N0
            assert abs(fast - exact) <= 1, (sigma_r, eps, fast, exact)
            assert log_chernoff(fast, lam) <= math.log(eps)
    _report(9, "fast order selection agrees with exhaustive scan")
