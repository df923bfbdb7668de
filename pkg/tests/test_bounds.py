"""Success probabilities, optimal caps, and solution-count bounds."""

from __future__ import annotations

from math import ceil, comb, factorial, pi, sqrt

import mpmath
import numpy as np
import pytest

from cwc_gas import (
    CodeParams,
    ParameterError,
    exact_max_code_size,
    k_opt,
    k_opt_upper,
    optimal_rotations,
    success_prob_L,
    success_prob_k,
    t_lower,
    t_lower_or_one,
)
from cwc_gas.bounds import DENSITY_WARNING_RATIO


def test_single_rotation_probability_identity():
    # with zero rotations the hit probability is exactly t / N
    for q1 in range(1, 12):
        n_total = 1 << q1
        for t in range(0, n_total + 1, max(1, n_total // 7)):
            assert success_prob_L(0, t, n_total) == pytest.approx(
                t / n_total, abs=1e-12
            )


def test_success_probability_known_points():
    # one in four: a single rotation hits with certainty
    assert success_prob_L(1, 1, 4) == pytest.approx(1.0, abs=1e-12)
    assert success_prob_L(0, 0, 8) == 0.0
    assert success_prob_L(3, 8, 8) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ParameterError):
        success_prob_L(-1, 1, 4)
    with pytest.raises(ParameterError):
        success_prob_L(1, 5, 4)


def test_averaged_probability_matches_uniform_mean_at_integer_caps():
    for q1 in (4, 8, 12):
        n_total = 1 << q1
        for t in (1, 2, 5, n_total // 4):
            for k in (1, 2, 3, 7, 20):
                mean = sum(success_prob_L(L, t, n_total) for L in range(k)) / k
                assert success_prob_k(float(k), t, n_total) == pytest.approx(
                    mean, abs=1e-12
                )


def test_averaged_probability_edges():
    assert success_prob_k(5.0, 0, 16) == 0.0
    assert success_prob_k(5.0, 16, 16) == 1.0
    with pytest.raises(ParameterError):
        success_prob_k(0.5, 1, 16)


def test_optimal_rotation_count_formula():
    for t, n_total in [(1, 1 << 10), (6, 1 << 22), (3, 1 << 8)]:
        assert optimal_rotations(t, n_total) == int(pi / 4 * sqrt(n_total / t))
    with pytest.raises(ParameterError):
        optimal_rotations(0, 8)


def test_exact_max_code_sizes_match_literature():
    assert exact_max_code_size(4, 4, 2) == 2
    assert exact_max_code_size(5, 4, 3) == 2
    assert exact_max_code_size(6, 4, 3) == 4
    assert exact_max_code_size(7, 4, 3) == 7


def test_exact_max_code_size_consistency():
    # distance 2 never binds; distance 2w forces disjoint supports
    for n in range(2, 8):
        for w in range(1, n + 1):
            assert exact_max_code_size(n, 2, w) == comb(n, w)
            assert exact_max_code_size(n, 2 * w, w) == max(1, n // w)
    with pytest.raises(ParameterError):
        exact_max_code_size(9, 4, 3)


def test_solution_count_bound_reference():
    params = CodeParams(7, 3, 4, 7)
    assert t_lower(params) == factorial(3) == 6
    assert t_lower_or_one(params) == 6


def test_solution_count_bound_margin_two():
    # w - d/2 = 2: the bound is the smallest column-subset count
    params = CodeParams(8, 4, 4, 9)
    assert t_lower(params) == comb(4, 2)


def test_solution_count_bound_preconditions():
    with pytest.raises(ParameterError):
        t_lower(CodeParams(7, 5, 4, 7))  # needs w <= d
    with pytest.raises(ParameterError):
        t_lower(CodeParams(7, 3, 4, 7), A_prev=6)  # best shorter code too large
    assert t_lower_or_one(CodeParams(7, 5, 4, 7)) == 1
    assert t_lower_or_one(CodeParams(7, 3, 4, 7), A_prev=6) == 1


def test_cap_interval_upper_end():
    assert k_opt_upper(6, 22) == 1010
    for t, q1 in [(1, 10), (3, 16), (100, 20)]:
        expected = ceil((1 + sqrt(2)) / 2 * sqrt((1 << q1) / t))
        assert k_opt_upper(t, q1) == expected
    with pytest.raises(ParameterError):
        k_opt_upper(0, 10)


def test_reference_cap_optimum():
    result = k_opt(6, 22)
    assert result.k_opt == pytest.approx(656.6656696, rel=1e-6)
    assert result.h_min == pytest.approx(1313.33, rel=1e-3)
    assert not result.density_warning


def test_cap_optimum_interval_containment_grid():
    for q1 in (8, 10, 14, 18, 22):
        for t in (1, 2, 6, 25):
            result = k_opt(t, q1)
            lo, hi = result.interval
            assert lo == 1.0 and hi == float(k_opt_upper(t, q1))
            assert lo <= result.k_opt <= hi
            for e in result.extrema:
                assert lo <= e <= hi


def test_cap_optimum_dominates_dense_grid():
    with mpmath.workdps(40):
        for q1, t in [(10, 1), (14, 3), (18, 6), (22, 6)]:
            n_total = 1 << q1
            result = k_opt(t, q1)
            theta = mpmath.asin(mpmath.sqrt(mpmath.mpf(t) / n_total))

            def h(k):
                p = mpmath.mpf(0.5) - mpmath.sin(4 * k * theta) / (
                    4 * k * mpmath.sin(2 * theta)
                )
                return k / p

            ks = np.linspace(1.0, result.interval[1], 4001)
            grid_min = min(float(h(mpmath.mpf(k))) for k in ks)
            assert result.h_min <= grid_min + 1e-6 * abs(grid_min)


def test_cap_optimum_density_warning_flag():
    assert k_opt(1, 4).density_warning  # t/N = 1/16 > threshold
    assert not k_opt(1, 10).density_warning
    assert 1 / (1 << 10) < DENSITY_WARNING_RATIO < 1 / (1 << 4)


def test_cap_optimum_full_space_short_circuit():
    result = k_opt(1 << 6, 6)
    assert result.k_opt == 1.0 and result.h_min == 1.0
    with pytest.raises(ParameterError):
        k_opt(0, 6)
