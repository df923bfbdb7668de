"""Full-landscape enumeration and exact measurement sampling."""

from __future__ import annotations

from math import asin, sin, sqrt

import numpy as np
import pytest

from cwc_gas import (
    SplitMix,
    build_landscape,
    evaluate,
    sample_measurement,
)
from cwc_gas.errors import ResourceLimitError
from cwc_gas.landscape import MAX_Q1_ENV, coefficient_arrays, max_enumeration_width
from tests.conftest import HAVE_COMPILED
from tests.test_qubo import build


@pytest.fixture(scope="module")
def toy():
    reduced, qubo = build(6, 3, 4, 4)
    return qubo, build_landscape(qubo)


def test_landscape_matches_direct_evaluation(toy):
    qubo, landscape = toy
    assert landscape.size == 1 << qubo.q1
    for mask in range(0, landscape.size, 37):
        assert landscape.value_of(mask) == evaluate(qubo, mask)
    assert landscape.min_value == int(landscape.values.min())
    assert landscape.max_value == int(landscape.values.max())


def test_sorted_view_is_consistent(toy):
    _, landscape = toy
    np.testing.assert_array_equal(
        landscape.sorted_values, landscape.values[landscape.order]
    )
    assert (np.diff(landscape.sorted_values) >= 0).all()
    # stable order: ties keep ascending assignment index
    values = landscape.values
    order = landscape.order
    ties = np.flatnonzero(np.diff(landscape.sorted_values) == 0)
    assert (order[ties] < order[ties + 1]).all()


def test_count_below_is_strict(toy):
    _, landscape = toy
    for y in (landscape.min_value, 16, 100, landscape.max_value + 1):
        assert landscape.count_below(y) == int((landscape.values < y).sum())


def test_values_downcast_when_narrow(toy, landscape_dp):
    _, landscape = toy
    assert landscape.values.dtype == np.int32
    assert landscape_dp.values.dtype == np.int32
    assert landscape_dp.order.dtype == np.int64


def test_reference_landscape_ground_truth(landscape_dp, landscape_p):
    assert landscape_dp.min_value == 15
    assert landscape_p.min_value == 15
    assert landscape_dp.count_below(16) == 6
    # both variants agree on which assignments are optimal
    a = np.flatnonzero(landscape_dp.values == 15)
    b = np.flatnonzero(landscape_p.values == 15)
    np.testing.assert_array_equal(a, b)


def test_width_guard(qubo_dp, monkeypatch):
    with pytest.raises(ResourceLimitError):
        build_landscape(qubo_dp, max_q1=10)
    monkeypatch.setenv(MAX_Q1_ENV, "10")
    assert max_enumeration_width() == 10
    with pytest.raises(ResourceLimitError):
        build_landscape(qubo_dp)
    monkeypatch.setenv(MAX_Q1_ENV, "not-a-number")
    with pytest.raises(ResourceLimitError):
        max_enumeration_width()


def test_coefficient_arrays_round_trip(qubo_dp):
    diag, upper, constant = coefficient_arrays(qubo_dp)
    assert constant == 576
    assert (diag == -176).all()
    assert np.count_nonzero(np.tril(upper)) == 0
    for r in range(0, 22, 5):
        for rp in range(r + 1, 22, 3):
            assert upper[r, rp] == qubo_dp.coefficient(r, rp)


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
def test_landscape_backend_parity(qubo_dp):
    py = build_landscape(qubo_dp, backend="python")
    cy = build_landscape(qubo_dp, backend="compiled")
    np.testing.assert_array_equal(py.values, cy.values)
    np.testing.assert_array_equal(py.order, cy.order)


def test_measurement_success_rate_tracks_formula(toy):
    _, landscape = toy
    y = int(np.percentile(landscape.values, 10))
    t = landscape.count_below(y)
    n_total = landscape.size
    for L in (0, 1, 3):
        rng = SplitMix(1000 + L)
        hits = 0
        trials = 4000
        for _ in range(trials):
            _, value = sample_measurement(landscape, y, L, rng)
            hits += value < y
        p = sin((2 * L + 1) * asin(sqrt(t / n_total))) ** 2
        sigma = sqrt(max(p * (1 - p), 1e-9) / trials)
        assert abs(hits / trials - p) < 4 * sigma + 1e-9


def test_measurement_good_draws_cover_class_uniformly(toy):
    _, landscape = toy
    y = int(np.percentile(landscape.values, 5))
    t = landscape.count_below(y)
    good = set(landscape.order[:t].tolist())
    rng = SplitMix(9)
    seen: dict[int, int] = {}
    for _ in range(3000):
        assignment, value = sample_measurement(landscape, y, 2, rng)
        if value < y:
            assert assignment in good
            seen[assignment] = seen.get(assignment, 0) + 1
    assert set(seen) == good  # every optimal assignment is reachable


def test_measurement_degenerate_thresholds(toy):
    _, landscape = toy
    rng = SplitMix(3)
    # t = 0: no amplification, every outcome is a miss
    for _ in range(50):
        _, value = sample_measurement(landscape, landscape.min_value, 5, rng)
        assert value >= landscape.min_value
    # t = N: every outcome is a hit
    for _ in range(50):
        _, value = sample_measurement(landscape, landscape.max_value + 1, 0, rng)
        assert value <= landscape.max_value
