"""Shared fixtures: the (7,3,4,7) reference problem and its landscapes."""

from __future__ import annotations

import os

import pytest

from cwc_gas import (
    CodeParams,
    VARIANT_DOUBLE_PRIME,
    VARIANT_PRIME,
    build_combinatorial_matrix,
    build_landscape,
    build_objective,
    reduce_matrix,
)
from cwc_gas.engine import slice_assignment_values
from cwc_gas.kernels import get_backend

try:
    get_backend("compiled")
    HAVE_COMPILED = True
except Exception:
    HAVE_COMPILED = False

needs_compiled = pytest.mark.skipif(
    not HAVE_COMPILED, reason="compiled kernels not built"
)


def worker_count() -> int:
    return min(8, os.cpu_count() or 1)


@pytest.fixture(scope="session")
def params747():
    return CodeParams(n=7, w=3, d=4, M=7)


@pytest.fixture(scope="session")
def reduced747(params747):
    return reduce_matrix(build_combinatorial_matrix(7, 3), params747.d)


@pytest.fixture(scope="session")
def qubo_dp(reduced747, params747):
    return build_objective(reduced747, params747, VARIANT_DOUBLE_PRIME)


@pytest.fixture(scope="session")
def qubo_p(reduced747, params747):
    return build_objective(reduced747, params747, VARIANT_PRIME)


@pytest.fixture(scope="session")
def landscape_dp(qubo_dp):
    return build_landscape(qubo_dp)


@pytest.fixture(scope="session")
def landscape_p(qubo_p):
    return build_landscape(qubo_p)


@pytest.fixture(scope="session")
def slice747(reduced747, params747, qubo_dp):
    return slice_assignment_values(reduced747, params747, qubo_dp)
