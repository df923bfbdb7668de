"""Exact objective landscapes over all 2^q1 assignments.

A landscape holds the objective value of every assignment (index bit r is
variable r), a stable sort of those values, and the induced rank-to-
assignment map. Measurement outcomes of an amplified state are sampled
exactly from the analytic success probability plus a uniform rank draw
inside the sampled class.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import asin, sin, sqrt

import numpy as np

from .errors import CoefficientOverflowError, ResourceLimitError
from .kernels import get_backend
from .qubo import MAX_ABS_VALUE, QuboProblem
from .rng import SplitMix

DEFAULT_MAX_Q1 = 26
MAX_Q1_ENV = "CWC_GAS_MAX_Q1"


@dataclass(frozen=True)
class ObjectiveLandscape:
    """Exact values for every assignment plus sorted views for rank queries."""

    q1: int
    values: np.ndarray  # by assignment index
    sorted_values: np.ndarray  # ascending
    order: np.ndarray  # assignment index per sorted rank (stable, int64)
    min_value: int
    max_value: int

    @property
    def size(self) -> int:
        return 1 << self.q1

    def count_below(self, y: int) -> int:
        """Number of assignments with value strictly below y."""
        return int(np.searchsorted(self.sorted_values, y, side="left"))

    def value_of(self, assignment: int) -> int:
        return int(self.values[assignment])


def coefficient_arrays(qubo: QuboProblem) -> tuple[np.ndarray, np.ndarray, int]:
    """Materialize (diag, strictly-upper matrix, constant) as int64 arrays."""
    q1 = qubo.q1
    diag = np.zeros(q1, dtype=np.int64)
    upper = np.zeros((q1, q1), dtype=np.int64)
    bound = abs(qubo.constant)
    for r, row in enumerate(qubo.coefficients):
        diag[r] = row[0]
        bound += abs(row[0])
        for off, coeff in enumerate(row[1:], start=1):
            upper[r, r + off] = coeff
            bound += abs(coeff)
    if bound >= MAX_ABS_VALUE:
        raise CoefficientOverflowError(
            f"worst-case objective magnitude {bound} exceeds the int64 guard"
        )
    return diag, upper, qubo.constant


def max_enumeration_width(default: int = DEFAULT_MAX_Q1) -> int:
    raw = os.environ.get(MAX_Q1_ENV)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ResourceLimitError(f"{MAX_Q1_ENV} must be an integer, got {raw!r}")


def build_landscape(
    qubo: QuboProblem,
    max_q1: int | None = None,
    backend: str | None = None,
) -> ObjectiveLandscape:
    """Enumerate the full landscape; guarded by a configurable width limit.

    Values are stored as int32 when they fit, int64 otherwise.
    """
    limit = max_q1 if max_q1 is not None else max_enumeration_width()
    if qubo.q1 > limit:
        raise ResourceLimitError(
            f"q1 = {qubo.q1} exceeds the enumeration guard {limit}; "
            f"raise it via {MAX_Q1_ENV} or max_q1 if you have the memory"
        )
    diag, upper, constant = coefficient_arrays(qubo)
    values = get_backend(backend).enumerate_values(diag, upper, constant)
    order = np.argsort(values, kind="stable").astype(np.int64)
    sorted_values = values[order]
    lo = int(sorted_values[0])
    hi = int(sorted_values[-1])
    if -(1 << 31) <= lo and hi < 1 << 31:
        values = values.astype(np.int32)
        sorted_values = sorted_values.astype(np.int32)
    return ObjectiveLandscape(
        q1=qubo.q1,
        values=values,
        sorted_values=sorted_values,
        order=order,
        min_value=lo,
        max_value=hi,
    )


def sample_measurement(
    landscape: ObjectiveLandscape, y: int, L: int, rng: SplitMix
) -> tuple[int, int]:
    """Measure the state after L rotations against threshold y.

    Success probability sin^2((2L+1) asin sqrt(t/N)) with t = count_below(y);
    the outcome is a uniform assignment from the sampled class. Draw order:
    acceptance uniform, then one rank draw. Returns (assignment, value).
    """
    n_total = landscape.size
    t = landscape.count_below(y)
    theta = asin(sqrt(t / n_total))
    amp = sin((2 * L + 1) * theta)
    u = rng.uniform()
    if u < amp * amp:
        rank = rng.below(t)
    else:
        rank = t + rng.below(n_total - t)
    return int(landscape.order[rank]), int(landscape.sorted_values[rank])
