"""Pure-Python/numpy kernel implementations.

Semantics and draw consumption must match the compiled twin exactly:

- objective enumeration: exact integers, assignment index bit r = x_r
- adaptive trial, per iteration: draw L below ceil(k), draw the acceptance
  uniform, then draw a rank inside the sampled class
- target-set trial: draw L, draw the uniform, then one rank draw on success
  or rejection draws below N until a non-target assignment on failure
- baseline trial, per step j: one draw below K - j for the lazy shuffle
"""

from __future__ import annotations

from math import asin, ceil, sin, sqrt

import numpy as np

from ..rng import DrawStream, below_block, raw_block

NAME = "python"

_EXACT_FLOAT_BOUND = 1 << 51


def enumerate_values(
    diag: np.ndarray, upper: np.ndarray, constant: int
) -> np.ndarray:
    """Exact objective values for all 2^q1 assignments, int64, by index.

    Splits the variables into low/high halves and combines per-half sums
    with a cross-term matrix product.
    """
    q1 = diag.shape[0]
    h1 = q1 // 2
    h2 = q1 - h1
    bound = abs(int(constant)) + int(np.abs(diag).sum()) + int(np.abs(upper).sum())
    # integer sums below 2^53 are exact in double arithmetic, and float
    # matmul is considerably faster than int64 matmul
    dtype = np.float64 if bound < _EXACT_FLOAT_BOUND else np.int64

    def bits(count: int) -> np.ndarray:
        rows = np.arange(1 << count, dtype=np.int64)[:, None]
        return ((rows >> np.arange(count, dtype=np.int64)[None, :]) & 1).astype(dtype)

    d = diag.astype(dtype)
    u = upper.astype(dtype)
    b_lo = bits(h1)
    b_hi = bits(h2)
    e_lo = b_lo @ d[:h1] + ((b_lo @ u[:h1, :h1]) * b_lo).sum(axis=1)
    e_hi = b_hi @ d[h1:] + ((b_hi @ u[h1:, h1:]) * b_hi).sum(axis=1)
    cross = (b_hi @ u[:h1, h1:].T) @ b_lo.T
    grid = e_hi[:, None] + e_lo[None, :] + cross + dtype(constant)
    return grid.ravel().astype(np.int64)


def gas_trial(
    values_sorted: np.ndarray,
    order: np.ndarray,
    y0: int,
    lam: float,
    k_cap: float,
    min_value: int,
    max_iters: int,
    state0: int,
):
    """One adaptive-threshold amplification trial on a sorted landscape.

    Returns (L, assignment, value, improved) journal arrays plus the
    classical and quantum query totals and the final threshold.
    """
    n_total = values_sorted.shape[0]
    rng = DrawStream(state0)
    y = int(y0)
    k = 1.0
    classical = 0
    quantum = 0
    journal_L: list[int] = []
    journal_a: list[int] = []
    journal_v: list[int] = []
    journal_i: list[int] = []
    while y > min_value and classical < max_iters:
        L = rng.below(ceil(k))
        t = int(np.searchsorted(values_sorted, y, side="left"))
        theta = asin(sqrt(t / n_total))
        amp = sin((2 * L + 1) * theta)
        u = rng.uniform()
        if u < amp * amp:
            rank = rng.below(t)
        else:
            rank = t + rng.below(n_total - t)
        assignment = int(order[rank])
        value = int(values_sorted[rank])
        classical += 1
        quantum += L
        if value < y:
            y = value
            k = 1.0
            improved = 1
        else:
            k = min(lam * k, k_cap)
            improved = 0
        journal_L.append(L)
        journal_a.append(assignment)
        journal_v.append(value)
        journal_i.append(improved)
    return (
        np.array(journal_L, dtype=np.int64),
        np.array(journal_a, dtype=np.int64),
        np.array(journal_v, dtype=np.int64),
        np.array(journal_i, dtype=np.uint8),
        classical,
        quantum,
        y,
    )


def bbht_trial(
    good_indices: np.ndarray,
    good_mask: np.ndarray,
    lam: float,
    k_cap: float,
    max_iters: int,
    state0: int,
):
    """Exponentially growing rotation-cap search for a fixed target set.

    Returns (found assignment or -1, L journal, classical, quantum).
    """
    n_total = good_mask.shape[0]
    t = good_indices.shape[0]
    theta = asin(sqrt(t / n_total))
    rng = DrawStream(state0)
    k = 1.0
    classical = 0
    quantum = 0
    journal_L: list[int] = []
    found = -1
    while classical < max_iters:
        L = rng.below(ceil(k))
        amp = sin((2 * L + 1) * theta)
        u = rng.uniform()
        classical += 1
        quantum += L
        journal_L.append(L)
        if u < amp * amp:
            found = int(good_indices[rng.below(t)])
            break
        while True:
            probe = rng.below(n_total)
            if not good_mask[probe]:
                break
        k = min(lam * k, k_cap)
    return found, np.array(journal_L, dtype=np.int64), classical, quantum


def classical_trial(
    slice_values: np.ndarray,
    min_value: int,
    max_iters: int,
    state0: int,
    record_all: bool = False,
):
    """One randomized-order exhaustive visit of the reduced search slice.

    Lazy partial shuffle; stops at the first slot reaching min_value.
    Returns (improvement positions (1-based), improvement values, queries,
    visited values or None).
    """
    count = slice_values.shape[0]
    vals = slice_values.tolist()
    slots = list(range(count))
    steps_cap = min(count, max_iters)
    imp_pos: list[int] = []
    imp_val: list[int] = []
    visited: list[int] | None = [] if record_all else None
    best: int | None = None
    queries = 0
    chunk = 8192
    j = 0
    while j < steps_cap:
        todo = min(chunk, steps_cap - j)
        raws = raw_block(state0, j, todo)
        ranges = np.arange(count - j, count - j - todo, -1, dtype=np.uint64)
        offsets = below_block(raws, ranges).tolist()
        stop = False
        for step, off in enumerate(offsets):
            pos = j + step
            r = pos + off
            slots[pos], slots[r] = slots[r], slots[pos]
            v = vals[slots[pos]]
            if visited is not None:
                visited.append(v)
            queries = pos + 1
            if best is None or v < best:
                best = v
                imp_pos.append(queries)
                imp_val.append(v)
                if best == min_value:
                    stop = True
                    break
        if stop:
            break
        j += todo
    return (
        np.array(imp_pos, dtype=np.int64),
        np.array(imp_val, dtype=np.int64),
        queries,
        None if visited is None else np.array(visited, dtype=np.int64),
    )
