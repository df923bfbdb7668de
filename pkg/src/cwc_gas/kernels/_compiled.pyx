# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations.

Byte-for-byte twin of the pure-Python module: identical draw consumption,
identical arithmetic (the scalar generator, the multiply-shift reduction,
and libm transcendentals), so traces agree exactly across backends.
"""

from libc.math cimport asin, ceil as c_ceil, sin, sqrt
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "compiled"

cdef extern from *:
    ctypedef unsigned long long uint128 "unsigned __int128"
    int __builtin_ctzll(unsigned long long) nogil

ctypedef fused value_t:
    int32_t
    int64_t

cdef uint64_t GAMMA = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t MIX_A = <uint64_t>0xBF58476D1CE4E5B9
cdef uint64_t MIX_B = <uint64_t>0x94D049BB133111EB
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * MIX_A
    z = (z ^ (z >> 27)) * MIX_B
    return z ^ (z >> 31)


cdef inline uint64_t next_raw(uint64_t* state) nogil:
    state[0] = state[0] + GAMMA
    return mix64(state[0])


cdef inline uint64_t draw_below(uint64_t* state, uint64_t m) nogil:
    return <uint64_t>((<uint128>next_raw(state) * <uint128>m) >> 64)


cdef inline double draw_uniform(uint64_t* state) nogil:
    return <double>(next_raw(state) >> 11) * INV53


cdef inline Py_ssize_t lower_bound(value_t[::1] arr, int64_t y) nogil:
    cdef Py_ssize_t lo = 0, hi = arr.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < y:
            lo = mid + 1
        else:
            hi = mid
    return lo


def enumerate_values(int64_t[::1] diag, object upper, int64_t constant):
    """Exact objective values for all 2^q1 assignments, int64, by index.

    Gray-code walk: one bit flip per step, incremental pair sums.
    """
    cdef Py_ssize_t q1 = diag.shape[0]
    cdef Py_ssize_t n = (<Py_ssize_t>1) << q1
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    sym = np.ascontiguousarray(np.asarray(upper) + np.asarray(upper).T)
    cdef int64_t[:, ::1] us = sym
    acc_arr = np.zeros(q1, dtype=np.int64)
    cdef int64_t[::1] acc = acc_arr
    cdef int64_t cur = constant
    cdef Py_ssize_t i, b, rp, g
    with nogil:
        o[0] = cur
        for i in range(1, n):
            g = i ^ (i >> 1)
            b = __builtin_ctzll(<unsigned long long>i)
            if (g >> b) & 1:
                cur += diag[b] + acc[b]
                for rp in range(q1):
                    acc[rp] += us[b, rp]
            else:
                cur -= diag[b] + acc[b]
                for rp in range(q1):
                    acc[rp] -= us[b, rp]
            o[g] = cur
    return out


def gas_trial(
    value_t[::1] values_sorted,
    int64_t[::1] order,
    int64_t y0,
    double lam,
    double k_cap,
    int64_t min_value,
    int64_t max_iters,
    uint64_t state0,
):
    """One adaptive-threshold amplification trial on a sorted landscape.

    Returns (L, assignment, value, improved) journal arrays plus the
    classical and quantum query totals and the final threshold.
    """
    cdef Py_ssize_t n_total = values_sorted.shape[0]
    cdef uint64_t state = state0
    cdef int64_t y = y0
    cdef double k = 1.0
    cdef int64_t classical = 0
    cdef int64_t quantum = 0
    cdef int64_t L, value, assignment
    cdef Py_ssize_t t, rank
    cdef double theta, amp, u
    journal_L = []
    journal_a = []
    journal_v = []
    journal_i = []
    while y > min_value and classical < max_iters:
        L = <int64_t>draw_below(&state, <uint64_t>c_ceil(k))
        t = lower_bound(values_sorted, y)
        theta = asin(sqrt(<double>t / <double>n_total))
        amp = sin(<double>(2 * L + 1) * theta)
        u = draw_uniform(&state)
        if u < amp * amp:
            rank = <Py_ssize_t>draw_below(&state, <uint64_t>t)
        else:
            rank = t + <Py_ssize_t>draw_below(&state, <uint64_t>(n_total - t))
        assignment = order[rank]
        value = <int64_t>values_sorted[rank]
        classical += 1
        quantum += L
        if value < y:
            y = value
            k = 1.0
            journal_i.append(1)
        else:
            k = lam * k
            if k > k_cap:
                k = k_cap
            journal_i.append(0)
        journal_L.append(L)
        journal_a.append(assignment)
        journal_v.append(value)
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
    int64_t[::1] good_indices,
    uint8_t[::1] good_mask,
    double lam,
    double k_cap,
    int64_t max_iters,
    uint64_t state0,
):
    """Exponentially growing rotation-cap search for a fixed target set.

    Returns (found assignment or -1, L journal, classical, quantum).
    """
    cdef Py_ssize_t n_total = good_mask.shape[0]
    cdef Py_ssize_t t = good_indices.shape[0]
    cdef double theta = asin(sqrt(<double>t / <double>n_total))
    cdef uint64_t state = state0
    cdef double k = 1.0
    cdef int64_t classical = 0
    cdef int64_t quantum = 0
    cdef int64_t found = -1
    cdef int64_t L
    cdef double amp, u
    cdef uint64_t probe
    journal_L = []
    while classical < max_iters:
        L = <int64_t>draw_below(&state, <uint64_t>c_ceil(k))
        amp = sin(<double>(2 * L + 1) * theta)
        u = draw_uniform(&state)
        classical += 1
        quantum += L
        journal_L.append(L)
        if u < amp * amp:
            found = good_indices[<Py_ssize_t>draw_below(&state, <uint64_t>t)]
            break
        while True:
            probe = draw_below(&state, <uint64_t>n_total)
            if not good_mask[<Py_ssize_t>probe]:
                break
        k = lam * k
        if k > k_cap:
            k = k_cap
    return found, np.array(journal_L, dtype=np.int64), classical, quantum


def classical_trial(
    int64_t[::1] slice_values,
    int64_t min_value,
    int64_t max_iters,
    uint64_t state0,
    bint record_all=False,
):
    """One randomized-order exhaustive visit of the reduced search slice.

    Lazy partial shuffle; stops at the first slot reaching min_value.
    Returns (improvement positions (1-based), improvement values, queries,
    visited values or None).
    """
    cdef Py_ssize_t count = slice_values.shape[0]
    cdef Py_ssize_t steps_cap = count if count < max_iters else <Py_ssize_t>max_iters
    cdef int64_t* slots = NULL
    cdef Py_ssize_t pos, r
    cdef int64_t v, best = 0, tmp
    cdef bint has_best = False
    cdef int64_t queries = 0
    cdef uint64_t raw, m
    visited_arr = None
    cdef int64_t[::1] vis = None
    if record_all:
        visited_arr = np.empty(steps_cap, dtype=np.int64)
        vis = visited_arr
    imp_pos = []
    imp_val = []
    if count > 0:
        slots = <int64_t*>malloc(count * sizeof(int64_t))
        if slots == NULL:
            raise MemoryError()
    try:
        for pos in range(count):
            slots[pos] = pos
        for pos in range(steps_cap):
            raw = mix64(state0 + (<uint64_t>(pos + 1)) * GAMMA)
            m = <uint64_t>(count - pos)
            r = pos + <Py_ssize_t>((<uint128>raw * <uint128>m) >> 64)
            tmp = slots[pos]
            slots[pos] = slots[r]
            slots[r] = tmp
            v = slice_values[slots[pos]]
            if record_all:
                vis[pos] = v
            queries = pos + 1
            if not has_best or v < best:
                has_best = True
                best = v
                imp_pos.append(queries)
                imp_val.append(v)
                if best == min_value:
                    break
    finally:
        if slots != NULL:
            free(slots)
    if visited_arr is not None:
        visited_arr = visited_arr[:queries]
    return (
        np.array(imp_pos, dtype=np.int64),
        np.array(imp_val, dtype=np.int64),
        queries,
        visited_arr,
    )
