"""Query-complexity simulation of the adaptive search schemes.

Three engines run against an exact landscape: the conventional adaptive
scheme (threshold starts at a uniformly sampled assignment's value, rotation
cap sqrt(2^q1)), the proposed scheme (threshold starts one above the
valid-code value bound, rotation cap from the expected-rotations optimum),
and a randomized-order exhaustive baseline over the weight-(M-1) slice.
A fixed-target variant of the exponential cap-growth search is also
provided. Traces record improvement events in both query domains.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb, sqrt
from multiprocessing import get_context

import numpy as np

from .bounds import k_opt, t_lower_or_one
from .codes import BitMatrix, CodeParams
from .errors import ParameterError, ResourceLimitError, SearchExhaustedError
from .kernels import get_backend
from .landscape import ObjectiveLandscape, coefficient_arrays
from .qubo import QuboProblem, compute_bounds
from .rng import SplitMix, stream_state

CONVENTIONAL = "gas-conventional"
PROPOSED = "gas-proposed"
BBHT = "bbht"
CLASSICAL = "classical-exhaustive"
GAS_VARIANTS = (CONVENTIONAL, PROPOSED)

DEFAULT_LAMBDA = {CONVENTIONAL: 1.34, PROPOSED: 1.44, BBHT: 1.34}
DEFAULT_TRIALS = 10_000
# loop guard for reach-minimum runs; effectively unbounded
DEFAULT_MAX_ITERS = 1 << 40
MAX_SLICE_ROWS = 1 << 26

TERMINATION_REACH_MIN = "reach-min"
TERMINATION_MAX_QUERIES = "max-queries"


@dataclass(frozen=True)
class EngineConfig:
    """Run parameters; unset fields resolve to the variant defaults."""

    variant: str = PROPOSED
    lam: float | None = None
    k_cap: float | None = None
    y0: int | None = None
    seed: int = 0
    termination: str = TERMINATION_REACH_MIN
    max_queries: int | None = None


@dataclass(frozen=True)
class GasTrace:
    """One trial: improvement events plus query totals.

    Improvement positions are cumulative query counts at which the running
    best value changed; adaptive schemes log their initial threshold at
    position 0, the baseline logs its first visit at position 1. The
    optional journal holds per-iteration (L, assignment, value, improved)
    arrays for adaptive runs.
    """

    variant: str
    seed: int
    trial_index: int
    y0: int
    final_value: int
    classical_queries: int
    quantum_queries: int
    converged: bool
    improvements_classical: np.ndarray
    improvements_quantum: np.ndarray
    improvement_values: np.ndarray
    iterations: dict[str, np.ndarray] | None = None
    found: int | None = None

    def to_json(self) -> dict:
        doc = {
            "variant": self.variant,
            "seed": self.seed,
            "trial_index": self.trial_index,
            "y0": self.y0,
            "final_value": self.final_value,
            "classical_queries": self.classical_queries,
            "quantum_queries": self.quantum_queries,
            "converged": self.converged,
            "improvements": [
                {"classical": int(c), "quantum": int(q), "value": int(v)}
                for c, q, v in zip(
                    self.improvements_classical,
                    self.improvements_quantum,
                    self.improvement_values,
                )
            ],
        }
        if self.found is not None:
            doc["found"] = self.found
        if self.iterations is not None:
            doc["iterations"] = [
                {"L": int(L), "assignment": int(a), "value": int(v), "improved": bool(i)}
                for L, a, v, i in zip(
                    self.iterations["L"],
                    self.iterations["assignment"],
                    self.iterations["value"],
                    self.iterations["improved"],
                )
            ]
        return doc


@dataclass(frozen=True)
class _ResolvedGas:
    variant: str
    lam: float
    k_cap: float
    y0_fixed: int | None  # None = sample a uniform assignment's value
    min_value: int
    max_iters: int
    seed: int


def proposed_rotation_cap(qubo: QuboProblem, A_prev: int | None = None) -> float:
    """Rotation cap for the proposed scheme: the expected-rotations optimum
    at the solution-count lower bound, or sqrt(2^q1) when the bound does
    not apply."""
    if qubo.params is None:
        raise ParameterError("rotation cap needs code parameters on the problem")
    t_low = t_lower_or_one(qubo.params, A_prev)
    if t_low <= 1:
        return sqrt(1 << qubo.q1)
    return k_opt(t_low, qubo.q1).k_opt


def _resolve_gas(
    qubo: QuboProblem, landscape: ObjectiveLandscape, config: EngineConfig
) -> _ResolvedGas:
    if config.variant not in GAS_VARIANTS:
        raise ParameterError(f"variant {config.variant!r} is not an adaptive scheme")
    if config.termination not in (TERMINATION_REACH_MIN, TERMINATION_MAX_QUERIES):
        raise ParameterError(f"unknown termination {config.termination!r}")
    if config.termination == TERMINATION_MAX_QUERIES and config.max_queries is None:
        raise ParameterError("max-queries termination needs max_queries")
    lam = config.lam if config.lam is not None else DEFAULT_LAMBDA[config.variant]
    if lam < 1:
        raise ParameterError(f"growth factor must be >= 1, got {lam}")
    if config.variant == CONVENTIONAL:
        k_cap = config.k_cap if config.k_cap is not None else sqrt(1 << qubo.q1)
        y0_fixed = config.y0
    else:
        k_cap = config.k_cap if config.k_cap is not None else proposed_rotation_cap(qubo)
        if config.y0 is not None:
            y0_fixed = config.y0
        else:
            if qubo.params is None:
                raise ParameterError("proposed threshold needs code parameters")
            y0_fixed = compute_bounds(
                qubo.params, qubo.q1, qubo.l, qubo.variant
            ).y0
    if k_cap < 1:
        raise ParameterError(f"rotation cap must be >= 1, got {k_cap}")
    max_iters = (
        config.max_queries if config.max_queries is not None else DEFAULT_MAX_ITERS
    )
    return _ResolvedGas(
        variant=config.variant,
        lam=lam,
        k_cap=float(k_cap),
        y0_fixed=y0_fixed,
        min_value=landscape.min_value,
        max_iters=max_iters,
        seed=config.seed,
    )


def _gas_trace(
    resolved: _ResolvedGas,
    landscape: ObjectiveLandscape,
    trial_index: int,
    backend,
    record_iterations: bool,
) -> GasTrace:
    rng = SplitMix(stream_state(resolved.seed, trial_index))
    if resolved.y0_fixed is None:
        a0 = rng.below(landscape.size)
        y0 = landscape.value_of(a0)
    else:
        y0 = resolved.y0_fixed
    journal_L, journal_a, journal_v, journal_i, classical, quantum, y_final = (
        backend.gas_trial(
            landscape.sorted_values,
            landscape.order,
            y0,
            resolved.lam,
            resolved.k_cap,
            resolved.min_value,
            resolved.max_iters,
            rng.state,
        )
    )
    improved_at = np.flatnonzero(journal_i)
    imp_classical = np.concatenate(([0], improved_at + 1)).astype(np.int64)
    imp_quantum = np.concatenate(
        ([0], np.cumsum(journal_L)[improved_at])
    ).astype(np.int64)
    imp_values = np.concatenate(([y0], journal_v[improved_at])).astype(np.int64)
    iterations = None
    if record_iterations:
        iterations = {
            "L": journal_L,
            "assignment": journal_a,
            "value": journal_v,
            "improved": journal_i,
        }
    return GasTrace(
        variant=resolved.variant,
        seed=resolved.seed,
        trial_index=trial_index,
        y0=int(y0),
        final_value=int(y_final),
        classical_queries=int(classical),
        quantum_queries=int(quantum),
        converged=int(y_final) == resolved.min_value,
        improvements_classical=imp_classical,
        improvements_quantum=imp_quantum,
        improvement_values=imp_values,
        iterations=iterations,
    )


def run_gas(
    qubo: QuboProblem,
    landscape: ObjectiveLandscape,
    config: EngineConfig,
    trial_index: int = 0,
    record_iterations: bool = True,
    backend: str | None = None,
) -> GasTrace:
    """One adaptive-threshold search trial against an exact landscape."""
    resolved = _resolve_gas(qubo, landscape, config)
    return _gas_trace(
        resolved, landscape, trial_index, get_backend(backend), record_iterations
    )


def run_bbht(
    landscape: ObjectiveLandscape,
    target,
    lam: float = 1.34,
    seed: int = 0,
    k_cap: float | None = None,
    max_queries: int | None = None,
    trial_index: int = 0,
    backend: str | None = None,
) -> GasTrace:
    """Search for any member of a fixed target set with a growing rotation cap.

    `target` is a boolean mask over assignments or an array of assignment
    indices. Raises SearchExhaustedError if the query budget runs out.
    """
    arr = np.asarray(target)
    if arr.dtype == bool:
        if arr.shape[0] != landscape.size:
            raise ParameterError("target mask length must be 2^q1")
        mask = arr.astype(np.uint8)
        indices = np.flatnonzero(arr).astype(np.int64)
    else:
        indices = np.unique(np.asarray(arr, dtype=np.int64))
        if indices.size and (indices[0] < 0 or indices[-1] >= landscape.size):
            raise ParameterError("target indices out of range")
        mask = np.zeros(landscape.size, dtype=np.uint8)
        mask[indices] = 1
    if indices.size == 0 and max_queries is None:
        raise ParameterError("empty target would never terminate; set max_queries")
    cap = float(k_cap) if k_cap is not None else sqrt(landscape.size)
    max_iters = max_queries if max_queries is not None else DEFAULT_MAX_ITERS
    state0 = stream_state(seed, trial_index)
    found, journal_L, classical, quantum = get_backend(backend).bbht_trial(
        indices, mask, lam, cap, max_iters, state0
    )
    if found < 0:
        raise SearchExhaustedError(
            f"no target assignment found within {max_iters} measurements"
        )
    empty = np.zeros(0, dtype=np.int64)
    return GasTrace(
        variant=BBHT,
        seed=seed,
        trial_index=trial_index,
        y0=0,
        final_value=int(landscape.value_of(int(found))),
        classical_queries=int(classical),
        quantum_queries=int(quantum),
        converged=True,
        improvements_classical=empty,
        improvements_quantum=empty,
        improvement_values=empty,
        iterations={"L": journal_L},
        found=int(found),
    )


def slice_assignment_values(
    reduced: BitMatrix, params: CodeParams, qubo: QuboProblem
) -> tuple[np.ndarray, np.ndarray]:
    """All weight-(M-1) assignments as row-index combinations plus values.

    Combinations are in lexicographic order; values are exact.
    """
    q1 = len(reduced.rows)
    if q1 != qubo.q1:
        raise ParameterError(f"matrix rows {q1} != problem variables {qubo.q1}")
    choose = params.M - 1
    if choose > q1:
        raise ParameterError(f"cannot choose {choose} rows from {q1}")
    total = comb(q1, choose)
    if total > MAX_SLICE_ROWS:
        raise ResourceLimitError(f"slice size {total} exceeds the guard")
    combos = np.array(
        list(itertools.combinations(range(q1), choose)), dtype=np.int64
    ).reshape(total, choose)
    diag, upper, constant = coefficient_arrays(qubo)
    values = np.full(total, constant, dtype=np.int64)
    values += diag[combos].sum(axis=1)
    for a in range(choose):
        for b in range(a + 1, choose):
            values += upper[combos[:, a], combos[:, b]]
    return combos, values


def run_classical_exhaustive(
    reduced: BitMatrix,
    params: CodeParams,
    qubo: QuboProblem,
    seed: int = 0,
    trial_index: int = 0,
    max_queries: int | None = None,
    record_values: bool = False,
    backend: str | None = None,
    precomputed: tuple[np.ndarray, int] | None = None,
) -> GasTrace:
    """One randomized-order exhaustive visit of the weight-(M-1) slice.

    `precomputed` may carry (slice values, slice minimum) to amortize the
    slice evaluation across trials.
    """
    if precomputed is None:
        _, values = slice_assignment_values(reduced, params, qubo)
        min_slice = int(values.min())
    else:
        values, min_slice = precomputed
    max_iters = max_queries if max_queries is not None else values.shape[0]
    state0 = stream_state(seed, trial_index)
    imp_pos, imp_val, queries, visited = get_backend(backend).classical_trial(
        values, min_slice, max_iters, state0, record_values
    )
    iterations = {"value": visited} if visited is not None else None
    final = int(imp_val[-1]) if imp_val.size else min_slice
    return GasTrace(
        variant=CLASSICAL,
        seed=seed,
        trial_index=trial_index,
        y0=int(imp_val[0]) if imp_val.size else min_slice,
        final_value=final,
        classical_queries=int(queries),
        quantum_queries=0,
        converged=final == min_slice,
        improvements_classical=imp_pos,
        improvements_quantum=np.zeros(imp_pos.shape[0], dtype=np.int64),
        improvement_values=imp_val,
        iterations=iterations,
    )


# Module-level payload inherited by forked workers (no per-task pickling of
# the landscape arrays).
_POOL_PAYLOAD: dict = {}


def _pool_gas(span: tuple[int, int]) -> list[GasTrace]:
    p = _POOL_PAYLOAD
    backend = get_backend(p["backend"])
    return [
        _gas_trace(p["resolved"], p["landscape"], i, backend, False)
        for i in range(span[0], span[1])
    ]


def _pool_classical(span: tuple[int, int]) -> list[GasTrace]:
    p = _POOL_PAYLOAD
    return [
        run_classical_exhaustive(
            p["reduced"],
            p["params"],
            p["qubo"],
            seed=p["seed"],
            trial_index=i,
            backend=p["backend"],
            precomputed=p["precomputed"],
        )
        for i in range(span[0], span[1])
    ]


def _spans(n_trials: int, workers: int) -> list[tuple[int, int]]:
    chunk = max(1, n_trials // (workers * 4))
    return [(lo, min(lo + chunk, n_trials)) for lo in range(0, n_trials, chunk)]


def _run_pool(task, payload: dict, n_trials: int, workers: int) -> list[GasTrace]:
    global _POOL_PAYLOAD
    _POOL_PAYLOAD = payload
    try:
        ctx = get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            chunks = list(pool.map(task, _spans(n_trials, workers)))
    finally:
        _POOL_PAYLOAD = {}
    traces = [tr for chunk in chunks for tr in chunk]
    traces.sort(key=lambda tr: tr.trial_index)
    return traces


def run_gas_trials(
    qubo: QuboProblem,
    landscape: ObjectiveLandscape,
    config: EngineConfig,
    n_trials: int = DEFAULT_TRIALS,
    workers: int = 1,
    backend: str | None = None,
) -> list[GasTrace]:
    """Independent adaptive-search trials; trial i uses stream (seed, i)."""
    resolved = _resolve_gas(qubo, landscape, config)
    if workers > 1:
        payload = {
            "resolved": resolved,
            "landscape": landscape,
            "backend": backend,
        }
        return _run_pool(_pool_gas, payload, n_trials, workers)
    impl = get_backend(backend)
    return [
        _gas_trace(resolved, landscape, i, impl, False) for i in range(n_trials)
    ]


def run_classical_trials(
    reduced: BitMatrix,
    params: CodeParams,
    qubo: QuboProblem,
    seed: int = 0,
    n_trials: int = DEFAULT_TRIALS,
    workers: int = 1,
    backend: str | None = None,
) -> list[GasTrace]:
    """Independent baseline trials over the weight-(M-1) slice."""
    _, values = slice_assignment_values(reduced, params, qubo)
    precomputed = (values, int(values.min()))
    if workers > 1:
        payload = {
            "reduced": reduced,
            "params": params,
            "qubo": qubo,
            "seed": seed,
            "backend": backend,
            "precomputed": precomputed,
        }
        return _run_pool(_pool_classical, payload, n_trials, workers)
    return [
        run_classical_exhaustive(
            reduced,
            params,
            qubo,
            seed=seed,
            trial_index=i,
            backend=backend,
            precomputed=precomputed,
        )
        for i in range(n_trials)
    ]


def _domain_events(trace: GasTrace, domain: str) -> tuple[np.ndarray, int]:
    if domain == "classical":
        return trace.improvements_classical, trace.classical_queries
    if domain == "quantum":
        if trace.variant == CLASSICAL:
            raise ParameterError("baseline traces have no quantum query domain")
        return trace.improvements_quantum, trace.quantum_queries
    raise ParameterError(f"unknown domain {domain!r}")


def queries_to_optimum(traces: list[GasTrace], domain: str = "classical") -> np.ndarray:
    """Total queries per converged trace in the chosen domain."""
    out = np.empty(len(traces), dtype=np.int64)
    for i, trace in enumerate(traces):
        if not trace.converged:
            raise ParameterError(f"trace {trace.trial_index} did not converge")
        _, total = _domain_events(trace, domain)
        out[i] = total
    return out


def aggregate_traces(
    traces: list[GasTrace], mode: str = "avg", domain: str = "classical"
) -> tuple[np.ndarray, np.ndarray]:
    """Reduce traces to a table: (query index, mean best value) for mode
    "avg", or (queries to optimum, empirical CDF) for mode "cdf".

    Averages carry each trace's final value forward after termination.
    """
    if not traces:
        raise ParameterError("no traces to aggregate")
    if mode == "cdf":
        qs = np.sort(queries_to_optimum(traces, domain))
        return qs, np.arange(1, qs.shape[0] + 1, dtype=np.float64) / qs.shape[0]
    if mode != "avg":
        raise ParameterError(f"unknown mode {mode!r}")
    starts = []
    q_max = 0
    for trace in traces:
        positions, _ = _domain_events(trace, domain)
        if positions.size == 0:
            raise ParameterError("cannot average a trace without events")
        starts.append(int(positions[0]))
        q_max = max(q_max, int(positions[-1]))
    start = max(starts)
    diff = np.zeros(q_max + 2, dtype=np.float64)
    for trace in traces:
        positions, _ = _domain_events(trace, domain)
        values = trace.improvement_values.astype(np.float64)
        np.add.at(diff, positions, values)
        np.add.at(diff, positions[1:], -values[:-1])
    curve = np.cumsum(diff)[: q_max + 1] / len(traces)
    x = np.arange(start, q_max + 1, dtype=np.int64)
    return x, curve[start:]


def summarize_queries(traces: list[GasTrace], domain: str = "classical") -> dict:
    """Mean, median, and max queries to optimum over converged traces."""
    qs = queries_to_optimum(traces, domain)
    return {
        "trials": int(qs.shape[0]),
        "mean": float(qs.mean()),
        "median": float(np.median(qs)),
        "max": int(qs.max()),
    }
