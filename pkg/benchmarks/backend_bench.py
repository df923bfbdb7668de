"""Timing comparison of the compiled and pure-Python kernel backends.

Runs the three hot paths (full landscape enumeration, adaptive-search
trials, and the classical baseline sweep) once per backend on the
reference (7,3,4,7) problem, checks that both backends produce
identical results, and prints a timing table.

Usage: python3 benchmarks/backend_bench.py [--gas-trials N] [--classic-trials N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cwc_gas import (
    CodeParams,
    EngineConfig,
    VARIANT_DOUBLE_PRIME,
    build_combinatorial_matrix,
    build_landscape,
    build_objective,
    queries_to_optimum,
    reduce_matrix,
    run_classical_trials,
    run_gas_trials,
)
from cwc_gas.engine import PROPOSED
from cwc_gas.kernels import BACKEND_NAME, get_backend

BACKENDS = ("compiled", "python")


def timed(fn):
    t0 = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--gas-trials", type=int, default=500)
    parser.add_argument("--classic-trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    try:
        get_backend("compiled")
    except Exception as exc:
        print(f"compiled backend unavailable ({exc}); nothing to compare")
        return 1

    params = CodeParams(7, 3, 4, 7)
    reduced = reduce_matrix(build_combinatorial_matrix(7, 3), 4)
    qubo = build_objective(reduced, params, VARIANT_DOUBLE_PRIME)
    config = EngineConfig(variant=PROPOSED, seed=args.seed)

    rows = []
    results: dict[str, dict[str, object]] = {name: {} for name in BACKENDS}

    for name in BACKENDS:
        landscape, t_enum = timed(lambda: build_landscape(qubo, backend=name))
        results[name]["values"] = landscape.values
        results[name]["t_enum"] = t_enum

        traces, t_gas = timed(
            lambda: run_gas_trials(
                qubo, landscape, config, args.gas_trials, backend=name
            )
        )
        results[name]["gas"] = (
            queries_to_optimum(traces, "classical"),
            queries_to_optimum(traces, "quantum"),
        )
        results[name]["t_gas"] = t_gas

        traces, t_cls = timed(
            lambda: run_classical_trials(
                reduced,
                params,
                qubo,
                seed=args.seed,
                n_trials=args.classic_trials,
                backend=name,
            )
        )
        results[name]["cls"] = queries_to_optimum(traces, "classical")
        results[name]["t_cls"] = t_cls

    assert np.array_equal(results["compiled"]["values"], results["python"]["values"])
    for got, want in zip(results["compiled"]["gas"], results["python"]["gas"]):
        assert np.array_equal(got, want)
    assert np.array_equal(results["compiled"]["cls"], results["python"]["cls"])

    rows.append(("2^22 landscape enumeration", "t_enum"))
    rows.append((f"adaptive search, {args.gas_trials} trials", "t_gas"))
    rows.append((f"baseline sweep, {args.classic_trials} trials", "t_cls"))

    print(f"active default backend: {BACKEND_NAME}")
    print(f"{'task':<34}{'compiled':>10}{'python':>10}{'speedup':>9}")
    for label, key in rows:
        tc = results["compiled"][key]
        tp = results["python"][key]
        print(f"{label:<34}{tc:>9.3f}s{tp:>9.3f}s{tp / tc:>8.1f}x")
    print("cross-backend results identical")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
