"""Command line front end.

Subcommands: formulate (emit the objective), bench (query-complexity
trials), verify (check the packaged reference data end to end), circuit
(gate tallies for the preparation operator).

Exit codes: 0 success, 2 bad parameters, 3 resource guard tripped,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .bounds import k_opt, k_opt_upper, t_lower_or_one
from .circuit import compile_state_prep, state_prep_gate_counts
from .codes import (
    BitMatrix,
    CodeParams,
    as_mask,
    build_combinatorial_matrix,
    decode_solution,
    disjoint_support_code,
    reduce_matrix,
    validate_code,
)
from .engine import (
    BBHT,
    CLASSICAL,
    CONVENTIONAL,
    PROPOSED,
    EngineConfig,
    aggregate_traces,
    queries_to_optimum,
    run_bbht,
    run_classical_trials,
    run_gas_trials,
    summarize_queries,
)
from .errors import ParameterError, ResourceLimitError
from .landscape import build_landscape
from .qubo import (
    VARIANT_DOUBLE_PRIME,
    VARIANT_PRIME,
    build_objective,
    compute_bounds,
    export_qubo,
    parse_qubo,
)

GOLDEN_PACKAGE = "cwc_gas"


def _read_golden(name: str) -> str:
    return resources.files(GOLDEN_PACKAGE).joinpath(f"golden/{name}").read_text()


def _add_code_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, required=True, help="code length")
    sub.add_argument("--w", type=int, required=True, help="codeword weight")
    sub.add_argument("--d", type=int, required=True, help="minimum distance (even)")
    sub.add_argument("--m", dest="M", type=int, required=True, help="code size")


def _params(args: argparse.Namespace) -> CodeParams:
    return CodeParams(n=args.n, w=args.w, d=args.d, M=args.M)


def _build_problem(params: CodeParams, variant: str):
    matrix = build_combinatorial_matrix(params.n, params.w)
    reduced = reduce_matrix(matrix, params.d)
    qubo = build_objective(reduced, params, variant)
    return reduced, qubo


def cmd_formulate(args: argparse.Namespace) -> int:
    params = _params(args)
    if params.degenerate:
        code = disjoint_support_code(params)
        print("degenerate instance: d = 2w, best code uses disjoint supports")
        print(f"available words: {len(code)} (need {params.M})")
        for line in code.row_strings():
            print(line)
        return 0
    reduced, qubo = _build_problem(params, args.objective)
    bounds = compute_bounds(params, qubo.q1, qubo.l, args.objective)
    t_low = t_lower_or_one(params)
    doc = {"params": {"n": params.n, "w": params.w, "d": params.d, "M": params.M}}
    doc.update(bounds.as_dict())
    doc["l"] = qubo.l
    doc["q1"] = qubo.q1
    doc["t_lower"] = t_low
    doc["k_opt_upper"] = k_opt_upper(t_low, qubo.q1)
    doc["k_opt"] = k_opt(t_low, qubo.q1).as_dict()
    summary = [
        f"n={params.n} w={params.w} d={params.d} M={params.M}",
        f"variables={qubo.q1} exponent={qubo.l} penalty={qubo.rho}",
        f"value_qubits={qubo.q2} threshold={bounds.y0}",
        f"value_upper_bound={bounds.E_max_bar} valid_lower_bound={bounds.E_min_bar}",
    ]
    text = export_qubo(qubo)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "qubo.txt").write_text(text)
        (out_dir / "pprime.txt").write_text(reduced.to_text())
        (out_dir / "bounds.json").write_text(json.dumps(doc, indent=2) + "\n")
        for line in summary:
            print(line)
        print(f"wrote {out_dir}/qubo.txt, pprime.txt, bounds.json")
    else:
        for line in summary:
            print(line, file=sys.stderr)
        sys.stdout.write(text)
    return 0


def _variant_objective(variant: str) -> str:
    if variant in (CONVENTIONAL, CLASSICAL):
        return VARIANT_PRIME
    return VARIANT_DOUBLE_PRIME


def _decile_summary(qs: np.ndarray) -> dict:
    deciles = np.percentile(qs, np.arange(10, 100, 10)).tolist()
    return {
        "trials": int(qs.shape[0]),
        "mean": float(qs.mean()),
        "median": float(np.median(qs)),
        "max": int(qs.max()),
        "deciles": deciles,
    }


def _write_curve(path: Path, header: tuple[str, str], x, y) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for xi, yi in zip(x, y):
            writer.writerow([int(xi), float(yi)])


def cmd_bench(args: argparse.Namespace) -> int:
    params = _params(args)
    if params.degenerate:
        raise ParameterError("degenerate instance; nothing to benchmark")
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    known = (CONVENTIONAL, PROPOSED, BBHT, CLASSICAL)
    for variant in variants:
        if variant not in known:
            raise ParameterError(f"unknown variant {variant!r}")
    problems: dict[str, tuple] = {}

    def problem(objective: str):
        if objective not in problems:
            reduced, qubo = _build_problem(params, objective)
            problems[objective] = (reduced, qubo, build_landscape(qubo, backend=args.backend))
        return problems[objective]

    # build every landscape first so resource guards trip before any
    # output lands on disk
    for variant in variants:
        problem(_variant_objective(variant))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    summary: dict = {
        "params": {"n": params.n, "w": params.w, "d": params.d, "M": params.M},
        "trials": args.trials,
        "seed": args.seed,
        "lambda_override": args.lam,
        "reduction_metric": (
            "reductions_percent = 100 * (1 - mean(proposed) / mean(conventional)) "
            "over queries-to-optimum, per domain"
        ),
        "variants": {},
    }
    per_domain: dict[str, dict[str, np.ndarray]] = {}
    for variant in variants:
        objective = _variant_objective(variant)
        reduced, qubo, landscape = problem(objective)
        if variant in (CONVENTIONAL, PROPOSED):
            config = EngineConfig(variant=variant, lam=args.lam, seed=args.seed)
            traces = run_gas_trials(
                qubo, landscape, config, args.trials, args.workers, args.backend
            )
            domains = ("classical", "quantum")
            modes = ("avg", "cdf")
        elif variant == BBHT:
            target = np.flatnonzero(landscape.values == landscape.min_value)
            traces = [
                run_bbht(
                    landscape,
                    target,
                    seed=args.seed,
                    trial_index=i,
                    backend=args.backend,
                )
                for i in range(args.trials)
            ]
            domains = ("classical", "quantum")
            modes = ("cdf",)
        else:
            traces = run_classical_trials(
                reduced,
                params,
                qubo,
                seed=args.seed,
                n_trials=args.trials,
                workers=args.workers,
                backend=args.backend,
            )
            domains = ("classical",)
            modes = ("avg", "cdf")
        summary["variants"][variant] = {"objective": objective}
        per_domain[variant] = {}
        for domain in domains:
            qs = queries_to_optimum(traces, domain)
            per_domain[variant][domain] = qs
            summary["variants"][variant][domain] = _decile_summary(qs)
            for mode in modes:
                path = out_dir / f"{variant}_{mode}_{domain}.csv"
                if mode == "avg":
                    x, y = aggregate_traces(traces, "avg", domain)
                    _write_curve(path, ("queries", "mean_best_value"), x, y)
                else:
                    x, y = aggregate_traces(traces, "cdf", domain)
                    _write_curve(path, ("queries", "fraction"), x, y)
    if CONVENTIONAL in per_domain and PROPOSED in per_domain:
        reductions = {}
        for domain in ("classical", "quantum"):
            mean_c = per_domain[CONVENTIONAL][domain].mean()
            mean_p = per_domain[PROPOSED][domain].mean()
            reductions[domain] = float(100.0 * (1.0 - mean_p / mean_c))
        summary["reductions_percent"] = reductions
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"wrote {out_dir}/summary.json")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    params = CodeParams(n=7, w=3, d=4, M=7)
    checks: list[tuple[str, bool, str]] = []

    reduced, qubo = _build_problem(params, VARIANT_DOUBLE_PRIME)
    golden_matrix = BitMatrix.from_text(_read_golden("pprime_7_3.txt"))
    checks.append(
        (
            "reduced matrix matches the packaged rows",
            reduced == golden_matrix,
            f"{len(reduced.rows)} rows built",
        )
    )

    golden_qubo = parse_qubo(_read_golden("q_7_3_4_7.txt"))
    built_text = export_qubo(qubo)
    header_ok = (
        golden_qubo.q1,
        golden_qubo.q2,
        golden_qubo.l,
        golden_qubo.rho,
        golden_qubo.constant,
        golden_qubo.variant,
    ) == (qubo.q1, qubo.q2, qubo.l, qubo.rho, qubo.constant, qubo.variant)
    diffs = []
    if golden_qubo.q1 == qubo.q1:
        for r in range(qubo.q1):
            for rp in range(r, qubo.q1):
                got = qubo.coefficient(r, rp)
                want = golden_qubo.coefficient(r, rp)
                if got != want:
                    diffs.append((r, rp, got, want))
    detail = "header and all cells agree"
    if not header_ok:
        detail = "header fields disagree"
    elif diffs:
        shown = ", ".join(
            f"({r},{rp}) built {got} packaged {want}" for r, rp, got, want in diffs[:5]
        )
        detail = f"{len(diffs)} differing cells: {shown}"
    checks.append(("objective matches the packaged table", header_ok and not diffs, detail))

    landscape = build_landscape(qubo, backend=args.backend)
    bounds = compute_bounds(params, qubo.q1, qubo.l, VARIANT_DOUBLE_PRIME)
    min_ok = landscape.min_value == bounds.E_min_bar
    checks.append(
        (
            "landscape minimum equals the valid-code bound",
            min_ok,
            f"minimum {landscape.min_value}, bound {bounds.E_min_bar}",
        )
    )
    x_opt = as_mask(_read_golden("x_opt.txt").strip(), qubo.q1)
    value = landscape.value_of(x_opt)
    checks.append(
        (
            "packaged assignment attains the minimum",
            value == landscape.min_value,
            f"value {value}",
        )
    )
    code = decode_solution(x_opt, reduced, params)
    report = validate_code(code, params)
    checks.append(
        (
            "decoded code is a valid constant weight code",
            report.ok,
            f"min distance {report.min_distance}",
        )
    )
    golden_code = BitMatrix.from_text(_read_golden("c_opt.txt"))
    checks.append(
        (
            "decoded code matches the packaged codewords",
            tuple(sorted(code.rows)) == tuple(sorted(golden_code.rows)),
            f"{len(code.rows)} words",
        )
    )

    below = landscape.count_below(bounds.y0)
    t_low = t_lower_or_one(params)
    checks.append(
        (
            "solution count meets the lower bound",
            below >= t_low,
            f"{below} assignments under threshold {bounds.y0}, bound {t_low}",
        )
    )

    failed = 0
    for name, ok, detail in checks:
        mark = "ok" if ok else "FAIL"
        print(f"{mark:4s} {name} ({detail})")
        if not ok:
            failed += 1
    if failed:
        print(f"{failed} of {len(checks)} checks failed")
        return 4
    print(f"all {len(checks)} checks passed")
    return 0


def cmd_circuit(args: argparse.Namespace) -> int:
    params = _params(args)
    if params.degenerate:
        raise ParameterError("degenerate instance; no circuit to compile")
    _, qubo = _build_problem(params, args.objective)
    if args.threshold is None:
        threshold = compute_bounds(params, qubo.q1, qubo.l, args.objective).y0
    else:
        threshold = args.threshold
    prep = compile_state_prep(qubo, threshold)
    formula = state_prep_gate_counts(qubo, threshold)
    tally = prep.counts()
    doc = {
        "q1": qubo.q1,
        "q2": qubo.q2,
        "threshold": threshold,
        "formula": formula,
        "compiled": tally,
        "total_gates": len(prep.gates),
    }
    print(json.dumps(doc, indent=2))
    if args.dump_gates:
        Path(args.dump_gates).write_text(json.dumps(prep.to_json()) + "\n")
    for key, count in formula.items():
        if tally.get(key, 0) != count:
            print(f"FAIL compiled tally disagrees for {key}", file=sys.stderr)
            return 4
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwc-gas",
        description="Constant weight code search via simulated amplitude amplification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_form = sub.add_parser("formulate", help="emit the penalized objective")
    _add_code_args(p_form)
    p_form.add_argument(
        "--objective",
        choices=(VARIANT_PRIME, VARIANT_DOUBLE_PRIME),
        default=VARIANT_DOUBLE_PRIME,
    )
    p_form.add_argument(
        "--out", help="directory for qubo.txt, pprime.txt, bounds.json"
    )
    p_form.set_defaults(func=cmd_formulate)

    p_bench = sub.add_parser("bench", help="run query-complexity trials")
    _add_code_args(p_bench)
    p_bench.add_argument(
        "--variants",
        default=f"{CONVENTIONAL},{PROPOSED},{BBHT},{CLASSICAL}",
        help="comma separated list of engines to run",
    )
    p_bench.add_argument("--trials", type=int, default=1000)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=None,
        help="override the rotation-cap growth factor for both adaptive engines",
    )
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--backend", default=None, choices=("auto", "python", "compiled"))
    p_bench.add_argument("--out", default="bench_out")
    p_bench.set_defaults(func=cmd_bench)

    p_verify = sub.add_parser("verify", help="check the packaged reference data")
    p_verify.add_argument("--backend", default=None, choices=("auto", "python", "compiled"))
    p_verify.set_defaults(func=cmd_verify)

    p_circ = sub.add_parser("circuit", help="gate tallies for the preparation operator")
    _add_code_args(p_circ)
    p_circ.add_argument(
        "--objective",
        choices=(VARIANT_PRIME, VARIANT_DOUBLE_PRIME),
        default=VARIANT_DOUBLE_PRIME,
    )
    p_circ.add_argument("--threshold", type=int, default=None)
    p_circ.add_argument("--dump-gates", help="write the gate list as JSON here")
    p_circ.set_defaults(func=cmd_circuit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
