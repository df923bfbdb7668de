"""Objective assembly: exponent, penalty, bounds, and serialization."""

from __future__ import annotations

from math import comb

import mpmath
import pytest

from cwc_gas import (
    CodeParams,
    ParameterError,
    VARIANT_DOUBLE_PRIME,
    VARIANT_PRIME,
    build_combinatorial_matrix,
    build_objective,
    compute_bounds,
    evaluate,
    exponent_l,
    export_qubo,
    parse_qubo,
    penalty_rho,
    reduce_matrix,
)
from cwc_gas.errors import CoefficientOverflowError, DegenerateCaseError
from cwc_gas.qubo import QuboProblem

X_OPT = "1000010100100011000000"


def build(n, w, d, M, variant=VARIANT_DOUBLE_PRIME):
    params = CodeParams(n, w, d, M)
    reduced = reduce_matrix(build_combinatorial_matrix(n, w), d)
    return reduced, build_objective(reduced, params, variant)


def test_exponent_minimality_over_grid():
    # l is the smallest exponent with C(M,2) * (2w-d)^l < (2w-d+2)^l
    for w in range(1, 7):
        for d in range(2, 2 * w, 2):
            for M in (2, 3, 5, 9, 30):
                params = CodeParams(n=2 * w + 1, w=w, d=d, M=M)
                l = exponent_l(params)
                lo, hi = 2 * w - d, 2 * w - d + 2
                pairs = comb(M, 2)
                assert pairs * lo**l < hi**l
                if l > 1:
                    assert pairs * lo ** (l - 1) >= hi ** (l - 1)


def test_exponent_matches_high_precision_log_formula():
    with mpmath.workdps(60):
        for w in range(1, 7):
            for d in range(2, 2 * w, 2):
                for M in (2, 3, 5, 9, 30, 100):
                    params = CodeParams(n=2 * w + 1, w=w, d=d, M=M)
                    lo = 2 * w - d
                    ratio = mpmath.log(comb(M, 2)) / mpmath.log(
                        mpmath.mpf(1) + mpmath.mpf(2) / lo
                    )
                    assert exponent_l(params) == int(mpmath.floor(ratio)) + 1


def test_exponent_closed_form_when_margin_is_one():
    # at d = 2w - 2 the condition reduces to C(M,2) < 2^l
    for w in range(2, 7):
        for M in range(2, 40):
            params = CodeParams(n=2 * w + 1, w=w, d=2 * w - 2, M=M)
            assert exponent_l(params) == comb(M, 2).bit_length()


def test_exponent_rejects_degenerate():
    with pytest.raises(DegenerateCaseError):
        exponent_l(CodeParams(7, 3, 6, 2))


def test_reference_exponent_and_penalties():
    params = CodeParams(7, 3, 4, 7)
    assert exponent_l(params) == 5
    assert penalty_rho(params, 22, 5, VARIANT_PRIME) == 7393
    assert penalty_rho(params, 22, 5, VARIANT_DOUBLE_PRIME) == 16


def test_reference_bounds_both_variants():
    params = CodeParams(7, 3, 4, 7)
    dp = compute_bounds(params, 22, 5, VARIANT_DOUBLE_PRIME)
    assert (dp.f_bar, dp.g_bar) == (7392, 256)
    assert (dp.E_max_bar, dp.E_min_bar, dp.y0) == (11488, 15, 16)
    assert (dp.rho, dp.q2) == (16, 15)
    p = compute_bounds(params, 22, 5, VARIANT_PRIME)
    assert (p.rho, p.E_min_bar, p.y0) == (7393, 15, 16)
    assert p.E_max_bar == 7392 + 7393 * 256
    assert p.q2 == 22


def test_penalty_shape_selection():
    # g_bar switches between the all-ones and the balanced maximizer
    wide = compute_bounds(CodeParams(7, 3, 4, 7), 22, 5, VARIANT_DOUBLE_PRIME)
    assert wide.g_bar == (22 - 6) ** 2  # 2(M-1) < q1
    narrow = compute_bounds(CodeParams(7, 3, 4, 7), 10, 5, VARIANT_DOUBLE_PRIME)
    assert narrow.g_bar == 6 * 6  # 2(M-1) >= q1


def test_reference_objective_structure(qubo_dp, qubo_p):
    assert (qubo_dp.q1, qubo_dp.q2, qubo_dp.l, qubo_dp.rho) == (22, 15, 5, 16)
    assert qubo_dp.constant == 576
    off_diag = set()
    for r in range(22):
        assert qubo_dp.coefficient(r, r) == -176
        for rp in range(r + 1, 22):
            off_diag.add(qubo_dp.coefficient(r, rp))
    assert off_diag == {32, 33, 64}
    assert (qubo_p.q2, qubo_p.rho) == (22, 7393)


def test_variants_differ_only_in_penalty(qubo_dp, qubo_p):
    for r in range(22):
        for rp in range(r + 1, 22):
            gap = qubo_p.coefficient(r, rp) - qubo_dp.coefficient(r, rp)
            assert gap == 2 * (7393 - 16)


def test_evaluate_against_brute_force():
    reduced, qubo = build(6, 3, 4, 4)
    q1 = qubo.q1
    for mask in range(1 << q1):
        total = qubo.constant
        for r in range(q1):
            if not (mask >> r) & 1:
                continue
            total += qubo.coefficient(r, r)
            for rp in range(r + 1, q1):
                if (mask >> rp) & 1:
                    total += qubo.coefficient(r, rp)
        assert evaluate(qubo, mask) == total


def test_reference_optimum_value(qubo_dp, qubo_p):
    assert evaluate(qubo_dp, X_OPT) == 15
    # the slice penalty vanishes, so both variants agree on the optimum
    assert evaluate(qubo_p, X_OPT) == 15


def test_export_parse_round_trip():
    for args in [(7, 3, 4, 7), (8, 3, 4, 8), (6, 3, 4, 4)]:
        _, qubo = build(*args)
        again = parse_qubo(export_qubo(qubo))
        assert (again.q1, again.q2, again.l, again.rho) == (
            qubo.q1,
            qubo.q2,
            qubo.l,
            qubo.rho,
        )
        assert again.constant == qubo.constant
        assert again.variant == qubo.variant
        assert again.coefficients == qubo.coefficients


def test_export_rejects_unknown_format(qubo_dp):
    with pytest.raises(ParameterError):
        export_qubo(qubo_dp, fmt="json")


def test_parse_rejects_malformed_text():
    good = export_qubo(build(6, 3, 4, 4)[1])
    lines = good.splitlines()
    for bad in [
        "",
        "not a header\n1 2\n",
        good.replace("q1=", "qq="),
        "\n".join(lines[:-1]) + "\n",  # missing a row
        good.replace(lines[1], lines[1] + " 7", 1),  # row too long
    ]:
        with pytest.raises(ParameterError):
            parse_qubo(bad)


def test_structural_validation_well_formed():
    reduced, qubo = build(8, 3, 4, 8)
    assert qubo.q1 == len(reduced.rows)
    for r, row in enumerate(qubo.coefficients):
        assert len(row) == qubo.q1 - r
    bounds = compute_bounds(CodeParams(8, 3, 4, 8), qubo.q1, qubo.l, qubo.variant)
    assert bounds.E_max_bar > bounds.E_min_bar >= 0
    assert bounds.q2 == qubo.q2


def test_qubo_problem_shape_validation():
    with pytest.raises(ParameterError):
        QuboProblem(
            q1=2,
            coefficients=((1, 2),),
            constant=0,
            l=1,
            rho=1,
            variant=VARIANT_PRIME,
            q2=4,
        )
    with pytest.raises(ParameterError):
        QuboProblem(
            q1=2,
            coefficients=((1,), (2,)),
            constant=0,
            l=1,
            rho=1,
            variant=VARIANT_PRIME,
            q2=4,
        )


def test_degenerate_params_refuse_objective():
    reduced = reduce_matrix(build_combinatorial_matrix(7, 3), 6)
    with pytest.raises(DegenerateCaseError):
        build_objective(reduced, CodeParams(7, 3, 6, 2), VARIANT_DOUBLE_PRIME)


def test_overflow_guard_trips_before_building():
    # the E-prime range for this instance exceeds the int64 guard
    params = CodeParams(16, 8, 2, 3)
    reduced = reduce_matrix(build_combinatorial_matrix(16, 8), 2)
    with pytest.raises(CoefficientOverflowError):
        build_objective(reduced, params, VARIANT_PRIME)
