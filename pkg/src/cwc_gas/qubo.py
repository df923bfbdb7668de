"""Integer QUBO formulation of the constant weight code search.

The objective over selections x of M-1 reduced rows is

    E(x) = sum_{r<r'} <p_r, p_r'>^l x_r x_r' + rho * (sum_r x_r - (M-1))^2

where the inner-product exponent l separates valid codes from invalid ones
and rho makes the selection-count penalty dominate. Two penalty variants are
supported: "E-prime" (rho exceeds the quadratic term's maximum) and
"E-double-prime" (rho exceeds the valid-code value bound, giving a much
narrower value range and a smaller value register). All arithmetic is exact.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from math import comb

from .codes import BitMatrix, CodeParams, as_mask
from .errors import CoefficientOverflowError, DegenerateCaseError, ParameterError

VARIANT_PRIME = "E-prime"
VARIANT_DOUBLE_PRIME = "E-double-prime"
VARIANTS = (VARIANT_PRIME, VARIANT_DOUBLE_PRIME)

# Guard for downstream fixed-width (int64) array materialization.
MAX_ABS_VALUE = 1 << 62

_FORMAT_TAG = "cwc-qubo v1"


def _check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    return variant


def exponent_l(params: CodeParams) -> int:
    """Smallest exponent making one distance violation outweigh all valid pairs.

    Exact-integer version of l = floor(log C(M,2) / log(1 + 2/(2w-d)) + 1):
    the smallest positive l with C(M,2) * (2w-d)^l < (2w-d+2)^l.
    """
    if params.degenerate:
        raise DegenerateCaseError("no exponent needed when d = 2w; use the closed form")
    base_lo = 2 * params.w - params.d
    base_hi = base_lo + 2
    pairs = comb(params.M, 2)
    l = 1
    lo_pow, hi_pow = base_lo, base_hi
    while hi_pow <= pairs * lo_pow:
        l += 1
        lo_pow *= base_lo
        hi_pow *= base_hi
    return l


def penalty_rho(params: CodeParams, q1: int, l: int, variant: str) -> int:
    """Penalty weight: one past the quadratic-term max (E-prime) or one past
    the valid-code value bound (E-double-prime)."""
    _check_variant(variant)
    if variant == VARIANT_PRIME:
        return comb(q1, 2) * (params.w - 1) ** l + 1
    return comb(params.M - 1, 2) * (params.w - params.d // 2) ** l + 1


@dataclass(frozen=True)
class BoundsReport:
    """Objective range bounds and the derived value-register width."""

    variant: str
    f_bar: int  # max of the quadratic term
    g_bar: int  # max of the selection-count penalty factor
    E_max_bar: int  # upper bound on E(x)
    E_min_bar: int  # upper bound on the minimum of E over valid selections
    y0: int  # initial threshold: E_min_bar + 1
    rho: int
    q2: int  # two's complement register width covering [0, E_max_bar]

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "f_bar": self.f_bar,
            "g_bar": self.g_bar,
            "E_max_bar": self.E_max_bar,
            "E_min_bar": self.E_min_bar,
            "y0": self.y0,
            "rho": self.rho,
            "q2": self.q2,
        }


def compute_bounds(params: CodeParams, q1: int, l: int, variant: str) -> BoundsReport:
    """Exact objective bounds for the given variant and reduced-space size q1."""
    _check_variant(variant)
    if q1 < 1:
        raise ParameterError(f"q1 must be positive, got {q1}")
    rho = penalty_rho(params, q1, l, variant)
    f_bar = comb(q1, 2) * (params.w - 1) ** l
    if 2 * (params.M - 1) < q1:
        g_bar = (q1 - params.M + 1) ** 2
    else:
        g_bar = (params.M - 1) ** 2
    e_max = f_bar + rho * g_bar
    e_min = comb(params.M - 1, 2) * (params.w - params.d // 2) ** l
    q2 = (max(e_max, 1) - 1).bit_length() + 1  # ceil(log2 E_max) + 1
    return BoundsReport(
        variant=variant,
        f_bar=f_bar,
        g_bar=g_bar,
        E_max_bar=e_max,
        E_min_bar=e_min,
        y0=e_min + 1,
        rho=rho,
        q2=q2,
    )


@dataclass(frozen=True)
class QuboProblem:
    """Upper-triangular integer QUBO with a constant offset.

    coefficients[r] holds (Q[r][r], Q[r][r+1], ..., Q[r][q1-1]); the diagonal
    entries are the linear coefficients. q2 is the value-register width used
    by the circuit bridge and the export format.
    """

    q1: int
    coefficients: tuple[tuple[int, ...], ...]
    constant: int
    l: int
    rho: int
    variant: str
    q2: int
    params: CodeParams | None = None

    def __post_init__(self) -> None:
        _check_variant(self.variant)
        if len(self.coefficients) != self.q1:
            raise ParameterError("coefficient rows must match q1")
        for r, row in enumerate(self.coefficients):
            if len(row) != self.q1 - r:
                raise ParameterError(f"row {r} must have {self.q1 - r} entries")
        if self.q2 < 1:
            raise ParameterError("q2 must be positive")

    def coefficient(self, r: int, rp: int) -> int:
        """Q[r][rp] for r <= rp (upper triangle, diagonal included)."""
        if not 0 <= r <= rp < self.q1:
            raise ParameterError(f"need 0 <= r <= rp < q1, got ({r}, {rp})")
        return self.coefficients[r][rp - r]


def build_objective(
    reduced: BitMatrix, params: CodeParams, variant: str = VARIANT_DOUBLE_PRIME
) -> QuboProblem:
    """Assemble the QUBO for selecting M-1 rows of the reduced matrix."""
    _check_variant(variant)
    if params.degenerate:
        raise DegenerateCaseError("d = 2w has a closed-form answer; no QUBO is built")
    if reduced.n != params.n:
        raise ParameterError(f"matrix length {reduced.n} != params.n {params.n}")
    q1 = len(reduced.rows)
    if q1 < 1:
        raise ParameterError("reduced matrix has no rows")
    l = exponent_l(params)
    bounds = compute_bounds(params, q1, l, variant)
    if bounds.E_max_bar >= MAX_ABS_VALUE:
        raise CoefficientOverflowError(
            f"objective bound {bounds.E_max_bar} exceeds the int64 guard"
        )
    rho = bounds.rho
    m1 = params.M - 1
    diag = rho * (1 - 2 * m1)
    rows = []
    for r in range(q1):
        row = [diag]
        for rp in range(r + 1, q1):
            ip = (reduced.rows[r] & reduced.rows[rp]).bit_count()
            row.append(ip**l + 2 * rho)
        rows.append(tuple(row))
    return QuboProblem(
        q1=q1,
        coefficients=tuple(rows),
        constant=rho * m1 * m1,
        l=l,
        rho=rho,
        variant=variant,
        q2=bounds.q2,
        params=params,
    )


def evaluate(qubo: QuboProblem, x: int | str | Sequence[int]) -> int:
    """Exact objective value E(x) for one assignment."""
    mask = as_mask(x, qubo.q1)
    set_bits = [r for r in range(qubo.q1) if (mask >> r) & 1]
    total = qubo.constant
    for i, r in enumerate(set_bits):
        row = qubo.coefficients[r]
        total += row[0]
        for rp in set_bits[i + 1 :]:
            total += row[rp - r]
    return total


def export_qubo(qubo: QuboProblem, fmt: str = "text") -> str:
    """Serialize to the plain-text exchange format (lossless round-trip)."""
    if fmt != "text":
        raise ParameterError(f"unsupported format {fmt!r}")
    header = (
        f"{_FORMAT_TAG} q1={qubo.q1} q2={qubo.q2} l={qubo.l} "
        f"rho={qubo.rho} constant={qubo.constant} variant={qubo.variant}"
    )
    lines = [header]
    for row in qubo.coefficients:
        lines.append(" ".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def parse_qubo(text: str) -> QuboProblem:
    """Parse the plain-text exchange format back into a QuboProblem."""
    lines = [ln for ln in (s.rstrip() for s in text.splitlines()) if ln]
    if not lines or not lines[0].startswith(_FORMAT_TAG):
        raise ParameterError(f"missing {_FORMAT_TAG!r} header")
    fields: dict[str, str] = {}
    for token in lines[0][len(_FORMAT_TAG) :].split():
        if "=" not in token:
            raise ParameterError(f"malformed header token {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    try:
        q1 = int(fields["q1"])
        q2 = int(fields["q2"])
        l = int(fields["l"])
        rho = int(fields["rho"])
        constant = int(fields["constant"])
        variant = fields["variant"]
    except KeyError as exc:
        raise ParameterError(f"header missing field {exc}") from exc
    if len(lines) - 1 != q1:
        raise ParameterError(f"expected {q1} coefficient rows, got {len(lines) - 1}")
    rows = []
    for r, ln in enumerate(lines[1:]):
        entries = tuple(int(tok) for tok in ln.split())
        if len(entries) != q1 - r:
            raise ParameterError(f"row {r} must have {q1 - r} entries, got {len(entries)}")
        rows.append(entries)
    return QuboProblem(
        q1=q1,
        coefficients=tuple(rows),
        constant=constant,
        l=l,
        rho=rho,
        variant=variant,
        q2=q2,
    )
