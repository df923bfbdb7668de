"""Binary constant weight codes as bitmask row matrices.

A code is a set of length-n binary words of Hamming weight w with pairwise
Hamming distance at least d. Rows are stored as machine-word bitmasks
(bit i = column i, n <= 63) so distances reduce to popcounts. The central
construction is the recursive enumeration of all weight-w words and its
reduction relative to the first word, which fixes the search space the
QUBO formulation operates on.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import comb

from .errors import DegenerateCaseError, ParameterError, ResourceLimitError

MAX_WORD_BITS = 63
MAX_MATRIX_ROWS = 1 << 26


@dataclass(frozen=True)
class CodeParams:
    """Target code parameters: length n, weight w, distance d, size M."""

    n: int
    w: int
    d: int
    M: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.n > MAX_WORD_BITS:
            raise ParameterError(f"n must be in [1, {MAX_WORD_BITS}], got {self.n}")
        if not 0 < self.w <= self.n:
            raise ParameterError(f"w must satisfy 0 < w <= n, got w={self.w}, n={self.n}")
        if self.d % 2 != 0 or self.d < 2:
            # equal-weight words always differ in an even number of positions
            raise ParameterError(f"d must be a positive even integer, got {self.d}")
        if self.d > 2 * self.w:
            raise ParameterError(f"d cannot exceed 2w = {2 * self.w}, got {self.d}")
        if self.M < 2:
            raise ParameterError(f"M must be at least 2, got {self.M}")

    @property
    def degenerate(self) -> bool:
        """True when d = 2w: codewords must have disjoint supports."""
        return self.d == 2 * self.w


def parse_row(text: str) -> tuple[int, int]:
    """Parse a '0'/'1' string into (mask, length); bit i is character i."""
    if not text or any(c not in "01" for c in text):
        raise ParameterError(f"row must be a nonempty string of 0/1, got {text!r}")
    if len(text) > MAX_WORD_BITS:
        raise ParameterError(f"row length {len(text)} exceeds {MAX_WORD_BITS}")
    mask = 0
    for i, c in enumerate(text):
        if c == "1":
            mask |= 1 << i
    return mask, len(text)


def format_row(mask: int, n: int) -> str:
    """Render a bitmask as a '0'/'1' string of length n."""
    if mask < 0 or mask >> n:
        raise ParameterError(f"mask {mask} does not fit in {n} bits")
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


def _coerce_mask(v: int | str | Sequence[int]) -> int:
    if isinstance(v, str):
        return parse_row(v)[0]
    if isinstance(v, int):
        if v < 0:
            raise ParameterError("bitmask must be nonnegative")
        return v
    mask = 0
    for i, bit in enumerate(v):
        if bit not in (0, 1):
            raise ParameterError(f"vector entries must be 0/1, got {bit!r}")
        if bit:
            mask |= 1 << i
    return mask


def hamming_distance(a: int | str | Sequence[int], b: int | str | Sequence[int]) -> int:
    """Hamming distance between two binary vectors (masks, strings, or 0/1 sequences)."""
    if isinstance(a, (str, Sequence)) and isinstance(b, (str, Sequence)) and len(a) != len(b):
        raise ParameterError(f"length mismatch: {len(a)} vs {len(b)}")
    return (_coerce_mask(a) ^ _coerce_mask(b)).bit_count()


def inner_product(a: int | str | Sequence[int], b: int | str | Sequence[int]) -> int:
    """Number of shared one-positions of two binary vectors."""
    if isinstance(a, (str, Sequence)) and isinstance(b, (str, Sequence)) and len(a) != len(b):
        raise ParameterError(f"length mismatch: {len(a)} vs {len(b)}")
    return (_coerce_mask(a) & _coerce_mask(b)).bit_count()


@dataclass(frozen=True)
class BitMatrix:
    """An ordered list of equal-length binary rows stored as bitmasks."""

    rows: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.n > MAX_WORD_BITS:
            raise ParameterError(f"row length must be in [1, {MAX_WORD_BITS}], got {self.n}")
        for r in self.rows:
            if r < 0 or r >> self.n:
                raise ParameterError(f"row {r} does not fit in {self.n} bits")

    def __len__(self) -> int:
        return len(self.rows)

    def row_strings(self) -> list[str]:
        return [format_row(r, self.n) for r in self.rows]

    def to_text(self) -> str:
        """One '0'/'1' row per line, trailing newline."""
        return "\n".join(self.row_strings()) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
        if not lines:
            raise ParameterError("empty matrix text")
        parsed = [parse_row(ln) for ln in lines]
        n = parsed[0][1]
        if any(length != n for _, length in parsed):
            raise ParameterError("rows have mixed lengths")
        return cls(rows=tuple(mask for mask, _ in parsed), n=n)

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "BitMatrix":
        return cls.from_text("\n".join(rows))


def build_combinatorial_matrix(n: int, w: int) -> BitMatrix:
    """All C(n, w) weight-w words of length n in the fixed recursive order.

    The order is defined by P(n, w) = [1 | P(n-1, w-1); 0 | P(n-1, w)] with
    the prefix bit in column 0, so the first row is always w ones followed
    by zeros.
    """
    if n < 1 or n > MAX_WORD_BITS:
        raise ParameterError(f"n must be in [1, {MAX_WORD_BITS}], got {n}")
    if not 0 <= w <= n:
        raise ParameterError(f"w must satisfy 0 <= w <= n, got {w}")
    if comb(n, w) > MAX_MATRIX_ROWS:
        raise ResourceLimitError(f"C({n},{w}) = {comb(n, w)} rows exceeds the guard")

    def rec(m: int, k: int) -> list[int]:
        if k == 0:
            return [0]
        if k == m:
            return [(1 << m) - 1]
        with_one = [1 | (r << 1) for r in rec(m - 1, k - 1)]
        with_zero = [r << 1 for r in rec(m - 1, k)]
        return with_one + with_zero

    return BitMatrix(rows=tuple(rec(n, w)), n=n)


def reduce_matrix(matrix: BitMatrix, d: int) -> BitMatrix:
    """Drop the first row and every row closer than d to it, keeping order.

    Rows at distance exactly d survive. The result is the reduced search
    space: selecting M-1 of its rows plus the dropped first row is the
    candidate code.
    """
    if d % 2 != 0 or d < 2:
        raise ParameterError(f"d must be a positive even integer, got {d}")
    if not matrix.rows:
        raise ParameterError("matrix has no rows")
    p0 = matrix.rows[0]
    kept = tuple(r for r in matrix.rows if (r ^ p0).bit_count() >= d)
    return BitMatrix(rows=kept, n=matrix.n)


def reduced_row_count(params: CodeParams) -> int:
    """Closed-form size of the reduced matrix: sum_i C(w,i)*C(n-w,w-i) for i <= w - d/2."""
    return sum(
        comb(params.w, i) * comb(params.n - params.w, params.w - i)
        for i in range(0, params.w - params.d // 2 + 1)
    )


def min_distance(matrix: BitMatrix) -> int:
    """Minimum pairwise Hamming distance; requires at least two rows."""
    if len(matrix.rows) < 2:
        raise ParameterError("min_distance needs at least two rows")
    return min(
        (a ^ b).bit_count()
        for i, a in enumerate(matrix.rows)
        for b in matrix.rows[i + 1 :]
    )


def as_mask(x: int | str | Sequence[int], q1: int) -> int:
    """Coerce an assignment (mask, string, or 0/1 sequence) to a q1-bit mask."""
    if isinstance(x, (str, Sequence)) and not isinstance(x, int) and len(x) != q1:
        raise ParameterError(f"assignment length {len(x)} != {q1}")
    mask = _coerce_mask(x)
    if mask >> q1:
        raise ParameterError(f"assignment {mask} does not fit in {q1} bits")
    return mask


def decode_solution(
    x: int | str | Sequence[int], reduced: BitMatrix, params: CodeParams
) -> BitMatrix:
    """Map an assignment over the reduced rows to a candidate code.

    The fixed first word (w ones then zeros) is prepended, then the reduced
    rows whose variables are set, in row order.
    """
    mask = as_mask(x, len(reduced.rows))
    p0 = (1 << params.w) - 1
    chosen = [r for i, r in enumerate(reduced.rows) if (mask >> i) & 1]
    return BitMatrix(rows=(p0, *chosen), n=params.n)


@dataclass(frozen=True)
class CodeReport:
    """Validity check result for a candidate code against CodeParams."""

    ok: bool
    row_count_ok: bool
    weights_ok: bool
    lengths_ok: bool
    distance_ok: bool
    min_distance: int | None
    first_bad_pair: tuple[int, int] | None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "row_count_ok": self.row_count_ok,
            "weights_ok": self.weights_ok,
            "lengths_ok": self.lengths_ok,
            "distance_ok": self.distance_ok,
            "min_distance": self.min_distance,
            "first_bad_pair": list(self.first_bad_pair) if self.first_bad_pair else None,
        }


def validate_code(code: BitMatrix, params: CodeParams) -> CodeReport:
    """Check row count, lengths, weights, and minimum distance against params."""
    row_count_ok = len(code.rows) == params.M
    lengths_ok = code.n == params.n
    weights_ok = all(r.bit_count() == params.w for r in code.rows)
    dmin: int | None = None
    first_bad: tuple[int, int] | None = None
    distance_ok = True
    if len(code.rows) >= 2:
        dmin = min_distance(code)
        distance_ok = dmin >= params.d
        if not distance_ok:
            for i, a in enumerate(code.rows):
                for j in range(i + 1, len(code.rows)):
                    if (a ^ code.rows[j]).bit_count() < params.d:
                        first_bad = (i, j)
                        break
                if first_bad:
                    break
    ok = row_count_ok and lengths_ok and weights_ok and distance_ok
    return CodeReport(
        ok=ok,
        row_count_ok=row_count_ok,
        weights_ok=weights_ok,
        lengths_ok=lengths_ok,
        distance_ok=distance_ok,
        min_distance=dmin,
        first_bad_pair=first_bad,
    )


def disjoint_support_code(params: CodeParams) -> BitMatrix:
    """Closed-form answer for d = 2w: floor(n/w) words with disjoint supports."""
    if not params.degenerate:
        raise DegenerateCaseError("closed form applies only when d = 2w")
    count = params.n // params.w
    block = (1 << params.w) - 1
    rows = tuple(block << (i * params.w) for i in range(count))
    return BitMatrix(rows=rows, n=params.n)
