"""Closed-form and numeric bounds driving the adaptive Grover engines.

Covers the amplitude-amplification success probability for a fixed rotation
count, its average when the count is drawn uniformly below a real cap k, the
optimal cap minimizing expected rotations per success, and a lower bound on
the number of optimal solutions obtained by counting column permutations
that fix the first codeword.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import asin, ceil, comb, cos, factorial, pi, sin, sqrt

from .codes import CodeParams, build_combinatorial_matrix
from .errors import ParameterError

# Largest word length for which exact max-code sizes are computed on demand.
MAX_EXACT_LENGTH = 8

# Above this solution-density ratio t/N the closed-form average success
# probability is a coarse approximation; results carry a warning flag.
DENSITY_WARNING_RATIO = 1e-2


def _check_t_n(t: int, n_total: int) -> None:
    if n_total < 1:
        raise ParameterError(f"search space size must be positive, got {n_total}")
    if not 0 <= t <= n_total:
        raise ParameterError(f"solution count must be in [0, {n_total}], got {t}")


def success_prob_L(L: int, t: int, n_total: int) -> float:
    """Probability that L Grover rotations land on a solution: sin^2((2L+1) theta)."""
    _check_t_n(t, n_total)
    if L < 0:
        raise ParameterError(f"rotation count must be nonnegative, got {L}")
    theta = asin(sqrt(t / n_total))
    return sin((2 * L + 1) * theta) ** 2


def optimal_rotations(t: int, n_total: int) -> int:
    """Rotation count maximizing the success probability: floor(pi/4 sqrt(N/t))."""
    _check_t_n(t, n_total)
    if t == 0:
        raise ParameterError("no optimal rotation count when there are no solutions")
    return int(pi / 4 * sqrt(n_total / t))


def success_prob_k(k: float, t: int, n_total: int) -> float:
    """Average success probability when L is drawn uniformly from {0..ceil(k)-1}.

    Closed form 1/2 - sin(4k theta) / (4k sin(2 theta)), exact for integer k.
    """
    _check_t_n(t, n_total)
    if k < 1:
        raise ParameterError(f"cap k must be at least 1, got {k}")
    if t == 0:
        return 0.0
    if t == n_total:
        return 1.0
    theta = asin(sqrt(t / n_total))
    return 0.5 - sin(4 * k * theta) / (4 * k * sin(2 * theta))


@lru_cache(maxsize=None)
def exact_max_code_size(n: int, d: int, w: int) -> int:
    """Exact largest (n, d, w) constant weight code, by max-clique search.

    Only small lengths are supported (n <= 8); larger instances must be
    supplied by the caller where a bound needs them.
    """
    if n > MAX_EXACT_LENGTH:
        raise ParameterError(
            f"exact size only computed for n <= {MAX_EXACT_LENGTH}; supply the value"
        )
    if not 0 < w <= n:
        raise ParameterError(f"w must satisfy 0 < w <= n, got w={w}, n={n}")
    if d % 2 != 0 or d < 2:
        raise ParameterError(f"d must be a positive even integer, got {d}")
    rows = build_combinatorial_matrix(n, w).rows
    count = len(rows)
    adjacency = [
        frozenset(
            j for j in range(count) if j != i and (rows[i] ^ rows[j]).bit_count() >= d
        )
        for i in range(count)
    ]
    best = 0

    def expand(size: int, candidates: set[int]) -> None:
        nonlocal best
        if size > best:
            best = size
        while candidates:
            if size + len(candidates) <= best:
                return
            v = max(candidates)
            candidates.remove(v)
            expand(size + 1, candidates & adjacency[v])

    expand(0, set(range(count)))
    return best


def t_lower(params: CodeParams, A_prev: int | None = None) -> int:
    """Lower bound on the number of optimal assignments, via column symmetry.

    Applicable when w <= d and the best (n-1, d, w) code is smaller than M-1
    (so every optimal code uses all n columns). Returns w! when w - d/2 = 1,
    otherwise min over 2 <= i <= w - d/2 of C(w, i).
    """
    if params.w > params.d:
        raise ParameterError(f"bound needs w <= d, got w={params.w}, d={params.d}")
    if A_prev is None:
        A_prev = exact_max_code_size(params.n - 1, params.d, params.w)
    if A_prev >= params.M - 1:
        raise ParameterError(
            f"bound needs the best (n-1,d,w) code below M-1; got {A_prev} >= {params.M - 1}"
        )
    margin = params.w - params.d // 2
    if margin <= 0:
        raise ParameterError("bound does not apply when d = 2w")
    if margin == 1:
        return factorial(params.w)
    return min(comb(params.w, i) for i in range(2, margin + 1))


def t_lower_or_one(params: CodeParams, A_prev: int | None = None) -> int:
    """t_lower when its assumptions hold, else the trivial bound 1."""
    try:
        return t_lower(params, A_prev)
    except ParameterError:
        return 1


def k_opt_upper(t_low: int, q1: int) -> int:
    """Upper end of the optimal-cap search interval: ceil((1+sqrt 2)/2 sqrt(N/t))."""
    if t_low < 1:
        raise ParameterError(f"solution-count bound must be >= 1, got {t_low}")
    n_total = 1 << q1
    if t_low > n_total:
        raise ParameterError(f"bound {t_low} exceeds the space size 2^{q1}")
    return ceil((1 + sqrt(2)) / 2 * sqrt(n_total / t_low))


@dataclass(frozen=True)
class KoptResult:
    """Result of minimizing expected rotations per success, h(k) = k / P_k."""

    k_opt: float
    h_min: float
    interval: tuple[float, float]
    extrema: tuple[float, ...]
    density_warning: bool

    def as_dict(self) -> dict:
        return {
            "k_opt": self.k_opt,
            "h_min": self.h_min,
            "interval": list(self.interval),
            "extrema": list(self.extrema),
            "density_warning": self.density_warning,
        }


def k_opt(
    t: int,
    q1: int,
    tolerance: float = 1e-9,
    density_threshold: float = DENSITY_WARNING_RATIO,
) -> KoptResult:
    """Minimize h(k) = k / P_k(t) over [1, k_opt_upper(t, q1)].

    The interval is scanned in quarter-period segments of sin(4k theta);
    each sign change of dh/dk is refined by bisection to the tolerance, and
    the minimum is taken over the refined extrema and the interval ends.
    """
    n_total = 1 << q1
    _check_t_n(t, n_total)
    if t == 0:
        raise ParameterError("no optimal cap when there are no solutions")
    hi = float(k_opt_upper(t, q1))
    warning = t / n_total > density_threshold
    if t == n_total:
        return KoptResult(1.0, 1.0, (1.0, hi), (), warning)

    theta = asin(sqrt(t / n_total))
    s2 = sin(2 * theta)

    def prob(k: float) -> float:
        return 0.5 - sin(4 * k * theta) / (4 * k * s2)

    def h(k: float) -> float:
        return k / prob(k)

    def slope_sign(k: float) -> float:
        # sign of dh/dk matches sign of P(k) - k P'(k)
        phase = 4 * k * theta
        return 0.5 + (phase * cos(phase) - 2 * sin(phase)) / (4 * k * s2)

    step = pi / (8 * theta)
    grid = [1.0]
    while grid[-1] < hi:
        grid.append(min(grid[-1] + step, hi))
    extrema: list[float] = []
    for lo_k, hi_k in zip(grid, grid[1:]):
        g_lo, g_hi = slope_sign(lo_k), slope_sign(hi_k)
        if g_lo == 0.0:
            extrema.append(lo_k)
            continue
        if g_lo * g_hi > 0:
            continue
        a, b = lo_k, hi_k
        while b - a > tolerance:
            mid = (a + b) / 2
            if slope_sign(mid) * g_lo <= 0:
                b = mid
            else:
                a = mid
        extrema.append((a + b) / 2)

    candidates = [1.0, hi, *extrema]
    best = min(candidates, key=h)
    return KoptResult(best, h(best), (1.0, hi), tuple(extrema), warning)
