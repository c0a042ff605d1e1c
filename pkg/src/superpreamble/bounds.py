"""Closed-form solvable-rate expressions and bounds.

Exact rates exist for N <= 3.  For N >= 4 the upper bounds count the
all-distinct event and the lower bounds come from the span-counting
argument (ceil((N-1)/2))^L.  The span-counting bound is provably loose
and, for small K^L relative to N, can even sit above the true rate (see
the enumeration oracle); values are reported as specified, clamped to
[0, 1], with products accumulated in log space so large K^(N-1)L cannot
overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BoundSet:
    """Exact rate (N <= 3 only) plus upper/lower bounds for one (K, L, N)."""

    K: int
    L: int
    N: int
    exact: float | None
    upper: float
    lower: float


def _validate(K: int, L: int, N: int):
    if min(K, L, N) < 1:
        raise ValueError(f"K, L, N must all be >= 1, got {(K, L, N)}")


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def single_user_exact(K: int, L: int, N: int) -> float:
    """Exact single-user solvable rate, defined for N <= 3."""
    if N > 3:
        raise ValueError("exact single-user rate only available for N <= 3")
    x = 1.0 / K ** L
    return (1.0 - x) ** (N - 1)


def all_user_exact(K: int, L: int, N: int) -> float:
    """Exact all-user solvable rate, defined for N <= 3."""
    if N > 3:
        raise ValueError("exact all-user rate only available for N <= 3")
    x = 1.0 / K ** L
    return math.prod(1.0 - j * x for j in range(N))


def single_user_upper(K: int, L: int, N: int) -> float:
    """P(no other user picks the same super preamble)."""
    x = 1.0 / K ** L
    return (1.0 - x) ** (N - 1)


def single_user_lower(K: int, L: int, N: int) -> float:
    """1 - (span-count bound)/K^L, clamped at 0."""
    ratio = (math.ceil((N - 1) / 2) / K) ** L
    return _clamp(1.0 - ratio)


def all_user_upper(K: int, L: int, N: int) -> float:
    """P(all N super preambles distinct), log-domain product."""
    pool = K ** L
    if N - 1 >= pool:
        return 0.0
    log_p = sum(math.log1p(-j / pool) for j in range(1, N))
    return math.exp(log_p)


def all_user_lower(K: int, L: int, N: int) -> float:
    """Exact rate at N=3 times the per-user span-count factors, clamped."""
    if N <= 3:
        return all_user_exact(K, L, N)
    anchor = all_user_exact(K, L, 3)
    if anchor <= 0.0:
        return 0.0
    log_p = math.log(anchor)
    for n in range(4, N + 1):
        factor = 1.0 - (math.ceil((n - 1) / 2) / K) ** L
        if factor <= 0.0:
            return 0.0
        log_p += math.log(factor)
    return _clamp(math.exp(log_p))


def single_user_bounds(K: int, L: int, N: int) -> BoundSet:
    _validate(K, L, N)
    if N <= 3:
        exact = single_user_exact(K, L, N)
        return BoundSet(K=K, L=L, N=N, exact=exact, upper=exact, lower=exact)
    upper = _clamp(single_user_upper(K, L, N))
    # the span-count argument overcounts for L = 1, where distinctness is
    # exact; capping keeps lower <= upper without loosening a valid bound
    return BoundSet(K=K, L=L, N=N, exact=None, upper=upper,
                    lower=min(single_user_lower(K, L, N), upper))


def all_user_bounds(K: int, L: int, N: int) -> BoundSet:
    _validate(K, L, N)
    if N <= 3:
        exact = all_user_exact(K, L, N)
        return BoundSet(K=K, L=L, N=N, exact=exact, upper=exact, lower=exact)
    upper = _clamp(all_user_upper(K, L, N))
    return BoundSet(K=K, L=L, N=N, exact=None, upper=upper,
                    lower=min(all_user_lower(K, L, N), upper))


def bound_table(K: int, L: int, N_max: int) -> list[tuple[BoundSet, BoundSet]]:
    """(single-user, all-user) bound pairs for N = 1 .. N_max."""
    if N_max < 1:
        raise ValueError(f"N_max must be >= 1, got {N_max}")
    return [(single_user_bounds(K, L, n), all_user_bounds(K, L, n))
            for n in range(1, N_max + 1)]
