"""Orthogonal preamble pool and preamble selection matrices.

A selection matrix holds, for each of N contending users, the indices of
the K orthogonal sequences chosen in each of L preamble phases.  A user is
*solvable* when its selection row is not a linear combination of the other
rows, which is decided here with exact integer arithmetic (floating-point
rank thresholds would bias the measured probabilities).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ResourceLimitError


@dataclass(frozen=True)
class PreamblePool:
    """K orthogonal length-K sequences, one per row of S (S @ S^H = I)."""

    K: int
    S: np.ndarray

    def __post_init__(self):
        self.S.setflags(write=False)


def build_pool(K: int) -> PreamblePool:
    """Build the pool as the normalized DFT matrix of order K.

    Any unitary matrix satisfies the orthogonality requirement; the DFT
    choice additionally gives constant-modulus symbols.
    """
    if K < 1:
        raise ValueError(f"pool size K must be >= 1, got {K}")
    k = np.arange(K)
    S = np.exp(-2j * np.pi * np.outer(k, k) / K) / np.sqrt(K)
    return PreamblePool(K=K, S=S)


@dataclass(frozen=True)
class SelectionMatrix:
    """N x KL binary selection matrix plus its N x L index representation.

    ``indices[n, l]`` is the 1-based sequence index user n sends in phase l;
    column ``(l*K + indices[n,l] - 1)`` of row n of ``A`` is 1.
    """

    K: int
    L: int
    N: int
    indices: np.ndarray
    A: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.indices.shape != (self.N, self.L):
            raise ValueError(f"indices shape {self.indices.shape} != "
                             f"(N, L) = {(self.N, self.L)}")
        if self.indices.size and (self.indices.min() < 1 or self.indices.max() > self.K):
            raise ValueError(f"indices must lie in 1..{self.K}")
        A = np.zeros((self.N, self.K * self.L), dtype=np.int8)
        rows = np.arange(self.N)
        for l in range(self.L):
            A[rows, (self.indices[:, l] - 1) + l * self.K] = 1
        object.__setattr__(self, "A", A)
        self.indices.setflags(write=False)
        A.setflags(write=False)

    def phase_block(self, l: int) -> np.ndarray:
        """A_l, the N x K sub-matrix of phase ``l`` (0-based)."""
        return self.A[:, l * self.K:(l + 1) * self.K]

    def row_tuples(self) -> list[tuple[int, ...]]:
        """Each user's super-preamble as a 1-based index tuple."""
        return [tuple(int(t) for t in row) for row in self.indices]


def draw_selection(K: int, L: int, N: int, rng: np.random.Generator) -> SelectionMatrix:
    """Draw i.i.d. uniform sequence indices for N users over L phases."""
    if min(K, L, N) < 1:
        raise ValueError(f"K, L, N must all be >= 1, got {(K, L, N)}")
    indices = rng.integers(1, K + 1, size=(N, L), dtype=np.int64)
    return SelectionMatrix(K=K, L=L, N=N, indices=indices)


def selection_from_indices(indices, K: int) -> SelectionMatrix:
    """Deterministic constructor from a 1-based N x L index array."""
    indices = np.asarray(indices, dtype=np.int64)
    if indices.ndim != 2:
        raise ValueError("indices must be a 2-D (N x L) array")
    N, L = indices.shape
    return SelectionMatrix(K=K, L=L, N=N, indices=indices.copy())


def rank_exact(A) -> int:
    """Rank of an integer matrix over the rationals.

    Fraction-free (Bareiss) Gaussian elimination on Python integers, so the
    result is exact for any matrix size; intermediate entries are minors of
    the input and the divisions are exact.
    """
    a = [[int(x) for x in row] for row in np.atleast_2d(np.asarray(A))]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        arow, arc = a[r], a[r][c]
        for i in range(r + 1, rows):
            f = a[i][c]
            ai = a[i]
            for j in range(cols):
                ai[j] = (arc * ai[j] - f * arow[j]) // prev
        prev = arc
        r += 1
    return r


@dataclass(frozen=True)
class RankReport:
    rank: int
    full_row_rank: bool
    solvable_mask: np.ndarray


def solvability(sel: SelectionMatrix) -> RankReport:
    """Per-user solvability via the two-rank comparison.

    User n is solvable iff deleting its row lowers the rank, i.e. its row
    lies outside the span of the remaining rows.  With full row rank every
    row is independent of the others, so the per-row checks are skipped.
    """
    A = sel.A
    rank = rank_exact(A)
    full = rank == sel.N
    if full:
        mask = np.ones(sel.N, dtype=bool)
    else:
        mask = np.array(
            [rank > rank_exact(np.delete(A, n, axis=0)) for n in range(sel.N)]
        )
    return RankReport(rank=rank, full_row_rank=full, solvable_mask=mask)


def enumerate_solvable_probabilities(K: int, L: int, N: int,
                                     limit: int = 10**7) -> tuple[Fraction, Fraction]:
    """Exact solvable rates by enumerating every possible selection matrix.

    Walks all (K^L)^N equiprobable index assignments and counts, with the
    same rank machinery the simulator uses, how often the last user is
    solvable and how often the whole matrix has full row rank.  Serves as
    the brute-force oracle for the closed-form rates and bounds.
    """
    if min(K, L, N) < 1:
        raise ValueError(f"K, L, N must all be >= 1, got {(K, L, N)}")
    per_user = K ** L
    total = per_user ** N
    if total > limit:
        raise ResourceLimitError(
            f"enumeration of (K^L)^N = {total} matrices exceeds limit {limit}"
        )
    phase_pow = [K ** l for l in range(L)]
    indices = np.ones((N, L), dtype=np.int64)
    n_single = 0
    n_all = 0
    for m in range(total):
        code = m
        for n in range(N):
            u = code % per_user
            code //= per_user
            for l in range(L):
                indices[n, l] = (u // phase_pow[l]) % K + 1
        report = solvability(SelectionMatrix(K=K, L=L, N=N, indices=indices.copy()))
        n_single += bool(report.solvable_mask[N - 1])
        n_all += report.full_row_rank
    return Fraction(n_single, total), Fraction(n_all, total)
