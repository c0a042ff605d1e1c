"""Threshold detection of super preambles from the correlation block.

With many antennas, channels of distinct users are quasi-orthogonal, so
the K x K cross-phase correlation C_{l,l'} = B_l^H B_{l'} is large exactly
at entries (theta_l, theta_{l'}) jointly used by some user.  A super
preamble (theta_1 .. theta_L) is declared present when every pairwise
entry magnitude exceeds the threshold; the L = 1 baseline falls back to
per-column energy detection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError

DEFAULT_THRESHOLD = 0.4
DEFAULT_TUPLE_CAP = 10 ** 6


@dataclass(frozen=True)
class PhasePairCorrelations:
    """All L(L-1)/2 pairwise correlations, keyed by 0-based (l, l2), l < l2."""

    K: int
    L: int
    C: dict[tuple[int, int], np.ndarray]


@dataclass(frozen=True)
class DetectionResult:
    """Detected super preambles, lexicographically ordered, 1-based indices."""

    K: int
    L: int
    tuples: tuple[tuple[int, ...], ...]
    threshold_used: float
    A_hat: np.ndarray = field(init=False, compare=False)  # derived from tuples

    def __post_init__(self):
        A = np.zeros((len(self.tuples), self.K * self.L), dtype=np.int8)
        for n, tup in enumerate(self.tuples):
            for l, theta in enumerate(tup):
                A[n, (theta - 1) + l * self.K] = 1
        object.__setattr__(self, "A_hat", A)
        A.setflags(write=False)

    @property
    def n_detected(self) -> int:
        return len(self.tuples)


def cross_correlations(B: np.ndarray, K: int, L: int) -> PhasePairCorrelations:
    """C_{l,l'} = B_l^H B_l' for every phase pair (no thresholding)."""
    if L < 2:
        raise ValueError("cross-phase correlation needs L >= 2 "
                         "(use detect_single_phase for L = 1)")
    if B.shape[1] != K * L:
        raise ValueError(f"B has {B.shape[1]} columns, expected K*L = {K * L}")
    blocks = [B[:, l * K:(l + 1) * K] for l in range(L)]
    C = {}
    for l in range(L):
        for l2 in range(l + 1, L):
            C[(l, l2)] = blocks[l].conj().T @ blocks[l2]
    return PhasePairCorrelations(K=K, L=L, C=C)


def detect(C: PhasePairCorrelations, TH: float = DEFAULT_THRESHOLD,
           cap: int = DEFAULT_TUPLE_CAP) -> DetectionResult:
    """Exhaustive search over all K^L index tuples.

    A tuple passes when |C_{l,l'}[theta_l, theta_l']| > TH for every pair.
    The search is a broadcasted AND over the pair masks, so the K^L space
    is swept without materializing candidate lists.
    """
    if TH <= 0:
        raise ValueError(f"threshold must be positive, got {TH}")
    K, L = C.K, C.L
    if K ** L > cap:
        raise ResourceLimitError(f"K^L = {K ** L} tuples exceeds search cap {cap}")
    mask = np.ones((1,) * L, dtype=bool)
    for (l, l2), M_pair in C.C.items():
        shape = [1] * L
        shape[l] = K
        shape[l2] = K
        mask = mask & (np.abs(M_pair) > TH).reshape(shape)
    hits = np.argwhere(mask)  # row-major order == lexicographic tuples
    tuples = tuple(tuple(int(t) + 1 for t in row) for row in hits)
    return DetectionResult(K=K, L=L, tuples=tuples, threshold_used=TH)


def detect_single_phase(B: np.ndarray, K: int,
                        TH_energy: float = DEFAULT_THRESHOLD) -> DetectionResult:
    """L = 1 baseline: sequence k is present iff ||B column k|| > TH_energy."""
    if B.shape[1] != K:
        raise ValueError(f"single-phase B must have K = {K} columns, got {B.shape[1]}")
    norms = np.linalg.norm(B, axis=0)
    tuples = tuple((int(k) + 1,) for k in np.flatnonzero(norms > TH_energy))
    return DetectionResult(K=K, L=1, tuples=tuples, threshold_used=TH_energy)
