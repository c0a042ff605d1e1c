"""Base-station observation synthesis.

The receiver correlates each phase's M x K preamble signal Y_l = H A_l S +
N_l with the pool, giving B_l = H A_l + W_l; stacking phases yields the
M x KL correlation block B = H A + W.  Because S is unitary, W keeps the
noise statistics, so the harness can synthesize B directly (fast path)
while the full signal path stays available for validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import complex_normal
from .preambles import PreamblePool, SelectionMatrix


@dataclass(frozen=True)
class NoiseSpec:
    """Per-sample complex noise variance for a given SNR.

    SNR is the per-antenna preamble-to-noise power ratio over one phase:
    the expected per-antenna preamble energy is ||s_k||^2 * E|h_nm|^2 = 1/M
    and the per-antenna noise energy over K samples is K * sigma2, giving
    sigma2 = 1 / (M K SNR).  snr_db may be +inf for the noiseless case.
    """

    snr_db: float
    M: int
    K: int

    @property
    def sigma2(self) -> float:
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 0.0
        return 1.0 / (self.M * self.K * 10.0 ** (self.snr_db / 10.0))


def synthesize_received(H: np.ndarray, sel: SelectionMatrix, pool: PreamblePool,
                        noise: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """Per-phase received signals, stacked as (L, M, K): Y_l = H A_l S + N_l."""
    M, N = H.shape
    if pool.K != sel.K:
        raise ValueError(f"pool size {pool.K} != selection pool size {sel.K}")
    if N != sel.N:
        raise ValueError(f"channel has {N} users, selection has {sel.N}")
    sigma = math.sqrt(noise.sigma2)
    Y = np.empty((sel.L, M, sel.K), dtype=np.complex128)
    for l in range(sel.L):
        P_l = sel.phase_block(l).astype(np.complex128) @ pool.S
        Y[l] = H @ P_l
    if sigma > 0:
        Y += complex_normal(rng, Y.shape, sigma)
    return Y


def correlate_pool(Y: np.ndarray, pool: PreamblePool) -> np.ndarray:
    """Correlate each phase with the pool: B with B_l = Y_l S^H (M x KL)."""
    L, M, K = Y.shape
    if K != pool.K:
        raise ValueError(f"signal has {K} samples per phase, pool has {pool.K}")
    Sh = pool.S.conj().T
    B = np.empty((M, K * L), dtype=np.complex128)
    for l in range(L):
        B[:, l * K:(l + 1) * K] = Y[l] @ Sh
    return B


def synthesize_correlation_fast(H: np.ndarray, sel: SelectionMatrix,
                                noise: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """B = H A + W directly, skipping the K x K pool correlations.

    Distribution-identical to synthesize_received followed by
    correlate_pool (unitary S maps white noise to white noise).
    """
    M, N = H.shape
    if N != sel.N:
        raise ValueError(f"channel has {N} users, selection has {sel.N}")
    B = H @ sel.A.astype(np.complex128)
    sigma = math.sqrt(noise.sigma2)
    if sigma > 0:
        B += complex_normal(rng, B.shape, sigma)
    return B
