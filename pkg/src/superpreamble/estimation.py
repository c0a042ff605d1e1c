"""Channel estimation from the correlation block and a detection result.

H_hat = B * pinv(A_hat) recovers every detected user whose selection row
is independent of the others; false rows come out near zero norm and are
pruned.  NMSE compares estimates of truly transmitted, solvable rows
against the true channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detector import DetectionResult
from .preambles import SelectionMatrix

PINV_RCOND = 1e-9
DEFAULT_PRUNE_THRESHOLD = 0.5


@dataclass(frozen=True)
class ChannelEstimate:
    """Estimated channels (column n of H_hat belongs to row n of A_hat)."""

    H_hat: np.ndarray
    A_hat: np.ndarray
    pruned_mask: np.ndarray  # True = kept


def estimate_channels(B: np.ndarray, det: DetectionResult) -> ChannelEstimate:
    """Least-squares estimate H_hat = B * pinv(A_hat) (SVD pseudo-inverse)."""
    A_hat = det.A_hat
    if det.n_detected == 0:
        return ChannelEstimate(H_hat=np.zeros((B.shape[0], 0), dtype=B.dtype),
                               A_hat=A_hat, pruned_mask=np.zeros(0, dtype=bool))
    H_hat = B @ np.linalg.pinv(A_hat.astype(np.float64), rcond=PINV_RCOND)
    return ChannelEstimate(H_hat=H_hat, A_hat=A_hat,
                           pruned_mask=np.ones(det.n_detected, dtype=bool))


def prune_false(est: ChannelEstimate,
                norm_threshold: float = DEFAULT_PRUNE_THRESHOLD) -> ChannelEstimate:
    """Keep columns with ||h_hat|| >= threshold; false rows sit near zero."""
    if norm_threshold < 0:
        raise ValueError(f"prune threshold must be >= 0, got {norm_threshold}")
    norms = np.linalg.norm(est.H_hat, axis=0)
    return ChannelEstimate(H_hat=est.H_hat, A_hat=est.A_hat,
                           pruned_mask=norms >= norm_threshold)


def match_detected_rows(est: ChannelEstimate, truth: SelectionMatrix,
                        solvable_mask: np.ndarray) -> list[tuple[int, int]]:
    """(user, estimate-column) pairs for solvable users whose exact row was
    detected and kept after pruning.

    A solvable user's row is unique among the true rows, so at most one
    estimate column matches it.
    """
    kept = {}
    for j in np.flatnonzero(est.pruned_mask):
        kept[est.A_hat[j].tobytes()] = j
    pairs = []
    for n in range(truth.N):
        if not solvable_mask[n]:
            continue
        j = kept.get(truth.A[n].tobytes())
        if j is not None:
            pairs.append((n, int(j)))
    return pairs


def nmse_components(est: ChannelEstimate, truth_H: np.ndarray,
                    truth: SelectionMatrix,
                    solvable_mask: np.ndarray) -> tuple[float, float, int]:
    """(sum ||h_hat - h||^2, sum ||h||^2, count) over matched solvable users."""
    err = 0.0
    power = 0.0
    pairs = match_detected_rows(est, truth, solvable_mask)
    for n, j in pairs:
        err += float(np.sum(np.abs(est.H_hat[:, j] - truth_H[:, n]) ** 2))
        power += float(np.sum(np.abs(truth_H[:, n]) ** 2))
    return err, power, len(pairs)


def nmse(est: ChannelEstimate, truth_H: np.ndarray, truth: SelectionMatrix,
         solvable_mask: np.ndarray) -> float | None:
    """mean||h_hat - h||^2 / mean||h||^2 over matched solvable users.

    None when no user qualifies (nothing detected or nothing solvable).
    """
    err, power, count = nmse_components(est, truth_H, truth, solvable_mask)
    if count == 0 or power == 0.0:
        return None
    return err / power
