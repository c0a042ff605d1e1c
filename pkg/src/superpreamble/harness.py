"""Monte Carlo engine: per-trial pipeline and deterministic aggregation.

Each trial is a pure function of (seed, trial_index): the stream is a
Philox generator keyed directly with that pair, so trials are independent
and any parallel schedule reproduces the serial results bit for bit.
Aggregation reduces fixed-size chunks in index order, keeping float sums
order-independent of the worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from multiprocessing import get_context

import numpy as np

from . import estimation
from .airlink import NoiseSpec, synthesize_correlation_fast
from .bounds import BoundSet, all_user_bounds, single_user_bounds
from .channel import DEFAULT_GEOMETRY, CorrelatedGeometry, correlated_rayleigh, iid_rayleigh
from .detector import DEFAULT_THRESHOLD, cross_correlations, detect, detect_single_phase
from ._kernels import fast_solvability
from .preambles import SelectionMatrix

CHUNK_TRIALS = 1024  # fixed reduction granularity; must not depend on threads

_U64 = (1 << 64) - 1


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based per-trial stream: Philox keyed by (seed, trial_index)."""
    key = np.array([seed & _U64, trial_index & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class _TrialStreams:
    """Reusable generator avoiding per-trial Philox construction cost.

    Resetting the bit-generator state with the (seed, trial) key yields the
    same stream as ``trial_rng`` (covered by a regression test).
    """

    def __init__(self, seed: int):
        self._seed = seed & _U64
        self._bg = np.random.Philox(key=0)
        self._gen = np.random.Generator(self._bg)
        self._state = self._bg.state

    def for_trial(self, trial_index: int) -> np.random.Generator:
        st = self._state
        st["state"]["key"][0] = self._seed
        st["state"]["key"][1] = trial_index & _U64
        st["state"]["counter"][:] = 0
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        self._bg.state = st
        return self._gen


@dataclass(frozen=True)
class ExperimentConfig:
    K: int
    L: int
    N: int
    M: int = 128
    snr_db: float = 0.0
    channel_model: str = "iid"
    geometry: CorrelatedGeometry = DEFAULT_GEOMETRY
    TH: float = DEFAULT_THRESHOLD
    prune_threshold: float = estimation.DEFAULT_PRUNE_THRESHOLD
    trials: int = 10_000
    seed: int = 1
    measure_detection: bool = True  # False: solvable rates only, no airlink

    def __post_init__(self):
        if min(self.K, self.L, self.N, self.M) < 1:
            raise ValueError(f"dimensions must be >= 1, got "
                             f"K={self.K} L={self.L} N={self.N} M={self.M}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.channel_model not in ("iid", "correlated"):
            raise ValueError(f"unknown channel model {self.channel_model!r}")
        if self.TH <= 0:
            raise ValueError(f"detection threshold must be positive, got {self.TH}")
        if self.prune_threshold < 0:
            raise ValueError("prune threshold must be >= 0, "
                             f"got {self.prune_threshold}")

    @property
    def noise(self) -> NoiseSpec:
        return NoiseSpec(snr_db=self.snr_db, M=self.M, K=self.K)


@dataclass(frozen=True)
class TrialOutcome:
    solvable: np.ndarray          # bool (N,)
    full_row_rank: bool
    detected: np.ndarray | None   # bool (N,), None in solvable-only mode
    n_false: int                  # detected tuples sent by no user
    err_sum: float                # sum ||h_hat - h||^2 over matched solvable users
    pow_sum: float                # sum ||h||^2 over the same users
    n_matched: int


@dataclass(frozen=True)
class Metrics:
    p_single_solvable: float
    se_single_solvable: float
    p_all_solvable: float
    se_all_solvable: float
    p_single_success: float | None
    se_single_success: float | None
    p_all_success: float | None
    se_all_success: float | None
    false_detect_rate: float | None
    se_false_detect: float | None
    nmse_mean: float | None
    trials_run: int


def _draw_channel(cfg: ExperimentConfig, rng: np.random.Generator) -> np.ndarray:
    if cfg.channel_model == "iid":
        return iid_rayleigh(cfg.M, cfg.N, rng)
    return correlated_rayleigh(cfg.M, cfg.N, cfg.geometry, rng)


def _run_trial_with(cfg: ExperimentConfig, rng: np.random.Generator) -> TrialOutcome:
    # draw order: selection, channel, noise -- solvable-only stops early
    indices = rng.integers(1, cfg.K + 1, size=(cfg.N, cfg.L), dtype=np.int64)
    solvable, rank = fast_solvability(indices, cfg.K)
    full = rank == cfg.N
    if not cfg.measure_detection:
        return TrialOutcome(solvable=solvable, full_row_rank=full, detected=None,
                            n_false=0, err_sum=0.0, pow_sum=0.0, n_matched=0)

    sel = SelectionMatrix(K=cfg.K, L=cfg.L, N=cfg.N, indices=indices)
    H = _draw_channel(cfg, rng)
    B = synthesize_correlation_fast(H, sel, cfg.noise, rng)
    if cfg.L == 1:
        det = detect_single_phase(B, cfg.K, cfg.TH)
    else:
        det = detect(cross_correlations(B, cfg.K, cfg.L), cfg.TH)

    powers = cfg.K ** np.arange(cfg.L - 1, -1, -1, dtype=np.int64)
    true_codes = (indices - 1) @ powers
    det_codes = (np.asarray(det.tuples, dtype=np.int64).reshape(-1, cfg.L) - 1) @ powers
    detected = np.isin(true_codes, det_codes)
    n_false = int(det.n_detected - np.isin(det_codes, true_codes).sum())

    est = estimation.prune_false(estimation.estimate_channels(B, det),
                                 cfg.prune_threshold)
    err, power, matched = estimation.nmse_components(est, H, sel, solvable)
    return TrialOutcome(solvable=solvable, full_row_rank=full, detected=detected,
                        n_false=n_false, err_sum=err, pow_sum=power,
                        n_matched=matched)


def run_trial(cfg: ExperimentConfig, trial_index: int) -> TrialOutcome:
    """Run one trial; deterministic in (cfg.seed, trial_index)."""
    return _run_trial_with(cfg, trial_rng(cfg.seed, trial_index))


@dataclass
class _ChunkSums:
    n_trials: int = 0
    solv_ues: int = 0
    solv_ues_sq: int = 0
    all_solv: int = 0
    succ_ues: int = 0
    succ_ues_sq: int = 0
    all_succ: int = 0
    trials_with_false: int = 0
    err_sum: float = 0.0
    pow_sum: float = 0.0
    n_matched: int = 0

    def add(self, out: TrialOutcome):
        self.n_trials += 1
        ns = int(out.solvable.sum())
        self.solv_ues += ns
        self.solv_ues_sq += ns * ns
        self.all_solv += out.full_row_rank
        if out.detected is not None:
            nk = int((out.solvable & out.detected).sum())
            self.succ_ues += nk
            self.succ_ues_sq += nk * nk
            self.all_succ += out.full_row_rank and bool(out.detected.all())
            self.trials_with_false += out.n_false > 0
            self.err_sum += out.err_sum
            self.pow_sum += out.pow_sum
            self.n_matched += out.n_matched


def _run_chunk(cfg: ExperimentConfig, start: int, stop: int) -> _ChunkSums:
    sums = _ChunkSums()
    streams = _TrialStreams(cfg.seed)
    for t in range(start, stop):
        sums.add(_run_trial_with(cfg, streams.for_trial(t)))
    return sums


def _run_chunk_star(args):
    return _run_chunk(*args)


def _rate(total: int, scale: int, total_sq: int, per_trial_scale: int,
          trials: int) -> tuple[float, float]:
    """Mean and standard error of a per-trial statistic in [0, 1]."""
    p = total / (trials * scale)
    mean_sq = total_sq / (trials * per_trial_scale)
    var = max(mean_sq - p * p, 0.0) / max(trials - 1, 1)
    return p, math.sqrt(var)


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> Metrics:
    """Aggregate cfg.trials trials into rate estimates with standard errors.

    ``threads`` only selects the process count; chunk boundaries and the
    reduction order are fixed, so results are identical for any value.
    """
    starts = list(range(0, cfg.trials, CHUNK_TRIALS))
    jobs = [(cfg, s, min(s + CHUNK_TRIALS, cfg.trials)) for s in starts]
    if threads > 1 and len(jobs) > 1:
        with get_context("fork").Pool(min(threads, len(jobs))) as pool:
            chunks = pool.map(_run_chunk_star, jobs)
    else:
        chunks = [_run_chunk(*job) for job in jobs]

    total = _ChunkSums()
    for c in chunks:  # fixed chunk order regardless of scheduling
        total.n_trials += c.n_trials
        total.solv_ues += c.solv_ues
        total.solv_ues_sq += c.solv_ues_sq
        total.all_solv += c.all_solv
        total.succ_ues += c.succ_ues
        total.succ_ues_sq += c.succ_ues_sq
        total.all_succ += c.all_succ
        total.trials_with_false += c.trials_with_false
        total.err_sum += c.err_sum
        total.pow_sum += c.pow_sum
        total.n_matched += c.n_matched

    T, N = total.n_trials, cfg.N
    p1, se1 = _rate(total.solv_ues, N, total.solv_ues_sq, N * N, T)
    pa, sea = _rate(total.all_solv, 1, total.all_solv, 1, T)
    if cfg.measure_detection:
        ps, ses = _rate(total.succ_ues, N, total.succ_ues_sq, N * N, T)
        pas, seas = _rate(total.all_succ, 1, total.all_succ, 1, T)
        pf, sef = _rate(total.trials_with_false, 1, total.trials_with_false, 1, T)
        nm = total.err_sum / total.pow_sum if total.n_matched else None
    else:
        ps = ses = pas = seas = pf = sef = nm = None
    return Metrics(p_single_solvable=p1, se_single_solvable=se1,
                   p_all_solvable=pa, se_all_solvable=sea,
                   p_single_success=ps, se_single_success=ses,
                   p_all_success=pas, se_all_success=seas,
                   false_detect_rate=pf, se_false_detect=sef,
                   nmse_mean=nm, trials_run=T)


@dataclass(frozen=True)
class SweepRow:
    value: float
    cfg: ExperimentConfig
    metrics: Metrics
    single_bounds: BoundSet
    all_bounds: BoundSet


SWEEPABLE = ("N", "snr_db", "L", "K")


def sweep(base_cfg: ExperimentConfig, variable: str, values,
          threads: int = 1) -> list[SweepRow]:
    """One Metrics row per value of ``variable``, with matching bounds."""
    if variable not in SWEEPABLE:
        raise ValueError(f"variable must be one of {SWEEPABLE}, got {variable!r}")
    if not values:
        raise ValueError("values must be non-empty")
    rows = []
    for v in values:
        try:
            cfg = replace(base_cfg, **{variable: v})
        except ValueError as exc:
            raise ValueError(f"invalid configuration at {variable}={v}: {exc}") from exc
        metrics = run_experiment(cfg, threads=threads)
        rows.append(SweepRow(value=v, cfg=cfg, metrics=metrics,
                             single_bounds=single_user_bounds(cfg.K, cfg.L, cfg.N),
                             all_bounds=all_user_bounds(cfg.K, cfg.L, cfg.N)))
    return rows
