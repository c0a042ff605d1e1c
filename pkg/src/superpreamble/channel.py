"""Rayleigh channel models: i.i.d. and spatially correlated (ULA).

Both models normalize the expected per-user channel power to one, so the
receiver-side threshold scale is channel-model independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def complex_normal(rng: np.random.Generator, shape, scale: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian, E|z|^2 = scale^2."""
    z = rng.standard_normal((2,) + tuple(shape))
    return (z[0] + 1j * z[1]) * (scale / math.sqrt(2.0))


def iid_rayleigh(M: int, N: int, rng: np.random.Generator) -> np.ndarray:
    """M x N channel with i.i.d. CN(0, 1/M) entries (E||h_n||^2 = 1)."""
    if min(M, N) < 1:
        raise ValueError(f"M, N must be >= 1, got {(M, N)}")
    return complex_normal(rng, (M, N), scale=1.0 / math.sqrt(M))


@dataclass(frozen=True)
class CorrelatedGeometry:
    """Uniform-linear-array scattering geometry.

    Angles are stored in radians; ``from_degrees`` accepts values the way
    measurement tables quote them.
    """

    Q: int
    omega: float
    phi_S: float
    phi_A_range: tuple[float, float] = (-math.pi, math.pi)

    def __post_init__(self):
        if self.Q < 1:
            raise ValueError(f"path count Q must be >= 1, got {self.Q}")
        if self.omega <= 0:
            raise ValueError(f"antenna spacing must be positive, got {self.omega}")
        if not 0.0 <= self.phi_S <= 2 * math.pi:
            raise ValueError(f"angle spread must lie in [0, 2*pi], got {self.phi_S}")

    @classmethod
    def from_degrees(cls, Q: int, omega: float, spread_deg: float,
                     azimuth_range_deg: tuple[float, float] = (-180.0, 180.0)):
        return cls(Q=Q, omega=omega, phi_S=math.radians(spread_deg),
                   phi_A_range=(math.radians(azimuth_range_deg[0]),
                                math.radians(azimuth_range_deg[1])))


#: Spatially correlated channel parameters used throughout the experiments:
#: 50 faded paths, half-wavelength spacing, 40 degree spread, azimuth
#: uniform over the full circle.
DEFAULT_GEOMETRY = CorrelatedGeometry.from_degrees(Q=50, omega=0.5, spread_deg=40.0)


def steering_vector(M: int, Q: int, omega: float, phi: float) -> np.ndarray:
    """ULA response (1/sqrt(Q)) * [1, e^{-j2pi w cos(phi)}, ...] of length M."""
    if min(M, Q) < 1:
        raise ValueError(f"M, Q must be >= 1, got {(M, Q)}")
    m = np.arange(M)
    return np.exp(-2j * np.pi * omega * m * math.cos(phi)) / math.sqrt(Q)


def correlated_rayleigh(M: int, N: int, geom: CorrelatedGeometry,
                        rng: np.random.Generator) -> np.ndarray:
    """M x N correlated channel: h_n = R_n v_n / sqrt(M).

    Per user, an azimuth is drawn uniformly over ``geom.phi_A_range``, Q
    path angles uniformly inside the spread window around it, and the
    steering matrix R_n applied to an i.i.d. fast-fading vector.  E||h_n||^2
    = 1 because each steering column has squared norm M/Q.

    Steering phases are built by cumulative products over the antenna axis
    (one complex exponential per path instead of M), which matches the
    direct form to ~1e-13.
    """
    if min(M, N) < 1:
        raise ValueError(f"M, N must be >= 1, got {(M, N)}")
    lo, hi = geom.phi_A_range
    phi_a = rng.uniform(lo, hi, size=N)
    aoa = phi_a[:, None] + rng.uniform(-geom.phi_S / 2, geom.phi_S / 2, size=(N, geom.Q))
    v = complex_normal(rng, (N, geom.Q))
    base = np.exp(-2j * np.pi * geom.omega * np.cos(aoa)).reshape(-1)
    R = np.empty((M, N * geom.Q), dtype=np.complex128)
    R[0] = 1.0
    if M > 1:
        np.multiply.accumulate(np.broadcast_to(base, (M - 1, base.size)),
                               axis=0, out=R[1:])
    H = np.einsum("mnq,nq->mn", R.reshape(M, N, geom.Q), v)
    H /= math.sqrt(M * geom.Q)
    return H
