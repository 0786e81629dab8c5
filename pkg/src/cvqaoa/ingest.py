"""Homodyne time series to quadrature values via an odd temporal mode function.

The mode function h(t) = t exp(-rate^2 t^2) on |t| < t1 is odd, so its
discretized weights sum to zero and reject DC and slow electrical drift.
Weights are scaled so unit-variance white noise maps to the vacuum variance 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import VACUUM_VARIANCE, SeedSpec


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class ModeFunction:
    gamma_rate: float = 3e7  # 1/s; unrelated to the mixer weight gamma
    t1: float = 50e-9  # s

    def __post_init__(self):
        if not (self.gamma_rate > 0 and self.t1 > 0):
            raise ValueError("gamma_rate and t1 must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) < self.t1, t * np.exp(-(self.gamma_rate * t) ** 2), 0.0)


@dataclass(frozen=True)
class TimeSeries:
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float).reshape(-1))


def mode_weights(mf: ModeFunction, dt: float) -> np.ndarray:
    """Discretized h on cell centres of [-t1, t1], normalized so sum(w^2) = 1/2."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if dt >= mf.t1:
        raise ResolutionError(f"dt={dt} does not resolve the window t1={mf.t1}")
    n = int(round(2 * mf.t1 / dt))
    # build one half and mirror it so antisymmetry holds bit-for-bit
    half_t = (np.arange(n // 2) + (0.5 if n % 2 == 0 else 1.0)) * dt
    half = mf(half_t)
    middle = [0.0] if n % 2 else []
    w = np.concatenate([-half[::-1], middle, half])
    return w * np.sqrt(VACUUM_VARIANCE / np.sum(w * w))


def extract_quadrature(series: TimeSeries, mf: ModeFunction, center_index: int,
                       weights: np.ndarray | None = None) -> float:
    w = mode_weights(mf, series.dt) if weights is None else weights
    start = center_index - len(w) // 2
    if start < 0 or start + len(w) > len(series.samples):
        raise IndexError(f"window around index {center_index} leaves the series (length {len(series.samples)})")
    return float(_odd_dot(w, series.samples[start:start + len(w)]))


def _odd_dot(w: np.ndarray, windows: np.ndarray):
    # Pair x(+t) with x(-t) before weighting so a constant offset cancels exactly.
    n = w.shape[-1]
    k = n // 2
    diff = windows[..., n - k:] - windows[..., :k][..., ::-1]
    return diff @ w[n - k:]


def window_centers(series: TimeSeries, mf: ModeFunction) -> np.ndarray:
    """Centers of non-overlapping windows spaced one full window apart."""
    n = len(mode_weights(mf, series.dt))
    count = len(series.samples) // n
    return np.arange(count) * n + n // 2


def extract_all(series: TimeSeries, mf: ModeFunction) -> np.ndarray:
    """Quadratures of all non-overlapping windows, in order."""
    w = mode_weights(mf, series.dt)
    count = len(series.samples) // len(w)
    return _odd_dot(w, series.samples[:count * len(w)].reshape(count, len(w)))


def synthetic_white_noise(n_windows: int, dt: float, seed: SeedSpec, mf: ModeFunction = ModeFunction(),
                          variance: float = 1.0, offset: float = 0.0) -> TimeSeries:
    n = len(mode_weights(mf, dt))
    samples = seed.rng().normal(offset, np.sqrt(variance), n_windows * n)
    return TimeSeries(dt, samples)
