"""Squeezed-vacuum quadrature sources and seeded sampling.

Convention: [x, p] = i, so the vacuum variance is 1/2 per quadrature.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

VACUUM_VARIANCE = 0.5


class InvalidSourceError(ValueError):
    pass


class Orientation(enum.Enum):
    P_SQUEEZED = "p"
    X_SQUEEZED = "x"


@dataclass(frozen=True)
class SqueezedSource:
    """Squeezed vacuum given by its (anti-)squeezing levels in dB.

    Unequal levels stand in for optical loss, so no separate loss channel exists.
    """

    squeeze_db: float
    antisqueeze_db: float
    orientation: Orientation = Orientation.P_SQUEEZED

    def __post_init__(self):
        for name in ("squeeze_db", "antisqueeze_db"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidSourceError(f"{name} must be a positive number of dB, got {value!r}")
        if self.antisqueeze_db < self.squeeze_db:
            raise InvalidSourceError("anti-squeezing below squeezing violates the uncertainty bound")

    @property
    def variances(self) -> tuple[float, float]:
        return variances_of(self)

    @property
    def var_x(self) -> float:
        sq, anti = variances_of(self)
        return anti if self.orientation is Orientation.P_SQUEEZED else sq

    @property
    def var_p(self) -> float:
        sq, anti = variances_of(self)
        return sq if self.orientation is Orientation.P_SQUEEZED else anti


class QuadraturePair(NamedTuple):
    """Position and momentum quadratures; fields may be scalars or equal-length arrays."""

    x: float | np.ndarray
    p: float | np.ndarray


@dataclass(frozen=True)
class SeedSpec:
    """Hierarchical seed: a root seed plus a path naming an independent sub-stream."""

    root_seed: int
    stream_path: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.root_seed < 2**64:
            raise ValueError("root_seed must be a 64-bit unsigned integer")
        if any(int(i) < 0 for i in self.stream_path):
            raise ValueError("stream_path entries must be non-negative")
        object.__setattr__(self, "stream_path", tuple(int(i) for i in self.stream_path))

    def child(self, *path: int) -> SeedSpec:
        return SeedSpec(self.root_seed, self.stream_path + tuple(path))

    def rng(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.root_seed, spawn_key=self.stream_path)
        return np.random.Generator(np.random.PCG64(seq))


def variances_of(source: SqueezedSource) -> tuple[float, float]:
    """Return ``(var_squeezed, var_antisqueezed)`` for the source's dB levels."""
    if source.squeeze_db <= 0 or source.antisqueeze_db <= 0:
        raise InvalidSourceError("dB levels must be positive")
    var_sq = 10.0 ** (-source.squeeze_db / 10.0) * VACUUM_VARIANCE
    var_anti = 10.0 ** (source.antisqueeze_db / 10.0) * VACUUM_VARIANCE
    return var_sq, var_anti


def sample(source: SqueezedSource, seed: SeedSpec, n: int) -> QuadraturePair:
    """Draw ``n`` independent zero-mean Gaussian (x, p) pairs as two arrays."""
    if n < 1:
        raise ValueError("n must be at least 1")
    z = seed.rng().standard_normal((2, n))
    return QuadraturePair(z[0] * np.sqrt(source.var_x), z[1] * np.sqrt(source.var_p))


# Levels measured on both OPOs of the reference experiment (-5.3 dB / +9.0 dB).
DEFAULT_INPUT = SqueezedSource(5.3, 9.0, Orientation.P_SQUEEZED)
DEFAULT_ANCILLA = SqueezedSource(5.3, 9.0, Orientation.X_SQUEEZED)
