"""Gaussian-process Bayesian optimization with a Matern-5/2 kernel and decaying UCB.

The optimizer *maximizes*. Callers minimizing a cost observe its negation.
Search coordinates are whatever the caller uses; the experiment driver works in
log10 of (eta, gamma).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import solve_triangular
from scipy.spatial.distance import cdist

from .quadrature import SeedSpec

SQRT5 = np.sqrt(5.0)

DEFAULT_LENGTHSCALE = 1.0
DEFAULT_NOISE_VARIANCE = 1e-4
LENGTHSCALE_GRID = (0.3, 0.5, 1.0, 2.0)
REFIT_EVERY = 10


class GpConditioningError(np.linalg.LinAlgError):
    """Kernel matrix is not positive definite; increase the noise variance."""


def matern52(d, lengthscale: float = 1.0, signal_variance: float = 1.0):
    r = np.asarray(d, dtype=float) / lengthscale
    s = SQRT5 * r
    return signal_variance * (1.0 + s + s * s / 3.0) * np.exp(-s)


def kernel_matrix(a: np.ndarray, b: np.ndarray, lengthscale, signal_variance: float) -> np.ndarray:
    ls = np.asarray(lengthscale, dtype=float)
    return matern52(cdist(a / ls, b / ls), 1.0, signal_variance)


@dataclass(frozen=True)
class Bounds:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        if len(self.lo) != len(self.hi) or not all(l < h for l, h in zip(self.lo, self.hi)):
            raise ValueError("bounds need lo < hi in every dimension")

    @classmethod
    def log10_box(cls, eta_lo, eta_hi, gamma_lo, gamma_hi) -> Bounds:
        return cls(np.log10([eta_lo, gamma_lo]), np.log10([eta_hi, gamma_hi]))

    @property
    def dim(self) -> int:
        return len(self.lo)

    def uniform(self, rng: np.random.Generator, n: int) -> np.ndarray:
        lo, hi = np.array(self.lo), np.array(self.hi)
        return lo + (hi - lo) * rng.random((n, self.dim))

    def clip(self, z: np.ndarray) -> np.ndarray:
        return np.clip(z, self.lo, self.hi)

    def contains(self, z) -> bool:
        z = np.asarray(z)
        return bool(np.all(z >= self.lo) and np.all(z <= self.hi))


@dataclass(frozen=True)
class AcquisitionSchedule:
    kappa0: float = 2.576
    decay: float = 0.97

    def __post_init__(self):
        if not (self.kappa0 > 0 and 0 < self.decay < 1):
            raise ValueError("need kappa0 > 0 and 0 < decay < 1")

    def kappa(self, t: int) -> float:
        return self.kappa0 * self.decay**t


@dataclass(frozen=True)
class _Fit:
    chol: np.ndarray
    alpha: np.ndarray
    offset: float
    scale: float
    log_marginal_likelihood: float


@dataclass(frozen=True, eq=False)
class GpModel:
    """Immutable GP surrogate; ``observe`` returns a new model.

    Observed values are standardized (zero mean, unit variance) once there are at
    least two of them; predictions are mapped back to the original scale.
    """

    points: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    values: np.ndarray = field(default_factory=lambda: np.empty(0))
    lengthscale: tuple[float, ...] = (DEFAULT_LENGTHSCALE, DEFAULT_LENGTHSCALE)
    signal_variance: float = 1.0
    noise_variance: float = DEFAULT_NOISE_VARIANCE

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, ndmin=2)
        vals = np.array(self.values, dtype=float).reshape(-1)
        if pts.size == 0:
            pts = pts.reshape(0, len(self.lengthscale))
        if len(pts) != len(vals):
            raise ValueError("points and values must have equal length")
        if not (self.signal_variance > 0 and self.noise_variance >= 0):
            raise ValueError("signal variance must be positive and noise variance non-negative")
        pts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "lengthscale", tuple(float(v) for v in np.broadcast_to(self.lengthscale, pts.shape[1])))
        if len(vals):
            _ = self._fit  # factorize eagerly so conditioning problems surface here

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def kernel(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return kernel_matrix(a, b, self.lengthscale, self.signal_variance)

    @cached_property
    def _fit(self) -> _Fit:
        return _factorize(self.points, self.values, self.lengthscale, self.signal_variance, self.noise_variance)

    @property
    def log_marginal_likelihood(self) -> float:
        return self._fit.log_marginal_likelihood


def _standardize(values: np.ndarray) -> tuple[float, float]:
    if len(values) < 2:
        return 0.0, 1.0
    scale = float(np.std(values))
    return float(np.mean(values)), scale if scale > 0 else 1.0


def _factorize(points, values, lengthscale, signal_variance, noise_variance) -> _Fit:
    n = len(values)
    if noise_variance == 0 and n > 1:
        _, counts = np.unique(points, axis=0, return_counts=True)
        if np.any(counts > 1):
            raise GpConditioningError("duplicate points with zero noise variance")
    offset, scale = _standardize(values)
    y = (values - offset) / scale
    K = kernel_matrix(points, points, lengthscale, signal_variance)
    K[np.diag_indices(n)] += noise_variance
    try:
        L = np.linalg.cholesky(K)
    except np.linalg.LinAlgError as exc:
        raise GpConditioningError(f"kernel matrix not positive definite ({exc}); increase noise_variance") from exc
    alpha = solve_triangular(L.T, solve_triangular(L, y, lower=True), lower=False)
    lml = -0.5 * y @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * n * np.log(2 * np.pi)
    return _Fit(L, alpha, offset, scale, float(lml))


def posterior(model: GpModel, query):
    """Posterior mean and standard deviation at one point (d,) or a batch (m, d)."""
    q = np.asarray(query, dtype=float)
    single = q.ndim == 1
    q = q.reshape(-1, model.dim)
    if len(model) == 0:
        mu = np.zeros(len(q))
        sigma = np.full(len(q), np.sqrt(model.signal_variance))
    else:
        fit = model._fit
        ks = model.kernel(model.points, q)
        v = solve_triangular(fit.chol, ks, lower=True)
        var = np.maximum(model.signal_variance - np.einsum("ij,ij->j", v, v), 0.0)
        mu = ks.T @ fit.alpha * fit.scale + fit.offset
        sigma = np.sqrt(var) * fit.scale
    if single:
        return float(mu[0]), float(sigma[0])
    return mu, sigma


def ucb(model: GpModel, query, kappa: float):
    mu, sigma = posterior(model, query)
    return mu + kappa * sigma


def refit_lengthscale(model: GpModel, grid=LENGTHSCALE_GRID) -> GpModel:
    """Pick the isotropic lengthscale from ``grid`` with the highest marginal likelihood."""
    best = None
    for ls in grid:
        try:
            cand = GpModel(model.points, model.values, (ls,) * model.dim,
                           model.signal_variance, model.noise_variance)
        except GpConditioningError:
            continue
        if best is None or cand.log_marginal_likelihood > best.log_marginal_likelihood:
            best = cand
    return model if best is None else best


def observe(model: GpModel, point, value: float, refit_every: int = REFIT_EVERY) -> GpModel:
    point = np.asarray(point, dtype=float).reshape(1, -1)
    new = GpModel(
        np.vstack([model.points, point]),
        np.append(model.values, float(value)),
        model.lengthscale,
        model.signal_variance,
        model.noise_variance,
    )
    if refit_every and len(new) % refit_every == 0:
        new = refit_lengthscale(new)
    return new


def _directions(dim: int) -> np.ndarray:
    dirs = np.array([d for d in itertools.product((-1.0, 0.0, 1.0), repeat=dim) if any(d)])
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def suggest(
    model: GpModel,
    bounds: Bounds,
    schedule: AcquisitionSchedule,
    t: int,
    seed: SeedSpec,
    n_candidates: int = 1024,
    n_refine: int = 8,
    refine_rounds: int = 12,
) -> np.ndarray:
    """Maximize mu + kappa(t) * sigma over ``bounds``.

    Random multistart over ``n_candidates`` uniform points, then a batched
    compass search from the best ``n_refine`` of them. Refinement only accepts
    improvements, so the result is never worse than the best candidate.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    cand = bounds.uniform(seed.rng(), n_candidates)
    if len(model) == 0:
        return cand[0]
    kappa = schedule.kappa(t)
    acq = ucb(model, cand, kappa)
    top = np.argsort(-acq, kind="stable")[:n_refine]
    pts, vals = cand[top].copy(), acq[top].copy()

    dirs = _directions(bounds.dim)
    step = np.full(len(pts), 0.1 * float(np.min(np.subtract(bounds.hi, bounds.lo))))
    rows = np.arange(len(pts))
    for _ in range(refine_rounds):
        trial = bounds.clip(pts[:, None, :] + step[:, None, None] * dirs[None, :, :])
        tv = ucb(model, trial.reshape(-1, bounds.dim), kappa).reshape(len(pts), len(dirs))
        j = np.argmax(tv, axis=1)
        better = tv[rows, j] > vals
        pts[better] = trial[rows[better], j[better]]
        vals[better] = tv[rows[better], j[better]]
        step[~better] *= 0.5
    return pts[int(np.argmax(vals))].copy()
