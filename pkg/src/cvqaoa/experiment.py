"""Experiment protocols: landscape scan, fixed-parameter histogram, Bayesian-optimized
runs, and the success-probability study against random sampling.

Every protocol takes a ``SeedSpec`` and derives disjoint sub-streams for its work
units, so results do not depend on execution order or parallelism.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bayes import AcquisitionSchedule, Bounds, GpConditioningError, GpModel, observe, suggest
from .gate import GateParams, apply_noisy, settings_from, simulate_circuit
from .quadrature import DEFAULT_ANCILLA, DEFAULT_INPUT, SeedSpec, SqueezedSource, sample

COST_FLOOR = 1e-300
A_SPREAD = 1.99  # std of the random problem constants a, ~sqrt(<x_in^2>)


class Backend(enum.Enum):
    IDEAL = "ideal"  # closed-form output with the ancilla noise term
    OPTICAL = "optical"  # beam splitter + homodyne + feedforward


class Mode(enum.Enum):
    QAOA = "qaoa"
    RANDOM = "random"


@dataclass(frozen=True)
class SampleStats:
    n: int
    mean_cost: float
    mean: float
    variance: float
    success_count: int


@dataclass(frozen=True)
class LandscapeSpec:
    eta_grid: tuple[float, ...]
    gamma_grid: tuple[float, ...]
    samples_per_point: int = 1000
    a: float = 1.0
    backend: Backend = Backend.OPTICAL
    source_in: SqueezedSource = DEFAULT_INPUT
    source_anc: SqueezedSource = DEFAULT_ANCILLA

    def __post_init__(self):
        for name in ("eta_grid", "gamma_grid"):
            grid = tuple(float(v) for v in getattr(self, name))
            if not grid or any(v <= 0 for v in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} must be non-empty, positive and strictly increasing")
            object.__setattr__(self, name, grid)
        if self.samples_per_point < 1:
            raise ValueError("samples_per_point must be at least 1")

    @classmethod
    def log_spaced(cls, n: int = 21, lo: float = 0.1, hi: float = 10.0, **kwargs) -> LandscapeSpec:
        grid = tuple(np.logspace(np.log10(lo), np.log10(hi), n))
        return cls(grid, grid, **kwargs)


@dataclass(frozen=True)
class QaoaRunSpec:
    a: float = 0.0
    steps: int = 100
    samples_per_step: int = 1000
    repeats: int = 11
    success_threshold: float = 1e-9
    n_initial: int = 5
    box: tuple[float, float, float, float] = (0.1, 10.0, 0.1, 10.0)
    schedule: AcquisitionSchedule = field(default_factory=AcquisitionSchedule)
    backend: Backend = Backend.OPTICAL
    source_in: SqueezedSource = DEFAULT_INPUT
    source_anc: SqueezedSource = DEFAULT_ANCILLA

    def __post_init__(self):
        if min(self.steps, self.samples_per_step, self.repeats) < 1:
            raise ValueError("steps, samples_per_step and repeats must be positive")
        if not self.success_threshold > 0:
            raise ValueError("success_threshold must be positive")
        if self.n_initial < 0:
            raise ValueError("n_initial must be non-negative")


@dataclass(frozen=True)
class Landscape:
    eta_grid: np.ndarray
    gamma_grid: np.ndarray
    mean_cost: np.ndarray  # shape (len(eta_grid), len(gamma_grid))
    cost_std: np.ndarray  # per-sample std of the cost at each point

    def argmin(self) -> tuple[int, int]:
        i, j = np.unravel_index(np.argmin(self.mean_cost), self.mean_cost.shape)
        return int(i), int(j)


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    output_density: np.ndarray
    input_density: np.ndarray
    mean: float
    std: float
    input_mean: float
    input_std: float
    n: int


@dataclass(frozen=True)
class RunRecord:
    a: float
    eta: np.ndarray
    gamma: np.ndarray
    log_mean_cost: np.ndarray  # natural log
    mean: np.ndarray
    variance: np.ndarray
    success_count: np.ndarray

    @property
    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate(self.log_mean_cost)

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.log_mean_cost))

    @property
    def cumulative_success(self) -> np.ndarray:
        return np.cumsum(self.success_count) > 0


@dataclass(frozen=True)
class SuccessCurve:
    probability: np.ndarray  # mean over repeat-sets, per step
    band: np.ndarray  # std over repeat-sets, per step
    per_repeat: np.ndarray  # shape (repeats, steps)
    a_values: np.ndarray


def analytic_mean_cost(eta, gamma, a, source_in: SqueezedSource = DEFAULT_INPUT,
                       source_anc: SqueezedSource = DEFAULT_ANCILLA):
    """Exact E[(x_out - a)^2] of the noisy gate for zero-mean inputs."""
    u = eta * gamma
    return ((1 - 2 * u) ** 2 * source_in.var_x + gamma**2 * source_in.var_p
            + 4 * eta**2 * source_anc.var_x + (2 * a * u - a) ** 2)


def theoretical_optimum(source_in: SqueezedSource = DEFAULT_INPUT,
                        source_anc: SqueezedSource = DEFAULT_ANCILLA, a: float = 0.0):
    """Exact minimizer (eta, gamma, delta) of the mean cost under finite squeezing.

    For equal input-p and ancilla-x variances this is (sqrt(1-delta)/2, sqrt(1-delta))
    with delta = <p_in^2> / (<x_in^2> + a^2).
    """
    var_p, var_a = source_in.var_p, source_anc.var_x
    delta = math.sqrt(var_p * var_a) / (source_in.var_x + a * a)
    if delta >= 1:
        raise ValueError("squeezing too weak: the identity gate is already optimal")
    product = (1 - delta) / 2
    gamma = math.sqrt(2 * product) * (var_a / var_p) ** 0.25
    return product / gamma, gamma, delta


def sample_outputs(params: GateParams, n: int, backend: Backend, seed: SeedSpec,
                   source_in: SqueezedSource = DEFAULT_INPUT,
                   source_anc: SqueezedSource = DEFAULT_ANCILLA):
    """Return ``(x_in, x_out)`` arrays for ``n`` shots; both backends consume the same draws."""
    inp = sample(source_in, seed.child(0), n)
    anc = sample(source_anc, seed.child(1), n)
    if backend is Backend.OPTICAL:
        x_out = simulate_circuit(settings_from(params), inp, anc).x_out
    else:
        x_out = apply_noisy(params, inp, anc.x)
    return inp.x, x_out


def _stats(x: np.ndarray, a: float, threshold: float) -> SampleStats:
    cost = (x - a) ** 2
    return SampleStats(len(x), float(np.mean(cost)), float(np.mean(x)), float(np.var(x)),
                       int(np.count_nonzero(cost < threshold)))


def evaluate_objective(params: GateParams, n: int, backend: Backend, seed: SeedSpec,
                       source_in: SqueezedSource = DEFAULT_INPUT,
                       source_anc: SqueezedSource = DEFAULT_ANCILLA,
                       success_threshold: float = 1e-9) -> tuple[float, SampleStats]:
    """Natural log of the sample-mean cost over ``n`` shots, plus raw-sample stats."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _, x_out = sample_outputs(params, n, backend, seed, source_in, source_anc)
    stats = _stats(x_out, params.a, success_threshold)
    return math.log(max(stats.mean_cost, COST_FLOOR)), stats


def run_landscape(spec: LandscapeSpec, seed: SeedSpec) -> Landscape:
    """Mean cost on the (eta, gamma) grid.

    Grid point (i, j) always uses sub-stream (i, j), independent of ``a``, so
    landscapes for different ``a`` share common random numbers.
    """
    shape = (len(spec.eta_grid), len(spec.gamma_grid))
    mean_cost, cost_std = np.empty(shape), np.empty(shape)
    for i, eta in enumerate(spec.eta_grid):
        for j, gamma in enumerate(spec.gamma_grid):
            _, x_out = sample_outputs(GateParams(eta, gamma, spec.a), spec.samples_per_point,
                                      spec.backend, seed.child(i, j), spec.source_in, spec.source_anc)
            cost = (x_out - spec.a) ** 2
            mean_cost[i, j] = cost.mean()
            cost_std[i, j] = cost.std()
    return Landscape(np.array(spec.eta_grid), np.array(spec.gamma_grid), mean_cost, cost_std)


def run_fixed(params: GateParams, n: int, seed: SeedSpec, backend: Backend = Backend.OPTICAL,
              source_in: SqueezedSource = DEFAULT_INPUT, source_anc: SqueezedSource = DEFAULT_ANCILLA,
              bin_width: float = 0.1, span: tuple[float, float] = (-8.0, 8.0)) -> Histogram:
    if n < 1:
        raise ValueError("n must be at least 1")
    x_in, x_out = sample_outputs(params, n, backend, seed, source_in, source_anc)
    nbins = int(round((span[1] - span[0]) / bin_width))
    edges = np.linspace(span[0], span[1], nbins + 1)
    # normalized to the full sample count, so mass outside the span is not redistributed
    out_counts, _ = np.histogram(x_out, edges)
    in_counts, _ = np.histogram(x_in, edges)
    return Histogram(edges, out_counts / (n * bin_width), in_counts / (n * bin_width),
                     float(x_out.mean()), float(x_out.std()), float(x_in.mean()), float(x_in.std()), n)


def _observe_with_retry(model: GpModel, z, value: float) -> GpModel:
    try:
        return observe(model, z, value)
    except GpConditioningError:
        inflated = GpModel(model.points, model.values, model.lengthscale,
                           model.signal_variance, max(model.noise_variance, 1e-6) * 100)
        return observe(inflated, z, value)


def run_bayes(spec: QaoaRunSpec, seed: SeedSpec) -> RunRecord:
    """One outer-loop optimization of ``spec.steps`` steps.

    The first ``spec.n_initial`` steps are uniform random points in the log10 box;
    the rest come from the UCB acquisition. The GP sees -log(mean cost).
    """
    bounds = Bounds.log10_box(*spec.box)
    model = GpModel()
    rows = []
    for t in range(spec.steps):
        if t < spec.n_initial:
            z = bounds.uniform(seed.child(1, t).rng(), 1)[0]
        else:
            z = suggest(model, bounds, spec.schedule, t, seed.child(1, t))
        eta, gamma = 10.0 ** z
        value, st = evaluate_objective(GateParams(eta, gamma, spec.a), spec.samples_per_step,
                                       spec.backend, seed.child(0, t), spec.source_in,
                                       spec.source_anc, spec.success_threshold)
        model = _observe_with_retry(model, z, -value)
        rows.append((eta, gamma, value, st.mean, st.variance, st.success_count))
    cols = [np.array(c) for c in zip(*rows)]
    return RunRecord(spec.a, *cols[:5], cols[5].astype(np.int64))


def random_sampling_successes(spec: QaoaRunSpec, seed: SeedSpec) -> np.ndarray:
    """Per-step success counts when the input state is measured directly."""
    counts = np.empty(spec.steps, dtype=np.int64)
    for t in range(spec.steps):
        x = sample(spec.source_in, seed.child(0, t, 0), spec.samples_per_step).x
        counts[t] = np.count_nonzero((x - spec.a) ** 2 < spec.success_threshold)
    return counts


def draw_a_values(n_a: int, seed: SeedSpec, spread: float = A_SPREAD) -> np.ndarray:
    return seed.child(0).rng().normal(0.0, spread, n_a)


def _success_unit(spec: QaoaRunSpec, mode: Mode, a: float, seed: SeedSpec) -> np.ndarray:
    unit_spec = replace(spec, a=float(a))
    if mode is Mode.QAOA:
        counts = run_bayes(unit_spec, seed).success_count
    else:
        counts = random_sampling_successes(unit_spec, seed)
    return np.cumsum(counts) > 0


def run_success_study(spec: QaoaRunSpec, mode: Mode, seed: SeedSpec, n_a: int = 30,
                      n_jobs: int = 1) -> SuccessCurve:
    """Cumulative success probability per step.

    For each repeat-set, the curve at step t is the fraction of the ``n_a``
    problem constants for which any sample up to t hit the threshold. The
    a-values depend only on ``seed`` so both modes see the same problems.
    """
    a_values = draw_a_values(n_a, seed)
    units = [(r, k) for r in range(spec.repeats) for k in range(n_a)]
    if n_jobs == 1:
        results = [_success_unit(spec, mode, a_values[k], seed.child(1, r, k)) for r, k in units]
    else:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=n_jobs)(
            delayed(_success_unit)(spec, mode, a_values[k], seed.child(1, r, k)) for r, k in units
        )
    hits = np.array(results, dtype=float).reshape(spec.repeats, n_a, spec.steps)
    per_repeat = hits.mean(axis=1)
    band = per_repeat.std(axis=0, ddof=1) if spec.repeats > 1 else np.zeros(spec.steps)
    return SuccessCurve(per_repeat.mean(axis=0), band, per_repeat, a_values)
