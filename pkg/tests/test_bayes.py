import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvqaoa.bayes import (
    AcquisitionSchedule,
    Bounds,
    GpConditioningError,
    GpModel,
    kernel_matrix,
    matern52,
    observe,
    posterior,
    suggest,
    ucb,
)
from cvqaoa.quadrature import SeedSpec

BOX = Bounds((-1.0, -1.0), (1.0, 1.0))


def test_matern_values():
    assert matern52(0.0, 2.0, 3.5) == 3.5
    expected = (1 + math.sqrt(5) + 5 / 3) * math.exp(-math.sqrt(5))
    assert matern52(1.0, 1.0, 1.0) == pytest.approx(expected, rel=1e-14)
    assert matern52(1.0, 1.0, 1.0) == pytest.approx(0.523994, abs=1e-6)
    assert matern52(1e3, 1.0, 1.0) < 1e-300 or matern52(1e3, 1.0, 1.0) == 0.0


def test_kernel_symmetric(rng):
    pts = rng.uniform(-1, 1, (30, 2))
    K = kernel_matrix(pts, pts, (0.5, 0.7), 1.3)
    assert np.array_equal(K, K.T)


def test_schedule():
    s = AcquisitionSchedule()
    assert s.kappa(0) == 2.576
    assert s.kappa(100) == pytest.approx(0.1224952604158449, rel=1e-12)
    for t in range(101):
        assert s.kappa(t) == pytest.approx(2.576 * 0.97**t, abs=1e-12)
    assert all(s.kappa(t + 1) < s.kappa(t) for t in range(100))


def test_prior_posterior():
    m = GpModel(signal_variance=2.0)
    assert posterior(m, [0.3, 0.1]) == (0.0, math.sqrt(2.0))


def test_interpolates_noiseless_observation():
    m = GpModel(noise_variance=0.0)
    pts = [[0.1, 0.2], [-0.5, 0.4], [0.7, -0.3]]
    vals = [1.5, -0.3, 0.8]
    for p, v in zip(pts, vals):
        m = observe(m, p, v)
    for p, v in zip(pts, vals):
        mu, sigma = posterior(m, p)
        assert mu == pytest.approx(v, abs=1e-8)
        assert sigma <= 1e-4


def test_single_observation_reverts_to_prior():
    m = observe(GpModel(), [0.0, 0.0], 5.0)
    mu, sigma = posterior(m, [50.0, 50.0])
    assert mu == pytest.approx(0.0, abs=1e-12)
    assert sigma == pytest.approx(1.0)


def _dense_oracle(points, values, query, ls, sv, noise):
    # standardization identical to the model's documented behavior
    y = np.asarray(values, float)
    off, sc = (y.mean(), y.std()) if len(y) >= 2 else (0.0, 1.0)
    y = (y - off) / sc
    d = np.abs(points[:, None, 0] - points[None, :, 0]) / ls
    K = sv * (1 + np.sqrt(5) * d + 5 * d**2 / 3) * np.exp(-np.sqrt(5) * d) + noise * np.eye(len(y))
    dq = np.abs(points[:, 0] - query[0]) / ls
    k = sv * (1 + np.sqrt(5) * dq + 5 * dq**2 / 3) * np.exp(-np.sqrt(5) * dq)
    mu = k @ np.linalg.solve(K, y)
    var = sv - k @ np.linalg.solve(K, k)
    return mu * sc + off, math.sqrt(max(var, 0)) * sc


def test_posterior_matches_dense_solve():
    xs = np.array([-0.9, -0.4, 0.05, 0.5, 0.85])
    pts = np.column_stack([xs, np.zeros(5)])
    vals = np.sin(3 * xs) + xs**2
    m = GpModel(pts, vals, (0.5, 0.5), 1.0, 1e-4)
    for q in np.linspace(-1, 1, 17):
        mu, sigma = posterior(m, [q, 0.0])
        mu_o, sigma_o = _dense_oracle(pts, vals, [q, 0.0], 0.5, 1.0, 1e-4)
        assert mu == pytest.approx(mu_o, abs=1e-8)
        assert sigma == pytest.approx(sigma_o, abs=1e-8)


def test_batch_posterior_matches_single(rng):
    m = GpModel(rng.uniform(-1, 1, (12, 2)), rng.normal(size=12))
    q = rng.uniform(-1, 1, (7, 2))
    mu, sigma = posterior(m, q)
    for i in range(7):
        assert (mu[i], sigma[i]) == pytest.approx(posterior(m, q[i]), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_sigma_nonnegative(seed):
    r = np.random.default_rng(seed)
    m = GpModel(r.uniform(-1, 1, (15, 2)), r.normal(size=15))
    _, sigma = posterior(m, r.uniform(-1.5, 1.5, (200, 2)))
    assert np.all(sigma >= 0)


def test_duplicate_point_zero_noise_raises():
    m = observe(GpModel(noise_variance=0.0), [0.2, 0.2], 1.0)
    with pytest.raises(GpConditioningError):
        observe(m, [0.2, 0.2], 2.0)


def test_observe_is_pure_and_counts():
    m0 = GpModel()
    m = m0
    for k in range(7):
        m = observe(m, [k / 10, -k / 10], float(k))
    assert len(m) == 7 and len(m0) == 0
    with pytest.raises(ValueError):
        m.points[0, 0] = 1.0


def test_refit_happens_every_ten():
    r = np.random.default_rng(4)
    m = GpModel()
    for k in range(10):
        z = r.uniform(-1, 1, 2)
        m = observe(m, z, math.sin(6 * z[0]))
    assert m.lengthscale[0] in (0.3, 0.5, 1.0, 2.0)
    assert m.lengthscale[0] < 1.0  # a wiggly function prefers a short lengthscale


def test_suggest_prior_only_is_seeded_uniform():
    z1 = suggest(GpModel(), BOX, AcquisitionSchedule(), 0, SeedSpec(9))
    z2 = suggest(GpModel(), BOX, AcquisitionSchedule(), 0, SeedSpec(9))
    assert np.array_equal(z1, z2) and BOX.contains(z1)
    assert not np.array_equal(z1, suggest(GpModel(), BOX, AcquisitionSchedule(), 0, SeedSpec(10)))


def test_suggest_explores_away_from_good_point():
    m = observe(GpModel(), [0.0, 0.0], -100.0)
    sched = AcquisitionSchedule(kappa0=50.0)
    z = suggest(m, BOX, sched, 0, SeedSpec(1))
    assert ucb(m, z, 50.0) >= ucb(m, [0.0, 0.0], 50.0)
    assert np.linalg.norm(z) > 0.5


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 1000), st.integers(0, 60))
def test_suggest_never_worse_than_candidates(seed, t):
    r = np.random.default_rng(seed)
    m = GpModel(r.uniform(-1, 1, (20, 2)), r.normal(size=20))
    sched = AcquisitionSchedule()
    z = suggest(m, BOX, sched, t, SeedSpec(seed))
    cand = BOX.uniform(SeedSpec(seed).rng(), 1024)
    assert ucb(m, z, sched.kappa(t)) >= ucb(m, cand, sched.kappa(t)).max()
    assert BOX.contains(z)
    assert np.array_equal(z, suggest(m, BOX, sched, t, SeedSpec(seed)))


def test_bowl_argmin_recovered():
    r = np.random.default_rng(8)
    target = np.array([0.3, -0.4])
    m = GpModel()
    for _ in range(100):
        z = r.uniform(-1, 1, 2)
        m = observe(m, z, float(np.sum((z - target) ** 2)))
    g = np.linspace(-1, 1, 201)
    grid = np.array(np.meshgrid(g, g, indexing="ij")).reshape(2, -1).T
    mu, _ = posterior(m, grid)
    assert np.linalg.norm(grid[np.argmin(mu)] - target) < 0.1


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds((0.0,), (0.0,))
    b = Bounds.log10_box(0.1, 10, 0.1, 10)
    assert b.lo == pytest.approx((-1, -1)) and b.hi == pytest.approx((1, 1))
