"""Estimator values, equivariance, and the structural properties tying the
likelihood-ratio estimator to the two-point likelihood comparison."""

import math

import numpy as np
import pytest

from ldshift.estimators import EstimatorSpec, estimate, estimate_many
from ldshift.families import log_density, make_family, sample


def test_spec_validation():
    with pytest.raises(ValueError):
        EstimatorSpec("nope")
    with pytest.raises(ValueError):
        EstimatorSpec("lr")                 # missing eps
    with pytest.raises(ValueError):
        EstimatorSpec("shifted_min", eps=-0.1)
    with pytest.raises(ValueError):
        EstimatorSpec("convex_combo", lam=1.5)


def test_order_statistic_examples():
    u = make_family("uniform")
    batch = np.array([0.2, 0.9])
    assert estimate(EstimatorSpec("min_shift"), u, batch) == pytest.approx(0.2)
    assert estimate(EstimatorSpec("max_shift"), u, batch) == pytest.approx(-0.1)
    got = estimate(EstimatorSpec("convex_combo", lam=0.5), u, batch)
    assert got == pytest.approx(0.05)
    got = estimate(EstimatorSpec("shifted_min", eps=0.05), u, batch)
    assert got == pytest.approx(0.15)


def test_min_shift_needs_finite_edge():
    g = make_family("gaussian")
    with pytest.raises(ValueError):
        estimate(EstimatorSpec("min_shift"), g, np.array([0.0, 1.0]))


def test_mle_gaussian_is_mean():
    g = make_family("gaussian")
    rng = np.random.default_rng(1)
    for _ in range(10):
        x = rng.normal(2.0, 1.0, rng.integers(1, 40))
        got = estimate(EstimatorSpec("mle"), g, x)
        assert abs(got - x.mean()) < 1e-10


def test_mle_uniform_is_midrange():
    u = make_family("uniform")
    x = np.array([0.21, 0.55, 0.87])
    got = estimate(EstimatorSpec("mle"), u, x)
    want = 0.5 * ((0.87 - 1.0) + 0.21)
    assert got == pytest.approx(want, abs=1e-12)


def test_mle_monotone_density_equals_min_shift():
    # exponential density: score identically -1, likelihood rises to the
    # right endpoint of the admissible interval
    e = make_family("gamma", (1.0,))
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = rng.exponential(1.0, 25) + 0.3
        mle = estimate(EstimatorSpec("mle"), e, x)
        assert mle == estimate(EstimatorSpec("min_shift"), e, x)


def test_mle_beta_interior_root():
    b = make_family("beta", (2, 2))
    x = sample(b, 0.4, 200, seed=5).values
    theta_hat = estimate(EstimatorSpec("mle"), b, x)
    assert x.max() - 1.0 < theta_hat < x.min()
    from ldshift.estimators import _score_sum
    s = _score_sum(b, x[None, :], np.array([theta_hat]))[0]
    assert abs(s) < 1e-6 * len(x)


def test_mle_requires_log_concave():
    w = make_family("weibull", (0.7,))
    with pytest.raises(ValueError):
        estimate(EstimatorSpec("mle"), w, np.array([0.5, 1.0]))
    with pytest.raises(ValueError):
        estimate(EstimatorSpec("lr", eps=0.1), w, np.array([0.5, 1.0]))


def test_lr_gaussian_is_mean():
    g = make_family("gaussian")
    rng = np.random.default_rng(3)
    x = rng.normal(-1.0, 1.0, 30)
    got = estimate(EstimatorSpec("lr", eps=0.2), g, x)
    assert abs(got - x.mean()) < 1e-9


def test_lr_uniform_midrange():
    u = make_family("uniform")
    # wide batch: narrow-interval midpoint rule
    x = np.array([0.05, 0.97])
    got = estimate(EstimatorSpec("lr", eps=0.1), u, x)
    assert got == pytest.approx(0.5 * (0.05 + (0.97 - 1.0)))
    # flat k on the admissible interval gives the same midpoint
    x = np.array([0.4, 0.6])
    got = estimate(EstimatorSpec("lr", eps=0.05), u, x)
    assert got == pytest.approx(0.5 * (0.4 + (0.6 - 1.0)))


def test_shift_equivariance():
    rng = np.random.default_rng(4)
    cases = [
        (make_family("uniform"), ["min_shift", "max_shift", "mle"]),
        (make_family("beta", (2, 2)), ["min_shift", "convex_combo", "mle", "lr"]),
        (make_family("gaussian"), ["mle", "lr"]),
        (make_family("weibull", (1.5,)), ["min_shift", "shifted_min", "mle", "lr"]),
    ]
    for fam, kinds in cases:
        x = sample(fam, 0.0, 40, seed=8).values
        for kind in kinds:
            spec = EstimatorSpec(kind, eps=0.07 if kind in ("lr", "shifted_min") else None,
                                 lam=0.3 if kind == "convex_combo" else None)
            base = estimate(spec, fam, x)
            for c in (-3.2, 0.001, 11.0):
                shifted = estimate(spec, fam, x + c)
                assert abs(shifted - (base + c)) < 1e-12 * max(1.0, abs(base + c)), (
                    fam.kind, kind, c)


def test_lr_bracketing_property():
    # stronger likelihood at theta - eps pushes the estimate below theta,
    # and conversely
    rng = np.random.default_rng(6)
    for fam in (make_family("gaussian"), make_family("beta", (2, 2))):
        theta = 0.3
        eps = 0.15
        spec = EstimatorSpec("lr", eps=eps)
        for trial in range(40):
            n = int(rng.integers(3, 25))
            x = sample(fam, theta, n, seed=1000 + trial).values
            ll_lo = np.sum(log_density(fam, theta - eps, x))
            ll_hi = np.sum(log_density(fam, theta + eps, x))
            est = estimate(spec, fam, x)
            if ll_lo > ll_hi:
                assert est <= theta + 1e-9
            elif ll_hi > ll_lo:
                assert est >= theta - 1e-9


def test_order_statistics_bracket_truth():
    rng = np.random.default_rng(7)
    for fam in (make_family("uniform"), make_family("beta", (2, 2))):
        for trial in range(20):
            theta = float(rng.uniform(-1, 1))
            x = sample(fam, theta, 30, seed=trial).values
            assert estimate(EstimatorSpec("min_shift"), fam, x) >= theta
            assert estimate(EstimatorSpec("max_shift"), fam, x) <= theta


def test_vectorized_matches_scalar():
    fam = make_family("beta", (2, 2))
    X = np.vstack([sample(fam, 0.1, 20, seed=i).values for i in range(8)])
    for kind, kw in (("mle", {}), ("lr", {"eps": 0.1}),
                     ("convex_combo", {"lam": 0.4})):
        spec = EstimatorSpec(kind, **kw)
        vec = estimate_many(spec, fam, X)
        for i in range(8):
            assert vec[i] == pytest.approx(estimate(spec, fam, X[i]), abs=1e-12)


def test_empty_batch():
    u = make_family("uniform")
    with pytest.raises(ValueError):
        estimate(EstimatorSpec("min_shift"), u, np.array([]))
