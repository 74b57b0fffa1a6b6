"""Shift estimators as pure functions of a sample batch: the MLE (root of
the monotone score sum), the eps-spaced likelihood-ratio estimator, the
order-statistic shifts min(x) - a and max(x) - b, and their variants.

Everything is vectorized across batches (rows) for the Monte Carlo driver;
the scalar ``estimate`` is the single-batch view of the same code path.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import families as fam_mod
from .families import DensityFamily, SampleBatch

__all__ = ["EstimatorSpec", "estimate", "estimate_many"]

_KINDS = ("mle", "lr", "min_shift", "max_shift", "shifted_min", "convex_combo")


@dataclass(frozen=True)
class EstimatorSpec:
    kind: str
    eps: Optional[float] = None
    lam: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown estimator kind {self.kind!r}")
        if self.kind in ("lr", "shifted_min"):
            if self.eps is None or not self.eps > 0:
                raise ValueError(f"{self.kind} requires eps > 0, got {self.eps}")
        if self.kind == "convex_combo":
            if self.lam is None or not 0.0 < self.lam < 1.0:
                raise ValueError(f"convex_combo requires lambda in (0, 1), got {self.lam}")


def _values(batch):
    if isinstance(batch, SampleBatch):
        return np.asarray(batch.values, dtype=float)
    return np.asarray(batch, dtype=float)


def estimate(spec, family, batch):
    """Estimate the shift from one batch."""
    x = _values(batch)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("batch must be a nonempty 1-d sample")
    return float(estimate_many(spec, family, x[None, :])[0])


def estimate_many(spec, family, X):
    """Row-wise estimates for a (batches, n) matrix of samples."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("X must be a (batches, n) matrix with n >= 1")
    a, b = family.support
    kind = spec.kind
    if kind == "min_shift":
        _need_finite(a, "min_shift", "left")
        return X.min(axis=1) - a
    if kind == "max_shift":
        _need_finite(b, "max_shift", "right")
        return X.max(axis=1) - b
    if kind == "shifted_min":
        _need_finite(a, "shifted_min", "left")
        return X.min(axis=1) - a - spec.eps
    if kind == "convex_combo":
        _need_finite(a, "convex_combo", "left")
        _need_finite(b, "convex_combo", "right")
        lower = X.min(axis=1) - a
        upper = X.max(axis=1) - b
        return spec.lam * lower + (1.0 - spec.lam) * upper
    if kind == "mle":
        if not family.log_concave:
            raise ValueError(f"mle needs a log-concave family, got {family.kind}")
        return _mle_rows(family, X)
    if kind == "lr":
        if not family.log_concave:
            raise ValueError(
                f"lr needs monotone likelihood ratios (log-concave suffices), got {family.kind}")
        return _lr_rows(family, X, spec.eps)
    raise ValueError(f"unknown estimator kind {kind!r}")  # pragma: no cover


def _need_finite(edge, kind, side):
    if not math.isfinite(edge):
        raise ValueError(f"{kind} undefined: {side} support edge is infinite")


def _score_sum(family, X, theta):
    """Row score sums S(theta) = sum_i f'(x_i - theta)/f(x_i - theta)."""
    a, b = family.support
    U = X - theta[:, None]
    dl = U - a if math.isfinite(a) else np.full_like(U, math.inf)
    dr = b - U if math.isfinite(b) else np.full_like(U, math.inf)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        s = fam_mod._score3(family, U, dl, dr)
    return np.sum(s, axis=1)


def _brackets(family, X):
    """Admissible theta interval per row, expanded to a sign change of the
    score sum on unbounded sides (the score sum is nondecreasing in theta
    for log-concave f)."""
    a, b = family.support
    spread = X.max(axis=1) - X.min(axis=1) + 1.0
    lo = X.max(axis=1) - b if math.isfinite(b) else X.min(axis=1) - spread
    hi = X.min(axis=1) - a if math.isfinite(a) else X.max(axis=1) + spread
    if not math.isfinite(b):
        for _ in range(80):
            bad = _score_sum(family, X, lo) > 0
            if not bad.any():
                break
            lo[bad] -= spread[bad]
            spread[bad] *= 2.0
    if not math.isfinite(a):
        spread = X.max(axis=1) - X.min(axis=1) + 1.0
        for _ in range(80):
            bad = _score_sum(family, X, hi) < 0
            if not bad.any():
                break
            hi[bad] += spread[bad]
            spread[bad] *= 2.0
    return lo, hi


def _mle_rows(family, X):
    m, n = X.shape
    if family.kind == "gaussian":
        # score sum is linear in theta with root at the mean
        return X.mean(axis=1)
    lo, hi = _brackets(family, X)
    eta = 1e-12 * (hi - lo)
    zero_tol = 1e-9 * n
    s_lo = _score_sum(family, X, lo + eta)
    s_hi = _score_sum(family, X, hi - eta)
    # the log-likelihood derivative is -S; S is nondecreasing in theta
    flat = (np.abs(s_lo) <= zero_tol) & (np.abs(s_hi) <= zero_tol)
    all_neg = (s_hi <= zero_tol) & ~flat      # likelihood increasing: right end
    all_pos = (s_lo >= -zero_tol) & ~flat     # likelihood decreasing: left end
    out = np.empty(m)
    out[flat] = 0.5 * (lo[flat] + hi[flat])
    out[all_neg] = hi[all_neg]
    out[all_pos] = lo[all_pos]
    rest = ~(flat | all_neg | all_pos)
    if rest.any():
        rlo, rhi = lo[rest].copy(), hi[rest].copy()
        Xr = X[rest]
        for _ in range(70):
            mid = 0.5 * (rlo + rhi)
            pos = _score_sum(family, Xr, mid) > 0.0
            rhi = np.where(pos, mid, rhi)
            rlo = np.where(pos, rlo, mid)
        out[rest] = 0.5 * (rlo + rhi)
    return out


def _k_rows(family, X, z, eps):
    """k(z) = mean_i [log f(x_i - z + eps) - log f(x_i - z - eps)] per row;
    nondecreasing in z for log-concave f."""
    lp = fam_mod._logpdf_plain(family, X - z[:, None] + eps)
    lq = fam_mod._logpdf_plain(family, X - z[:, None] - eps)
    return np.mean(lp - lq, axis=1)


def _lr_rows(family, X, eps):
    m, n = X.shape
    a, b = family.support
    spread = X.max(axis=1) - X.min(axis=1) + 1.0 + 4.0 * eps
    if math.isfinite(a) and math.isfinite(b):
        t_lower = X.min(axis=1) - a
        t_upper = X.max(axis=1) - b
        narrow = t_lower - t_upper <= 2.0 * eps
        z_lo = t_upper + eps
        z_hi = t_lower - eps
    elif math.isfinite(a):
        t_lower = X.min(axis=1) - a
        narrow = np.zeros(m, dtype=bool)
        z_hi = t_lower - eps
        z_lo = z_hi - spread
        for _ in range(80):
            bad = _k_rows(family, X, z_lo, eps) >= 0
            if not bad.any():
                break
            z_lo[bad] -= spread[bad]
            spread[bad] *= 2.0
    else:
        narrow = np.zeros(m, dtype=bool)
        z_lo = X.min(axis=1) - spread
        z_hi = X.max(axis=1) + spread
        for _ in range(80):
            bad_lo = _k_rows(family, X, z_lo, eps) >= 0
            bad_hi = _k_rows(family, X, z_hi, eps) <= 0
            if not (bad_lo.any() or bad_hi.any()):
                break
            z_lo[bad_lo] -= spread[bad_lo]
            z_hi[bad_hi] += spread[bad_hi]
            spread[bad_lo | bad_hi] *= 2.0

    out = np.empty(m)
    if narrow.any():
        out[narrow] = 0.5 * (t_lower[narrow] + t_upper[narrow])
    wide = ~narrow
    if not wide.any():
        return out
    Xw = X[wide]
    lo, hi = z_lo[wide].copy(), z_hi[wide].copy()
    eta = 1e-13 * np.maximum(np.abs(lo), np.abs(hi)) + 1e-13
    zero_tol = 1e-12 * n
    k_lo = _k_rows(family, Xw, lo + eta, eps)
    k_hi = _k_rows(family, Xw, hi - eta, eps)
    # sup{z : k < 0}: boundary between k < 0 and k >= 0
    z_minus = _k_bisect(family, Xw, lo, hi, eps, k_lo, k_hi,
                        left_pred=lambda k: k < -zero_tol)
    # inf{z : k > 0} differs only across a flat zero stretch of k
    z_plus = z_minus.copy()
    probe = np.clip(z_minus, lo + eta, hi - eta)
    flat = np.abs(_k_rows(family, Xw, probe, eps)) <= zero_tol
    flat &= z_minus < hi - 2.0 * eta
    if flat.any():
        z_plus[flat] = _k_bisect(
            family, Xw[flat], z_minus[flat], hi[flat], eps,
            np.zeros(int(flat.sum())), k_hi[flat],
            left_pred=lambda k: k <= zero_tol)
    out[wide] = 0.5 * (z_minus + z_plus)
    return out


def _k_bisect(family, X, lo, hi, eps, k_lo, k_hi, left_pred):
    """Boundary z between {left_pred(k(z))} and its complement, clamped to
    [lo, hi] when k has constant predicate value on the whole interval."""
    blo, bhi = lo.copy(), hi.copy()
    always_right = ~left_pred(k_lo)   # predicate false already at lo
    always_left = left_pred(k_hi)     # predicate true up to hi
    out = np.where(always_right, lo, np.where(always_left, hi, np.nan))
    rest = ~(always_right | always_left)
    if rest.any():
        rlo, rhi = blo[rest], bhi[rest]
        Xr = X[rest]
        for _ in range(60):
            mid = 0.5 * (rlo + rhi)
            left = left_pred(_k_rows(family, Xr, mid, eps))
            rlo = np.where(left, mid, rlo)
            rhi = np.where(left, rhi, mid)
        out[rest] = 0.5 * (rlo + rhi)
    return out
