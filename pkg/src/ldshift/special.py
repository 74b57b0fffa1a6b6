"""Gamma-family special functions and the closed-form identities used by the
bound formulas: log-gamma, beta, digamma, the threshold root t0, and the
exact s=1/2 derivatives of the beta-product objectives."""

import math

import numpy as np
from scipy import special as _sp

__all__ = [
    "EULER_GAMMA",
    "log_gamma",
    "beta_fn",
    "digamma",
    "t0_residual",
    "solve_t0",
    "l8_derivative",
]

EULER_GAMMA = 0.5772156649015328606


def log_gamma(x):
    """log Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return float(_sp.gammaln(x))


def beta_fn(x, y):
    """Beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y) for x, y > 0."""
    x, y = float(x), float(y)
    if not (x > 0 and y > 0):
        raise ValueError(f"beta_fn requires positive arguments, got ({x}, {y})")
    return float(math.exp(_sp.betaln(x, y)))


def digamma(x):
    """psi(x) = d/dx log Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    return float(_sp.psi(x))


def t0_residual(t):
    """Residual h(t) = 2t + t(1-t)(psi(1+t) - psi(1)) - 1.

    h is strictly increasing on (0, 1/2) with h(0) = -1, so it has a unique
    root t0 there.  Accepts scalars or arrays.
    """
    t = np.asarray(t, dtype=float)
    val = 2.0 * t + t * (1.0 - t) * (_sp.psi(1.0 + t) - _sp.psi(1.0)) - 1.0
    return float(val) if val.ndim == 0 else val


def solve_t0(tol=1e-12):
    """Unique root t0 in (0, 1/2) of 2t + t(1-t)(psi(1+t) - psi(1)) = 1.

    Bisection on the bracket (1e-6, 0.5 - 1e-6); the residual is strictly
    increasing there, which is asserted as the bracket contracts.
    """
    lo, hi = 1e-6, 0.5 - 1e-6
    flo, fhi = t0_residual(lo), t0_residual(hi)
    if not (flo < 0.0 < fhi):
        raise RuntimeError("t0 bracket lost: residual endpoints have wrong signs")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = t0_residual(mid)
        if not (flo <= fm <= fhi):
            raise RuntimeError("t0 residual not monotone across bracket")
        if fm < 0.0:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if abs(fm) < tol:
            return mid
    return 0.5 * (lo + hi)


def l8_derivative(kappa, branch):
    """Closed-form derivative at s = 1/2 of the beta-product objective.

    branch "mid" (1 < kappa < 2): d/ds s(1-s(k-1))B(s+k(1-s), 2-k) at s=1/2,
    equal to (k-1)(3-k)/4 * pi * tan((2-k)pi/2) * B((1+k)/2, 2-k).

    branch "low" (0 < kappa < 1): d/ds s B(s+k(1-s), 1-k) at s=1/2, equal to
    (1-k)/2 * pi * cot((1-k)pi/2) * B((1+k)/2, 1-k).
    """
    k = float(kappa)
    if branch == "mid":
        if not 1.0 < k < 2.0:
            raise ValueError(f"branch 'mid' requires kappa in (1, 2), got {k}")
        return (
            (k - 1.0) * (3.0 - k) / 4.0
            * math.pi * math.tan((2.0 - k) / 2.0 * math.pi)
            * beta_fn((1.0 + k) / 2.0, 2.0 - k)
        )
    if branch == "low":
        if not 0.0 < k < 1.0:
            raise ValueError(f"branch 'low' requires kappa in (0, 1), got {k}")
        return (
            (1.0 - k) / 2.0
            * math.pi / math.tan((1.0 - k) / 2.0 * math.pi)
            * beta_fn((1.0 + k) / 2.0, 1.0 - k)
        )
    raise ValueError(f"unknown branch {branch!r}, expected 'mid' or 'low'")
