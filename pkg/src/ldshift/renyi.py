"""Renyi divergence I^s(p||q) = -log int p^s q^(1-s) between shifted copies
of a density, the scaling exponent kappa of a scaling function g, rescaled
small-shift limits I^s_g, and their closed forms per edge-behavior regime.

Conventions: orders s in (0, 1); the centered pair (theta - eps/2,
theta + eps/2) is used for scaling limits; +inf is returned only on the
structural condition of disjoint supports (integrals run in log space, so
overflow cannot masquerade as the infinite marker).
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.special import betaln, logsumexp

from . import families as fam_mod
from .families import DensityFamily, fisher_information
from .quadrature import panel_nodes

__all__ = [
    "DivergenceError",
    "RenyiCurve",
    "ScalingProfile",
    "ExtrapolatedLimit",
    "RegimeInfo",
    "g_value",
    "kappa_of_g",
    "renyi_divergence",
    "renyi_curve",
    "scaled_limit",
    "closed_form_isg",
    "classify_regime",
    "profile_from_family",
    "profile_from_closed_form",
    "DEFAULT_LADDER",
    "DEFAULT_LOG_LADDER",
]

GTag = Union[str, tuple, Callable]

# default shift ladders: plain power scalings converge like powers of eps
# (removed by iterated extrapolation over a geometric ladder); the
# -x^2 log x scaling has 1/log(eps) corrections and needs a deep ladder
DEFAULT_LADDER = (0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125)
DEFAULT_LOG_LADDER = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4)

_REGIMES = ("regular", "semi_regular", "kappa_one", "kappa_two",
            "power_mid", "power_low")


class DivergenceError(RuntimeError):
    """Ladder ratios grow instead of converging (wrong scaling function)."""


@dataclass(frozen=True)
class RenyiCurve:
    """Tabulated s -> I^s on a strictly increasing grid inside (0, 1)."""

    s_grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class ExtrapolatedLimit:
    value: float
    uncertainty: float
    rung_values: np.ndarray


@dataclass(frozen=True)
class RegimeInfo:
    regime: str
    kappa: float
    A1: float
    A2: float
    g_tag: GTag
    fisher: Optional[float] = None


@dataclass(frozen=True)
class ScalingProfile:
    """Rescaled limit curve s -> I^s_g plus the scaling metadata.

    ``isg_fn`` evaluates the limit at arbitrary s in [0, 1] (used by the
    bound optimizers for refinement); ``isg_unc`` is zero on closed-form
    profiles and the ladder spread on extrapolated ones.  Ladder-backed
    profiles also expose ``rung_fn(i, s)`` = I^s(eps_i)/g(eps_i), the exact
    pre-limit curve of rung i: the bound optimizers work rung by rung and
    extrapolate the optima, which keeps them clear of the 0/0 noise of the
    pointwise limit near s in {0, 1}.
    """

    g_tag: GTag
    kappa: float
    theta: float
    regime: str
    s_grid: np.ndarray
    isg: np.ndarray
    isg_unc: np.ndarray
    isg_fn: Callable = None
    source: str = "closed_form"
    eps_ladder: tuple = None
    rung_fn: Callable = None


# ---------------------------------------------------------------------------
# scaling functions

def g_value(g_tag, eps):
    """Evaluate the scaling function g at eps > 0."""
    eps = np.asarray(eps, dtype=float)
    if callable(g_tag):
        out = np.asarray(g_tag(eps), dtype=float)
    elif g_tag == "square":
        out = eps ** 2
    elif g_tag == "abs":
        out = np.abs(eps)
    elif g_tag == "sq_log":
        out = -(eps ** 2) * np.log(eps)
    elif isinstance(g_tag, tuple) and g_tag[0] == "power":
        out = eps ** float(g_tag[1])
    else:
        raise ValueError(f"unknown scaling tag {g_tag!r}")
    return float(out) if out.ndim == 0 else out


def kappa_of_g(g_tag):
    """Exponent kappa with x^kappa = lim g(x eps)/g(eps) as eps -> 0.

    Analytic for the built-in tags; estimated over an eps-ladder for a
    callable, with a non-convergence error when the ladder disagrees.
    """
    if g_tag == "square" or g_tag == "sq_log":
        return 2.0
    if g_tag == "abs":
        return 1.0
    if isinstance(g_tag, tuple) and g_tag[0] == "power":
        k = float(g_tag[1])
        if k <= 0:
            raise ValueError(f"power scaling needs kappa > 0, got {k}")
        return k
    if callable(g_tag):
        x = 2.0
        eps = 10.0 ** -np.arange(2.0, 9.0)
        est = np.array([math.log(g_tag(x * e) / g_tag(e)) / math.log(x)
                        for e in eps])
        # logarithmic factors in g leave 1/log(eps) corrections; fit them out
        u = 1.0 / np.log(eps)
        X = np.vstack([np.ones_like(u), u, u * u]).T
        coef, *_ = np.linalg.lstsq(X, est, rcond=None)
        resid = float(np.max(np.abs(X @ coef - est)))
        if resid > 1e-3:
            raise ValueError("scaling exponent of custom g did not converge "
                             f"(ladder misfit {resid:.2e}, estimates {est})")
        return float(coef[0])
    raise ValueError(f"unknown scaling tag {g_tag!r}")


# ---------------------------------------------------------------------------
# divergence quadrature

def _pair_nodes(family, theta_p, theta_q):
    """Quadrature data for the pair (f_{theta_p}, f_{theta_q}).

    Returns None when supports are disjoint, else (lp, lq, logw) at shared
    nodes over the support intersection, with edge distances kept exact for
    whichever density is singular at each end.
    """
    a, b = family.support
    tlo, thi = fam_mod._trimmed_support(family)
    lo_p = (a if math.isfinite(a) else tlo) + theta_p
    lo_q = (a if math.isfinite(a) else tlo) + theta_q
    hi_p = (b if math.isfinite(b) else thi) + theta_p
    hi_q = (b if math.isfinite(b) else thi) + theta_q
    lo, hi = max(lo_p, lo_q), min(hi_p, hi_q)
    if not hi > lo:
        return None
    bps = [c + t for c in family.breakpoints for t in (theta_p, theta_q)]
    nodes = panel_nodes(lo, hi, bps)

    def logpdf_for(theta):
        u = nodes.x - theta
        if math.isfinite(a):
            dl = nodes.dl + (lo - (a + theta))   # exact when this side is ours
        else:
            dl = np.full_like(nodes.x, math.inf)
        if math.isfinite(b):
            dr = nodes.dr + ((b + theta) - hi)
        else:
            dr = np.full_like(nodes.x, math.inf)
        return fam_mod._logpdf3(family, u, dl, dr)

    with np.errstate(divide="ignore"):
        logw = np.log(nodes.w)
    return logpdf_for(theta_p), logpdf_for(theta_q), logw


def _renyi_from_nodes(pair, s):
    lp, lq, logw = pair
    s = np.atleast_1d(np.asarray(s, dtype=float))
    vals = np.empty(s.shape)
    for i, si in enumerate(s):
        vals[i] = -logsumexp(si * lp + (1.0 - si) * lq + logw)
    return np.maximum(vals, 0.0)


def renyi_divergence(family, theta_p, theta_q, s):
    """I^s(f_{theta_p} || f_{theta_q}) for s in (0, 1); +inf when the shifted
    supports are disjoint."""
    s = float(s)
    if not 0.0 < s < 1.0:
        raise ValueError(f"order s must lie in (0, 1), got {s}")
    if theta_p == theta_q:
        return 0.0
    pair = _pair_nodes(family, float(theta_p), float(theta_q))
    if pair is None:
        return math.inf
    return float(_renyi_from_nodes(pair, s)[0])


def renyi_curve(family, theta, eps, s_grid):
    """Curve s -> I^s(f_{theta-eps/2} || f_{theta+eps/2}) on s_grid."""
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.size == 0:
        raise ValueError("empty s grid")
    if np.any(s_grid <= 0) or np.any(s_grid >= 1) or np.any(np.diff(s_grid) <= 0):
        raise ValueError("s grid must be strictly increasing inside (0, 1)")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    pair = _pair_nodes(family, theta - eps / 2.0, theta + eps / 2.0)
    if pair is None:
        return RenyiCurve(s_grid=s_grid, values=np.full(s_grid.shape, math.inf))
    return RenyiCurve(s_grid=s_grid, values=_renyi_from_nodes(pair, s_grid))


# ---------------------------------------------------------------------------
# ladder extrapolation

def _aitken_pass(r):
    out = []
    for j in range(len(r) - 2):
        d1, d2 = r[j + 1] - r[j], r[j + 2] - r[j + 1]
        if d1 * d2 > 0 and abs(d2) < abs(d1):
            out.append(r[j + 2] + d2 * d2 / (d1 - d2))
        else:
            out.append(r[j + 2])
    return out


def _extrapolate(ratios, eps_ladder, g_tag):
    r = np.asarray(ratios, dtype=float)
    growth = np.diff(r) > 0
    if growth.all() and np.all(r[1:] > 1.1 * r[:-1]):
        raise DivergenceError(
            "scaled divergences grow along the ladder; "
            f"check the scaling function (ratios {r})")
    spread = abs(r[-1] - r[-2])
    if g_tag == "sq_log":
        # corrections are a series in u = 1/(-log eps); fit out the first terms
        u = 1.0 / (-np.log(np.asarray(eps_ladder, dtype=float)))
        deg = 2 if len(r) >= 4 else 1
        cols = [np.ones_like(u)] + [u ** j for j in range(1, deg + 1)]
        coef, *_ = np.linalg.lstsq(np.vstack(cols).T, r, rcond=None)
        return float(coef[0]), spread
    # power-series corrections: iterated Aitken over the geometric ladder
    # peels off one geometric component per pass
    seq = list(r)
    while len(seq) >= 3:
        seq = _aitken_pass(seq)
    return float(seq[-1]), spread


def default_ladder(g_tag, family=None):
    base = DEFAULT_LOG_LADDER if g_tag == "sq_log" else DEFAULT_LADDER
    scale = 1.0
    if family is not None:
        a, b = family.support
        if math.isfinite(b - a):
            scale = b - a
    return tuple(e * scale for e in base)


def scaled_limit(family, theta, s, g_tag, eps_ladder=None):
    """Extrapolated limit of I^s(f_{theta-eps/2}||f_{theta+eps/2}) / g(eps).

    The ladder must be strictly decreasing with at least four rungs.
    """
    if eps_ladder is None:
        eps_ladder = default_ladder(g_tag, family)
    eps_ladder = tuple(float(e) for e in eps_ladder)
    if len(eps_ladder) < 4 or np.any(np.diff(eps_ladder) >= 0) or eps_ladder[-1] <= 0:
        raise ValueError("eps ladder must be >= 4 strictly decreasing positive rungs")
    rungs = []
    for eps in eps_ladder:
        pair = _pair_nodes(family, theta - eps / 2.0, theta + eps / 2.0)
        if pair is None:
            raise ValueError(f"shift eps={eps} exceeds the support overlap")
        rungs.append(_renyi_from_nodes(pair, s)[0] / g_value(g_tag, eps))
    value, unc = _extrapolate(rungs, eps_ladder, g_tag)
    return ExtrapolatedLimit(value=value, uncertainty=unc,
                             rung_values=np.asarray(rungs))


# ---------------------------------------------------------------------------
# closed forms per regime

def _betafn_vec(x, y):
    return np.exp(betaln(x, y))


def closed_form_isg(regime, A1, A2, kappa, s, fisher=None):
    """Closed-form I^s_g for the given edge regime; vectorized over s.

    Regimes: regular / semi_regular (needs ``fisher``), kappa_one,
    kappa_two, power_mid (1 < kappa < 2), power_low (0 < kappa < 1).
    Values extend continuously to s in {0, 1}.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(s > 1):
        raise ValueError("s must lie in [0, 1]")
    k = float(kappa)
    if regime in ("regular", "semi_regular"):
        if fisher is None:
            raise ValueError(f"regime {regime!r} needs the fisher information")
        if abs(k - 2.0) > 1e-9:
            raise ValueError(f"regime {regime!r} requires kappa = 2, got {k}")
        out = s * (1.0 - s) * fisher / 2.0
    elif regime == "kappa_one":
        if abs(k - 1.0) > 1e-9:
            raise ValueError(f"regime kappa_one requires kappa = 1, got {k}")
        out = A1 * s + A2 * (1.0 - s)
    elif regime == "kappa_two":
        if abs(k - 2.0) > 1e-9:
            raise ValueError(f"regime kappa_two requires kappa = 2, got {k}")
        out = (A1 + A2) * s * (1.0 - s) / 2.0
    elif regime == "power_mid":
        if not 1.0 < k < 2.0:
            raise ValueError(f"regime power_mid requires kappa in (1, 2), got {k}")
        out = (A1 * s * (1.0 - s * (k - 1.0)) * _betafn_vec(s + k * (1.0 - s), 2.0 - k)
               + A2 * (1.0 - s) * (1.0 - (1.0 - s) * (k - 1.0))
               * _betafn_vec(1.0 - s + k * s, 2.0 - k)) / k
    elif regime == "power_low":
        if not 0.0 < k < 1.0:
            raise ValueError(f"regime power_low requires kappa in (0, 1), got {k}")
        out = (1.0 - k) * (A1 * s * _betafn_vec(s + k * (1.0 - s), 1.0 - k)
                           + A2 * (1.0 - s) * _betafn_vec(1.0 - s + k * s, 1.0 - k)) / k
    else:
        raise ValueError(f"unknown regime {regime!r}; expected one of {_REGIMES}")
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def classify_regime(family):
    """Edge regime of a family, its effective (kappa, A1, A2), and the
    natural scaling function.

    When the two edges carry different exponents, the sharper edge (smaller
    kappa) dominates the small-shift divergence and the other side's
    amplitude is effectively zero at this scaling.
    """
    if family.regular:
        return RegimeInfo("regular", 2.0, 0.0, 0.0, "square",
                          fisher=fisher_information(family))
    edges = []
    if family.A1 > 0:
        edges.append(family.kappa1)
    if family.A2 > 0:
        edges.append(family.kappa2)
    if not edges:
        raise ValueError("family has no active power edge and is not regular")
    k = min(edges)
    a1 = family.A1 if (family.A1 > 0 and family.kappa1 <= k + 1e-9) else 0.0
    a2 = family.A2 if (family.A2 > 0 and family.kappa2 <= k + 1e-9) else 0.0
    if k > 2.0 + 1e-9:
        return RegimeInfo("semi_regular", 2.0, 0.0, 0.0, "square",
                          fisher=fisher_information(family))
    if abs(k - 1.0) <= 1e-9:
        return RegimeInfo("kappa_one", 1.0, a1, a2, "abs")
    if abs(k - 2.0) <= 1e-9:
        return RegimeInfo("kappa_two", 2.0, a1, a2, "sq_log")
    if 1.0 < k < 2.0:
        return RegimeInfo("power_mid", k, a1, a2, ("power", k))
    return RegimeInfo("power_low", k, a1, a2, ("power", k))


# ---------------------------------------------------------------------------
# scaling profiles

def _default_s_grid():
    body = np.linspace(0.025, 0.975, 39)
    edges = np.array([1e-4, 1e-3, 5e-3, 0.01, 0.99, 0.995, 0.999, 0.9999])
    return np.unique(np.concatenate([body, edges]))


def profile_from_closed_form(regime, A1, A2, kappa, fisher=None, theta=0.0,
                             s_grid=None):
    """Analytic scaling profile from the regime closed forms."""
    if s_grid is None:
        s_grid = _default_s_grid()
    s_grid = np.asarray(s_grid, dtype=float)
    fn = lambda s: closed_form_isg(regime, A1, A2, kappa, s, fisher=fisher)
    vals = np.asarray(fn(s_grid), dtype=float)
    g_tag = {"regular": "square", "semi_regular": "square",
             "kappa_one": "abs", "kappa_two": "sq_log"}.get(regime, ("power", kappa))
    return ScalingProfile(
        g_tag=g_tag, kappa=float(kappa), theta=float(theta), regime=regime,
        s_grid=s_grid, isg=vals, isg_unc=np.zeros_like(vals), isg_fn=fn,
        source="closed_form",
    )


def profile_from_family(family, theta=0.0, g_tag=None, s_grid=None,
                        eps_ladder=None):
    """Scaling profile tabulated from quadrature ladders of the family.

    Rung node data is computed once and reused, so the returned ``isg_fn``
    evaluates cheaply at arbitrary s (extrapolating the same ladder).
    """
    info = classify_regime(family)
    if g_tag is None:
        g_tag = info.g_tag
    kappa = kappa_of_g(g_tag)
    if eps_ladder is None:
        eps_ladder = default_ladder(g_tag, family)
    eps_ladder = tuple(float(e) for e in eps_ladder)
    if s_grid is None:
        s_grid = _default_s_grid()
    s_grid = np.asarray(s_grid, dtype=float)

    pairs, gvals = [], []
    for eps in eps_ladder:
        pair = _pair_nodes(family, theta - eps / 2.0, theta + eps / 2.0)
        if pair is None:
            raise ValueError(f"shift eps={eps} exceeds the support overlap")
        pairs.append(pair)
        gvals.append(g_value(g_tag, eps))

    def limit_at(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        rungs = np.stack([_renyi_from_nodes(p, s_arr) / g for p, g in zip(pairs, gvals)])
        vals = np.empty(s_arr.shape)
        uncs = np.empty(s_arr.shape)
        for j in range(s_arr.size):
            vals[j], uncs[j] = _extrapolate(rungs[:, j], eps_ladder, g_tag)
        return np.maximum(vals, 0.0), uncs

    isg, unc = limit_at(s_grid)

    def fn(s):
        vals, _ = limit_at(np.clip(s, 1e-9, 1.0 - 1e-9))
        return float(vals[0]) if np.ndim(s) == 0 else vals

    def rung_fn(i, s):
        s_arr = np.atleast_1d(np.clip(np.asarray(s, dtype=float), 1e-9, 1.0 - 1e-9))
        vals = _renyi_from_nodes(pairs[i], s_arr) / gvals[i]
        return float(vals[0]) if np.ndim(s) == 0 else vals

    return ScalingProfile(
        g_tag=g_tag, kappa=float(kappa), theta=float(theta), regime=info.regime,
        s_grid=s_grid, isg=isg, isg_unc=unc, isg_fn=fn, source="ladder",
        eps_ladder=eps_ladder, rung_fn=rung_fn,
    )
