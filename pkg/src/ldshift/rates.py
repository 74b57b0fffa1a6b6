"""First exponential rates of estimators and tests: Monte Carlo tail-rate
regression, the Chernoff-integral MLE rates, order-statistic closed forms,
the likelihood-ratio estimator identity, and the hypothesis-testing
exponents (Chernoff sum-of-errors, Hoeffding trade-off).

Monte Carlo conventions: per-(n) generator seeded from (root seed, n), so
results are bit-identical regardless of chunking; the tail regression fits
-log p_hat = beta n + gamma log n + c by event-count-weighted least squares
(the log n nuisance absorbs the sqrt(n) prefactor of mean-type statistics,
which otherwise biases the slope well beyond the target tolerances).
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from . import families as fam_mod
from .estimators import EstimatorSpec, estimate_many
from .families import cdf
from .quadrature import panel_nodes

__all__ = [
    "InsufficientEventsError",
    "WindowError",
    "TailRateEstimate",
    "OrderStatRates",
    "HoeffdingRate",
    "HtSimResult",
    "Alpha2Estimate",
    "mc_tail_rate",
    "mle_chernoff_rate",
    "order_stat_rates",
    "lr_rate_identity",
    "chernoff_test_rate",
    "hoeffding_rate",
    "ht_simulate",
    "alpha2_estimate",
]

_DEFAULT_N_GRID = (8, 16, 32, 64, 128, 256, 384)
_MIN_EVENTS = 10
_CHUNK_VALUES = 4_000_000  # matrix entries per simulation chunk


class InsufficientEventsError(RuntimeError):
    """No tail events observed on either side at any sample size."""


class WindowError(ValueError):
    """An order-statistic integration window leaves the support."""


@dataclass(frozen=True)
class TailRateEstimate:
    beta_plus: float
    beta_minus: float
    beta: float
    slope_stderr: float
    n_grid: tuple
    p_plus: np.ndarray
    p_minus: np.ndarray
    trials: int
    seed: int


@dataclass(frozen=True)
class OrderStatRates:
    eps: float
    min_shift_plus: float
    min_shift_minus: float
    max_shift_plus: float
    max_shift_minus: float
    combo_plus: Optional[float] = None
    combo_minus: Optional[float] = None
    lam: Optional[float] = None


@dataclass(frozen=True)
class HoeffdingRate:
    value: float
    s_star: float
    at_boundary: bool
    clamped: bool


@dataclass(frozen=True)
class HtSimResult:
    slope: float
    stderr: float
    n_grid: tuple
    error_sums: np.ndarray
    trials: int
    seed: int


@dataclass(frozen=True)
class Alpha2Estimate:
    value: float
    rung_values: np.ndarray
    eps_ladder: tuple
    window_spread: float


# ---------------------------------------------------------------------------
# tail-rate regression

def _fit_rate(n_arr, counts, trials):
    """Weighted fit of -log p_hat = beta n + gamma log n + c.

    Keeps points with >= _MIN_EVENTS events; weights are inverse delta-method
    variances (1-p)/(p * trials).  Returns (slope, stderr); slope is +inf
    when no events were seen at any n.
    """
    n_arr = np.asarray(n_arr, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if counts.sum() == 0:
        return math.inf, 0.0
    keep = counts >= _MIN_EVENTS
    if keep.sum() == 0:
        keep = counts > 0
    n_k = n_arr[keep]
    p_k = counts[keep] / trials
    y = -np.log(p_k)
    if n_k.size == 1:
        return float(y[0] / n_k[0]), float("nan")
    var = np.maximum((1.0 - p_k) / (p_k * trials), 1e-12)
    w = 1.0 / var
    if n_k.size == 2:
        slope = (y[1] - y[0]) / (n_k[1] - n_k[0])
        err = math.sqrt(var[0] + var[1]) / abs(n_k[1] - n_k[0])
        return float(slope), float(err)
    X = np.vstack([n_k, np.log(n_k), np.ones_like(n_k)]).T
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(X * sw[:, None], y * sw, rcond=None)
    cov = np.linalg.inv(X.T @ (X * w[:, None]))
    return float(coef[0]), float(math.sqrt(cov[0, 0]))


def _child_seeds(seed, count):
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


def mc_tail_rate(family, spec, theta, eps, n_grid=None, trials=100_000,
                 seed=0):
    """Empirical tail exponents of an estimator.

    For each n, simulates ``trials`` batches and counts {T > theta + eps}
    and {T < theta - eps}; the per-side slopes of -log p_hat come from the
    weighted regression above.  A side with zero events everywhere reports
    the +inf marker; both sides empty raises InsufficientEventsError.
    """
    if n_grid is None:
        n_grid = _DEFAULT_N_GRID
    n_grid = tuple(int(n) for n in n_grid)
    if len(n_grid) < 1 or any(np.diff(n_grid) <= 0):
        raise ValueError("n_grid must be strictly increasing")
    trials = int(trials)
    up, dn = theta + eps, theta - eps
    counts_p = np.zeros(len(n_grid))
    counts_m = np.zeros(len(n_grid))
    for i, n in enumerate(n_grid):
        rng = np.random.default_rng(np.random.SeedSequence((seed, n)))
        chunk = max(1, _CHUNK_VALUES // n)
        done = 0
        while done < trials:
            m = min(chunk, trials - done)
            X = fam_mod._draw(family, rng, m * n).reshape(m, n) + theta
            t_hat = estimate_many(spec, family, X)
            counts_p[i] += np.count_nonzero(t_hat > up)
            counts_m[i] += np.count_nonzero(t_hat < dn)
            done += m
    if counts_p.sum() == 0 and counts_m.sum() == 0:
        raise InsufficientEventsError(
            f"no tail events for {spec.kind} at eps={eps} with n up to {n_grid[-1]}")
    beta_p, err_p = _fit_rate(n_grid, counts_p, trials)
    beta_m, err_m = _fit_rate(n_grid, counts_m, trials)
    beta = min(beta_p, beta_m)
    err = err_p if beta_p <= beta_m else err_m
    return TailRateEstimate(
        beta_plus=beta_p, beta_minus=beta_m, beta=beta, slope_stderr=err,
        n_grid=n_grid, p_plus=counts_p / trials, p_minus=counts_m / trials,
        trials=trials, seed=int(seed),
    )


# ---------------------------------------------------------------------------
# analytic rates

def _chernoff_objective(family, eps, side):
    """F(t) = -log int exp(-+ t score) f over the shifted window (concave)."""
    a, b = family.support
    lo_t, hi_t = fam_mod._trimmed_support(family)
    if side == "plus":
        lo_w = (a if math.isfinite(a) else lo_t) + eps
        hi_w = b if math.isfinite(b) else hi_t
    else:
        lo_w = a if math.isfinite(a) else lo_t
        hi_w = (b if math.isfinite(b) else hi_t) - eps
    if not hi_w > lo_w:
        raise WindowError(f"eps={eps} exceeds the support width")
    bps = [c + d for c in family.breakpoints for d in (0.0, eps if side == "plus" else -eps)]
    nodes = panel_nodes(lo_w, hi_w, bps)
    # density at x; score at x -+ eps (its singular edge sits at distance eps
    # outside the window on the side where exp(-+ t score) would blow up)
    if side == "plus":
        dl_f, dr_f = nodes.dl + eps, nodes.dr
        dl_s, dr_s = nodes.dl, nodes.dr + eps
        u_s = nodes.x - eps
    else:
        dl_f, dr_f = nodes.dl, nodes.dr + eps
        dl_s, dr_s = nodes.dl + eps, nodes.dr
        u_s = nodes.x + eps
    if not math.isfinite(a):
        dl_f = dl_s = np.full_like(nodes.x, math.inf)
    if not math.isfinite(b):
        dr_f = dr_s = np.full_like(nodes.x, math.inf)
    lf = fam_mod._logpdf3(family, nodes.x, dl_f, dr_f)
    sc = fam_mod._score3(family, u_s, dl_s, dr_s)
    sign = -1.0 if side == "plus" else 1.0
    with np.errstate(divide="ignore"):
        lw = np.log(nodes.w)

    def F(t):
        return -float(logsumexp(sign * t * sc + lf + lw))

    return F


def mle_chernoff_rate(family, eps, side, t_tol=1e-10):
    """Analytic half-side exponent of the MLE for a log-concave family:
    sup over t >= 0 of -log int exp(-+ t f'(x -+ eps)/f(x -+ eps)) f(x) dx."""
    if not family.log_concave:
        raise ValueError(f"mle rate needs a log-concave family, got {family.kind}")
    if side not in ("plus", "minus"):
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    if eps == 0:
        return 0.0
    F = _chernoff_objective(family, eps, side)
    # grow the bracket until the concave objective has turned over
    t_hi = 1.0
    for _ in range(60):
        if F(t_hi) < F(t_hi / 2.0):
            break
        t_hi *= 2.0
    lo, hi = 0.0, t_hi
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - gr * (hi - lo), lo + gr * (hi - lo)
    fc, fd = F(c), F(d)
    while hi - lo > t_tol * max(1.0, hi):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - gr * (hi - lo)
            fc = F(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + gr * (hi - lo)
            fd = F(d)
    best = max(F(0.5 * (lo + hi)), F(0.0))
    return float(best)


def order_stat_rates(family, eps, lam=None):
    """Closed-form half-side rates of min(x)-a, max(x)-b, and their convex
    combination on a bounded support: -log of the density mass left in the
    shrunk window."""
    a, b = family.support
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("order-statistic rates need a bounded support")
    width = b - a
    if not 0.0 < eps < width:
        raise WindowError(f"eps={eps} outside (0, {width})")
    min_plus = -math.log(float(cdf(family, b - eps)))
    max_minus = -math.log(1.0 - float(cdf(family, a + eps)))
    combo_plus = combo_minus = None
    if lam is not None:
        if not 0.0 < lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {lam}")
        if eps / (1.0 - lam) >= width or eps / lam >= width:
            raise WindowError(
                f"combo window exceeds support: eps={eps}, lambda={lam}, width={width}")
        combo_plus = -math.log(float(cdf(family, b - eps / (1.0 - lam))))
        combo_minus = -math.log(1.0 - float(cdf(family, a + eps / lam)))
    return OrderStatRates(
        eps=float(eps), min_shift_plus=min_plus, min_shift_minus=math.inf,
        max_shift_plus=math.inf, max_shift_minus=max_minus,
        combo_plus=combo_plus, combo_minus=combo_minus, lam=lam,
    )


# ---------------------------------------------------------------------------
# hypothesis-testing exponents

def _pair_nodes_2fam(p_point, q_point):
    """Shared quadrature data for two (family, theta) hypothesis points."""
    fam_p, tp = p_point
    fam_q, tq = q_point
    ends = []
    for fam, t in ((fam_p, tp), (fam_q, tq)):
        a, b = fam.support
        lo_t, hi_t = fam_mod._trimmed_support(fam)
        ends.append(((a if math.isfinite(a) else lo_t) + t,
                     (b if math.isfinite(b) else hi_t) + t))
    lo = max(e[0] for e in ends)
    hi = min(e[1] for e in ends)
    if not hi > lo:
        return None
    bps = [c + t for fam, t in ((fam_p, tp), (fam_q, tq)) for c in fam.breakpoints]
    nodes = panel_nodes(lo, hi, bps)

    def logpdf_for(fam, t):
        a, b = fam.support
        u = nodes.x - t
        dl = nodes.dl + (lo - (a + t)) if math.isfinite(a) else np.full_like(u, math.inf)
        dr = nodes.dr + ((b + t) - hi) if math.isfinite(b) else np.full_like(u, math.inf)
        return fam_mod._logpdf3(fam, u, dl, dr)

    with np.errstate(divide="ignore"):
        lw = np.log(nodes.w)
    return logpdf_for(fam_p, tp), logpdf_for(fam_q, tq), lw


def _renyi_pair(pair, s):
    lp, lq, lw = pair
    return max(0.0, -float(logsumexp(s * lp + (1.0 - s) * lq + lw)))


def _golden_max_s(fn, lo=1e-7, hi=1.0 - 1e-7):
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(80):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = fn(d)
    s = 0.5 * (a + b)
    return fn(s), s


def chernoff_test_rate(p_point, q_point):
    """Best exponent of the summed testing errors: sup_s I^s(p||q); +inf
    when the supports are disjoint."""
    fam_p, tp = p_point
    fam_q, tq = q_point
    if fam_p is fam_q and tp == tq:
        return 0.0
    pair = _pair_nodes_2fam(p_point, q_point)
    if pair is None:
        return math.inf
    value, _ = _golden_max_s(lambda s: _renyi_pair(pair, s))
    return float(value)


def hoeffding_rate(p_point, q_point, r):
    """Best second-error exponent under first-error constraint r:
    sup_s (-s r + I^s(p||q)) / (1 - s), floored at zero."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    pair = _pair_nodes_2fam(p_point, q_point)
    if pair is None:
        return HoeffdingRate(value=math.inf, s_star=0.5, at_boundary=False,
                             clamped=False)

    def objective(s):
        return (-s * r + _renyi_pair(pair, s)) / (1.0 - s)

    # scan catches suprema in the interior; the s -> 1 probe the boundary case
    grid = np.concatenate([np.linspace(0.01, 0.99, 50), [1.0 - 1e-6]])
    vals = np.array([objective(s) for s in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    value, s_star = _golden_max_s(objective, lo, hi)
    if vals[i] > value:
        value, s_star = float(vals[i]), float(grid[i])
    at_boundary = s_star > 1.0 - 1e-4
    clamped = value < 0.0
    return HoeffdingRate(value=max(value, 0.0), s_star=float(s_star),
                         at_boundary=at_boundary, clamped=clamped)


def ht_simulate(p_point, q_point, n_grid=None, trials=100_000, seed=0):
    """Simulate the likelihood test {p^n >= q^n} (ties accept) and regress
    -log(e1 + e2) on n."""
    if n_grid is None:
        n_grid = (8, 16, 24, 32, 40, 48)
    n_grid = tuple(int(n) for n in n_grid)
    trials = int(trials)
    fam_p, tp = p_point
    fam_q, tq = q_point
    sums = np.zeros(len(n_grid))
    for i, n in enumerate(n_grid):
        rng_p = np.random.default_rng(np.random.SeedSequence((seed, n, 0)))
        rng_q = np.random.default_rng(np.random.SeedSequence((seed, n, 1)))
        chunk = max(1, _CHUNK_VALUES // n)
        done = 0
        e1 = e2 = 0
        while done < trials:
            m = min(chunk, trials - done)
            Xp = fam_mod._draw(fam_p, rng_p, m * n).reshape(m, n) + tp
            Xq = fam_mod._draw(fam_q, rng_q, m * n).reshape(m, n) + tq
            e1 += np.count_nonzero(_llr_rows(p_point, q_point, Xp) < 0)
            e2 += np.count_nonzero(_llr_rows(p_point, q_point, Xq) >= 0)
            done += m
        sums[i] = e1 + e2
    if sums.sum() == 0:
        raise InsufficientEventsError("no testing errors observed at any n")
    slope, err = _fit_rate(n_grid, sums, trials)
    return HtSimResult(slope=slope, stderr=err, n_grid=n_grid,
                       error_sums=sums, trials=trials, seed=int(seed))


def _llr_rows(p_point, q_point, X):
    fam_p, tp = p_point
    fam_q, tq = q_point
    lp = fam_mod._logpdf_plain(fam_p, X - tp)
    lq = fam_mod._logpdf_plain(fam_q, X - tq)
    with np.errstate(invalid="ignore"):
        d = lp - lq
    # points outside both supports cannot occur under either hypothesis
    return np.sum(d, axis=1)


def lr_rate_identity(family, theta, eps, n_grid=None, trials=20_000, seed=0):
    """Compare the likelihood-ratio estimator's Monte Carlo rate (lhs)
    against sup_s I^s(f_{theta-eps} || f_{theta+eps}) (rhs)."""
    rhs = chernoff_test_rate((family, theta - eps), (family, theta + eps))
    est = mc_tail_rate(family, EstimatorSpec("lr", eps=eps), theta, eps,
                       n_grid=n_grid, trials=trials, seed=seed)
    return est.beta, rhs


# ---------------------------------------------------------------------------
# the empirical interval-estimation rate

def alpha2_estimate(family, spec, theta, g_tag, eps_ladder=None, n_grid=None,
                    trials=100_000, seed=0):
    """Empirical stand-in for the interval-estimation rate: beta(spec, eps)
    divided by g(eps) along a shrinking ladder; the reported value is the
    final rung.

    The infimum over the eps-window of shift centers collapses for location
    families; agreement of the window endpoints is measured on the first
    rung and reported as ``window_spread``.  Estimators parameterized by a
    shrinking shift (lr, shifted_min) track the rung eps.
    """
    from .renyi import default_ladder, g_value  # local import: avoid cycle

    if eps_ladder is None:
        eps_ladder = tuple(e for e in default_ladder("abs", family))
    eps_ladder = tuple(float(e) for e in eps_ladder)
    seeds = _child_seeds(seed, 2 * len(eps_ladder) + 2)
    rungs = []
    window_spread = 0.0
    for idx, eps in enumerate(eps_ladder):
        spec_eff = replace(spec, eps=eps) if spec.kind in ("lr", "shifted_min") else spec
        est = mc_tail_rate(family, spec_eff, theta, eps, n_grid=n_grid,
                           trials=trials, seed=seeds[idx])
        rungs.append(est.beta / float(g_value(g_tag, eps)))
        if idx == 0:
            lo = mc_tail_rate(family, spec_eff, theta - eps, eps, n_grid=n_grid,
                              trials=trials, seed=seeds[-1])
            hi = mc_tail_rate(family, spec_eff, theta + eps, eps, n_grid=n_grid,
                              trials=trials, seed=seeds[-2])
            finite = [v for v in (lo.beta, hi.beta, est.beta) if math.isfinite(v)]
            window_spread = (max(finite) - min(finite)) / max(max(finite), 1e-12)
    return Alpha2Estimate(value=float(rungs[-1]), rung_values=np.asarray(rungs),
                          eps_ladder=eps_ladder, window_spread=float(window_spread))
