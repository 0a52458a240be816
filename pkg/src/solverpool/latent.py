"""Latent-class model over filtered cross-evaluation results.

Each instance carries a hidden feasibility flag; each reported solution on a
feasible instance carries a hidden validity flag. Solvers report with
per-solver false-positive/false-negative rates, and the number of passed
tests on a reported solution follows one of two Beta-Binomial components
depending on the hidden validity. Fitting is plain EM with a MAP prior on
the valid-class test pass rate that breaks the label-swap symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import math

import numpy as np
from scipy.special import betaln, digamma, gammaln

from .domain import ModelParams, ObservationSet, Posteriors, RawResults
from .filtering import FilterSolution

_SHAPE_LO, _SHAPE_HI = 1e-3, 1e6


@dataclass
class InitSpec:
    lambda0: float = 0.5
    alpha0: float = 0.1
    beta0: float = 0.1
    gamma0: float = 0.8
    shapes0: tuple[float, float, float, float] = (1.0, 3.0, 8.0, 2.0)  # a0, b0, a1, b1


@dataclass
class EmConfig:
    max_iters: int = 100
    tol: float = 1e-8
    clamp_eps: float = 1e-6
    prior_a: float = 20.0
    prior_b: float = 2.0
    init: InitSpec = field(default_factory=InitSpec)

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if not 0 < self.clamp_eps < 0.5:
            raise ValueError("clamp_eps must lie in (0, 0.5)")
        if not self.prior_a > self.prior_b > 0:
            raise ValueError("prior must satisfy prior_a > prior_b > 0")


@dataclass
class EmDiagnostics:
    iterations: int
    converged: bool
    loglik: float
    loglik_trace: list[float]


def build_observations(results: RawResults, filtered: FilterSolution) -> ObservationSet:
    """Slice the cross-evaluation cube down to the retained components and
    aggregate per-pair test pass counts."""
    solvers = list(filtered.keep_solvers)
    instances = list(filtered.keep_instances)
    tests = list(filtered.keep_tests)
    if not solvers or not instances:
        raise ValueError("filtered selection is empty")

    n_s, n_i = len(solvers), len(instances)
    r = np.zeros((n_s, n_i), dtype=bool)
    counts = np.zeros((n_s, n_i), dtype=np.int64)
    z = np.zeros((n_s, n_i), dtype=float)
    for si, sid in enumerate(solvers):
        for ii, iid in enumerate(instances):
            pair = results.pairs[(sid, iid)]
            if not pair.interpretable:
                raise ValueError(f"retained pair ({sid}, {iid}) is not interpretable")
            if not pair.r:
                continue
            r[si, ii] = True
            z[si, ii] = pair.z
            c = 0
            for tid in tests:
                triple = results.triples[(sid, iid, tid)]
                if not triple.interpretable:
                    raise ValueError(
                        f"retained triple ({sid}, {iid}, {tid}) is not interpretable"
                    )
                c += bool(triple.passed)
            counts[si, ii] = c
    return ObservationSet(solvers, instances, tests, r=r, counts=counts, z=z)


def log_beta_binomial(c, n: int, a: float, b: float):
    """log P(C = c) for C ~ BetaBinomial(n, a, b), via log-gamma.

    Vectorized over c. (c=0, n=0) gives 0, the empty-product convention.
    """
    if a <= 0 or b <= 0:
        raise ValueError("Beta-Binomial shapes must be positive")
    c = np.asarray(c)
    if np.any(c < 0) or np.any(c > n):
        raise ValueError("counts must lie in [0, n]")
    log_choose = gammaln(n + 1) - gammaln(c + 1) - gammaln(n - c + 1)
    return log_choose + betaln(c + a, n - c + b) - betaln(a, b)


def _log_beta_prior(a1: float, b1: float, prior_a: float, prior_b: float) -> float:
    """Log density of Beta(prior_a, prior_b) at mu = a1 / (a1 + b1)."""
    mu = a1 / (a1 + b1)
    return (
        (prior_a - 1) * math.log(mu)
        + (prior_b - 1) * math.log1p(-mu)
        - float(betaln(prior_a, prior_b))
    )


def _count_tables(theta: ModelParams, n: int):
    """Log Beta-Binomial mass tables over counts 0..n for both components."""
    grid = np.arange(n + 1)
    return (
        log_beta_binomial(grid, n, theta.a0, theta.b0),
        log_beta_binomial(grid, n, theta.a1, theta.b1),
    )


def e_step(theta: ModelParams, obs: ObservationSet) -> Posteriors:
    """Posterior feasibility per instance, posterior validity per reported
    cell (conditional on feasibility), and the observed-data log-posterior.

    All mixture arithmetic runs in log space; probabilities land in [0, 1]
    exactly.
    """
    r = obs.r
    n = obs.n_tests
    table0, table1 = _count_tables(theta, n)
    log_bb0 = np.where(r, table0[obs.counts], 0.0)
    log_bb1 = np.where(r, table1[obs.counts], 0.0)

    gamma = theta.gamma[:, None]
    log_l1 = np.log(gamma) + log_bb1
    log_l0 = np.log1p(-gamma) + log_bb0
    # w = L1 / (L1 + L0), stable through the log-odds.
    w = np.where(r, 1.0 / (1.0 + np.exp(np.clip(log_l0 - log_l1, -745, 745))), 0.0)
    log_mix = np.logaddexp(log_l1, log_l0)

    alpha = theta.alpha[:, None]
    beta = theta.beta[:, None]
    row_f1 = np.where(r, np.log1p(-beta) + log_mix, np.log(beta)).sum(axis=0)
    row_f0 = np.where(r, np.log(alpha) + log_bb0, np.log1p(-alpha)).sum(axis=0)

    log_num = np.log(theta.lam) + row_f1
    log_den = np.logaddexp(log_num, np.log1p(-theta.lam) + row_f0)
    q = np.exp(log_num - log_den)

    loglik = float(log_den.sum()) + _log_beta_prior(
        theta.a1, theta.b1, theta.prior_a, theta.prior_b
    )
    return Posteriors(q=q, w=w, loglik=loglik)


def _mom_shapes(w_c: np.ndarray, n: int) -> tuple[float, float]:
    """Method-of-moments Beta-Binomial start from count weights w_c[c]."""
    total = w_c.sum()
    grid = np.arange(n + 1)
    mean = float((w_c * grid).sum() / total)
    var = float((w_c * (grid - mean) ** 2).sum() / total)
    mu = min(max(mean / n, 1e-4), 1 - 1e-4)
    base = n * mu * (1 - mu)
    if base <= 0 or n <= 1:
        rho = 0.05
    else:
        rho = (var / base - 1.0) / (n - 1)
    rho = min(max(rho, 1e-4), 0.95)
    s = 1.0 / rho - 1.0
    a = mu * s
    b = (1 - mu) * s
    return (
        float(np.clip(a, _SHAPE_LO, _SHAPE_HI)),
        float(np.clip(b, _SHAPE_LO, _SHAPE_HI)),
    )


def _shape_objective(u, v, w_c, n, prior, grid=None):
    a, b = math.exp(u), math.exp(v)
    if grid is None:
        grid = np.arange(n + 1)
    ll = float((w_c * (betaln(grid + a, n - grid + b) - betaln(a, b))).sum())
    if prior is not None:
        ll += _log_beta_prior(a, b, *prior)
    return ll


def _trigamma(x):
    """psi'(x) for positive x: shift the argument up by 8 through the
    recurrence, then apply the asymptotic series. Branch-free and much
    faster than the generic polygamma route."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for j in range(8):
        out += 1.0 / np.square(x + j)
    y = x + 8.0
    inv = 1.0 / y
    inv2 = inv * inv
    out += inv * (
        1.0
        + inv * (0.5 + inv * (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0))))
    )
    return out


def _shape_derivs(u, v, w_c, n, prior, grid):
    """Gradient and Hessian of the weighted objective in (log a, log b)."""
    a, b = math.exp(u), math.exp(v)
    total = float(w_c.sum())
    m = n + 1
    args = np.concatenate([grid + a, n - grid + b, [n + a + b, a + b, a, b]])
    dg = digamma(args)
    tg = _trigamma(args)
    d_ab, d_s, d_a1, d_b1 = dg[2 * m], dg[2 * m + 1], dg[2 * m + 2], dg[2 * m + 3]
    t_ab, t_sum, t_a1, t_b1 = tg[2 * m], tg[2 * m + 1], tg[2 * m + 2], tg[2 * m + 3]
    fa = float(w_c @ dg[:m]) - total * d_ab + total * (d_s - d_a1)
    fb = float(w_c @ dg[m : 2 * m]) - total * d_ab + total * (d_s - d_b1)
    faa = float(w_c @ tg[:m]) - total * t_ab + total * (t_sum - t_a1)
    fbb = float(w_c @ tg[m : 2 * m]) - total * t_ab + total * (t_sum - t_b1)
    fab = -total * t_ab + total * t_sum
    if prior is not None:
        pa, pb = prior
        s = a + b
        fa += (pa - 1) / a - (pa + pb - 2) / s
        fb += (pb - 1) / b - (pa + pb - 2) / s
        faa += -(pa - 1) / a**2 + (pa + pb - 2) / s**2
        fbb += -(pb - 1) / b**2 + (pa + pb - 2) / s**2
        fab += (pa + pb - 2) / s**2
    # Chain rule into log coordinates.
    gu = a * fa
    gv = b * fb
    huu = a * fa + a * a * faa
    hvv = b * fb + b * b * fbb
    huv = a * b * fab
    return gu, gv, huu, huv, hvv


def _fit_shapes(w_c, n, start, prior, max_steps: int = 25):
    """Weighted Beta-Binomial MAP fit by damped Newton ascent in
    (log a, log b), tried from a method-of-moments start and from the
    incoming shapes; coarse-grid fallback when the ascent goes non-finite.

    A class with less than one cell's worth of total weight keeps its
    incoming shapes (the empty-class rule): the argmax is scale-invariant,
    so refitting on vanishing weights would collapse the class onto
    whatever few cells remain.
    """
    total = w_c.sum()
    if n == 0 or total < 1.0:
        return start
    grid = np.arange(n + 1)
    lo, hi = math.log(_SHAPE_LO), math.log(_SHAPE_HI)

    def ascend(a, b):
        u, v = math.log(a), math.log(b)
        val = _shape_objective(u, v, w_c, n, prior, grid)
        converged = False
        for _ in range(max_steps):
            gu, gv, huu, huv, hvv = _shape_derivs(u, v, w_c, n, prior, grid)
            gnorm = max(abs(gu), abs(gv))
            if gnorm < 1e-8 * (1 + abs(val)):
                converged = True
                break
            det = huu * hvv - huv * huv
            if det > 0 and huu < 0:  # negative definite: Newton direction
                du = -(hvv * gu - huv * gv) / det
                dv = -(huu * gv - huv * gu) / det
            else:
                du, dv = gu / gnorm, gv / gnorm
            step = 1.0
            improved = False
            for _ in range(20):
                nu = min(max(u + step * du, lo), hi)
                nv = min(max(v + step * dv, lo), hi)
                nval = _shape_objective(nu, nv, w_c, n, prior, grid)
                if math.isfinite(nval) and nval > val:
                    u, v, val = nu, nv, nval
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
        return (math.exp(u), math.exp(v)), val, converged

    best, best_val, warm_ok = ascend(*start)
    # Retry from a fresh method-of-moments start when the warm ascent
    # stalled, or when the MoM point itself already beats the warm optimum.
    mom = _mom_shapes(w_c, n)
    if not warm_ok or _shape_objective(
        math.log(mom[0]), math.log(mom[1]), w_c, n, prior, grid
    ) > best_val:
        cand, cand_val, _ = ascend(*mom)
        if cand_val > best_val:
            best, best_val = cand, cand_val
    if not math.isfinite(best_val):
        best, best_val = _grid_shapes(w_c, n, prior)
    # Never regress below the incoming shapes: EM stays monotone.
    if _shape_objective(math.log(start[0]), math.log(start[1]), w_c, n, prior,
                        grid) > best_val:
        return start
    return float(best[0]), float(best[1])


def _grid_shapes(w_c, n, prior):
    mus = np.linspace(0.05, 0.95, 19)
    concs = np.array([0.5, 1, 2, 5, 10, 25, 60, 150])
    best, best_val = (1.0, 1.0), -np.inf
    for mu in mus:
        for s in concs:
            a, b = mu * s, (1 - mu) * s
            val = _shape_objective(np.log(a), np.log(b), w_c, n, prior)
            if val > best_val:
                best_val = val
                best = (float(a), float(b))
    return best, best_val


def m_step(post: Posteriors, obs: ObservationSet, cfg: EmConfig, prev: ModelParams) -> ModelParams:
    """Closed-form updates for the rate parameters plus numeric MAP fits for
    the two Beta-Binomial components. Zero-denominator ratios keep the
    previous value; probabilities clamp to [eps, 1 - eps]."""
    eps = cfg.clamp_eps
    q = post.q
    w = post.w
    r = obs.r.astype(float)
    n = obs.n_tests

    lam = float(np.clip(q.mean(), eps, 1 - eps))

    def ratio(num, den, fallback):
        out = np.array(fallback, dtype=float, copy=True)
        ok = den > 1e-12
        out[ok] = num[ok] / den[ok]
        return np.clip(out, eps, 1 - eps)

    one_q = 1.0 - q
    alpha = ratio((one_q[None, :] * r).sum(axis=1), np.full(r.shape[0], one_q.sum()), prev.alpha)
    beta = ratio((q[None, :] * (1 - r)).sum(axis=1), np.full(r.shape[0], q.sum()), prev.beta)
    gamma = ratio(
        (q[None, :] * r * w).sum(axis=1), (q[None, :] * r).sum(axis=1), prev.gamma
    )

    # Aggregate cell weights by count value; the fit cost then no longer
    # depends on the pool sizes.
    cells = obs.r
    c_vals = obs.counts[cells]
    w1 = (q[None, :] * w)[cells]
    w0 = (one_q[None, :] + q[None, :] * (1.0 - w))[cells]
    w1_c = np.bincount(c_vals, weights=w1, minlength=n + 1)
    w0_c = np.bincount(c_vals, weights=w0, minlength=n + 1)

    a1, b1 = _fit_shapes(w1_c, n, (prev.a1, prev.b1), (cfg.prior_a, cfg.prior_b))
    a0, b0 = _fit_shapes(w0_c, n, (prev.a0, prev.b0), None)

    return ModelParams(
        lam=lam,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        a0=a0,
        b0=b0,
        a1=a1,
        b1=b1,
        prior_a=cfg.prior_a,
        prior_b=cfg.prior_b,
    )


def init_params(obs: ObservationSet, cfg: EmConfig) -> ModelParams:
    n_s = len(obs.solvers)
    init = cfg.init
    eps = cfg.clamp_eps
    a0, b0, a1, b1 = init.shapes0
    return ModelParams(
        lam=float(np.clip(init.lambda0, eps, 1 - eps)),
        alpha=np.full(n_s, np.clip(init.alpha0, eps, 1 - eps)),
        beta=np.full(n_s, np.clip(init.beta0, eps, 1 - eps)),
        gamma=np.full(n_s, np.clip(init.gamma0, eps, 1 - eps)),
        a0=a0,
        b0=b0,
        a1=a1,
        b1=b1,
        prior_a=cfg.prior_a,
        prior_b=cfg.prior_b,
    )


def fit_em(
    obs: ObservationSet, cfg: EmConfig | None = None
) -> tuple[ModelParams, Posteriors, EmDiagnostics]:
    """Alternate E and M steps until the relative log-posterior change drops
    below tolerance or the iteration cap is hit."""
    if cfg is None:
        cfg = EmConfig()
    if len(obs.solvers) == 0 or len(obs.instances) == 0:
        raise ValueError("observation set is empty")

    theta = init_params(obs, cfg)
    trace: list[float] = []
    converged = False
    iterations = 0
    for _ in range(cfg.max_iters):
        post = e_step(theta, obs)
        theta = m_step(post, obs, cfg, prev=theta)
        iterations += 1
        trace.append(post.loglik)
        if len(trace) >= 2:
            delta = abs(trace[-1] - trace[-2])
            if delta / max(1.0, abs(trace[-2])) < cfg.tol:
                converged = True
                break
    post = e_step(theta, obs)
    trace.append(post.loglik)
    diag = EmDiagnostics(
        iterations=iterations,
        converged=converged,
        loglik=post.loglik,
        loglik_trace=trace,
    )
    return theta, post, diag
