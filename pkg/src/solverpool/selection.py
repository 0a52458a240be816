"""Turn fitted model parameters into per-solver scores and a final pick.

Each solver gets a posterior-weighted expected objective, a scalarized score
combining that objective with miss/fail penalties, and Pareto membership
over (false-positive rate, false-negative rate, invalidity rate, expected
objective). The chosen solver minimizes the scalarized score.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .domain import (
    ModelParams,
    ObservationSet,
    Posteriors,
    SelectionReport,
    SolverMetrics,
)

AUTO = "auto"


class Sense(enum.Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


@dataclass
class SelectionConfig:
    p_miss: float | str = AUTO  # AUTO resolves to 10 * Z_max
    p_fail: float | str = AUTO
    sense: Sense = Sense.MINIMIZE


def estimate_Z(
    theta: ModelParams, post: Posteriors, obs: ObservationSet, sense: Sense = Sense.MINIMIZE
) -> tuple[np.ndarray, float]:
    """Posterior-weighted mean reported objective per solver, plus the
    maximum absolute objective reported anywhere.

    Solvers with no posterior mass on valid reports get the pessimistic
    Z_max sentinel.
    """
    r = obs.r
    if not r.any():
        raise ValueError("no solver reported any solution")
    z = obs.z if sense is Sense.MINIMIZE else -obs.z
    z_max = float(np.abs(obs.z[r]).max())

    weights = np.where(r, post.q[None, :] * post.w, 0.0)
    denom = weights.sum(axis=1)
    num = (weights * np.where(r, z, 0.0)).sum(axis=1)
    Z = np.full(r.shape[0], z_max)
    ok = denom > 1e-12
    Z[ok] = num[ok] / denom[ok]
    return Z, z_max


def scalarized_score(
    theta: ModelParams, s: int, Z_s: float, p_miss: float, p_fail: float
) -> float:
    """Expected objective with penalties for missing feasible instances and
    for reporting invalid solutions."""
    lam = theta.lam
    alpha = float(theta.alpha[s])
    beta = float(theta.beta[s])
    gamma = float(theta.gamma[s])
    return (
        lam * (1 - beta) * gamma * Z_s
        + lam * beta * p_miss
        + ((1 - lam) * alpha + lam * (1 - beta) * (1 - gamma)) * p_fail
    )


def pareto_front(metrics: np.ndarray) -> list[int]:
    """Indices of non-dominated rows; all columns are minimized.

    A row is dominated when some other row is <= on every column and < on
    at least one.
    """
    n = metrics.shape[0]
    front = []
    for i in range(n):
        dominated = False
        for j in range(n):
            if i == j:
                continue
            if np.all(metrics[j] <= metrics[i]) and np.any(metrics[j] < metrics[i]):
                dominated = True
                break
        if not dominated:
            front.append(i)
    return front


def resolve_penalties(cfg: SelectionConfig, z_max: float) -> tuple[float, float]:
    p_miss = 10.0 * z_max if cfg.p_miss == AUTO else float(cfg.p_miss)
    p_fail = 10.0 * z_max if cfg.p_fail == AUTO else float(cfg.p_fail)
    return p_miss, p_fail


def select(
    theta: ModelParams,
    post: Posteriors,
    obs: ObservationSet,
    cfg: SelectionConfig | None = None,
) -> SelectionReport:
    """Score every retained solver and pick the scalarized-score minimizer.

    Ties break toward lower alpha + beta, then lower solver index.
    """
    if cfg is None:
        cfg = SelectionConfig()
    Z, z_max = estimate_Z(theta, post, obs, cfg.sense)
    p_miss, p_fail = resolve_penalties(cfg, z_max)

    n_s = len(obs.solvers)
    g = np.array(
        [scalarized_score(theta, s, float(Z[s]), p_miss, p_fail) for s in range(n_s)]
    )
    coords = np.column_stack([theta.alpha, theta.beta, 1.0 - theta.gamma, Z])
    front = set(pareto_front(coords))

    order = sorted(
        range(n_s), key=lambda s: (g[s], theta.alpha[s] + theta.beta[s], s)
    )
    chosen = order[0]

    metrics = {
        obs.solvers[s]: SolverMetrics(
            alpha=float(theta.alpha[s]),
            beta=float(theta.beta[s]),
            gamma=float(theta.gamma[s]),
            Z=float(Z[s]),
            g=float(g[s]),
            pareto=s in front,
        )
        for s in range(n_s)
    }
    return SelectionReport(
        metrics=metrics,
        z_max=z_max,
        p_miss=p_miss,
        p_fail=p_fail,
        chosen=obs.solvers[chosen],
    )
