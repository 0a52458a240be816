import numpy as np
import pytest

from solverpool.domain import ModelParams, ObservationSet, Posteriors
from solverpool.selection import (
    SelectionConfig,
    Sense,
    estimate_Z,
    pareto_front,
    scalarized_score,
    select,
)


def _params(lam, alpha, beta, gamma):
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    return ModelParams(
        lam=lam,
        alpha=alpha,
        beta=np.atleast_1d(np.asarray(beta, dtype=float)),
        gamma=np.atleast_1d(np.asarray(gamma, dtype=float)),
        a0=1.0,
        b0=3.0,
        a1=8.0,
        b1=2.0,
    )


def _obs(r, z, n_tests=3):
    r = np.asarray(r, dtype=bool)
    return ObservationSet(
        solvers=[f"s{k}" for k in range(r.shape[0])],
        instances=[f"i{k}" for k in range(r.shape[1])],
        tests=[f"t{k}" for k in range(n_tests)],
        r=r,
        counts=np.where(r, n_tests, 0),
        z=np.asarray(z, dtype=float),
    )


def _post(q, w):
    return Posteriors(q=np.asarray(q, dtype=float), w=np.asarray(w, dtype=float),
                      loglik=0.0)


def test_estimate_Z_single_report():
    obs = _obs([[True]], [[7.0]])
    post = _post([1.0], [[1.0]])
    Z, z_max = estimate_Z(_params(0.5, 0.1, 0.1, 0.9), post, obs)
    assert Z[0] == pytest.approx(7.0)
    assert z_max == pytest.approx(7.0)


def test_estimate_Z_weighted_mean():
    # Weights .8 and .2 over values 10 and 100: (8 + 20) / 1 = 28.
    obs = _obs([[True, True]], [[10.0, 100.0]])
    post = _post([0.8, 0.2], [[1.0, 1.0]])
    Z, _ = estimate_Z(_params(0.5, 0.1, 0.1, 0.9), post, obs)
    assert Z[0] == pytest.approx(28.0)


def test_estimate_Z_sentinel_for_zero_weight():
    # s1 reports only on instances believed infeasible: pessimistic sentinel.
    obs = _obs([[True, False], [False, True]], [[5.0, 0.0], [0.0, 50.0]])
    post = _post([1.0, 0.0], [[1.0, 0.0], [0.0, 1.0]])
    Z, z_max = estimate_Z(_params(0.5, [0.1, 0.1], [0.1, 0.1], [0.9, 0.9]), post, obs)
    assert z_max == pytest.approx(50.0)
    assert Z[0] == pytest.approx(5.0)
    assert Z[1] == pytest.approx(z_max)


def test_estimate_Z_requires_some_report():
    obs = _obs([[False]], [[0.0]])
    post = _post([0.5], [[0.0]])
    with pytest.raises(ValueError):
        estimate_Z(_params(0.5, 0.1, 0.1, 0.9), post, obs)


def test_scalarized_perfect_solver_reduces_to_Z():
    theta = _params(1.0, 0.0, 0.0, 1.0)
    assert scalarized_score(theta, 0, 10.0, 1000.0, 1000.0) == pytest.approx(10.0)


def test_scalarized_never_reporting_solver_pays_miss():
    theta = _params(1.0, 0.0, 1.0, 1.0)
    assert scalarized_score(theta, 0, 7.0, 1234.0, 999.0) == pytest.approx(1234.0)


def test_scalarized_hand_computed():
    # .5*.9*.8*100 + .5*.1*1000 + (.5*.2 + .5*.9*.2)*1000 = 36 + 50 + 190
    theta = _params(0.5, 0.2, 0.1, 0.8)
    assert scalarized_score(theta, 0, 100.0, 1000.0, 1000.0) == pytest.approx(276.0)


def test_scalarized_monotone_in_alpha():
    base = _params(0.5, 0.2, 0.1, 0.8)
    worse = _params(0.5, 0.35, 0.1, 0.8)
    assert scalarized_score(worse, 0, 50.0, 500.0, 500.0) >= scalarized_score(
        base, 0, 50.0, 500.0, 500.0
    )


def test_pareto_single_solver_kept():
    assert pareto_front(np.array([[0.1, 0.1, 0.1, 5.0]])) == [0]


def test_pareto_strict_domination():
    metrics = np.array([[0.1, 0.1, 0.1, 10.0], [0.2, 0.2, 0.2, 20.0]])
    assert pareto_front(metrics) == [0]


def test_pareto_incomparable_rows_all_kept():
    # Each row beats every other on at least one coordinate, so none is
    # dominated: pairwise enumeration keeps all three.
    metrics = np.array(
        [
            [0.1, 0.3, 0.1, 10.0],
            [0.3, 0.1, 0.1, 12.0],
            [0.2, 0.2, 0.2, 30.0],
        ]
    )
    assert pareto_front(metrics) == [0, 1, 2]


def test_pareto_prunes_dominated_middle():
    metrics = np.array(
        [
            [0.1, 0.3, 0.1, 10.0],
            [0.3, 0.1, 0.1, 12.0],
            [0.3, 0.3, 0.2, 30.0],  # dominated by row 0
        ]
    )
    assert pareto_front(metrics) == [0, 1]


def test_pareto_equal_rows_both_kept():
    metrics = np.array([[0.1, 0.1, 0.1, 5.0], [0.1, 0.1, 0.1, 5.0]])
    assert pareto_front(metrics) == [0, 1]


def test_select_perfect_beats_never_reporting():
    obs = _obs([[True, True], [False, False]], [[4.0, 6.0], [0.0, 0.0]])
    post = _post([1.0, 1.0], [[1.0, 1.0], [0.0, 0.0]])
    theta = _params(1.0 - 1e-6, [1e-6, 1e-6], [1e-6, 1 - 1e-6], [1 - 1e-6, 0.8])
    report = select(theta, post, obs)
    assert report.chosen == "s0"
    assert report.metrics["s0"].pareto


def test_select_tie_breaks_to_lower_index():
    obs = _obs([[True], [True]], [[5.0], [5.0]])
    post = _post([1.0], [[1.0], [1.0]])
    theta = _params(0.9, [0.1, 0.1], [0.1, 0.1], [0.9, 0.9])
    report = select(theta, post, obs)
    assert report.chosen == "s0"


def test_select_auto_penalties_are_ten_z_max():
    obs = _obs([[True]], [[12.0]])
    post = _post([1.0], [[1.0]])
    report = select(_params(0.9, 0.1, 0.1, 0.9), post, obs)
    assert report.p_miss == pytest.approx(120.0)
    assert report.p_fail == pytest.approx(120.0)
    explicit = select(
        _params(0.9, 0.1, 0.1, 0.9), post, obs, SelectionConfig(p_miss=7.0, p_fail=9.0)
    )
    assert explicit.p_miss == 7.0 and explicit.p_fail == 9.0


def test_select_chosen_on_pareto_front_with_equal_penalties():
    rng = np.random.default_rng(17)
    for _ in range(20):
        n_s, n_i = 5, 8
        r = rng.random((n_s, n_i)) < 0.8
        if not r.any():
            continue
        z = np.where(r, rng.uniform(1, 30, (n_s, n_i)), 0.0)
        obs = _obs(r, z)
        post = _post(
            rng.uniform(0.1, 1.0, n_i),
            np.where(r, rng.uniform(0.2, 1.0, (n_s, n_i)), 0.0),
        )
        theta = _params(
            rng.uniform(0.3, 0.9),
            rng.uniform(0.01, 0.5, n_s),
            rng.uniform(0.01, 0.5, n_s),
            rng.uniform(0.3, 0.99, n_s),
        )
        report = select(theta, post, obs)
        assert report.metrics[report.chosen].pareto


def test_select_scale_equivariance():
    rng = np.random.default_rng(23)
    n_s, n_i = 4, 6
    r = rng.random((n_s, n_i)) < 0.7
    r[0, 0] = True
    z = np.where(r, rng.uniform(1, 30, (n_s, n_i)), 0.0)
    q = rng.uniform(0.2, 1.0, n_i)
    w = np.where(r, rng.uniform(0.2, 1.0, (n_s, n_i)), 0.0)
    theta = _params(
        0.6,
        rng.uniform(0.01, 0.4, n_s),
        rng.uniform(0.01, 0.4, n_s),
        rng.uniform(0.4, 0.99, n_s),
    )
    a = select(theta, _post(q, w), _obs(r, z))
    b = select(theta, _post(q, w), _obs(r, 3.5 * z))
    assert a.chosen == b.chosen


def test_select_maximize_negates_objective():
    obs = _obs([[True], [True]], [[5.0], [9.0]])
    post = _post([1.0], [[1.0], [1.0]])
    theta = _params(1 - 1e-6, [1e-6, 1e-6], [1e-6, 1e-6], [1 - 1e-6, 1 - 1e-6])
    lo = select(theta, post, obs, SelectionConfig(sense=Sense.MINIMIZE))
    hi = select(theta, post, obs, SelectionConfig(sense=Sense.MAXIMIZE))
    assert lo.chosen == "s0"
    assert hi.chosen == "s1"
