"""Synthetic ground-truth ensembles, solver grading, and the bootstrap
benchmark protocol.

The synthetic generator draws a full cross-evaluation cube from the same
generative assumptions the latent-class model fits, which makes it the
oracle for parameter recovery and selection-quality checks. The bootstrap
harness resamples component pools with replacement from a precomputed cube
and reruns filter -> fit -> select once per repetition, reporting
feasibility/optimality rates per grid point.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .domain import (
    Component,
    ObservationSet,
    PairOutcome,
    RawResults,
    SolveReport,
    Status,
    TripleOutcome,
)
from .filtering import BadTripleSet, EmptySelectionError, solve_filter
from .harness import ExecLimits, evaluate_pair
from .latent import EmConfig, fit_em
from .selection import SelectionConfig, select


class Quality(enum.Enum):
    OPTIMAL = "optimal"
    SUBOPTIMAL = "suboptimal"
    BROKEN = "broken"


@dataclass
class SolverProfile:
    alpha: float
    beta: float
    gamma: float
    quality: Quality
    objective_bias: float = 0.0


@dataclass
class TrueEnsembleSpec:
    """Ground-truth generative configuration for a synthetic ensemble."""

    lambda_true: float
    solvers: list[SolverProfile]
    shapes0: tuple[float, float]  # (a0, b0): invalid-solution test counts
    shapes1: tuple[float, float]  # (a1, b1): valid-solution test counts
    n_instances: int
    n_tests: int
    seed: int

    @property
    def n_solvers(self) -> int:
        return len(self.solvers)


@dataclass
class GroundTruth:
    feasible: np.ndarray  # (I,) bool
    true_optimum: np.ndarray  # (I,) float, latent optimum per instance
    quality: list[Quality]  # per solver
    valid: np.ndarray  # (S, I) bool, solution validity where reported


def reference_noise_spec(
    n_solvers: int = 50,
    n_instances: int = 100,
    n_tests: int = 20,
    seed: int = 0,
    frac_optimal: float = 0.2,
    frac_broken: float = 0.3,
) -> TrueEnsembleSpec:
    """Reference solver-pool noise profile used across the benchmark suite.

    Working solvers (optimal and suboptimal) report reliably and produce
    valid solutions; suboptimal ones carry a positive objective bias. Broken
    solvers over-report, under-report, and emit invalid solutions with junk
    objectives.
    """
    rng = np.random.default_rng(seed)
    n_opt = int(round(frac_optimal * n_solvers))
    n_bad = int(round(frac_broken * n_solvers))
    qualities = (
        [Quality.OPTIMAL] * n_opt
        + [Quality.BROKEN] * n_bad
        + [Quality.SUBOPTIMAL] * (n_solvers - n_opt - n_bad)
    )
    rng.shuffle(qualities)
    profiles = []
    for quality in qualities:
        if quality is Quality.BROKEN:
            profiles.append(
                SolverProfile(
                    alpha=float(rng.uniform(0.25, 0.75)),
                    beta=float(rng.uniform(0.1, 0.5)),
                    gamma=float(rng.uniform(0.05, 0.45)),
                    quality=quality,
                )
            )
        else:
            bias = 0.0 if quality is Quality.OPTIMAL else float(rng.uniform(5.0, 15.0))
            profiles.append(
                SolverProfile(alpha=0.0, beta=0.0, gamma=1.0, quality=quality,
                              objective_bias=bias)
            )
    return TrueEnsembleSpec(
        lambda_true=0.5,
        solvers=profiles,
        shapes0=(1.5, 4.5),
        shapes1=(18.0, 2.0),
        n_instances=n_instances,
        n_tests=n_tests,
        seed=seed,
    )


def gen_synthetic_ensemble(spec: TrueEnsembleSpec) -> tuple[RawResults, GroundTruth]:
    """Draw a full cross-evaluation cube plus its hidden labels.

    Deterministic in the spec seed; every cell is interpretable.
    """
    rng = np.random.default_rng(spec.seed)
    n_s, n_i, n_t = spec.n_solvers, spec.n_instances, spec.n_tests

    feasible = rng.random(n_i) < spec.lambda_true
    true_opt = rng.uniform(1.0, 100.0, size=n_i)

    alpha = np.array([p.alpha for p in spec.solvers])
    beta = np.array([p.beta for p in spec.solvers])
    gamma = np.array([p.gamma for p in spec.solvers])
    bias = np.array([p.objective_bias for p in spec.solvers])
    broken = np.array([p.quality is Quality.BROKEN for p in spec.solvers])

    u_report = rng.random((n_s, n_i))
    reported = np.where(feasible[None, :], u_report < (1 - beta)[:, None],
                        u_report < alpha[:, None])
    valid = (rng.random((n_s, n_i)) < gamma[:, None]) & reported & feasible[None, :]

    a0, b0 = spec.shapes0
    a1, b1 = spec.shapes1
    p_pass0 = rng.beta(a0, b0, size=(n_s, n_i))
    p_pass1 = rng.beta(a1, b1, size=(n_s, n_i))
    p_pass = np.where(valid, p_pass1, p_pass0)
    passes = rng.random((n_s, n_i, n_t)) < p_pass[:, :, None]

    junk = true_opt[None, :] * rng.uniform(0.5, 1.5, size=(n_s, n_i))
    z = true_opt[None, :] + bias[:, None]
    z = np.where(broken[:, None] | ~feasible[None, :], junk, z)

    solver_ids = [f"solver_{k:03d}" for k in range(n_s)]
    instance_ids = [f"instance_{k:03d}" for k in range(n_i)]
    test_ids = [f"test_{k:03d}" for k in range(n_t)]
    results = RawResults(solver_ids, instance_ids, test_ids)
    for s in range(n_s):
        for i in range(n_i):
            key = (solver_ids[s], instance_ids[i])
            if reported[s, i]:
                report = SolveReport(Status.OPTIMAL, float(z[s, i]), "synthetic")
                results.pairs[key] = PairOutcome(
                    interpretable=True, r=True, report=report, z=float(z[s, i])
                )
                for t in range(n_t):
                    results.triples[(solver_ids[s], instance_ids[i], test_ids[t])] = (
                        TripleOutcome(interpretable=True, passed=bool(passes[s, i, t]))
                    )
            else:
                results.pairs[key] = PairOutcome(
                    interpretable=True, r=False, report=SolveReport(Status.INFEASIBLE)
                )
    truth = GroundTruth(
        feasible=feasible,
        true_optimum=true_opt,
        quality=[p.quality for p in spec.solvers],
        valid=valid,
    )
    return results, truth


@dataclass
class EvalCube:
    """Dense-array view of a RawResults cube for fast bootstrap resampling."""

    solver_ids: list[str]
    instance_ids: list[str]
    test_ids: list[str]
    pair_interp: np.ndarray  # (S, I) bool
    r: np.ndarray  # (S, I) bool
    z: np.ndarray  # (S, I) float
    triple_interp: np.ndarray  # (S, I, T) bool
    tpass: np.ndarray  # (S, I, T) bool

    @classmethod
    def from_raw(cls, results: RawResults) -> "EvalCube":
        s_ix = {sid: k for k, sid in enumerate(results.solver_ids)}
        i_ix = {iid: k for k, iid in enumerate(results.instance_ids)}
        t_ix = {tid: k for k, tid in enumerate(results.test_ids)}
        shape = (len(s_ix), len(i_ix))
        pair_interp = np.zeros(shape, dtype=bool)
        r = np.zeros(shape, dtype=bool)
        z = np.zeros(shape, dtype=float)
        triple_interp = np.ones(shape + (len(t_ix),), dtype=bool)
        tpass = np.zeros(shape + (len(t_ix),), dtype=bool)
        for (sid, iid), pair in results.pairs.items():
            s, i = s_ix[sid], i_ix[iid]
            pair_interp[s, i] = pair.interpretable
            r[s, i] = pair.r
            if pair.r:
                z[s, i] = pair.z
        for (sid, iid, tid), triple in results.triples.items():
            s, i, t = s_ix[sid], i_ix[iid], t_ix[tid]
            triple_interp[s, i, t] = triple.interpretable
            tpass[s, i, t] = bool(triple.passed)
        return cls(
            list(results.solver_ids),
            list(results.instance_ids),
            list(results.test_ids),
            pair_interp,
            r,
            z,
            triple_interp,
            tpass,
        )


def resample_and_select(
    cube: EvalCube,
    n_solvers: int,
    n_instances: int,
    n_tests: int,
    rng: np.random.Generator,
    em_cfg: EmConfig | None = None,
    sel_cfg: SelectionConfig | None = None,
):
    """One bootstrap repetition: sample pools with replacement, filter, fit,
    select. Returns (sampled solver indices, chosen source index or None).

    Duplicates from resampling are kept as distinct rows/columns.
    """
    ss = rng.integers(0, len(cube.solver_ids), size=n_solvers)
    ii = rng.integers(0, len(cube.instance_ids), size=n_instances)
    tt = rng.integers(0, len(cube.test_ids), size=n_tests)

    pair_interp = cube.pair_interp[np.ix_(ss, ii)]
    r = cube.r[np.ix_(ss, ii)]
    z = cube.z[np.ix_(ss, ii)]
    tri_interp = cube.triple_interp[np.ix_(ss, ii, tt)]
    tpass = cube.tpass[np.ix_(ss, ii, tt)]

    keep_s = np.arange(n_solvers)
    keep_i = np.arange(n_instances)
    keep_t = np.arange(n_tests)
    bad_pairs = ~pair_interp
    bad_triples = r[:, :, None] & ~tri_interp
    if bad_pairs.any() or bad_triples.any():
        ids_s = [str(k) for k in range(n_solvers)]
        ids_i = [str(k) for k in range(n_instances)]
        ids_t = [str(k) for k in range(n_tests)]
        triples = [
            (int(s), int(i), int(t))
            for s, i, t in np.argwhere(bad_triples)
        ]
        for s, i in np.argwhere(bad_pairs):
            triples.extend((int(s), int(i), t) for t in range(n_tests))
        bad = BadTripleSet.from_triples(ids_s, ids_i, ids_t, triples)
        sol = solve_filter(bad)  # may raise EmptySelectionError
        keep_s = np.array([int(x) for x in sol.keep_solvers])
        keep_i = np.array([int(x) for x in sol.keep_instances])
        keep_t = np.array([int(x) for x in sol.keep_tests])

    r_k = r[np.ix_(keep_s, keep_i)]
    z_k = z[np.ix_(keep_s, keep_i)]
    counts = tpass[np.ix_(keep_s, keep_i, keep_t)].sum(axis=2)
    counts = np.where(r_k, counts, 0)
    obs = ObservationSet(
        solvers=[str(k) for k in keep_s],
        instances=[str(k) for k in keep_i],
        tests=[str(k) for k in keep_t],
        r=r_k,
        counts=counts.astype(np.int64),
        z=z_k,
    )
    theta, post, _ = fit_em(obs, em_cfg)
    report = select(theta, post, obs, sel_cfg)
    # obs.solvers holds sampled-pool positions as strings; map back to the
    # source pool through the resampling indices.
    chosen_source = int(ss[int(report.chosen)])
    return ss, chosen_source


@dataclass
class GridPointResult:
    n_solvers: int
    n_instances: int
    n_tests: int
    reps: int
    feasibility_rate: float
    optimality_rate: float
    perfect_selection_rate: float


@dataclass
class ExperimentResult:
    reps: int
    rows: list[GridPointResult] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            [
                "n_solvers",
                "n_instances",
                "n_tests",
                "reps",
                "feasibility_rate",
                "optimality_rate",
                "perfect_selection_rate",
            ]
        )
        for row in self.rows:
            writer.writerow(
                [
                    row.n_solvers,
                    row.n_instances,
                    row.n_tests,
                    row.reps,
                    f"{row.feasibility_rate:.6f}",
                    f"{row.optimality_rate:.6f}",
                    f"{row.perfect_selection_rate:.6f}",
                ]
            )
        return buf.getvalue()


def bootstrap_experiment(
    results: RawResults,
    truth: GroundTruth,
    grid: Sequence[tuple[int, int, int]],
    reps: int,
    seed: int,
    em_cfg: EmConfig | None = None,
    sel_cfg: SelectionConfig | None = None,
) -> ExperimentResult:
    """Resample pools with replacement reps times per grid point and measure
    how often the selected solver is ground-truth feasible/optimal.

    Per-repetition RNG streams derive from (seed, grid index, rep index), so
    results do not depend on execution order.
    """
    cube = EvalCube.from_raw(results)
    optimal_mask = np.array([q is Quality.OPTIMAL for q in truth.quality])
    feasible_mask = np.array([q is not Quality.BROKEN for q in truth.quality])

    out = ExperimentResult(reps=reps)
    for g_ix, (n_s, n_i, n_t) in enumerate(grid):
        n_feas = n_opt = n_perfect = 0
        for rep in range(reps):
            rng = np.random.default_rng((seed, g_ix, rep))
            try:
                ss, chosen = resample_and_select(
                    cube, n_s, n_i, n_t, rng, em_cfg, sel_cfg
                )
            except (EmptySelectionError, ValueError):
                rng2 = np.random.default_rng((seed, g_ix, rep))
                ss = rng2.integers(0, len(cube.solver_ids), size=n_s)
                chosen = None
            if optimal_mask[ss].any():
                n_perfect += 1
            if chosen is not None:
                n_feas += int(feasible_mask[chosen])
                n_opt += int(optimal_mask[chosen])
        out.rows.append(
            GridPointResult(
                n_solvers=n_s,
                n_instances=n_i,
                n_tests=n_t,
                reps=reps,
                feasibility_rate=n_feas / reps,
                optimality_rate=n_opt / reps,
                perfect_selection_rate=n_perfect / reps,
            )
        )
    return out


@dataclass
class Grade:
    feasible: bool
    optimal: bool


def grade_solver(
    solver: Component,
    instances: Sequence[Component],
    oracle,
    limits: ExecLimits,
    runner_cmd: Sequence[str],
    rel_tol: float = 1e-6,
) -> Grade:
    """Grade one solver against an exact reference oracle.

    Feasible: every run is interpretable and every reported solution passes
    the oracle's constraint check. Optimal: in addition, the solver's claim
    on every instance matches ground truth — a solution whose objective
    equals the true optimum when one exists, an infeasibility report when
    none does.

    The oracle must expose ``solve(instance_obj) -> (feasible, optimum)``
    and ``check(instance_obj, solution) -> bool``.
    """
    feasible = True
    optimal = True
    for inst in instances:
        inst_obj = json.loads(inst.payload.decode("utf-8"))
        truth_feasible, optimum = oracle.solve(inst_obj)
        outcome = evaluate_pair(solver, inst, limits, runner_cmd)
        if not outcome.interpretable:
            feasible = False
            optimal = False
            continue
        if outcome.r:
            if not oracle.check(inst_obj, outcome.report.solution):
                feasible = False
                optimal = False
            elif not truth_feasible:
                feasible = False
                optimal = False
            elif abs(outcome.z - optimum) > rel_tol * max(1.0, abs(optimum)):
                optimal = False
        else:
            if truth_feasible:
                optimal = False
    return Grade(feasible=feasible, optimal=optimal)
