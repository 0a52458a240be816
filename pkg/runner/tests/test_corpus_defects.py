"""Every corpus component must behave as its declared taxonomy says, both
under the host-side harness classification and under reference grading."""

import pytest

from corpus_helpers import load_component
from solverpool.bench import grade_solver
from solverpool.domain import Failure, Kind
from solverpool.harness import ExecLimits, evaluate_pair, evaluate_triple
from wscp_runner.corpus import DEFECTIVE_SOLVERS, TAXONOMY, decodable_instances
from wscp_runner.wscp import WscpOracle

LIMITS = ExecLimits(solver_timeout=5.0, test_timeout=5.0, max_workers=4)
SLOW_LIMITS = ExecLimits(solver_timeout=1.0, test_timeout=1.0, max_workers=4)


def _instances():
    return [load_component(Kind.INSTANCE, name) for name in decodable_instances()]


def _grade(solver_name, runner_cmd, limits=LIMITS):
    return grade_solver(
        load_component(Kind.SOLVER, solver_name),
        _instances(),
        WscpOracle(),
        limits,
        runner_cmd,
    )


def test_exact_solver_grades_clean(runner_cmd):
    grade = _grade("exact.py", runner_cmd)
    assert grade.feasible and grade.optimal


def test_greedy_is_feasible_but_suboptimal(runner_cmd):
    grade = _grade("greedy.py", runner_cmd)
    assert grade.feasible and not grade.optimal


def test_k_ignoring_produces_invalid_solutions(runner_cmd):
    grade = _grade("k_ignoring.py", runner_cmd)
    assert not grade.feasible and not grade.optimal


def test_over_reporter_fails_on_infeasible_instances(runner_cmd):
    grade = _grade("over_reporter.py", runner_cmd)
    assert not grade.feasible and not grade.optimal


def test_under_reporter_misses_feasible_instances(runner_cmd):
    grade = _grade("under_reporter.py", runner_cmd)
    assert grade.feasible  # it never emits an invalid solution
    assert not grade.optimal


@pytest.mark.parametrize("name", ["crasher.py", "malformed_report.py", "slow.py"])
def test_broken_solvers_fail_grading(runner_cmd, name):
    grade = _grade(name, runner_cmd, limits=SLOW_LIMITS)
    assert not grade.feasible and not grade.optimal


def test_every_defective_solver_is_witnessed(runner_cmd):
    for name in DEFECTIVE_SOLVERS:
        grade = _grade(name, runner_cmd, limits=SLOW_LIMITS)
        assert not (grade.feasible and grade.optimal), name


def test_harness_classification_matches_taxonomy(runner_cmd):
    inst = load_component(Kind.INSTANCE, "i01_feasible_k0.json")
    by_failure = {
        "crasher.py": Failure.RUNTIME_ERROR,
        "malformed_report.py": Failure.MALFORMED_REPORT,
        "slow.py": Failure.TIMEOUT,
    }
    for name, failure in by_failure.items():
        out = evaluate_pair(
            load_component(Kind.SOLVER, name), inst, SLOW_LIMITS, runner_cmd
        )
        assert not out.interpretable
        assert out.failure is failure, name

    pair = evaluate_pair(
        load_component(Kind.SOLVER, "exact.py"), inst, LIMITS, runner_cmd
    )
    assert pair.interpretable and pair.r
    verdicts = {}
    for name in TAXONOMY["tests"]:
        out = evaluate_triple(
            load_component(Kind.TEST, name), inst, pair, LIMITS, runner_cmd
        )
        verdicts[name] = (out.interpretable, out.passed)
    assert verdicts["t1_correct.py"] == (True, True)
    assert verdicts["t2_objective_only.py"] == (True, True)
    assert verdicts["t3_always_true.py"] == (True, True)
    assert verdicts["t4_inverted.py"] == (True, False)
    assert verdicts["t5_crasher.py"] == (False, None)
    assert verdicts["t6_nonbool.py"] == (False, None)


def test_undecodable_instance_is_compile_error(runner_cmd):
    out = evaluate_pair(
        load_component(Kind.SOLVER, "exact.py"),
        load_component(Kind.INSTANCE, "i12_malformed.json"),
        LIMITS,
        runner_cmd,
    )
    assert not out.interpretable
    assert out.failure is Failure.COMPILE_ERROR


def test_corpus_sizes_meet_contract():
    assert len(TAXONOMY["solvers"]) >= 8
    assert len(TAXONOMY["instances"]) >= 12
    assert len(TAXONOMY["tests"]) >= 6
