"""Core data types shared by every pipeline stage, and solver-report parsing.

A candidate pool is made of components (solvers, instances, tests). Running a
solver on an instance yields a report; running a test on a reported solution
yields a boolean. Everything downstream (filtering, latent-class inference,
selection) consumes the outcome records defined here.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional


class Kind(enum.Enum):
    SOLVER = "solver"
    INSTANCE = "instance"
    TEST = "test"


class Origin(enum.Enum):
    REMOTE = "remote"
    FIXTURE = "fixture"
    SYNTHETIC = "synthetic"


class Status(enum.Enum):
    OPTIMAL = "OPTIMAL"
    TIME_LIMIT = "TIME_LIMIT"
    INFEASIBLE = "INFEASIBLE"


class Failure(enum.Enum):
    COMPILE_ERROR = "CompileError"
    RUNTIME_ERROR = "RuntimeError"
    TIMEOUT = "Timeout"
    MALFORMED_REPORT = "MalformedReport"


@dataclass(frozen=True)
class Component:
    """One generated artifact: a solver script, an instance payload, or a test script."""

    id: str
    kind: Kind
    payload: bytes
    origin: Origin = Origin.FIXTURE
    seed_tag: Optional[int] = None

    def __post_init__(self):
        if not self.payload:
            raise ValueError(f"component {self.id!r} has an empty payload")


@dataclass(frozen=True)
class SolveReport:
    """A solver's structured answer for one instance.

    INFEASIBLE carries neither objective nor solution; OPTIMAL and TIME_LIMIT
    carry both (the best incumbent found).
    """

    status: Status
    objective: Optional[float] = None
    solution: Any = None

    def __post_init__(self):
        if self.status is Status.INFEASIBLE:
            if self.objective is not None or self.solution is not None:
                raise ValueError("INFEASIBLE report must not carry objective/solution")
        else:
            if self.objective is None or self.solution is None:
                raise ValueError(f"{self.status.value} report needs objective and solution")

    @property
    def has_solution(self) -> bool:
        return self.status is not Status.INFEASIBLE


@dataclass(frozen=True)
class PairOutcome:
    """What happened when one solver ran on one instance."""

    interpretable: bool
    r: bool = False
    report: Optional[SolveReport] = None
    z: Optional[float] = None
    failure: Optional[Failure] = None

    def __post_init__(self):
        if self.r and (self.report is None or not self.report.has_solution):
            raise ValueError("r=True requires a report with a solution")
        if not self.interpretable and self.failure is None:
            raise ValueError("non-interpretable pair needs a failure reason")


@dataclass(frozen=True)
class TripleOutcome:
    """What happened when one test ran on one reported solution.

    ``passed`` is None when the pair produced no solution (the triple is
    still interpretable in that case).
    """

    interpretable: bool
    passed: Optional[bool] = None


@dataclass
class RawResults:
    """The cross-evaluation cube: one PairOutcome per (solver, instance) and
    one TripleOutcome per (solver, instance, test) where the pair reported a
    solution."""

    solver_ids: list[str]
    instance_ids: list[str]
    test_ids: list[str]
    pairs: dict[tuple[str, str], PairOutcome] = field(default_factory=dict)
    triples: dict[tuple[str, str, str], TripleOutcome] = field(default_factory=dict)


@dataclass
class ObservationSet:
    """Matrices consumed by the latent-class model, restricted to the
    filtered (fully interpretable) pools.

    r[s, i] says whether solver s reported a solution on instance i;
    counts[s, i] is the number of passed tests (defined where r is True);
    z[s, i] is the reported objective (defined where r is True).
    """

    solvers: list[str]
    instances: list[str]
    tests: list[str]
    r: Any  # bool array (S, I)
    counts: Any  # int array (S, I), valid where r
    z: Any  # float array (S, I), valid where r

    @property
    def n_tests(self) -> int:
        return len(self.tests)


@dataclass
class ModelParams:
    """Latent-class model parameters: instance feasibility rate, per-solver
    error/validity rates, and the two Beta-Binomial test-count components."""

    lam: float
    alpha: Any  # (S,) false-positive rate per solver
    beta: Any  # (S,) false-negative rate per solver
    gamma: Any  # (S,) validity rate per solver
    a0: float
    b0: float
    a1: float
    b1: float
    prior_a: float = 20.0
    prior_b: float = 2.0


@dataclass
class Posteriors:
    """Per-instance feasibility posteriors q, per-cell validity posteriors w
    (conditional on the instance being feasible, defined where r is True),
    and the observed-data log-posterior."""

    q: Any  # (I,)
    w: Any  # (S, I), valid where r
    loglik: float


@dataclass
class SolverMetrics:
    alpha: float
    beta: float
    gamma: float
    Z: float
    g: float
    pareto: bool


@dataclass
class SelectionReport:
    """Final per-solver scores, Pareto membership, and the chosen solver."""

    metrics: dict[str, SolverMetrics]
    z_max: float
    p_miss: float
    p_fail: float
    chosen: str


_STATUS_WORDS = {s.value: s for s in Status}


def parse_report(raw: bytes) -> SolveReport | Failure:
    """Parse raw solver output into a SolveReport, or flag it malformed.

    Total and deterministic: any byte sequence either decodes to a report
    whose fields are mutually consistent, or maps to
    ``Failure.MALFORMED_REPORT``. Never raises.
    """
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        return Failure.MALFORMED_REPORT
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, RecursionError):
        return Failure.MALFORMED_REPORT
    if not isinstance(doc, dict):
        return Failure.MALFORMED_REPORT

    status = doc.get("status")
    if not isinstance(status, str) or status not in _STATUS_WORDS:
        return Failure.MALFORMED_REPORT
    status = _STATUS_WORDS[status]

    objective = doc.get("objective")
    solution = doc.get("solution")

    if status is Status.INFEASIBLE:
        if objective is not None or solution is not None:
            return Failure.MALFORMED_REPORT
        return SolveReport(status=status)

    if isinstance(objective, bool) or not isinstance(objective, (int, float)):
        return Failure.MALFORMED_REPORT
    objective = float(objective)
    if not math.isfinite(objective):
        return Failure.MALFORMED_REPORT
    if solution is None:
        return Failure.MALFORMED_REPORT
    return SolveReport(status=status, objective=objective, solution=solution)


def serialize_report(report: SolveReport) -> bytes:
    """Inverse of parse_report for valid reports."""
    doc: dict[str, Any] = {"status": report.status.value}
    if report.has_solution:
        doc["objective"] = report.objective
        doc["solution"] = report.solution
    return json.dumps(doc, sort_keys=True).encode("utf-8")
