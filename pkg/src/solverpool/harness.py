"""Cross-evaluation of candidate pools through isolated child processes.

Candidate code never loads into the host: every solver run and every test
run is a fresh child process speaking a one-shot stdin/stdout protocol. Any
failure mode (crash, timeout, unparseable output) degrades to a
non-interpretable cell; nothing a candidate does can take down the run or
perturb another cell.

Runner protocol: the host launches ``<runner-cmd> <role> <component-path>``
with role ``solve`` or ``test`` and writes one UTF-8 JSON object to the
child's stdin — ``{"instance": ...}`` for solve, ``{"instance": ...,
"solution": ..., "objective": ...}`` for test. The child answers with a
single stdout line: a solver report object, or ``true``/``false``.
A nonzero exit status is a runtime error.
"""

from __future__ import annotations

import json
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .domain import (
    Component,
    Failure,
    Kind,
    PairOutcome,
    RawResults,
    TripleOutcome,
    parse_report,
)


@dataclass(frozen=True)
class ExecLimits:
    solver_timeout: float = 10.0
    test_timeout: float = 5.0
    max_output: int = 1 << 20
    max_workers: int = 8

    def __post_init__(self):
        if min(self.solver_timeout, self.test_timeout) <= 0:
            raise ValueError("timeouts must be positive")
        if self.max_output <= 0 or self.max_workers <= 0:
            raise ValueError("max_output and max_workers must be positive")


def _run_child(
    argv: Sequence[str], payload: bytes, timeout: float, max_output: int
) -> tuple[bytes, Failure | None]:
    """Run one child process; map every failure mode to a Failure reason."""
    try:
        proc = subprocess.Popen(
            list(argv),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
        )
    except OSError:
        return b"", Failure.RUNTIME_ERROR
    try:
        out, _ = proc.communicate(input=payload, timeout=timeout)
    except subprocess.TimeoutExpired:
        proc.kill()
        proc.communicate()
        return b"", Failure.TIMEOUT
    if proc.returncode != 0:
        return b"", Failure.RUNTIME_ERROR
    if len(out) > max_output:
        return b"", Failure.MALFORMED_REPORT
    return out, None


def _decode_instance(instance: Component):
    """Structural validation: the instance payload must decode as JSON."""
    try:
        return json.loads(instance.payload.decode("utf-8")), None
    except (UnicodeDecodeError, ValueError):
        return None, Failure.COMPILE_ERROR


class _Workspace:
    """Materializes component payloads as files for the runner to load."""

    def __init__(self, root: Path):
        self.root = root
        self._paths: dict[str, Path] = {}

    def path_for(self, comp: Component) -> Path:
        key = f"{comp.kind.value}:{comp.id}"
        if key not in self._paths:
            safe = "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in comp.id)
            path = self.root / comp.kind.value / f"{len(self._paths):04d}_{safe}"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(comp.payload)
            self._paths[key] = path
        return self._paths[key]


def evaluate_pair(
    solver: Component,
    instance: Component,
    limits: ExecLimits,
    runner_cmd: Sequence[str],
    workspace: _Workspace | None = None,
) -> PairOutcome:
    """Run one solver on one instance. Never raises for candidate faults."""
    assert solver.kind is Kind.SOLVER and instance.kind is Kind.INSTANCE
    inst_obj, fail = _decode_instance(instance)
    if fail is not None:
        return PairOutcome(interpretable=False, failure=fail)

    with _maybe_workspace(workspace) as ws:
        path = ws.path_for(solver)
        stdin = json.dumps({"instance": inst_obj}).encode("utf-8")
        out, fail = _run_child(
            list(runner_cmd) + ["solve", str(path)],
            stdin,
            limits.solver_timeout,
            limits.max_output,
        )
    if fail is not None:
        return PairOutcome(interpretable=False, failure=fail)

    report = parse_report(out.strip())
    if isinstance(report, Failure):
        return PairOutcome(interpretable=False, failure=report)
    if report.has_solution:
        return PairOutcome(interpretable=True, r=True, report=report, z=report.objective)
    return PairOutcome(interpretable=True, r=False, report=report)


def evaluate_triple(
    test: Component,
    instance: Component,
    pair: PairOutcome,
    limits: ExecLimits,
    runner_cmd: Sequence[str],
    workspace: _Workspace | None = None,
) -> TripleOutcome:
    """Run one test on a pair's reported solution.

    A pair without a solution makes the triple trivially interpretable with
    no verdict; a pair with a solution needs a clean run printing exactly
    one boolean token.
    """
    assert test.kind is Kind.TEST
    if not pair.interpretable:
        raise ValueError("evaluate_triple requires an interpretable pair")
    if not pair.r:
        return TripleOutcome(interpretable=True, passed=None)

    inst_obj, fail = _decode_instance(instance)
    if fail is not None:
        return TripleOutcome(interpretable=False)
    with _maybe_workspace(workspace) as ws:
        path = ws.path_for(test)
        stdin = json.dumps(
            {
                "instance": inst_obj,
                "solution": pair.report.solution,
                "objective": pair.report.objective,
            }
        ).encode("utf-8")
        out, fail = _run_child(
            list(runner_cmd) + ["test", str(path)],
            stdin,
            limits.test_timeout,
            limits.max_output,
        )
    if fail is not None:
        return TripleOutcome(interpretable=False)
    token = out.decode("utf-8", errors="replace").strip()
    if token == "true":
        return TripleOutcome(interpretable=True, passed=True)
    if token == "false":
        return TripleOutcome(interpretable=True, passed=False)
    return TripleOutcome(interpretable=False)


class _maybe_workspace:
    """Use the given workspace, or a throwaway temp directory."""

    def __init__(self, ws: _Workspace | None):
        self._given = ws
        self._tmp = None

    def __enter__(self) -> _Workspace:
        if self._given is not None:
            return self._given
        self._tmp = tempfile.TemporaryDirectory(prefix="solverpool-")
        return _Workspace(Path(self._tmp.name))

    def __exit__(self, *exc):
        if self._tmp is not None:
            self._tmp.cleanup()
        return False


def cross_evaluate(
    solvers: Sequence[Component],
    instances: Sequence[Component],
    tests: Sequence[Component],
    limits: ExecLimits,
    runner_cmd: Sequence[str],
) -> RawResults:
    """Evaluate every solver on every instance, then every test on every
    reported solution.

    Cells are independent; results are written into pre-indexed slots, so
    the outcome is identical for any worker count or scheduling order.
    """
    if not solvers or not instances or not tests:
        raise ValueError("component pools must be nonempty")

    results = RawResults(
        solver_ids=[c.id for c in solvers],
        instance_ids=[c.id for c in instances],
        test_ids=[c.id for c in tests],
    )
    with tempfile.TemporaryDirectory(prefix="solverpool-") as tmp:
        ws = _Workspace(Path(tmp))
        for comp in list(solvers) + list(tests):
            ws.path_for(comp)  # materialize up front, not under concurrency

        with ThreadPoolExecutor(max_workers=limits.max_workers) as pool:
            pair_futs = {
                (s.id, i.id): pool.submit(evaluate_pair, s, i, limits, runner_cmd, ws)
                for s in solvers
                for i in instances
            }
            for key, fut in pair_futs.items():
                results.pairs[key] = fut.result()

            triple_futs = {}
            for s in solvers:
                for i in instances:
                    pair = results.pairs[(s.id, i.id)]
                    if not (pair.interpretable and pair.r):
                        continue
                    for t in tests:
                        triple_futs[(s.id, i.id, t.id)] = pool.submit(
                            evaluate_triple, t, i, pair, limits, runner_cmd, ws
                        )
            for key, fut in triple_futs.items():
                results.triples[key] = fut.result()
    return results
