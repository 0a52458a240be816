"""Stage artifact files: canonical JSON serialization for reproducible,
diffable pipeline runs.

Every artifact is versioned with a schema_version key and serialized with
sorted keys and fixed separators, so identical runs produce byte-identical
files.
"""

from __future__ import annotations

import base64
import json
from pathlib import Path

from .bench import GroundTruth, Quality
from .domain import (
    Component,
    Failure,
    Kind,
    ModelParams,
    Origin,
    PairOutcome,
    RawResults,
    SelectionReport,
    SolveReport,
    SolverMetrics,
    Status,
    TripleOutcome,
)
from .filtering import FilterSolution

SCHEMA_VERSION = 1

COMPONENTS_FILE = "components.json"
RAW_FILE = "raw.jsonl"
FILTERED_FILE = "filtered.json"
THETA_FILE = "theta.json"
SELECTION_FILE = "selection.json"
TRUTH_FILE = "truth.json"


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_dumps(obj), encoding="utf-8")


def read_json(path: Path):
    if not path.is_file():
        raise FileNotFoundError(f"missing artifact {path}")
    return json.loads(path.read_text(encoding="utf-8"))


# -- components.json ---------------------------------------------------------

def dump_components(path: Path, pools, source: str, seed: int, extra=None) -> None:
    def enc(comps):
        return [
            {
                "id": c.id,
                "payload_b64": base64.b64encode(c.payload).decode("ascii"),
                "origin": c.origin.value,
                "seed_tag": c.seed_tag,
            }
            for c in comps
        ]

    solvers, instances, tests = pools
    doc = {
        "schema_version": SCHEMA_VERSION,
        "source": source,
        "seed": seed,
        "solvers": enc(solvers),
        "instances": enc(instances),
        "tests": enc(tests),
    }
    if extra:
        doc.update(extra)
    write_json(path, doc)


def load_components(path: Path):
    doc = read_json(path)

    def dec(rows, kind: Kind):
        return [
            Component(
                id=row["id"],
                kind=kind,
                payload=base64.b64decode(row["payload_b64"]),
                origin=Origin(row["origin"]),
                seed_tag=row.get("seed_tag"),
            )
            for row in rows
        ]

    pools = (
        dec(doc["solvers"], Kind.SOLVER),
        dec(doc["instances"], Kind.INSTANCE),
        dec(doc["tests"], Kind.TEST),
    )
    return pools, doc


# -- raw.jsonl ----------------------------------------------------------------

def dump_raw(path: Path, results: RawResults) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        header = {
            "type": "header",
            "schema_version": SCHEMA_VERSION,
            "solvers": results.solver_ids,
            "instances": results.instance_ids,
            "tests": results.test_ids,
        }
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for (sid, iid) in sorted(results.pairs):
            pair = results.pairs[(sid, iid)]
            rec = {
                "type": "pair",
                "s": sid,
                "i": iid,
                "interpretable": pair.interpretable,
                "r": pair.r,
                "failure": pair.failure.value if pair.failure else None,
            }
            if pair.report is not None:
                rec["status"] = pair.report.status.value
                rec["objective"] = pair.report.objective
                rec["solution"] = pair.report.solution
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        for (sid, iid, tid) in sorted(results.triples):
            triple = results.triples[(sid, iid, tid)]
            rec = {
                "type": "triple",
                "s": sid,
                "i": iid,
                "t": tid,
                "interpretable": triple.interpretable,
                "pass": triple.passed,
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def load_raw(path: Path) -> RawResults:
    if not path.is_file():
        raise FileNotFoundError(f"missing artifact {path}")
    results = None
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            if rec["type"] == "header":
                results = RawResults(rec["solvers"], rec["instances"], rec["tests"])
            elif rec["type"] == "pair":
                report = None
                if "status" in rec:
                    status = Status(rec["status"])
                    if status is Status.INFEASIBLE:
                        report = SolveReport(status)
                    else:
                        report = SolveReport(status, rec["objective"], rec["solution"])
                failure = Failure(rec["failure"]) if rec["failure"] else None
                results.pairs[(rec["s"], rec["i"])] = PairOutcome(
                    interpretable=rec["interpretable"],
                    r=rec["r"],
                    report=report,
                    z=report.objective if (report and rec["r"]) else None,
                    failure=failure,
                )
            elif rec["type"] == "triple":
                results.triples[(rec["s"], rec["i"], rec["t"])] = TripleOutcome(
                    interpretable=rec["interpretable"], passed=rec["pass"]
                )
    if results is None:
        raise ValueError(f"{path} has no header record")
    return results


# -- filtered.json ------------------------------------------------------------

def dump_filtered(path: Path, sol: FilterSolution) -> None:
    write_json(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "keep_solvers": sol.keep_solvers,
            "keep_instances": sol.keep_instances,
            "keep_tests": sol.keep_tests,
            "objective": sol.objective,
        },
    )


def load_filtered(path: Path) -> FilterSolution:
    doc = read_json(path)
    return FilterSolution(
        keep_solvers=doc["keep_solvers"],
        keep_instances=doc["keep_instances"],
        keep_tests=doc["keep_tests"],
        objective=doc["objective"],
    )


# -- theta.json ---------------------------------------------------------------

def dump_theta(path: Path, theta: ModelParams, solvers: list[str], diagnostics) -> None:
    write_json(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "lambda": theta.lam,
            "a0": theta.a0,
            "b0": theta.b0,
            "a1": theta.a1,
            "b1": theta.b1,
            "prior_a": theta.prior_a,
            "prior_b": theta.prior_b,
            "solvers": {
                sid: {
                    "alpha": float(theta.alpha[k]),
                    "beta": float(theta.beta[k]),
                    "gamma": float(theta.gamma[k]),
                }
                for k, sid in enumerate(solvers)
            },
            "diagnostics": {
                "iterations": diagnostics.iterations,
                "converged": diagnostics.converged,
                "loglik": diagnostics.loglik,
            },
        },
    )


def load_theta(path: Path, solvers: list[str]) -> ModelParams:
    import numpy as np

    doc = read_json(path)
    per = doc["solvers"]
    return ModelParams(
        lam=doc["lambda"],
        alpha=np.array([per[s]["alpha"] for s in solvers]),
        beta=np.array([per[s]["beta"] for s in solvers]),
        gamma=np.array([per[s]["gamma"] for s in solvers]),
        a0=doc["a0"],
        b0=doc["b0"],
        a1=doc["a1"],
        b1=doc["b1"],
        prior_a=doc["prior_a"],
        prior_b=doc["prior_b"],
    )


# -- selection.json -----------------------------------------------------------

def dump_selection(path: Path, report: SelectionReport) -> None:
    write_json(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "chosen": report.chosen,
            "z_max": report.z_max,
            "p_miss": report.p_miss,
            "p_fail": report.p_fail,
            "solvers": {
                sid: {
                    "alpha": m.alpha,
                    "beta": m.beta,
                    "gamma": m.gamma,
                    "Z": m.Z,
                    "g": m.g,
                    "pareto": m.pareto,
                }
                for sid, m in report.metrics.items()
            },
        },
    )


def load_selection(path: Path) -> SelectionReport:
    doc = read_json(path)
    return SelectionReport(
        metrics={
            sid: SolverMetrics(
                alpha=m["alpha"],
                beta=m["beta"],
                gamma=m["gamma"],
                Z=m["Z"],
                g=m["g"],
                pareto=m["pareto"],
            )
            for sid, m in doc["solvers"].items()
        },
        z_max=doc["z_max"],
        p_miss=doc["p_miss"],
        p_fail=doc["p_fail"],
        chosen=doc["chosen"],
    )


# -- truth.json (synthetic ground truth, for the bench harness) ---------------

def dump_truth(path: Path, truth: GroundTruth, solver_ids, instance_ids) -> None:
    write_json(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "quality": {sid: truth.quality[k].value for k, sid in enumerate(solver_ids)},
            "feasible": {
                iid: bool(truth.feasible[k]) for k, iid in enumerate(instance_ids)
            },
        },
    )


def load_truth(path: Path, solver_ids, instance_ids) -> GroundTruth:
    import numpy as np

    doc = read_json(path)
    quality = [Quality(doc["quality"][sid]) for sid in solver_ids]
    feasible = np.array([doc["feasible"][iid] for iid in instance_ids])
    return GroundTruth(
        feasible=feasible,
        true_optimum=np.zeros(len(instance_ids)),
        quality=quality,
        valid=np.zeros((len(solver_ids), len(instance_ids)), dtype=bool),
    )
