"""The shipped fixture corpus: a defect taxonomy of solvers and tests for
the K-robust weighted set cover problem, plus a mixed bag of instances.

``corpus_dir`` points at the packaged fixture tree (solvers/, instances/,
tests/); ``materialize`` copies it somewhere writable. ``TAXONOMY`` declares
what each component is supposed to do, so harness classifications can be
checked against intent.
"""

from __future__ import annotations

import shutil
from pathlib import Path

_FILES = Path(__file__).parent / "corpus_files"


# What each component is, and how the evaluation harness should see it.
TAXONOMY = {
    "solvers": {
        "exact.py": "optimal",
        "greedy.py": "suboptimal",
        "k_ignoring.py": "invalid-solutions",
        "over_reporter.py": "over-reporter",
        "under_reporter.py": "under-reporter",
        "crasher.py": "runtime-error",
        "malformed_report.py": "malformed-report",
        "slow.py": "timeout",
    },
    "instances": {
        "i01_feasible_k0.json": "feasible",
        "i02_feasible_k1.json": "feasible",
        "i03_feasible_k2.json": "feasible",
        "i04_greedy_trap.json": "feasible",
        "i05_feasible_k0_wide.json": "feasible",
        "i06_feasible_k1_alt.json": "feasible",
        "i07_no_clients.json": "feasible",
        "i08_infeasible_uncovered.json": "infeasible",
        "i09_infeasible_k1.json": "infeasible",
        "i10_infeasible_k3.json": "infeasible",
        "i11_single.json": "feasible",
        "i12_malformed.json": "undecodable",
    },
    "tests": {
        "t1_correct.py": "correct",
        "t2_objective_only.py": "objective-only",
        "t3_always_true.py": "always-true",
        "t4_inverted.py": "inverted",
        "t5_crasher.py": "runtime-error",
        "t6_nonbool.py": "non-boolean",
    },
}

DEFECTIVE_SOLVERS = [
    name for name, label in TAXONOMY["solvers"].items() if label != "optimal"
]


def corpus_dir() -> Path:
    """Location of the packaged fixture tree."""
    return _FILES


def materialize(dest: Path) -> Path:
    """Copy the corpus into ``dest`` (created if needed) and return it."""
    dest = Path(dest)
    for sub in ("solvers", "instances", "tests"):
        target = dest / sub
        target.mkdir(parents=True, exist_ok=True)
        for path in sorted((_FILES / sub).iterdir()):
            if path.is_file():
                shutil.copy(path, target / path.name)
    return dest


def decodable_instances() -> list[str]:
    return [
        name
        for name, label in TAXONOMY["instances"].items()
        if label != "undecodable"
    ]
