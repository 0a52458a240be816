"""From fitted parameters to a chosen solver.

Runs the full pipeline on the bundled corpus and prints each retained
solver's error rates, expected objective, Pareto membership, and the
penalized score that decides the winner.
"""

import sys
import tempfile
from pathlib import Path

from solverpool.pipeline import RunConfig, run_pipeline
from wscp_runner.corpus import corpus_dir

with tempfile.TemporaryDirectory() as tmp:
    cfg = RunConfig(
        out_dir=Path(tmp),
        source="fixtures",
        fixtures_dir=corpus_dir(),
        runner_cmd=f"{sys.executable} -m wscp_runner",
        solver_timeout=1.5,
        test_timeout=5.0,
        max_workers=12,
    )
    report = run_pipeline(cfg)

print(f"penalties: P_miss = P_fail = {report.p_miss:.0f} (10 x Z_max, Z_max = {report.z_max:.0f})\n")
print(f"{'solver':22s} {'alpha':>6s} {'beta':>6s} {'gamma':>6s} {'Z':>8s} {'score':>9s}  front")
for sid, m in report.metrics.items():
    print(
        f"{sid:22s} {m.alpha:6.3f} {m.beta:6.3f} {m.gamma:6.3f} "
        f"{m.Z:8.2f} {m.g:9.2f}  {'*' if m.pareto else ''}"
    )
print(f"\nchosen: {report.chosen}")
