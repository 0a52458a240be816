"""Cross-evaluate a small solver pool in child processes, then filter.

Walks the first half of the pipeline on the bundled K-robust set cover
corpus: every solver runs on every instance, every test runs on every
reported solution, and the exact filter removes the fewest components that
make every surviving (solver, instance, test) triple interpretable.

Requires both packages installed: `pip install -e . -e ./runner`.
"""

import sys

from solverpool import ExecLimits, collect_noninterpretable, cross_evaluate, solve_filter
from solverpool.sources import FixtureSource
from wscp_runner.corpus import corpus_dir

runner_cmd = [sys.executable, "-m", "wscp_runner"]
solvers, instances, tests = FixtureSource(corpus_dir()).fetch(None)
print(f"pools: {len(solvers)} solvers, {len(instances)} instances, {len(tests)} tests")

limits = ExecLimits(solver_timeout=1.5, test_timeout=5.0, max_workers=12)
results = cross_evaluate(solvers, instances, tests, limits, runner_cmd)

n_interp = sum(p.interpretable for p in results.pairs.values())
n_reported = sum(p.r for p in results.pairs.values())
print(f"pairs: {len(results.pairs)} total, {n_interp} interpretable, {n_reported} with a solution")
print(f"test runs recorded: {len(results.triples)}")

for (sid, iid), pair in sorted(results.pairs.items()):
    if not pair.interpretable:
        print(f"  non-interpretable: {sid} x {iid} -> {pair.failure.value}")
        break  # one example is enough

bad = collect_noninterpretable(results)
print(f"\nnon-interpretable triples: {bad.n_triples}")
keep = solve_filter(bad)
print(f"filter keeps {keep.objective} components:")
print(f"  solvers:   {keep.keep_solvers}")
print(f"  instances: {len(keep.keep_instances)} of {len(instances)}")
print(f"  tests:     {keep.keep_tests}")
