"""Fit the latent-class model on a synthetic ensemble with known truth.

The generator draws instance feasibility, solver reports, solution validity,
and test pass counts from the same assumptions the model fits, so recovered
error rates can be checked against the ground truth directly.
"""

import numpy as np

from solverpool import FilterSolution, build_observations, fit_em
from solverpool.bench import gen_synthetic_ensemble, reference_noise_spec

spec = reference_noise_spec(n_solvers=30, n_instances=100, n_tests=15, seed=42)
results, truth = gen_synthetic_ensemble(spec)
keep_all = FilterSolution(
    results.solver_ids, results.instance_ids, results.test_ids,
    len(results.solver_ids) + len(results.instance_ids) + len(results.test_ids),
)
obs = build_observations(results, keep_all)

theta, post, diag = fit_em(obs)
print(f"EM converged={diag.converged} after {diag.iterations} iterations, "
      f"log-posterior {diag.loglik:.1f}")
print(f"feasibility rate: true={truth.feasible.mean():.3f} fitted={theta.lam:.3f}\n")

print(f"{'solver':12s} {'quality':12s} {'alpha t/f':>12s} {'beta t/f':>12s} {'gamma t/f':>12s}")
for k in range(0, 30, 5):
    p = spec.solvers[k]
    print(
        f"{results.solver_ids[k]:12s} {p.quality.value:12s} "
        f"{p.alpha:.2f}/{theta.alpha[k]:.2f}  "
        f"{p.beta:.2f}/{theta.beta[k]:.2f}  ".rjust(14)
        + f"{p.gamma:.2f}/{theta.gamma[k]:.2f}".rjust(12)
    )

for name, true_vals, fitted in (
    ("alpha", [p.alpha for p in spec.solvers], theta.alpha),
    ("beta", [p.beta for p in spec.solvers], theta.beta),
    ("gamma", [p.gamma for p in spec.solvers], theta.gamma),
):
    mae = np.abs(np.asarray(true_vals) - fitted).mean()
    print(f"mean |{name} error| = {mae:.4f}")

broken_q = post.q[~truth.feasible]
print(f"\nposterior feasibility on truly infeasible instances: "
      f"mean q = {broken_q.mean():.4f} (should be near 0)")
