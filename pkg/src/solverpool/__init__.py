"""solverpool: pick a trustworthy optimization solver out of a pool of
noisy, independently generated candidate solvers, instances, and tests.

Pipeline: cross-evaluate all (solver, instance, test) combinations in
isolated child processes, exactly remove the fewest components so that
every retained triple is interpretable, fit a latent-class model to infer
true solver and test error rates, then pick the solver minimizing a
penalized expected-objective score.
"""

from .bench import (
    EvalCube,
    ExperimentResult,
    Grade,
    GroundTruth,
    Quality,
    SolverProfile,
    TrueEnsembleSpec,
    bootstrap_experiment,
    gen_synthetic_ensemble,
    grade_solver,
    reference_noise_spec,
    resample_and_select,
)
from .domain import (
    Component,
    Failure,
    Kind,
    ModelParams,
    ObservationSet,
    Origin,
    PairOutcome,
    Posteriors,
    RawResults,
    SelectionReport,
    SolveReport,
    Status,
    TripleOutcome,
    parse_report,
    serialize_report,
)
from .filtering import (
    BadTripleSet,
    EmptySelectionError,
    FilterSolution,
    brute_force_filter,
    collect_noninterpretable,
    solve_filter,
)
from .harness import ExecLimits, cross_evaluate, evaluate_pair, evaluate_triple
from .latent import (
    EmConfig,
    EmDiagnostics,
    InitSpec,
    build_observations,
    e_step,
    fit_em,
    log_beta_binomial,
    m_step,
)
from .pipeline import RunConfig, run_pipeline
from .selection import (
    AUTO,
    SelectionConfig,
    Sense,
    estimate_Z,
    pareto_front,
    scalarized_score,
    select,
)
from .sources import (
    FixtureSource,
    ProblemSpec,
    Prompt,
    PromptBatch,
    RemoteConfig,
    RemoteSource,
    SyntheticSource,
    extract_code,
    fetch_components,
    render_prompts,
)

__version__ = "0.1.0"
