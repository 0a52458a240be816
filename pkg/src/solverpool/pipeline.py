"""End-to-end orchestration: generate -> evaluate -> filter -> characterize
-> select, each stage reading and writing the artifact files so runs can be
replayed or resumed stage by stage."""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from pathlib import Path

from . import artifacts as art
from .bench import gen_synthetic_ensemble, reference_noise_spec
from .domain import RawResults
from .filtering import collect_noninterpretable, solve_filter
from .harness import ExecLimits, cross_evaluate
from .latent import EmConfig, InitSpec, build_observations, e_step, fit_em
from .selection import AUTO, SelectionConfig, Sense, select
from .sources import (
    FixtureSource,
    ProblemSpec,
    RemoteConfig,
    RemoteSource,
    SyntheticSource,
    render_prompts,
)

STAGES = ("generate", "evaluate", "filter", "characterize", "select")


@dataclass
class RunConfig:
    out_dir: Path
    source: str = "synthetic"  # remote | fixtures | synthetic
    seed: int = 0
    n_solvers: int = 10
    n_instances: int = 10
    n_tests: int = 5
    problem: Path | None = None
    fixtures_dir: Path | None = None
    runner_cmd: str | None = None
    solver_timeout: float = 10.0
    test_timeout: float = 5.0
    max_output: int = 1 << 20
    max_workers: int = 8
    max_iters: int = 100
    tol: float = 1e-8
    prior_a: float = 20.0
    prior_b: float = 2.0
    p_miss: float | str = AUTO
    p_fail: float | str = AUTO
    sense: str = "minimize"
    reps: int = 1000
    grid: list[int] = field(default_factory=list)
    endpoint_url: str | None = None
    endpoint_model: str | None = None
    endpoint_temperature: float = 0.7
    endpoint_api_key_env: str | None = None

    def results_dir(self) -> Path:
        return Path(self.out_dir) / "results"

    def limits(self) -> ExecLimits:
        return ExecLimits(
            solver_timeout=self.solver_timeout,
            test_timeout=self.test_timeout,
            max_output=self.max_output,
            max_workers=self.max_workers,
        )

    def em_config(self) -> EmConfig:
        return EmConfig(
            max_iters=self.max_iters,
            tol=self.tol,
            prior_a=self.prior_a,
            prior_b=self.prior_b,
            init=InitSpec(),
        )

    def selection_config(self) -> SelectionConfig:
        return SelectionConfig(
            p_miss=self.p_miss,
            p_fail=self.p_fail,
            sense=Sense(self.sense),
        )

    def runner_argv(self) -> list[str]:
        if not self.runner_cmd:
            raise ValueError(
                "running fixture or remote components requires --runner-cmd"
            )
        return shlex.split(self.runner_cmd)

    def problem_spec(self) -> ProblemSpec:
        if self.problem is None:
            return ProblemSpec(
                description="unspecified optimization problem",
                input_format="JSON instance document",
                output_format="JSON report document",
                sense=self.sense,
            )
        doc = art.read_json(Path(self.problem))
        return ProblemSpec(
            description=doc["description"],
            input_format=doc["input_format"],
            output_format=doc["output_format"],
            sense=doc.get("sense", self.sense),
        )


def stage_generate(cfg: RunConfig):
    """Produce the three component pools and persist them."""
    batch = render_prompts(
        cfg.problem_spec(), cfg.n_solvers, cfg.n_instances, cfg.n_tests, cfg.seed
    )
    if cfg.source == "fixtures":
        if cfg.fixtures_dir is None:
            raise ValueError("--fixtures-dir is required with --source fixtures")
        source = FixtureSource(Path(cfg.fixtures_dir))
    elif cfg.source == "remote":
        if not (cfg.endpoint_url and cfg.endpoint_model):
            raise ValueError("remote source needs endpoint.url and endpoint.model")
        source = RemoteSource(
            RemoteConfig(
                url=cfg.endpoint_url,
                model=cfg.endpoint_model,
                temperature=cfg.endpoint_temperature,
                api_key_env=cfg.endpoint_api_key_env,
            )
        )
    elif cfg.source == "synthetic":
        source = SyntheticSource(seed=cfg.seed)
    else:
        raise ValueError(f"unknown source {cfg.source!r}")

    pools = source.fetch(batch)
    art.dump_components(
        cfg.results_dir() / art.COMPONENTS_FILE, pools, cfg.source, cfg.seed
    )
    return pools


def stage_evaluate(cfg: RunConfig) -> RawResults:
    """Cross-evaluate the generated pools (or draw the synthetic cube)."""
    pools, doc = art.load_components(cfg.results_dir() / art.COMPONENTS_FILE)
    solvers, instances, tests = pools
    if doc["source"] == "synthetic":
        spec = reference_noise_spec(
            n_solvers=len(solvers),
            n_instances=len(instances),
            n_tests=len(tests),
            seed=doc["seed"],
        )
        results, truth = gen_synthetic_ensemble(spec)
        art.dump_truth(
            cfg.results_dir() / art.TRUTH_FILE,
            truth,
            results.solver_ids,
            results.instance_ids,
        )
    else:
        results = cross_evaluate(
            solvers, instances, tests, cfg.limits(), cfg.runner_argv()
        )
    art.dump_raw(cfg.results_dir() / art.RAW_FILE, results)
    return results


def stage_filter(cfg: RunConfig):
    results = art.load_raw(cfg.results_dir() / art.RAW_FILE)
    bad = collect_noninterpretable(results)
    sol = solve_filter(bad)  # EmptySelectionError propagates to the caller
    art.dump_filtered(cfg.results_dir() / art.FILTERED_FILE, sol)
    return sol


def stage_characterize(cfg: RunConfig):
    results = art.load_raw(cfg.results_dir() / art.RAW_FILE)
    filtered = art.load_filtered(cfg.results_dir() / art.FILTERED_FILE)
    obs = build_observations(results, filtered)
    theta, post, diag = fit_em(obs, cfg.em_config())
    art.dump_theta(cfg.results_dir() / art.THETA_FILE, theta, obs.solvers, diag)
    return theta, post, diag


def stage_select(cfg: RunConfig):
    results = art.load_raw(cfg.results_dir() / art.RAW_FILE)
    filtered = art.load_filtered(cfg.results_dir() / art.FILTERED_FILE)
    obs = build_observations(results, filtered)
    theta = art.load_theta(cfg.results_dir() / art.THETA_FILE, obs.solvers)
    post = e_step(theta, obs)
    report = select(theta, post, obs, cfg.selection_config())
    art.dump_selection(cfg.results_dir() / art.SELECTION_FILE, report)
    _write_chosen_payload(cfg, report.chosen)
    return report


def _write_chosen_payload(cfg: RunConfig, chosen: str) -> None:
    pools, _ = art.load_components(cfg.results_dir() / art.COMPONENTS_FILE)
    solvers = {c.id: c for c in pools[0]}
    comp = solvers[chosen]
    suffix = Path(comp.id).suffix
    if not suffix:
        try:
            import json

            json.loads(comp.payload.decode("utf-8"))
            suffix = ".json"
        except (UnicodeDecodeError, ValueError):
            suffix = ".py"
    path = cfg.results_dir() / f"selected_solver{suffix}"
    path.write_bytes(comp.payload)


def run_pipeline(cfg: RunConfig):
    """All five stages in order; returns the selection report."""
    stage_generate(cfg)
    stage_evaluate(cfg)
    stage_filter(cfg)
    stage_characterize(cfg)
    return stage_select(cfg)
