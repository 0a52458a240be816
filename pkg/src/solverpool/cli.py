"""Command-line surface: ``run`` for the whole pipeline, ``stage`` for one
step at a time, ``bench`` for the bootstrap benchmark.

Every flag can also live in a plain-text config file of ``key = value``
lines (keys match the flag names without the leading dashes); flags given
on the command line override the file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import artifacts as art
from .bench import bootstrap_experiment, gen_synthetic_ensemble, reference_noise_spec
from .filtering import EmptySelectionError
from .pipeline import STAGES, RunConfig, run_pipeline
from .selection import AUTO


def parse_config_file(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    values: dict[str, str] = {}
    for raw_line in path.read_text(encoding="utf-8").splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw_line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _penalty(text: str):
    return AUTO if text == "auto" else float(text)


_CONFIG_KEYS = {
    "seed": int,
    "source": str,
    "n-solvers": int,
    "n-instances": int,
    "n-tests": int,
    "problem": str,
    "fixtures-dir": str,
    "runner-cmd": str,
    "solver-timeout": float,
    "test-timeout": float,
    "max-workers": int,
    "max-iters": int,
    "tol": float,
    "prior-a": float,
    "prior-b": float,
    "p-miss": _penalty,
    "p-fail": _penalty,
    "sense": str,
    "reps": int,
    "grid": str,
    "out": str,
    "endpoint.url": str,
    "endpoint.model": str,
    "endpoint.temperature": float,
    "endpoint.api_key_env": str,
}


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--source", choices=["remote", "fixtures", "synthetic"])
    p.add_argument("--n-solvers", type=int)
    p.add_argument("--n-instances", type=int)
    p.add_argument("--n-tests", type=int)
    p.add_argument("--problem", type=Path)
    p.add_argument("--fixtures-dir", type=Path)
    p.add_argument("--runner-cmd", type=str)
    p.add_argument("--solver-timeout", type=float)
    p.add_argument("--test-timeout", type=float)
    p.add_argument("--max-workers", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--prior-a", type=float)
    p.add_argument("--prior-b", type=float)
    p.add_argument("--p-miss", type=_penalty)
    p.add_argument("--p-fail", type=_penalty)
    p.add_argument("--sense", choices=["minimize", "maximize"])
    p.add_argument("--reps", type=int)
    p.add_argument("--grid", type=str, help="comma-separated solver counts")
    p.add_argument("--out", type=Path)


_FIELD_BY_KEY = {
    "seed": "seed",
    "source": "source",
    "n-solvers": "n_solvers",
    "n-instances": "n_instances",
    "n-tests": "n_tests",
    "problem": "problem",
    "fixtures-dir": "fixtures_dir",
    "runner-cmd": "runner_cmd",
    "solver-timeout": "solver_timeout",
    "test-timeout": "test_timeout",
    "max-workers": "max_workers",
    "max-iters": "max_iters",
    "tol": "tol",
    "prior-a": "prior_a",
    "prior-b": "prior_b",
    "p-miss": "p_miss",
    "p-fail": "p_fail",
    "sense": "sense",
    "reps": "reps",
    "out": "out_dir",
    "endpoint.url": "endpoint_url",
    "endpoint.model": "endpoint_model",
    "endpoint.temperature": "endpoint_temperature",
    "endpoint.api_key_env": "endpoint_api_key_env",
}


def build_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        file_values = parse_config_file(args.config)
        for key, text in file_values.items():
            if key not in _CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = _CONFIG_KEYS[key](text)
    for key in _CONFIG_KEYS:
        attr = key.replace("-", "_").replace(".", "_")
        flag_value = getattr(args, attr, None)
        if flag_value is not None:
            values[key] = flag_value

    if "out" not in values:
        raise ValueError("--out is required (or 'out' in the config file)")
    cfg = RunConfig(out_dir=Path(values["out"]))
    for key, value in values.items():
        if key == "out":
            continue
        if key == "grid":
            cfg.grid = [int(x) for x in str(value).split(",") if x.strip()]
            continue
        setattr(cfg, _FIELD_BY_KEY[key], value)
    if cfg.problem is not None:
        cfg.problem = Path(cfg.problem)
    if cfg.fixtures_dir is not None:
        cfg.fixtures_dir = Path(cfg.fixtures_dir)
    return cfg


def cmd_run(cfg: RunConfig) -> int:
    try:
        report = run_pipeline(cfg)
    except EmptySelectionError as exc:
        print(f"error: empty selection after filtering: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"selected solver: {report.chosen}")
    print(f"artifacts: {cfg.results_dir()}")
    return 0


def cmd_stage(cfg: RunConfig, stage: str) -> int:
    from . import pipeline

    fn = {
        "generate": pipeline.stage_generate,
        "evaluate": pipeline.stage_evaluate,
        "filter": pipeline.stage_filter,
        "characterize": pipeline.stage_characterize,
        "select": pipeline.stage_select,
    }[stage]
    try:
        fn(cfg)
    except EmptySelectionError as exc:
        print(f"error: empty selection after filtering: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"stage {stage}: ok ({cfg.results_dir()})")
    return 0


def cmd_bench(cfg: RunConfig) -> int:
    results_dir = cfg.results_dir()
    raw_path = results_dir / art.RAW_FILE
    truth_path = results_dir / art.TRUTH_FILE
    try:
        if raw_path.is_file() and truth_path.is_file():
            results = art.load_raw(raw_path)
            truth = art.load_truth(truth_path, results.solver_ids, results.instance_ids)
        elif cfg.source == "synthetic":
            spec = reference_noise_spec(
                n_solvers=cfg.n_solvers,
                n_instances=cfg.n_instances,
                n_tests=cfg.n_tests,
                seed=cfg.seed,
            )
            results, truth = gen_synthetic_ensemble(spec)
            art.dump_raw(raw_path, results)
            art.dump_truth(truth_path, truth, results.solver_ids, results.instance_ids)
        else:
            print(
                f"error: no precomputed results under {results_dir} "
                f"(run the evaluate stage first, or use --source synthetic)",
                file=sys.stderr,
            )
            return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    solver_grid = cfg.grid or [cfg.n_solvers]
    grid = [(n_s, cfg.n_instances, cfg.n_tests) for n_s in solver_grid]
    experiment = bootstrap_experiment(
        results,
        truth,
        grid,
        reps=cfg.reps,
        seed=cfg.seed,
        em_cfg=cfg.em_config(),
        sel_cfg=cfg.selection_config(),
    )
    csv_path = results_dir / "bench.csv"
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(experiment.to_csv(), encoding="utf-8")
    print(f"wrote {csv_path} ({len(experiment.rows)} rows)")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="solverpool",
        description="Cross-evaluate a pool of candidate solvers, filter out "
        "non-interpretable components, fit the latent-class model, and "
        "select the best solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full pipeline")
    _add_common_flags(p_run)

    p_stage = sub.add_parser("stage", help="one pipeline stage")
    p_stage.add_argument("stage", choices=STAGES)
    _add_common_flags(p_stage)

    p_bench = sub.add_parser("bench", help="bootstrap benchmark to CSV")
    _add_common_flags(p_bench)

    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "run":
        return cmd_run(cfg)
    if args.command == "stage":
        return cmd_stage(cfg, args.stage)
    return cmd_bench(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
