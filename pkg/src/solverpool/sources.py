"""Component pool acquisition: prompt rendering plus three interchangeable
sources (a chat-completions HTTP endpoint, a fixture directory, and the
synthetic stub generator).

The remote source issues every prompt as one concurrent batch and never
refines sequentially; a failed generation degrades to a placeholder
component that the filtering stage will remove, so pool sizes always equal
the request.
"""

from __future__ import annotations

import json
import os
import re
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .domain import Component, Kind, Origin

REPORT_SCHEMA_DOC = (
    'a single JSON object with a "status" key equal to "OPTIMAL", '
    '"TIME_LIMIT", or "INFEASIBLE"; OPTIMAL and TIME_LIMIT reports also '
    'carry a finite numeric "objective" and a "solution" value, INFEASIBLE '
    "reports carry neither"
)

INSTANCE_VARIANTS = ("feasible", "infeasible", "random")

_PLACEHOLDER_SCRIPT = b'raise RuntimeError("generation failed")\n'
_PLACEHOLDER_DATA = b'{"generation": failed'  # deliberately not JSON


@dataclass(frozen=True)
class ProblemSpec:
    description: str
    input_format: str
    output_format: str
    sense: str = "minimize"

    def __post_init__(self):
        if not (self.description and self.input_format and self.output_format):
            raise ValueError("problem spec texts must be non-empty")


@dataclass(frozen=True)
class Prompt:
    text: str
    seed: int
    variant: str | None = None


@dataclass
class PromptBatch:
    solver_prompts: list[Prompt]
    instance_prompts: list[Prompt]
    test_prompts: list[Prompt]

    def __len__(self) -> int:
        return len(self.solver_prompts) + len(self.instance_prompts) + len(self.test_prompts)


def render_prompts(
    spec: ProblemSpec, n_solvers: int, n_instances: int, n_tests: int, seed: int
) -> PromptBatch:
    """Render one prompt per requested component, deterministically in seed.

    Instance prompts cycle through feasible/infeasible/random phrasing;
    every prompt carries a distinct seed to push generation diversity.
    """
    if min(n_solvers, n_instances, n_tests) < 1:
        raise ValueError("pool sizes must be >= 1")

    solver_tmpl = (
        "You are writing an optimization solver.\n"
        "Problem: {desc}\n"
        "Instance format: {infmt}\n"
        "Solution format: {outfmt}\n"
        "Write a self-contained Python script defining solve(instance) that "
        "returns the report as a dict: {schema}. Status INFEASIBLE is "
        "required when the instance admits no feasible solution; otherwise "
        "return the best solution found within the time limit. The sense is "
        "{sense}. Reply with a single fenced code block.\n"
        "Variation seed: {seed}"
    )
    instance_tmpl = (
        "Generate one {variant} problem instance.\n"
        "Problem: {desc}\n"
        "Instance format: {infmt}\n"
        "Reply with a single fenced code block containing only the instance "
        "as JSON.\nRandom seed: {seed}"
    )
    test_tmpl = (
        "You are writing a validity test for solutions of this problem.\n"
        "Problem: {desc}\n"
        "Instance format: {infmt}\n"
        "Solution format: {outfmt}\n"
        "Write a self-contained Python script defining "
        "check(instance, solution, objective) that returns True if and only "
        "if the solution is feasible for the instance and its true objective "
        "value matches the reported objective. Reply with a single fenced "
        "code block.\nVariation seed: {seed}"
    )

    common = dict(
        desc=spec.description,
        infmt=spec.input_format,
        outfmt=spec.output_format,
        schema=REPORT_SCHEMA_DOC,
        sense=spec.sense,
    )
    next_seed = iter(range(seed, seed + n_solvers + n_instances + n_tests))
    solvers = [
        Prompt(solver_tmpl.format(seed=s, **common), seed=s)
        for s in (next(next_seed) for _ in range(n_solvers))
    ]
    instances = []
    for k in range(n_instances):
        s = next(next_seed)
        variant = INSTANCE_VARIANTS[k % len(INSTANCE_VARIANTS)]
        instances.append(
            Prompt(instance_tmpl.format(variant=variant, seed=s, **common), seed=s,
                   variant=variant)
        )
    tests = [
        Prompt(test_tmpl.format(seed=s, **common), seed=s)
        for s in (next(next_seed) for _ in range(n_tests))
    ]
    return PromptBatch(solvers, instances, tests)


_FENCE_RE = re.compile(r"```[a-zA-Z0-9_+-]*\n(.*?)```", re.DOTALL)


def extract_code(completion: str) -> str | None:
    """First fenced code block of a completion, or None."""
    m = _FENCE_RE.search(completion)
    if m is None:
        return None
    return m.group(1)


@dataclass
class RemoteConfig:
    url: str
    model: str
    temperature: float = 0.7
    api_key_env: str | None = None
    request_timeout: float = 60.0
    max_concurrency: int = 16


@dataclass
class RemoteSource:
    """Chat-completions style HTTP endpoint, queried once as a single
    concurrent batch of independent prompts."""

    config: RemoteConfig

    def complete(self, prompt: Prompt) -> str | None:
        cfg = self.config
        body = json.dumps(
            {
                "model": cfg.model,
                "temperature": cfg.temperature,
                "messages": [{"role": "user", "content": prompt.text}],
            }
        ).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if cfg.api_key_env:
            key = os.environ.get(cfg.api_key_env)
            if key:
                headers["Authorization"] = f"Bearer {key}"
        req = urllib.request.Request(cfg.url, data=body, headers=headers)
        try:
            with urllib.request.urlopen(req, timeout=cfg.request_timeout) as resp:
                doc = json.loads(resp.read().decode("utf-8"))
            return doc["choices"][0]["message"]["content"]
        except (urllib.error.URLError, OSError, KeyError, IndexError, ValueError):
            return None

    def fetch(self, batch: PromptBatch) -> tuple[list[Component], list[Component], list[Component]]:
        prompts = (
            [(Kind.SOLVER, p) for p in batch.solver_prompts]
            + [(Kind.INSTANCE, p) for p in batch.instance_prompts]
            + [(Kind.TEST, p) for p in batch.test_prompts]
        )
        with ThreadPoolExecutor(max_workers=self.config.max_concurrency) as pool:
            completions = list(pool.map(lambda kp: self.complete(kp[1]), prompts))

        pools: dict[Kind, list[Component]] = {k: [] for k in Kind}
        for (kind, prompt), completion in zip(prompts, completions):
            idx = len(pools[kind])
            cid = f"{kind.value}_{idx:03d}"
            code = extract_code(completion) if completion else None
            if code is None:
                payload = _PLACEHOLDER_DATA if kind is Kind.INSTANCE else _PLACEHOLDER_SCRIPT
            else:
                payload = code.encode("utf-8")
            pools[kind].append(
                Component(
                    id=cid,
                    kind=kind,
                    payload=payload,
                    origin=Origin.REMOTE,
                    seed_tag=prompt.seed if kind is Kind.INSTANCE else None,
                )
            )
        return pools[Kind.SOLVER], pools[Kind.INSTANCE], pools[Kind.TEST]


@dataclass
class FixtureSource:
    """Loads components from a directory tree: solvers/, instances/, tests/.
    Pool contents are whatever the directories hold, in sorted order."""

    directory: Path

    def fetch(self, batch: PromptBatch | None = None):
        root = Path(self.directory)
        pools = []
        for sub, kind in (("solvers", Kind.SOLVER), ("instances", Kind.INSTANCE),
                          ("tests", Kind.TEST)):
            comps = []
            folder = root / sub
            if not folder.is_dir():
                raise FileNotFoundError(f"fixture directory missing {folder}")
            for path in sorted(folder.iterdir()):
                if path.is_file():
                    comps.append(
                        Component(
                            id=path.name,
                            kind=kind,
                            payload=path.read_bytes(),
                            origin=Origin.FIXTURE,
                        )
                    )
            if not comps:
                raise ValueError(f"no components under {folder}")
            pools.append(comps)
        return tuple(pools)


@dataclass
class SyntheticSource:
    """Stub components standing in for a synthetic ensemble; the evaluation
    stage draws their cross-evaluation cube from the generator instead of
    executing them."""

    seed: int = 0

    def fetch(self, batch: PromptBatch):
        def stub(kind: Kind, count: int) -> list[Component]:
            return [
                Component(
                    id=f"{kind.value}_{k:03d}",
                    kind=kind,
                    payload=json.dumps(
                        {"synthetic": kind.value, "index": k, "seed": self.seed}
                    ).encode("utf-8"),
                    origin=Origin.SYNTHETIC,
                    seed_tag=self.seed + k if kind is Kind.INSTANCE else None,
                )
                for k in range(count)
            ]

        return (
            stub(Kind.SOLVER, len(batch.solver_prompts)),
            stub(Kind.INSTANCE, len(batch.instance_prompts)),
            stub(Kind.TEST, len(batch.test_prompts)),
        )


def fetch_components(source, batch: PromptBatch):
    """Fetch (solvers, instances, tests) from any configured source."""
    return source.fetch(batch)
