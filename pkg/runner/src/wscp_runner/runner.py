"""Child-process runner shim: loads one candidate script and speaks the
one-shot stdin/stdout protocol.

Usage: ``wscp-runner <role> <component-path>`` with role ``solve`` or
``test``. The host writes a single JSON object to stdin; the shim prints a
single line — the candidate's report for solve, ``true``/``false`` for
test. Any fault in the candidate (load error, exception, bad payload)
exits nonzero, which the host maps to a runtime error for that cell.
"""

from __future__ import annotations

import importlib.util
import json
import sys


def load_candidate(path: str):
    spec = importlib.util.spec_from_file_location("wscp_candidate", path)
    if spec is None or spec.loader is None:
        raise ImportError(f"cannot load candidate from {path}")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def run_solve(module, payload: dict) -> str:
    report = module.solve(payload["instance"])
    return json.dumps(report)


def run_test(module, payload: dict) -> str:
    verdict = module.check(
        payload["instance"], payload["solution"], payload["objective"]
    )
    if isinstance(verdict, bool):
        return "true" if verdict else "false"
    # Pass non-boolean returns through; the host rejects them as
    # non-interpretable, which is exactly what a defective test should earn.
    return str(verdict)


def main(argv=None) -> int:
    sys.dont_write_bytecode = True  # never litter the candidate's directory
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2 or argv[0] not in ("solve", "test"):
        print("usage: wscp-runner {solve|test} <component-path>", file=sys.stderr)
        return 2
    role, path = argv
    payload = json.loads(sys.stdin.read())
    module = load_candidate(path)
    if role == "solve":
        line = run_solve(module, payload)
    else:
        line = run_test(module, payload)
    sys.stdout.write(line + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
