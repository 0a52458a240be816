"""K-robust weighted set cover: instance model, coverage checks, and an
exhaustive reference solver.

An instance places emitters (position, radius, activation cost) and clients
on the plane; a selection of emitters is feasible when every client lies
within range of at least K+1 selected emitters. The reference solver
enumerates all emitter subsets, so it is exact but capped at small
instances.
"""

from __future__ import annotations

from dataclasses import dataclass

COVER_SLACK = 1e-9  # avoids knife-edge float disagreement on the boundary
MAX_ORACLE_EMITTERS = 15


@dataclass(frozen=True)
class Emitter:
    x: float
    y: float
    r: float
    cost: float


@dataclass(frozen=True)
class WscpInstance:
    emitters: tuple[Emitter, ...]
    clients: tuple[tuple[float, float], ...]
    K: int

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be non-negative")
        for e in self.emitters:
            if e.r <= 0 or e.cost <= 0:
                raise ValueError("emitter radii and costs must be positive")


def parse_instance(doc: dict) -> WscpInstance:
    emitters = tuple(
        Emitter(float(e["x"]), float(e["y"]), float(e["r"]), float(e["cost"]))
        for e in doc["emitters"]
    )
    clients = tuple((float(c["x"]), float(c["y"])) for c in doc["clients"])
    return WscpInstance(emitters=emitters, clients=clients, K=int(doc["K"]))


def covers(emitter: Emitter, client: tuple[float, float]) -> bool:
    dx = emitter.x - client[0]
    dy = emitter.y - client[1]
    return dx * dx + dy * dy <= (emitter.r + COVER_SLACK) ** 2


def coverage_counts(instance: WscpInstance, selected) -> list[int]:
    counts = []
    for client in instance.clients:
        counts.append(
            sum(1 for idx in selected if covers(instance.emitters[idx], client))
        )
    return counts


def is_feasible_selection(instance: WscpInstance, selected) -> bool:
    """Every client within range of at least K+1 distinct selected emitters."""
    chosen = set(selected)
    if not all(0 <= idx < len(instance.emitters) for idx in chosen):
        return False
    need = instance.K + 1
    return all(count >= need for count in coverage_counts(instance, chosen))


def selection_cost(instance: WscpInstance, selected) -> float:
    return sum(instance.emitters[idx].cost for idx in set(selected))


def oracle_wscp(instance: WscpInstance) -> dict:
    """Exhaustive minimum-cost K-robust cover.

    Returns a report dict: OPTIMAL with objective and the selected emitter
    indices, or INFEASIBLE. Rejects instances beyond the enumeration cap.
    """
    m = len(instance.emitters)
    if m > MAX_ORACLE_EMITTERS:
        raise ValueError(f"reference solver limited to {MAX_ORACLE_EMITTERS} emitters")
    need = instance.K + 1
    # Quick necessary condition: each client must have >= K+1 emitters in range.
    in_range = coverage_counts(instance, range(m))
    if any(count < need for count in in_range):
        return {"status": "INFEASIBLE"}

    best_cost = None
    best_subset = None
    for mask in range(1 << m):
        subset = [i for i in range(m) if mask >> i & 1]
        cost = selection_cost(instance, subset)
        if best_cost is not None and cost >= best_cost:
            continue
        if is_feasible_selection(instance, subset):
            best_cost = cost
            best_subset = subset
    if best_subset is None:
        return {"status": "INFEASIBLE"}
    return {"status": "OPTIMAL", "objective": best_cost, "solution": best_subset}


class WscpOracle:
    """Adapter exposing the solve/check surface grading harnesses expect."""

    def solve(self, instance_doc: dict):
        report = oracle_wscp(parse_instance(instance_doc))
        if report["status"] == "INFEASIBLE":
            return False, None
        return True, float(report["objective"])

    def check(self, instance_doc: dict, solution) -> bool:
        try:
            instance = parse_instance(instance_doc)
            selected = [int(i) for i in solution]
        except (TypeError, ValueError, KeyError):
            return False
        return is_feasible_selection(instance, selected)
