import json
import math

import pytest

from wscp_runner.corpus import corpus_dir, decodable_instances
from wscp_runner.wscp import (
    WscpOracle,
    is_feasible_selection,
    oracle_wscp,
    parse_instance,
    selection_cost,
)


def _inst(emitters, clients, K=0):
    return parse_instance({"emitters": emitters, "clients": clients, "K": K})


def test_single_emitter_cover():
    inst = _inst(
        [{"x": 0, "y": 0, "r": 1.0, "cost": 2.5}], [{"x": 0.5, "y": 0}], K=0
    )
    report = oracle_wscp(inst)
    assert report["status"] == "OPTIMAL"
    assert report["objective"] == 2.5
    assert report["solution"] == [0]


def test_k_robust_picks_two_cheapest():
    # All three emitters cover the client; K=1 needs two of them. Enumerating
    # the 8 subsets by hand: the two cost-3 emitters win at 6.
    emitters = [
        {"x": 0, "y": 0, "r": 2.0, "cost": 3.0},
        {"x": 0.5, "y": 0, "r": 2.0, "cost": 3.0},
        {"x": 0, "y": 0.5, "r": 2.0, "cost": 5.0},
    ]
    report = oracle_wscp(_inst(emitters, [{"x": 0.1, "y": 0.1}], K=1))
    assert report["status"] == "OPTIMAL"
    assert report["objective"] == 6.0
    assert sorted(report["solution"]) == [0, 1]


def test_uncoverable_client_is_infeasible():
    inst = _inst(
        [{"x": 0, "y": 0, "r": 1.0, "cost": 1.0}], [{"x": 10, "y": 10}], K=0
    )
    assert oracle_wscp(inst) == {"status": "INFEASIBLE"}


def test_k_larger_than_emitters_is_infeasible():
    inst = _inst(
        [{"x": 0, "y": 0, "r": 1.0, "cost": 1.0}], [{"x": 0, "y": 0}], K=3
    )
    assert oracle_wscp(inst) == {"status": "INFEASIBLE"}


def test_zero_clients_costs_nothing():
    inst = _inst([{"x": 0, "y": 0, "r": 1.0, "cost": 1.0}], [], K=0)
    report = oracle_wscp(inst)
    assert report["objective"] == 0.0
    assert report["solution"] == []


def test_oracle_rejects_oversized_instances():
    emitters = [{"x": k, "y": 0, "r": 1.0, "cost": 1.0} for k in range(16)]
    with pytest.raises(ValueError):
        oracle_wscp(_inst(emitters, [{"x": 0, "y": 0}]))


def test_boundary_coverage_has_slack():
    # A client exactly on the radius counts as covered.
    inst = _inst([{"x": 0, "y": 0, "r": 1.0, "cost": 1.0}], [{"x": 1.0, "y": 0}])
    assert oracle_wscp(inst)["status"] == "OPTIMAL"


def test_feasibility_requires_distinct_emitters():
    emitters = [
        {"x": 0, "y": 0, "r": 1.0, "cost": 1.0},
        {"x": 0.2, "y": 0, "r": 1.0, "cost": 1.0},
    ]
    inst = _inst(emitters, [{"x": 0, "y": 0}], K=1)
    assert not is_feasible_selection(inst, [0])
    assert not is_feasible_selection(inst, [0, 0])  # duplicates collapse
    assert is_feasible_selection(inst, [0, 1])
    assert selection_cost(inst, [0, 1, 1]) == 2.0


def test_oracle_adapter_surface():
    oracle = WscpOracle()
    doc = json.loads(
        (corpus_dir() / "instances" / "i01_feasible_k0.json").read_text()
    )
    feasible, optimum = oracle.solve(doc)
    assert feasible and math.isclose(optimum, 2.5)
    assert oracle.check(doc, [2])
    assert not oracle.check(doc, [0])  # leaves the second client uncovered
    assert not oracle.check(doc, "garbage")


def test_corpus_instances_within_oracle_cap():
    for name in decodable_instances():
        doc = json.loads((corpus_dir() / "instances" / name).read_text())
        oracle_wscp(parse_instance(doc))  # must not raise
