"""Produces a report without the mandatory status field."""


def solve(instance):
    cost = sum(e["cost"] for e in instance["emitters"])
    return {"objective": cost, "solution": []}
