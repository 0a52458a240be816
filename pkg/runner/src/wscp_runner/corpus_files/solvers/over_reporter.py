"""Never admits infeasibility: switches on every emitter and calls it a
solution."""


def solve(instance):
    emitters = instance["emitters"]
    cost = sum(e["cost"] for e in emitters)
    return {"status": "OPTIMAL", "objective": cost, "solution": list(range(len(emitters)))}
