"""Set cover solver that forgets the robustness level: always solves for
single coverage."""


def _covers(e, c):
    dx = e["x"] - c["x"]
    dy = e["y"] - c["y"]
    return dx * dx + dy * dy <= (e["r"] + 1e-9) ** 2


def solve(instance):
    emitters = instance["emitters"]
    clients = instance["clients"]
    m = len(emitters)
    reach = [[_covers(e, c) for e in emitters] for c in clients]
    if any(not any(row) for row in reach):
        return {"status": "INFEASIBLE"}
    best_cost = None
    best = None
    for mask in range(1 << m):
        subset = [i for i in range(m) if mask >> i & 1]
        cost = sum(emitters[i]["cost"] for i in subset)
        if best_cost is not None and cost >= best_cost:
            continue
        if all(any(row[i] for i in subset) for row in reach):
            best_cost = cost
            best = subset
    if best is None:
        return {"status": "INFEASIBLE"}
    return {"status": "OPTIMAL", "objective": best_cost, "solution": best}
