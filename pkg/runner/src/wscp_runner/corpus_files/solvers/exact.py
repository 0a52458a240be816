"""Exhaustive K-robust weighted set cover solver."""


def _covers(e, c):
    dx = e["x"] - c["x"]
    dy = e["y"] - c["y"]
    return dx * dx + dy * dy <= (e["r"] + 1e-9) ** 2


def solve(instance):
    emitters = instance["emitters"]
    clients = instance["clients"]
    need = instance["K"] + 1
    m = len(emitters)
    reach = [[_covers(e, c) for e in emitters] for c in clients]
    if any(sum(row) < need for row in reach):
        return {"status": "INFEASIBLE"}
    best_cost = None
    best = None
    for mask in range(1 << m):
        subset = [i for i in range(m) if mask >> i & 1]
        cost = sum(emitters[i]["cost"] for i in subset)
        if best_cost is not None and cost >= best_cost:
            continue
        if all(sum(1 for i in subset if row[i]) >= need for row in reach):
            best_cost = cost
            best = subset
    if best is None:
        return {"status": "INFEASIBLE"}
    return {"status": "OPTIMAL", "objective": best_cost, "solution": best}
