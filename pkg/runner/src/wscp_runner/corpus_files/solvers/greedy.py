"""Greedy cover heuristic: repeatedly buy the emitter with the best
newly-satisfied-demand per cost."""


def _covers(e, c):
    dx = e["x"] - c["x"]
    dy = e["y"] - c["y"]
    return dx * dx + dy * dy <= (e["r"] + 1e-9) ** 2


def solve(instance):
    emitters = instance["emitters"]
    clients = instance["clients"]
    need = instance["K"] + 1
    reach = [[_covers(e, c) for e in emitters] for c in clients]
    if any(sum(row) < need for row in reach):
        return {"status": "INFEASIBLE"}
    chosen = []
    deficits = [need] * len(clients)
    while any(d > 0 for d in deficits):
        best = None
        for j, e in enumerate(emitters):
            if j in chosen:
                continue
            gain = sum(1 for k, row in enumerate(reach) if row[j] and deficits[k] > 0)
            if gain == 0:
                continue
            score = e["cost"] / gain
            if best is None or score < best[0]:
                best = (score, j)
        if best is None:
            return {"status": "INFEASIBLE"}
        j = best[1]
        chosen.append(j)
        for k, row in enumerate(reach):
            if row[j] and deficits[k] > 0:
                deficits[k] -= 1
    chosen.sort()
    cost = sum(emitters[i]["cost"] for i in chosen)
    return {"status": "OPTIMAL", "objective": cost, "solution": chosen}
