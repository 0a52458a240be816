"""Full validity check: the solution must be a K-robust cover and its cost
must equal the reported objective."""


def _covers(e, c):
    dx = e["x"] - c["x"]
    dy = e["y"] - c["y"]
    return dx * dx + dy * dy <= (e["r"] + 1e-9) ** 2


def check(instance, solution, objective):
    try:
        emitters = instance["emitters"]
        clients = instance["clients"]
        need = instance["K"] + 1
        chosen = sorted({int(i) for i in solution})
    except (TypeError, ValueError, KeyError):
        return False
    if any(i < 0 or i >= len(emitters) for i in chosen):
        return False
    for c in clients:
        if sum(1 for i in chosen if _covers(emitters[i], c)) < need:
            return False
    cost = sum(emitters[i]["cost"] for i in chosen)
    return abs(cost - objective) <= 1e-6 * max(1.0, abs(objective))
