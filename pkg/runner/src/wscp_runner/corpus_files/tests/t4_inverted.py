"""Inverted logic: computes the correct verdict, then negates it."""


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
        return True
    ok = all(0 <= i < len(emitters) for i in chosen)
    if ok:
        for c in clients:
            if sum(1 for i in chosen if _covers(emitters[i], c)) < need:
                ok = False
                break
    if ok:
        cost = sum(emitters[i]["cost"] for i in chosen)
        ok = abs(cost - objective) <= 1e-6 * max(1.0, abs(objective))
    return not ok
