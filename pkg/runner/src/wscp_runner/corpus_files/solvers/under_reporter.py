"""Never finds anything: declares every instance infeasible."""


def solve(instance):
    return {"status": "INFEASIBLE"}
