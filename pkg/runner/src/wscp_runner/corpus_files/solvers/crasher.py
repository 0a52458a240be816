"""Dies on every input."""


def solve(instance):
    return instance["emitters"][0]["cost"] / 0.0
