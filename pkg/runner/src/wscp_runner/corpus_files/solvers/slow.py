"""Sleeps far past any sane time limit before answering."""

import time


def solve(instance):
    time.sleep(10)
    return {"status": "INFEASIBLE"}
