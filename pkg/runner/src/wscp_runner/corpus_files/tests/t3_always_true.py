"""Rubber stamp: approves everything."""


def check(instance, solution, objective):
    return True
