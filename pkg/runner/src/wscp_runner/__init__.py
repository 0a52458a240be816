"""Runner shim and K-robust weighted set cover fixture corpus."""

from .corpus import DEFECTIVE_SOLVERS, TAXONOMY, corpus_dir, decodable_instances, materialize
from .wscp import (
    Emitter,
    WscpInstance,
    WscpOracle,
    covers,
    is_feasible_selection,
    oracle_wscp,
    parse_instance,
    selection_cost,
)

__version__ = "0.1.0"
