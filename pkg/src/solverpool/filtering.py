"""Exact removal of a minimum number of components so that every retained
(solver, instance, test) triple is interpretable.

The underlying problem is the complement of a maximum-retention 0/1 program:
drop a minimum-cardinality hitting set of the bad-triple hypergraph, subject
to every pool staying nonempty. Pools here are tiny (hundreds of components)
and the bad set is highly structured (a broken component induces its whole
slice), so a forced-drop preprocessing pass plus a small branch-and-bound
solves it exactly without an external MILP solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .domain import RawResults


class EmptySelectionError(Exception):
    """No nonempty interpretable (solver, instance, test) cube exists."""


@dataclass
class BadTripleSet:
    """Non-interpretable triples, indexed for the filter solver.

    pair_masks maps (solver_idx, instance_idx) to a bitmask over test
    indices; bit t set means triple (s, i, t) is not interpretable.
    """

    solver_ids: list[str]
    instance_ids: list[str]
    test_ids: list[str]
    pair_masks: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def n_triples(self) -> int:
        return sum(m.bit_count() for m in self.pair_masks.values())

    def incidence_counts(self) -> tuple[list[int], list[int], list[int]]:
        """Number of bad triples each component appears in."""
        cs = [0] * len(self.solver_ids)
        ci = [0] * len(self.instance_ids)
        ct = [0] * len(self.test_ids)
        for (s, i), mask in self.pair_masks.items():
            n = mask.bit_count()
            cs[s] += n
            ci[i] += n
            m = mask
            while m:
                t = (m & -m).bit_length() - 1
                ct[t] += 1
                m &= m - 1
        return cs, ci, ct

    @classmethod
    def from_triples(
        cls,
        solver_ids: Iterable[str],
        instance_ids: Iterable[str],
        test_ids: Iterable[str],
        triples: Iterable[tuple[int, int, int]],
    ) -> "BadTripleSet":
        bad = cls(list(solver_ids), list(instance_ids), list(test_ids))
        for s, i, t in triples:
            bad.pair_masks[(s, i)] = bad.pair_masks.get((s, i), 0) | (1 << t)
        return bad


@dataclass
class FilterSolution:
    """An optimal retained cube: ids kept per pool, and the objective
    (total number of retained components)."""

    keep_solvers: list[str]
    keep_instances: list[str]
    keep_tests: list[str]
    objective: int


def collect_noninterpretable(results: RawResults) -> BadTripleSet:
    """Gather every non-interpretable triple from a cross-evaluation.

    A non-interpretable pair taints all its triples (one per test); a pair
    that reported a solution contributes exactly the triples whose test run
    was itself non-interpretable.
    """
    s_index = {sid: k for k, sid in enumerate(results.solver_ids)}
    i_index = {iid: k for k, iid in enumerate(results.instance_ids)}
    t_index = {tid: k for k, tid in enumerate(results.test_ids)}
    n_tests = len(results.test_ids)
    full = (1 << n_tests) - 1

    bad = BadTripleSet(
        list(results.solver_ids), list(results.instance_ids), list(results.test_ids)
    )
    for (sid, iid), pair in results.pairs.items():
        key = (s_index[sid], i_index[iid])
        if not pair.interpretable:
            if full:
                bad.pair_masks[key] = full
            continue
        if not pair.r:
            continue
        mask = 0
        for tid, t in t_index.items():
            triple = results.triples[(sid, iid, tid)]
            if not triple.interpretable:
                mask |= 1 << t
        if mask:
            bad.pair_masks[key] = mask
    return bad


def _forced_drops(bad: BadTripleSet):
    """Iteratively drop components that are bad with every retained partner
    cell; any feasible nonempty selection must exclude them."""
    n_s, n_i, n_t = len(bad.solver_ids), len(bad.instance_ids), len(bad.test_ids)
    keep_s = set(range(n_s))
    keep_i = set(range(n_i))
    keep_t = set(range(n_t))
    masks = bad.pair_masks

    changed = True
    while changed:
        changed = False
        if not (keep_s and keep_i and keep_t):
            raise EmptySelectionError("filtering would empty a component pool")
        t_mask = 0
        for t in keep_t:
            t_mask |= 1 << t
        for s in sorted(keep_s):
            if all((masks.get((s, i), 0) & t_mask) == t_mask for i in keep_i):
                keep_s.discard(s)
                changed = True
        for i in sorted(keep_i):
            if all((masks.get((s, i), 0) & t_mask) == t_mask for s in keep_s):
                keep_i.discard(i)
                changed = True
        for t in sorted(keep_t):
            bit = 1 << t
            if all(masks.get((s, i), 0) & bit for s in keep_s for i in keep_i):
                keep_t.discard(t)
                changed = True
    if not (keep_s and keep_i and keep_t):
        raise EmptySelectionError("filtering would empty a component pool")
    return keep_s, keep_i, keep_t


def _solution_key(n_pools, drops):
    """Total order on solutions: fewest drops, then fewest solver drops,
    then instance, then test drops, then prefer dropping higher-indexed
    components (so kept index tuples compare lexicographically smallest)."""
    ds, di, dt = drops
    kept = tuple(
        tuple(k for k in range(n_pools[p]) if k not in d)
        for p, d in ((0, ds), (1, di), (2, dt))
    )
    total = len(ds) + len(di) + len(dt)
    return (total, len(ds), len(di), len(dt)) + kept


def _greedy_cover(triples, sizes):
    """Greedy hitting set used as the branch-and-bound incumbent. Returns a
    drop-set triple or None when greedy gets stuck against nonemptiness."""
    uncovered = list(triples)
    drops = (set(), set(), set())
    while uncovered:
        counts: dict[tuple[int, int], int] = {}
        for tri in uncovered:
            for pool in range(3):
                key = (pool, tri[pool])
                counts[key] = counts.get(key, 0) + 1
        best = None
        for (pool, idx), c in sorted(counts.items()):
            if len(drops[pool]) + 1 > sizes[pool] - 1:
                continue  # would empty the pool
            if best is None or c > best[0]:
                best = (c, pool, idx)
        if best is None:
            return None
        _, pool, idx = best
        drops[pool].add(idx)
        uncovered = [tri for tri in uncovered if tri[pool] != idx]
    return drops


def _lower_bound(triples, drops):
    """Count pairwise-disjoint uncovered triples; each needs its own drop."""
    used_s: set[int] = set()
    used_i: set[int] = set()
    used_t: set[int] = set()
    lb = 0
    for s, i, t in triples:
        if s in drops[0] or i in drops[1] or t in drops[2]:
            continue
        if s in used_s or i in used_i or t in used_t:
            continue
        used_s.add(s)
        used_i.add(i)
        used_t.add(t)
        lb += 1
    return lb


def solve_filter(bad: BadTripleSet) -> FilterSolution:
    """Exactly maximize the number of retained components subject to every
    retained triple being interpretable and every pool staying nonempty.

    Raises EmptySelectionError when no nonempty interpretable cube exists.
    """
    n_s, n_i, n_t = len(bad.solver_ids), len(bad.instance_ids), len(bad.test_ids)
    keep_s, keep_i, keep_t = _forced_drops(bad)
    forced = (
        set(range(n_s)) - keep_s,
        set(range(n_i)) - keep_i,
        set(range(n_t)) - keep_t,
    )

    # Residual bad triples among the still-retained components.
    residual: list[tuple[int, int, int]] = []
    for (s, i), mask in sorted(bad.pair_masks.items()):
        if s not in keep_s or i not in keep_i:
            continue
        m = mask
        while m:
            t = (m & -m).bit_length() - 1
            if t in keep_t:
                residual.append((s, i, t))
            m &= m - 1
    residual.sort()

    sizes = (len(keep_s), len(keep_i), len(keep_t))
    best_drops = None
    best_key = None

    incumbent = _greedy_cover(residual, sizes)
    if incumbent is not None:
        best_drops = tuple(set(d) for d in incumbent)
        best_key = _solution_key((n_s, n_i, n_t), _merge(forced, best_drops))

    def consider(drops):
        nonlocal best_drops, best_key
        key = _solution_key((n_s, n_i, n_t), _merge(forced, drops))
        if best_key is None or key < best_key:
            best_key = key
            best_drops = tuple(set(d) for d in drops)

    def search(drops, forbidden, start):
        nonlocal best_drops
        # Find the first uncovered triple.
        chosen = None
        for idx in range(start, len(residual)):
            s, i, t = residual[idx]
            if s in drops[0] or i in drops[1] or t in drops[2]:
                continue
            chosen = (idx, s, i, t)
            break
        if chosen is None:
            consider(drops)
            return
        n_dropped = sum(len(d) for d in drops)
        if best_drops is not None:
            budget = sum(len(d) for d in best_drops)
            if n_dropped + _lower_bound(residual, drops) > budget:
                return
        idx, s, i, t = chosen
        # Partition: drop s; keep s, drop i; keep s and i, drop t.
        for pool, comp in ((0, s), (1, i), (2, t)):
            if (pool, comp) in forbidden:
                continue
            if len(drops[pool]) + 1 > sizes[pool] - 1:
                continue  # pool must stay nonempty
            drops[pool].add(comp)
            search(drops, forbidden, idx + 1)
            drops[pool].remove(comp)
            forbidden = forbidden | {(pool, comp)}

    search((set(), set(), set()), frozenset(), 0)
    if best_drops is None:
        raise EmptySelectionError("no nonempty interpretable cube exists")

    ds, di, dt = _merge(forced, best_drops)
    keep = FilterSolution(
        keep_solvers=[x for k, x in enumerate(bad.solver_ids) if k not in ds],
        keep_instances=[x for k, x in enumerate(bad.instance_ids) if k not in di],
        keep_tests=[x for k, x in enumerate(bad.test_ids) if k not in dt],
        objective=(n_s - len(ds)) + (n_i - len(di)) + (n_t - len(dt)),
    )
    return keep


def _merge(a, b):
    return tuple(x | y for x, y in zip(a, b))


def brute_force_filter(bad: BadTripleSet, size_cap: int = 24) -> FilterSolution:
    """Oracle for solve_filter: exhaustive enumeration over keep-subsets of
    the two smallest pools, with the third pool derived maximal.

    Only valid for tiny pools; rejects inputs above ``size_cap`` total
    components.
    """
    n = (len(bad.solver_ids), len(bad.instance_ids), len(bad.test_ids))
    if sum(n) > size_cap:
        raise ValueError(f"brute force limited to {size_cap} total components")
    if min(n) == 0:
        raise EmptySelectionError("a component pool is empty")

    # Roles: enumerate pools a and b, derive pool c (the largest).
    order = sorted(range(3), key=lambda p: (n[p], p))
    a, b, c = order
    na, nb, nc = n[a], n[b], n[c]
    full_c = (1 << nc) - 1

    # mask_ab[x][y] = bitmask over pool c of bad triples with (a=x, b=y).
    mask_ab = [[0] * nb for _ in range(na)]
    for (s, i), tmask in bad.pair_masks.items():
        m = tmask
        while m:
            t = (m & -m).bit_length() - 1
            tri = (s, i, t)
            mask_ab[tri[a]][tri[b]] |= 1 << tri[c]
            m &= m - 1

    best_key = None
    best = None
    for sub_a in range(1, 1 << na):
        members_a = [x for x in range(na) if sub_a >> x & 1]
        # Per-b mask of bad c-components once sub_a is fixed.
        per_b = [0] * nb
        for y in range(nb):
            acc = 0
            for x in members_a:
                acc |= mask_ab[x][y]
            per_b[y] = acc
        # Subset DP: union of per_b over every subset of pool b.
        union = [0] * (1 << nb)
        for m in range(1, 1 << nb):
            low = (m & -m).bit_length() - 1
            union[m] = union[m & (m - 1)] | per_b[low]
        for sub_b in range(1, 1 << nb):
            keep_c = full_c & ~union[sub_b]
            if keep_c == 0:
                continue
            sub = [0, 0, 0]
            sub[a], sub[b], sub[c] = sub_a, sub_b, keep_c
            drops = tuple(
                {k for k in range(n[p]) if not (sub[p] >> k & 1)} for p in range(3)
            )
            key = _solution_key(n, drops)
            if best_key is None or key < best_key:
                best_key = key
                best = drops
    if best is None:
        raise EmptySelectionError("no nonempty interpretable cube exists")
    ds, di, dt = best
    return FilterSolution(
        keep_solvers=[x for k, x in enumerate(bad.solver_ids) if k not in ds],
        keep_instances=[x for k, x in enumerate(bad.instance_ids) if k not in di],
        keep_tests=[x for k, x in enumerate(bad.test_ids) if k not in dt],
        objective=sum(n) - len(ds) - len(di) - len(dt),
    )
