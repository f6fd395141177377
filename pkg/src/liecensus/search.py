"""Exhaustive search for vertex sets with no common opposite.

A set T blocks when every opposite-type object is non-opposite some member,
i.e. T meets every column ``cols[o]`` (vertices not opposite object o).  The
default strategy branches on the unhit object with the fewest available
hitting vertices; vertices already tried at a node are barred from the later
siblings, so every minimal blocker is reached along exactly one path.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations


class BudgetExceeded(Exception):
    pass


@dataclass
class SearchResult:
    blockers: list[tuple[int, ...]]
    violations: list[tuple[int, ...]]
    nodes: int
    complete: bool = True
    strategy: str = "hitting"
    seeds: tuple[int, ...] = ()

    def merge(self, other: "SearchResult") -> None:
        self.blockers.extend(other.blockers)
        self.violations.extend(other.violations)
        self.nodes += other.nodes
        self.complete = self.complete and other.complete


@dataclass
class _Ctx:
    rows: list[int]
    cols: list[int]
    m: int
    deadline: float | None
    out: list = field(default_factory=list)
    bad: list = field(default_factory=list)
    nodes: int = 0


def _hit(ctx: _Ctx, chosen: list[int], surv: int, avail: int) -> None:
    ctx.nodes += 1
    if ctx.deadline is not None and not ctx.nodes & 0x3FF and time.monotonic() > ctx.deadline:
        raise BudgetExceeded
    if not surv:
        if len(chosen) == ctx.m:
            ctx.out.append(tuple(sorted(chosen)))
        else:
            ctx.bad.append(tuple(sorted(chosen)))
        return
    left = ctx.m - len(chosen)
    if not left:
        return
    cols, rows = ctx.cols, ctx.rows
    if left == 1:
        cand = avail
        s = surv
        while s and cand:
            low = s & -s
            cand &= cols[low.bit_length() - 1]
            s ^= low
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            ctx.out.append(tuple(sorted(chosen + [v])))
        return
    best = None
    best_n = None
    s = surv
    while s:
        low = s & -s
        c = cols[low.bit_length() - 1] & avail
        k = c.bit_count()
        if best_n is None or k < best_n:
            best, best_n = c, k
            if k <= 1:
                break
        s ^= low
    cand = best
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        avail &= ~low
        _hit(ctx, chosen + [v], surv & rows[v], avail)


def _root_branches(rows, cols, n_vertices, first=None):
    """(chosen, surv, avail) triples partitioning the search at the root."""
    full_v = (1 << n_vertices) - 1
    full_o = (1 << len(cols)) - 1
    if first is not None:
        return [([first], rows[first], full_v & ~(1 << first))]
    if not cols:
        return []
    # object 0 must be hit by some member
    branches = []
    avail = full_v
    cand = cols[0]
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        avail &= ~low
        branches.append(([v], full_o & rows[v], avail))
    return branches


def _run_branches(args):
    rows, cols, m, branches, deadline = args
    ctx = _Ctx(rows, cols, m, deadline)
    complete = True
    try:
        for chosen, surv, avail in branches:
            _hit(ctx, chosen, surv, avail)
    except BudgetExceeded:
        complete = False
    return ctx.out, ctx.bad, ctx.nodes, complete


def hitting_search(rows: list[int], cols: list[int], m: int, *, jobs: int = 1,
                   first: int | None = None, time_budget: float | None = None) -> SearchResult:
    """All blockers of size m (and any smaller ones, reported as violations).

    ``first`` restricts the search to sets containing that vertex.
    """
    n = len(rows)
    if m < 1:
        raise ValueError("set size must be positive")
    deadline = time.monotonic() + time_budget if time_budget else None
    branches = _root_branches(rows, cols, n, first)
    if jobs > 1 and len(branches) > 1:
        chunks = [branches[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_branches, [(rows, cols, m, c, deadline) for c in chunks]))
    else:
        parts = [_run_branches((rows, cols, m, branches, deadline))]
    res = SearchResult([], [], 0, True, "hitting", () if first is None else (first,))
    for out, bad, nodes, complete in parts:
        res.merge(SearchResult(out, bad, nodes, complete))
    res.blockers = sorted(set(res.blockers))
    res.violations = sorted(set(res.violations))
    return res


def ordered_search(rows: list[int], n_objects: int, m: int,
                   time_budget: float | None = None) -> SearchResult:
    """Plain DFS over vertex indices in increasing order, pruning on empty survivors."""
    n = len(rows)
    full = (1 << n_objects) - 1
    out: list[tuple[int, ...]] = []
    bad: list[tuple[int, ...]] = []
    nodes = 0
    deadline = time.monotonic() + time_budget if time_budget else None
    stack = [((), full, 0)]
    complete = True
    while stack:
        chosen, surv, start = stack.pop()
        nodes += 1
        if deadline is not None and not nodes & 0x3FF and time.monotonic() > deadline:
            complete = False
            break
        if len(chosen) == m - 1:
            for v in range(start, n):
                if not surv & rows[v]:
                    out.append(chosen + (v,))
            continue
        for v in range(n - 1, start - 1, -1):
            s = surv & rows[v]
            if not s:
                bad.append(chosen + (v,))
            else:
                stack.append((chosen + (v,), s, v + 1))
    return SearchResult(sorted(out), sorted(bad), nodes, complete, "ordered")


def naive_search(rows: list[int], n_objects: int, m: int) -> list[tuple[int, ...]]:
    """Every m-subset checked independently; no pruning."""
    full = (1 << n_objects) - 1
    out = []
    for combo in combinations(range(len(rows)), m):
        s = full
        for v in combo:
            s &= rows[v]
        if not s:
            out.append(combo)
    return out


def columns_from_rows(rows: list[int], n_objects: int) -> list[int]:
    cols = [0] * n_objects
    full = (1 << n_objects) - 1
    for v, row in enumerate(rows):
        miss = full & ~row
        while miss:
            low = miss & -miss
            cols[low.bit_length() - 1] |= 1 << v
            miss ^= low
    return cols
