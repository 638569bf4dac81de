"""Exhaustive ground truth: minimum envy, optimal sets and symmetry classes.

The search assigns houses to vertices one at a time and prunes on the partial
envy, which can only grow. Values are scaled to integers first so the inner
loop never touches :class:`~fractions.Fraction`.
"""
from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    BudgetExceeded,
    Guarantee,
    InputError,
    SolveResult,
    ValueMatrix,
    as_profile,
    integer_scale,
)
from .graphs import Graph, _bfs_order, connected_components

DEFAULT_BUDGET = math.factorial(10)


def default_budget() -> int:
    env = os.environ.get("HOUSEALLOC_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class Symmetry(str, enum.Enum):
    NONE = "none"
    CYCLE_DIHEDRAL = "cycle"
    BIPARTITE_SIDES = "bipartite"


@dataclass(frozen=True)
class OptimalSet:
    envy: Fraction
    allocations: tuple[tuple[int, ...], ...]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.allocations)


def _check_budget(n: int, budget: int | None) -> None:
    budget = default_budget() if budget is None else budget
    need = math.factorial(n)
    if need > budget:
        raise BudgetExceeded(f"exhaustive search over {n}! allocations", need, budget)


class _Found(Exception):
    pass


class _Search:
    """Branch and bound over allocations in a fixed vertex order."""

    def __init__(self, graph: Graph, vals: Sequence[int], order: Sequence[int]):
        self.n = graph.n
        self.vals = list(vals)
        self.order = list(order)
        pos = {v: t for t, v in enumerate(order)}
        adj = graph.adjacency
        self.back = [[w for w in adj[u] if pos[w] < t] for t, u in enumerate(order)]
        # from this step on, every remaining vertex is isolated in the graph
        tail = self.n
        for t in range(self.n - 1, -1, -1):
            if adj[self.order[t]]:
                break
            tail = t
        self.tail = tail

    def minimum(self, upper: int | None = None, stop_at: int | None = None):
        """Best ``(cost, assignment)`` with cost < ``upper``; the first found in
        search order wins ties. Stops early once cost <= ``stop_at``."""
        n, vals, order, back, tail = self.n, self.vals, self.order, self.back, self.tail
        assign = [-1] * n
        used = [False] * n
        best_cost = upper
        best: list[int] | None = None

        def rec(t: int, cost: int):
            nonlocal best_cost, best
            if t >= tail:
                rest = iter(h for h in range(n) if not used[h])
                full = assign[:]
                for s in range(t, n):
                    full[order[s]] = next(rest)
                if best_cost is None or cost < best_cost:
                    best_cost, best = cost, full
                    if stop_at is not None and cost <= stop_at:
                        raise _Found
                return
            u = order[t]
            bu = back[t]
            for h in range(n):
                if used[h]:
                    continue
                x = vals[h]
                c = cost
                for w in bu:
                    y = vals[assign[w]]
                    c += x - y if x > y else y - x
                if best_cost is not None and c >= best_cost:
                    continue
                used[h] = True
                assign[u] = h
                rec(t + 1, c)
                used[h] = False
                assign[u] = -1

        try:
            rec(0, 0)
        except _Found:
            pass
        if best is None:
            return None
        return best_cost, best

    def all_at(self, target: int, limit: int | None = None):
        """Every assignment of cost exactly ``target``, in search order."""
        n, vals, order, back, tail = self.n, self.vals, self.order, self.back, self.tail
        assign = [-1] * n
        used = [False] * n
        out: list[tuple[int, ...]] = []
        truncated = False

        def rec(t: int, cost: int) -> bool:
            nonlocal truncated
            if t >= tail:
                if cost != target:
                    return True
                free = [h for h in range(n) if not used[h]]
                for perm in itertools.permutations(free):
                    full = assign[:]
                    for s, h in zip(range(t, n), perm):
                        full[order[s]] = h
                    out.append(tuple(full))
                    if limit is not None and len(out) >= limit:
                        truncated = True
                        return False
                return True
            u = order[t]
            bu = back[t]
            for h in range(n):
                if used[h]:
                    continue
                x = vals[h]
                c = cost
                for w in bu:
                    y = vals[assign[w]]
                    c += x - y if x > y else y - x
                if c > target:
                    continue
                used[h] = True
                assign[u] = h
                ok = rec(t + 1, c)
                used[h] = False
                assign[u] = -1
                if not ok:
                    return False
            return True

        rec(0, 0)
        return out, truncated


def _search_order(graph: Graph) -> list[int]:
    """BFS within components, larger components first, isolated vertices last."""
    comps = sorted(connected_components(graph), key=lambda c: (-len(c.vertices), c.vertices[0]))
    order: list[int] = []
    for c in comps:
        if len(c.vertices) == 1:
            continue
        root = max(c.vertices, key=lambda v: (graph.degree(v), -v))
        order.extend(_bfs_order(graph.adjacency, root))
    order.extend(v for v in range(graph.n) if graph.degree(v) == 0)
    return order


def _optimum(graph: Graph, vals: Sequence[int]) -> int:
    found = _Search(graph, vals, _search_order(graph)).minimum()
    return found[0] if found else 0


def brute_force(graph: Graph, profile, budget: int | None = None) -> SolveResult:
    """Exact minimum envy; ties go to the lexicographically smallest allocation."""
    profile = as_profile(profile)
    if graph.n != len(profile):
        raise InputError("graph and profile sizes differ")
    _check_budget(graph.n, budget)
    if graph.n == 0:
        return SolveResult((), Fraction(0), "brute_force", Guarantee.EXACT)
    vals, d = integer_scale(profile.values)
    opt = _optimum(graph, vals)
    cost, assign = _Search(graph, vals, range(graph.n)).minimum(upper=opt + 1, stop_at=opt)
    return SolveResult(tuple(assign), Fraction(cost, d), "brute_force", Guarantee.EXACT)


def enumerate_optima(
    graph: Graph, profile, budget: int | None = None, limit: int | None = None
) -> OptimalSet:
    """All minimum-envy allocations in lexicographic order."""
    profile = as_profile(profile)
    if graph.n != len(profile):
        raise InputError("graph and profile sizes differ")
    _check_budget(graph.n, budget)
    if graph.n == 0:
        return OptimalSet(Fraction(0), ((),))
    vals, d = integer_scale(profile.values)
    opt = _optimum(graph, vals)
    allocs, truncated = _Search(graph, vals, range(graph.n)).all_at(opt, limit)
    return OptimalSet(Fraction(opt, d), tuple(allocs), truncated)


def canonicalize(
    alloc: Sequence[int],
    symmetry: Symmetry | str = Symmetry.NONE,
    *,
    sides: tuple[int, int] | None = None,
    cycle_order: Sequence[int] | None = None,
) -> tuple[int, ...]:
    """Lexicographically least member of the allocation's symmetry orbit.

    For ``cycle`` the vertices are taken in ``cycle_order`` (default ``0..n-1``,
    the layout of :func:`~housealloc.graphs.cycle_graph`). For ``bipartite``,
    ``sides=(r, s)`` names the first ``r`` vertices as one side.
    """
    symmetry = Symmetry(symmetry)
    alloc = tuple(alloc)
    n = len(alloc)
    if symmetry is Symmetry.NONE:
        return alloc
    if symmetry is Symmetry.CYCLE_DIHEDRAL:
        order = list(range(n)) if cycle_order is None else list(cycle_order)
        if sorted(order) != list(range(n)) or n < 3:
            raise InputError("cycle symmetry needs a cycle order over all vertices (n >= 3)")
        seq = [alloc[v] for v in order]
        rev = seq[::-1]
        best = min(
            min(tuple(seq[i:] + seq[:i]) for i in range(n)),
            min(tuple(rev[i:] + rev[:i]) for i in range(n)),
        )
        out = [0] * n
        for v, h in zip(order, best):
            out[v] = h
        return tuple(out)
    if sides is None:
        raise InputError("bipartite symmetry needs sides=(r, s)")
    r, s = sides
    if r + s != n or r < 0 or s < 0:
        raise InputError(f"sides {sides} do not match allocation of length {n}")
    return tuple(sorted(alloc[:r])) + tuple(sorted(alloc[r:]))


def count_classes(optima: OptimalSet, symmetry: Symmetry | str, **kw) -> int:
    return len({canonicalize(a, symmetry, **kw) for a in optima.allocations})


def brute_force_general(graph: Graph, matrix: ValueMatrix, budget: int | None = None) -> SolveResult:
    """Exact minimum envy under per-agent valuations; lexicographically first optimum.

    ``allocation[i]`` is the house (matrix column) of agent ``i``.
    """
    n = matrix.n
    if graph.n != n:
        raise InputError("graph and value matrix sizes differ")
    _check_budget(n, budget)
    if n == 0:
        return SolveResult((), Fraction(0), "brute_force_general", Guarantee.EXACT)
    flat, d = integer_scale([x for row in matrix.entries for x in row])
    M = [flat[i * n : (i + 1) * n] for i in range(n)]
    back = [[w for w in graph.adjacency[u] if w < u] for u in range(n)]
    assign = [-1] * n
    used = [False] * n
    best_cost: int | None = None
    best: list[int] | None = None

    def rec(u: int, cost: int):
        nonlocal best_cost, best
        if u == n:
            if best_cost is None or cost < best_cost:
                best_cost, best = cost, assign[:]
            return
        row = M[u]
        for h in range(n):
            if used[h]:
                continue
            c = cost
            for w in back[u]:
                hw = assign[w]
                c += max(row[hw] - row[h], 0) + max(M[w][h] - M[w][hw], 0)
            if best_cost is not None and c >= best_cost:
                continue
            used[h] = True
            assign[u] = h
            rec(u + 1, c)
            used[h] = False
            assign[u] = -1

    rec(0, 0)
    return SolveResult(tuple(best), Fraction(best_cost, d), "brute_force_general", Guarantee.EXACT)
