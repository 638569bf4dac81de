"""Route an instance to the best available solver.

Connected graphs of a known class go to their closed form. Disconnected
graphs whose components all belong to one strongly separable family (or
are all cliques) go to the matching union solver. Anything else is solved
exhaustively within budget, and otherwise by local search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from more_itertools import distinct_permutations

from . import connected as cs
from . import unions as us
from .core import (
    BudgetExceeded,
    Guarantee,
    InputError,
    SolveResult,
    ValueMatrix,
    ValueProfile,
    as_profile,
    total_envy,
    total_envy_general,
)
from .graphs import (
    ComponentClass,
    Graph,
    Kind,
    RootedTree,
    _bfs_order,
    classify_component,
    connected_components,
)
from .oracle import brute_force, brute_force_general, default_budget
from .trees import local_median_fixpoint

SOLVERS = (
    "auto",
    "brute_force",
    "path",
    "cycle",
    "star",
    "clique",
    "complete_bipartite",
    "complete_general",
    "union_ordering",
    "union_paths_dp",
    "matching_graph",
    "equal_cliques",
    "cliques_xp",
    "heuristic",
)

LOCAL_SEARCH_LIMIT = 400


@dataclass(frozen=True)
class Part:
    """A component with its class; ``layout`` lists global vertices in solver layout."""

    cls: ComponentClass
    layout: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.layout)


def classify_graph(graph: Graph) -> list[Part]:
    parts = []
    for comp in connected_components(graph):
        cls = classify_component(comp.graph)
        parts.append(Part(cls, tuple(comp.vertices[i] for i in cls.order)))
    return parts


def _as_star(p: Part) -> Part | None:
    k = p.cls.kind
    if k is Kind.STAR:
        return p
    if k is Kind.PATH and p.size <= 3:
        lay = p.layout if p.size < 3 else (p.layout[1], p.layout[0], p.layout[2])
        return Part(ComponentClass(Kind.STAR, (p.size - 1,)), lay)
    return None


def _as_clique(p: Part) -> Part | None:
    k = p.cls.kind
    if k is Kind.CLIQUE:
        return p
    if (k is Kind.PATH and p.size <= 2) or (k is Kind.CYCLE and p.size == 3):
        return Part(ComponentClass(Kind.CLIQUE, (p.size,)), p.layout)
    return None


def union_family(parts: Sequence[Part]) -> tuple[str, list[Part]] | None:
    """Single family covering every component, most specific first."""
    if all(p.cls.kind is Kind.PATH for p in parts):
        return "paths", list(parts)
    cl = [_as_clique(p) for p in parts]
    if all(cl):
        return "cliques", cl
    st = [_as_star(p) for p in parts]
    if all(st):
        return "stars", st
    if all(p.cls.kind is Kind.CYCLE for p in parts):
        return "cycles", list(parts)
    return None


def _place(layout: Sequence[int], layout_alloc: Sequence[int], n: int) -> tuple[int, ...]:
    out = [0] * n
    for v, h in zip(layout, layout_alloc):
        out[v] = h
    return tuple(out)


def _relayout(res: SolveResult, layout: Sequence[int], n: int, parts, family=None) -> SolveResult:
    info = dict(res.info)
    info["components"] = [str(p.cls) for p in parts]
    if family:
        info["family"] = family
    return SolveResult(_place(layout, res.allocation, n), res.envy, res.solver, res.guarantee, info)


def _solve_connected(part: Part, profile: ValueProfile) -> SolveResult | None:
    cls = part.cls
    n = part.size
    if cls.kind is Kind.PATH:
        return cs.solve_path(n, profile)
    if cls.kind is Kind.CYCLE:
        return cs.solve_cycle(n, profile)
    if cls.kind is Kind.STAR:
        return cs.solve_star(cls.params[0], profile)
    if cls.kind is Kind.CLIQUE:
        return cs.solve_clique(n, profile)
    if cls.kind is Kind.COMPLETE_BIPARTITE:
        return cs.solve_complete_bipartite(cls.params[0], cls.params[1], profile)
    return None


def _solve_family(family: str, parts: list[Part], profile, budget: int | None) -> SolveResult:
    if family == "paths":
        lengths = [p.size for p in parts]
        if max(lengths) <= 2:
            edges = [p for p in parts if p.size == 2]
            singles = [p for p in parts if p.size == 1]
            order = edges + singles
            res = us.solve_matching_graph(len(edges), len(singles), profile)
            return res, order
        return us.solve_union_paths_dp(lengths, profile), parts
    if family == "cliques":
        sizes = [p.size for p in parts]
        if len(set(sizes)) == 1:
            return us.solve_equal_cliques(len(sizes), sizes[0], profile), parts
        kw = {} if budget is None else {"budget": budget}
        return us.solve_cliques_xp(sizes, profile, **kw), parts
    kw = {} if budget is None else {"budget": budget}
    return us.solve_union_by_ordering([p.cls for p in parts], profile, **kw), parts


def _fits_brute_force(n: int, budget: int | None) -> bool:
    b = default_budget() if budget is None else budget
    return math.factorial(n) <= b


def solve(graph: Graph, values, solver: str = "auto", budget: int | None = None) -> SolveResult:
    """Minimum-envy allocation for identical valuations.

    ``allocation[v]`` is the rank of vertex ``v``'s house in the sorted
    profile. ``budget`` caps exhaustive enumeration (oracle, orderings and
    clique windows).
    """
    profile = as_profile(values)
    n = graph.n
    if n != len(profile):
        raise InputError(f"graph has {n} vertices but there are {len(profile)} values")
    if solver not in SOLVERS:
        raise InputError(f"unknown solver {solver!r}")
    if solver == "complete_general":
        raise InputError("complete_general needs per-agent valuations")
    if n == 0:
        return SolveResult((), Fraction(0), "empty", Guarantee.EXACT)
    if solver == "brute_force":
        return brute_force(graph, profile, budget)
    parts = classify_graph(graph)
    if solver == "heuristic":
        return solve_heuristic(graph, profile, parts, budget)
    if solver != "auto":
        return _forced(solver, graph, profile, parts, budget)

    if len(parts) == 1:
        res = _solve_connected(parts[0], profile)
        if res is not None:
            return _relayout(res, parts[0].layout, n, parts)
    else:
        fam = union_family(parts)
        if fam is not None:
            try:
                res, order = _solve_family(fam[0], fam[1], profile, budget)
                layout = [v for p in order for v in p.layout]
                return _relayout(res, layout, n, parts, fam[0])
            except BudgetExceeded:
                pass
    if _fits_brute_force(n, budget):
        res = brute_force(graph, profile, budget)
        return _relayout(res, range(n), n, parts)
    return solve_heuristic(graph, profile, parts, budget)


def _forced(solver: str, graph: Graph, profile, parts: list[Part], budget) -> SolveResult:
    n = graph.n
    connected_kinds = {
        "path": Kind.PATH,
        "cycle": Kind.CYCLE,
        "star": Kind.STAR,
        "clique": Kind.CLIQUE,
        "complete_bipartite": Kind.COMPLETE_BIPARTITE,
    }
    if solver in connected_kinds:
        if len(parts) != 1:
            raise InputError(f"solver {solver} needs a connected graph")
        part = parts[0]
        conv = {"star": _as_star, "clique": _as_clique}.get(solver)
        if conv is not None:
            part = conv(part) or part
        if part.cls.kind is not connected_kinds[solver]:
            raise InputError(f"graph is {part.cls}, not a {solver}")
        return _relayout(_solve_connected(part, profile), part.layout, n, parts)
    fam = union_family(parts)
    wanted = {
        "union_paths_dp": ("paths",),
        "matching_graph": ("paths",),
        "equal_cliques": ("cliques",),
        "cliques_xp": ("cliques",),
        "union_ordering": ("paths", "stars", "cycles", "cliques"),
    }[solver]
    if fam is None or fam[0] not in wanted:
        raise InputError(f"solver {solver} does not apply to components {[str(p.cls) for p in parts]}")
    members = fam[1]
    kw = {} if budget is None else {"budget": budget}
    if solver == "union_paths_dp":
        res, order = us.solve_union_paths_dp([p.size for p in members], profile), members
    elif solver == "matching_graph":
        if any(p.size > 2 for p in members):
            raise InputError("matching_graph needs components of at most 2 vertices")
        edges = [p for p in members if p.size == 2]
        singles = [p for p in members if p.size == 1]
        res, order = us.solve_matching_graph(len(edges), len(singles), profile), edges + singles
    elif solver == "equal_cliques":
        sizes = {p.size for p in members}
        if len(sizes) != 1:
            raise InputError("equal_cliques needs cliques of one size")
        res, order = us.solve_equal_cliques(len(members), sizes.pop(), profile), members
    elif solver == "cliques_xp":
        res, order = us.solve_cliques_xp([p.size for p in members], profile, **kw), members
    else:
        if fam[0] == "cliques" and len({p.size for p in members}) != 1:
            raise InputError("union_ordering is exact only for equal cliques")
        res, order = us.solve_union_by_ordering([p.cls for p in members], profile, **kw), members
    layout = [v for p in order for v in p.layout]
    return _relayout(res, layout, n, parts, fam[0])


# Heuristic fallback


def _block_cost_fn(part: Part, graph: Graph, local: Sequence[int]) -> Callable[[Sequence[Fraction]], Fraction]:
    """Envy of a component whose ``t``-th layout vertex gets ``vals[local[t]]``."""
    kind = part.cls.kind
    if kind is Kind.PATH:
        return lambda vals: vals[-1] - vals[0]
    if kind is Kind.CYCLE:
        return lambda vals: 2 * (vals[-1] - vals[0])
    if kind is Kind.CLIQUE:
        return lambda vals: sum(((2 * k - len(vals) + 1) * v for k, v in enumerate(vals)), Fraction(0))
    if kind is Kind.COMPLETE_BIPARTITE:
        larger = local[: part.cls.params[0]]
        return lambda vals: cs.bipartite_cost(vals, larger)
    pos = {v: t for t, v in enumerate(part.layout)}
    edges = [(local[pos[u]], local[pos[v]]) for u, v in graph.edges if u in pos and v in pos]
    return lambda vals: sum((abs(vals[a] - vals[b]) for a, b in edges), Fraction(0))


def _block_layout(part: Part, graph: Graph) -> tuple[Part, list[int]]:
    """Part re-laid out for block placement, plus the local rank order."""
    kind = part.cls.kind
    if kind is Kind.STAR:
        return part, cs.star_layout(part.size)
    if kind is Kind.COMPLETE_BIPARTITE:
        r, s = part.cls.params
        larger = cs.bipartite_larger_side(r, s)
        lset = set(larger)
        return part, larger + [h for h in range(r + s) if h not in lset]
    if kind in (Kind.PATH, Kind.CYCLE, Kind.CLIQUE):
        return part, list(range(part.size))
    # generic: breadth-first from a lowest-degree vertex
    start = min(part.layout, key=lambda v: (graph.degree(v), v))
    sub = set(part.layout)
    order = [v for v in _bfs_order(graph.adjacency, start) if v in sub]
    return Part(part.cls, tuple(order)), list(range(part.size))


def _contiguous_start(graph: Graph, profile: ValueProfile, parts: list[Part]) -> tuple[int, ...]:
    laid = [_block_layout(p, graph) for p in parts]
    costs = [_block_cost_fn(p, graph, local) for p, local in laid]
    vals = profile.values
    sizes = [p.size for p, _ in laid]
    idx = list(range(len(laid)))
    keyed = [(p.cls.kind.value, p.cls.params) for p, _ in laid]
    n_orders = math.factorial(len(idx))
    best_order = sorted(idx, key=lambda i: (-sizes[i], i))
    if n_orders <= 5040 and len(idx) > 1:
        best = None
        for perm in distinct_permutations(sorted(keyed)):
            pending = {}
            for i in idx:
                pending.setdefault(keyed[i], []).append(i)
            order = [pending[k].pop(0) for k in perm]
            a, total = 0, Fraction(0)
            for i in order:
                total += costs[i](vals[a : a + sizes[i]])
                a += sizes[i]
            if best is None or total < best:
                best, best_order = total, order
    alloc = [0] * graph.n
    a = 0
    for i in best_order:
        p, local = laid[i]
        for v, h in zip(p.layout, local):
            alloc[v] = a + h
        a += p.size
    return tuple(alloc)


def local_search(graph: Graph, profile: ValueProfile, start: Sequence[int], max_passes: int = 50) -> tuple[int, ...]:
    """Pairwise-swap descent, first improvement, deterministic scan order."""
    vals = profile.values
    alloc = list(start)
    adj = graph.adjacency
    n = graph.n

    def local_cost(v: int, h: int, skip: int) -> Fraction:
        x = vals[h]
        return sum((abs(x - vals[alloc[w]]) for w in adj[v] if w != skip), Fraction(0))

    for _ in range(max_passes):
        improved = False
        for u in range(n):
            for v in range(u + 1, n):
                hu, hv = alloc[u], alloc[v]
                before = local_cost(u, hu, v) + local_cost(v, hv, u)
                after = local_cost(u, hv, v) + local_cost(v, hu, u)
                if after < before:
                    alloc[u], alloc[v] = hv, hu
                    improved = True
        if not improved:
            break
    return tuple(alloc)


def solve_heuristic(graph: Graph, profile, parts: list[Part] | None = None, budget=None) -> SolveResult:
    """Best contiguous-blocks placement, then swap descent on small graphs.

    A lone binary-tree component is also pushed to a local-median
    allocation, which never increases envy.
    """
    profile = as_profile(profile)
    parts = parts if parts is not None else classify_graph(graph)
    alloc = _contiguous_start(graph, profile, parts)
    if graph.n <= LOCAL_SEARCH_LIMIT:
        alloc = local_search(graph, profile, alloc)
    if len(parts) == 1 and parts[0].cls.kind is Kind.BINARY_TREE:
        tree = RootedTree(graph, parts[0].layout[0])
        alloc = local_median_fixpoint(tree, alloc, profile).allocation
    envy = total_envy(alloc, graph, profile)
    info = {"components": [str(p.cls) for p in parts]}
    return SolveResult(tuple(alloc), envy, "heuristic", Guarantee.HEURISTIC, info)


# Per-agent valuations


def _identical_rows(matrix: ValueMatrix) -> bool:
    rows = matrix.entries
    return all(r == rows[0] for r in rows)


def solve_general(graph: Graph, matrix: ValueMatrix, solver: str = "auto", budget: int | None = None) -> SolveResult:
    """Minimum envy with per-agent valuations. ``allocation[i]`` is a matrix column."""
    n = graph.n
    if matrix.n != n:
        raise InputError("graph and value matrix sizes differ")
    complete = graph.m == n * (n - 1) // 2
    if solver == "complete_general" or (solver == "auto" and complete):
        if not complete:
            raise InputError("complete_general needs a complete graph")
        res = cs.solve_complete_general(matrix)
        return res
    if solver == "brute_force":
        return brute_force_general(graph, matrix, budget)
    if solver == "auto" and n and _identical_rows(matrix):
        profile = ValueProfile.from_values(matrix.entries[0])
        res = solve(graph, profile, "auto", budget)
        houses = tuple(profile.original_index[a] for a in res.allocation)
        return SolveResult(houses, res.envy, res.solver, res.guarantee, res.info)
    if solver not in ("auto", "heuristic"):
        raise InputError(f"solver {solver} needs identical valuations")
    if solver == "auto" and _fits_brute_force(n, budget):
        return brute_force_general(graph, matrix, budget)
    alloc = _general_local_search(graph, matrix, list(range(n)))
    envy = total_envy_general(alloc, graph, matrix)
    return SolveResult(alloc, envy, "heuristic", Guarantee.HEURISTIC)


def _general_local_search(graph: Graph, matrix: ValueMatrix, start: list[int], max_passes: int = 50) -> tuple[int, ...]:
    alloc = list(start)
    best = total_envy_general(alloc, graph, matrix)
    n = graph.n
    if n > LOCAL_SEARCH_LIMIT // 4:
        return tuple(alloc)
    for _ in range(max_passes):
        improved = False
        for u in range(n):
            for v in range(u + 1, n):
                alloc[u], alloc[v] = alloc[v], alloc[u]
                e = total_envy_general(alloc, graph, matrix)
                if e < best:
                    best, improved = e, True
                else:
                    alloc[u], alloc[v] = alloc[v], alloc[u]
        if not improved:
            break
    return tuple(alloc)
