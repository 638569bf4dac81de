"""Local and global median properties on rooted binary trees, plus the
min/max-on-leaves experiment for general trees.

Comparisons use house ranks, so tied values are ordered by the profile's
symbolic tie-break.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import Guarantee, InputError, SolveResult, as_profile, check_allocation, total_envy
from .graphs import Graph, RootedTree, is_connected, validate_binary_tree
from .oracle import enumerate_optima


def _require_binary(tree: RootedTree) -> None:
    if not validate_binary_tree(tree):
        raise InputError("every node must have 0 or 2 children")


def _violates(tree: RootedTree, alloc: Sequence[int], v: int) -> bool:
    kids = tree.children[v]
    if not kids:
        return False
    below = sum(1 for c in kids if alloc[c] < alloc[v])
    return below != 1


def check_local_median(tree: RootedTree, alloc: Sequence[int], profile=None) -> bool:
    """Each internal node holds the median of itself and its two children."""
    _require_binary(tree)
    alloc = check_allocation(alloc, tree.graph.n)
    return not any(_violates(tree, alloc, v) for v in tree.internal_nodes())


def check_global_median(tree: RootedTree, alloc: Sequence[int], profile=None) -> bool:
    """At each internal node one subtree is entirely below it and the other entirely above."""
    _require_binary(tree)
    alloc = check_allocation(alloc, tree.graph.n)
    for v in tree.internal_nodes():
        a, b = tree.children[v]
        ra = [alloc[w] for w in tree.subtree(a)]
        rb = [alloc[w] for w in tree.subtree(b)]
        x = alloc[v]
        lo_hi = max(ra) < x < min(rb)
        hi_lo = max(rb) < x < min(ra)
        if not (lo_hi or hi_lo):
            return False
    return True


def deepest_violation(tree: RootedTree, alloc: Sequence[int]) -> int | None:
    """Violating internal node furthest from the root; ties go to the smallest id."""
    bad = [v for v in tree.internal_nodes() if _violates(tree, alloc, v)]
    if not bad:
        return None
    return min(bad, key=lambda v: (-tree.depth[v], v))


def local_median_step(tree: RootedTree, alloc: Sequence[int], profile=None) -> tuple[int, ...] | None:
    """One cyclic transfer at the deepest violating node, or ``None`` if there is none.

    If the node is below both children, follow least-valued children while
    every child is above the node's house, then rotate houses one step up the
    path. If it is above both children the same move is made with all ranks
    reversed, which is the inverted valuation.
    """
    _require_binary(tree)
    alloc = check_allocation(alloc, tree.graph.n)
    i = deepest_violation(tree, alloc)
    if i is None:
        return None
    n = len(alloc)
    below_both = all(alloc[c] > alloc[i] for c in tree.children[i])
    key = list(alloc) if below_both else [n - 1 - a for a in alloc]
    y = key[i]
    path = [i]
    while True:
        kids = tree.children[path[-1]]
        if not kids or any(key[c] < y for c in kids):
            break
        path.append(min(kids, key=lambda c: key[c]))
    out = list(alloc)
    for a, b in zip(path, path[1:]):
        out[a] = alloc[b]
    out[path[-1]] = alloc[i]
    return tuple(out)


def subtree_envy(tree: RootedTree, alloc: Sequence[int], profile, v: int) -> Fraction:
    profile = as_profile(profile)
    inside = set(tree.subtree(v))
    vals = profile.values
    return sum(
        (abs(vals[alloc[a]] - vals[alloc[b]]) for a, b in tree.graph.edges if a in inside and b in inside),
        Fraction(0),
    )


def local_median_fixpoint(tree: RootedTree, alloc: Sequence[int], profile) -> SolveResult:
    """Apply :func:`local_median_step` until the local median property holds."""
    profile = as_profile(profile)
    _require_binary(tree)
    cur = check_allocation(alloc, tree.graph.n)
    n = tree.graph.n
    cap = max(n**3, 1)
    steps = 0
    while True:
        nxt = local_median_step(tree, cur, profile)
        if nxt is None:
            break
        steps += 1
        if steps > cap:
            raise RuntimeError(f"local median iteration exceeded {cap} steps")
        cur = nxt
    envy = total_envy(cur, tree.graph, profile)
    return SolveResult(cur, envy, "local_median", Guarantee.HEURISTIC, {"steps": steps})


def _tree_path(graph: Graph, a: int, b: int) -> list[int]:
    parent = {a: -1}
    stack = [a]
    while stack:
        u = stack.pop()
        for w in graph.adjacency[u]:
            if w not in parent:
                parent[w] = u
                stack.append(w)
    out = [b]
    while out[-1] != a:
        out.append(parent[out[-1]])
    return out[::-1]


def extremes_on_monotone_leaves(graph: Graph, alloc: Sequence[int]) -> bool:
    """Lowest and highest houses sit on leaves joined by a monotone path."""
    n = graph.n
    if n <= 1:
        return True
    lo = alloc.index(0)
    hi = alloc.index(n - 1)
    if graph.degree(lo) != 1 or graph.degree(hi) != 1:
        return False
    ranks = [alloc[v] for v in _tree_path(graph, lo, hi)]
    return all(a < b for a, b in zip(ranks, ranks[1:]))


def experiment_tree_extremes(graph: Graph, profile, budget: int | None = None) -> dict:
    """Check whether some optimum puts the extreme houses on leaves with a
    monotone path between them."""
    profile = as_profile(profile)
    if graph.n == 0 or graph.m != graph.n - 1 or not is_connected(graph):
        raise InputError("expected a tree")
    opt = enumerate_optima(graph, profile, budget=budget)
    witness = next((a for a in opt.allocations if extremes_on_monotone_leaves(graph, a)), None)
    return {
        "n": graph.n,
        "optimum": opt.envy,
        "optima": len(opt.allocations),
        "holds": witness is not None,
        "witness": witness,
    }
