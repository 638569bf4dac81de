"""Solvers for disjoint unions of components.

Unions of paths, cycles, stars and equal cliques always have an optimum that
gives each component a contiguous run of the sorted values, so it suffices to
search over component orderings (or a DP over path lengths). Unions of
cliques of different sizes need the window search in :func:`solve_cliques_xp`.

Allocations are laid out component by component in the order given, each
component in its own solver layout.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from more_itertools import distinct_permutations

from .connected import clique_cost, cycle_cost, path_cost, star_cost, star_layout
from .core import (
    BudgetExceeded,
    Guarantee,
    InputError,
    PrefixSums,
    SolveResult,
    as_profile,
    integer_scale,
)
from .graphs import ComponentClass, Kind

DEFAULT_ORDERING_BUDGET = 10**7
DEFAULT_XP_BUDGET = 10**7
DEFAULT_DP_STATES = 5 * 10**7

BlockCost = Callable[[PrefixSums, int, int], Fraction]


def _block_cost(kind: Kind) -> BlockCost:
    table = {
        Kind.PATH: path_cost,
        Kind.CYCLE: cycle_cost,
        Kind.STAR: star_cost,
        Kind.CLIQUE: clique_cost,
    }
    if kind not in table:
        raise InputError(f"no block solver for {kind.value} components")
    return table[kind]


def _block_layout(kind: Kind, a: int, b: int) -> list[int]:
    if kind is Kind.STAR:
        return star_layout(b - a, a)
    return list(range(a, b))


def shape_key(cls: ComponentClass) -> tuple[str, tuple[int, ...]]:
    return (cls.kind.value, cls.params)


def count_orderings(shapes: Sequence[ComponentClass]) -> int:
    counts = Counter(shape_key(c) for c in shapes)
    out = math.factorial(len(shapes))
    for c in counts.values():
        out //= math.factorial(c)
    return out


def _layout_blocks(shapes, starts) -> tuple[int, ...]:
    """Allocation in component order, given each component's block start."""
    alloc: list[int] = []
    for i, cls in enumerate(shapes):
        a = starts[i]
        alloc.extend(_block_layout(cls.kind, a, a + cls.size))
    return tuple(alloc)


def solve_union_by_ordering(
    shapes: Sequence[ComponentClass],
    profile,
    budget: int = DEFAULT_ORDERING_BUDGET,
) -> SolveResult:
    """Try every ordering of component shapes, giving contiguous blocks.

    Identical shapes are interchangeable, so only distinct orderings of the
    shape multiset are tried. Exact for unions of paths, cycles, stars or
    equal-size cliques.
    """
    profile = as_profile(profile)
    shapes = list(shapes)
    n = sum(c.size for c in shapes)
    if n != len(profile):
        raise InputError(f"components cover {n} vertices but there are {len(profile)} values")
    costs = [_block_cost(c.kind) for c in shapes]
    need = count_orderings(shapes)
    if need > budget:
        raise BudgetExceeded("component orderings", need, budget)
    ps = PrefixSums(profile.values)
    groups: dict[tuple, list[int]] = {}
    for i, c in enumerate(shapes):
        groups.setdefault(shape_key(c), []).append(i)
    keys = sorted(groups)
    key_idx = {k: j for j, k in enumerate(keys)}
    seq = [key_idx[shape_key(c)] for c in shapes]
    cost_of = [costs[groups[k][0]] for k in keys]
    size_of = [shapes[groups[k][0]].size for k in keys]

    best = None
    best_order = None
    for perm in distinct_permutations(sorted(seq)):
        a = 0
        total = Fraction(0)
        for j in perm:
            b = a + size_of[j]
            total += cost_of[j](ps, a, b)
            a = b
        if best is None or total < best:
            best, best_order = total, perm
    if best is None:
        return SolveResult((), Fraction(0), "union_ordering", Guarantee.EXACT)
    # hand out block starts to components of each shape in index order
    pending = {j: list(groups[keys[j]]) for j in range(len(keys))}
    starts = [0] * len(shapes)
    a = 0
    ordering = []
    for j in best_order:
        i = pending[j].pop(0)
        starts[i] = a
        ordering.append(i)
        a += size_of[j]
    alloc = _layout_blocks(shapes, starts)
    blocks = [(starts[i], starts[i] + c.size) for i, c in enumerate(shapes)]
    return SolveResult(
        alloc, best, "union_ordering", Guarantee.EXACT, {"ordering": ordering, "blocks": blocks}
    )


def solve_union_paths_dp(lengths: Sequence[int], profile, max_states: int = DEFAULT_DP_STATES) -> SolveResult:
    """DP over how many paths of each distinct length are placed.

    The top-valued path of a prefix always takes the highest values of that
    prefix, so the state is just the remaining count of each length.
    Components are laid out in the order of ``lengths``.
    """
    profile = as_profile(profile)
    lengths = list(lengths)
    if any(x < 1 for x in lengths):
        raise InputError("path lengths must be positive")
    n = sum(lengths)
    if n != len(profile):
        raise InputError(f"paths cover {n} vertices but there are {len(profile)} values")
    distinct = sorted(set(lengths))
    counts = [lengths.count(x) for x in distinct]
    t = len(distinct)
    shape = tuple(c + 1 for c in counts)
    size = math.prod(shape)
    if size > max_states:
        raise BudgetExceeded("path DP states", size, max_states)

    ints, d = integer_scale(profile.values)
    big = max(ints) if ints else 0
    dtype = np.int64 if 2 * big * (n + 1) < 2**62 else object
    vals = np.array([0] + ints, dtype=dtype)  # vals[ell] is the ell-th lowest value
    sentinel = 2 * big * (n + 1) + 1

    # flat state index -> per-length counts, prefix length and level (paths placed)
    grid = np.indices(shape).reshape(t, -1)
    ell = (np.array(distinct)[:, None] * grid).sum(axis=0)
    level = grid.sum(axis=0)
    strides = [math.prod(shape[i + 1 :]) for i in range(t)]
    best = np.zeros(size, dtype=dtype)
    arg = np.full(size, -1, dtype=np.int64)
    order = np.argsort(level, kind="stable")
    bounds = np.searchsorted(level[order], np.arange(level.max() + 2))
    for lv in range(1, int(level.max()) + 1):
        idx = order[bounds[lv] : bounds[lv + 1]]
        e = ell[idx]
        cand = np.empty((t, len(idx)), dtype=dtype)
        for i, x in enumerate(distinct):
            ok = grid[i, idx] > 0
            prev = np.where(ok, idx - strides[i], 0)
            c = best[prev] + vals[e] - vals[np.maximum(e - x + 1, 0)]
            cand[i] = np.where(ok, c, sentinel)
        # first minimum wins, so ties go to the shorter length
        a = np.argmin(cand, axis=0)
        best[idx] = cand[a, np.arange(len(idx))]
        arg[idx] = a
    full = size - 1
    envy = Fraction(int(best[full]), d)

    # walk back from the full state: each step fixes the block of the top path
    state = full
    pos = n
    blocks_by_len: dict[int, list[int]] = {x: [] for x in distinct}
    while pos > 0:
        i = int(arg[state])
        x = distinct[i]
        blocks_by_len[x].append(pos - x)
        pos -= x
        state -= strides[i]
    for x in distinct:
        blocks_by_len[x].sort()
    alloc: list[int] = []
    for x in lengths:
        a = blocks_by_len[x].pop(0)
        alloc.extend(range(a, a + x))
    return SolveResult(tuple(alloc), envy, "union_paths_dp", Guarantee.EXACT)


def solve_matching_graph(k: int, m: int, profile) -> SolveResult:
    """Graph of ``k`` disjoint edges and ``m`` isolated vertices.

    Layout: edge ``i`` is vertices ``(2i, 2i+1)``, isolated vertices follow.
    Row ``k'`` of the table holds the optimum for each number of isolated
    vertices on the lowest ``2k' + m'`` houses; each row is a running minimum
    of the previous row plus the gap closing the new edge.
    """
    profile = as_profile(profile)
    if k < 0 or m < 0 or len(profile) != 2 * k + m:
        raise InputError(f"expected 2k + m = {2 * k + m} values, got {len(profile)}")
    n = 2 * k + m
    if k == 0:
        return SolveResult(tuple(range(n)), Fraction(0), "matching_graph", Guarantee.EXACT)
    ints, d = integer_scale(profile.values)
    big = max(ints) if ints else 0
    dtype = np.int64 if big * (k + 1) < 2**62 else object
    vals = np.array(ints, dtype=dtype)
    gaps = np.zeros(n + 1, dtype=dtype)
    # gaps[ell] closes an edge on houses (ell-2, ell-1) of the prefix of length ell
    gaps[2:] = vals[1:] - vals[:-1]
    mm = np.arange(m + 1)
    row = np.zeros(m + 1, dtype=dtype)
    took_edge = np.zeros((k + 1, m + 1), dtype=bool)
    for kk in range(1, k + 1):
        cand = row + gaps[2 * kk + mm]
        row = np.minimum.accumulate(cand)
        took_edge[kk] = cand == row
    envy = Fraction(int(row[m]), d)
    pairs: list[int] = []
    singles: list[int] = []
    kk, mm_ = k, m
    while kk > 0 or mm_ > 0:
        ell = 2 * kk + mm_
        if kk > 0 and took_edge[kk, mm_]:
            pairs.append(ell - 2)
            kk -= 1
        else:
            singles.append(ell - 1)
            mm_ -= 1
    alloc: list[int] = []
    for a in sorted(pairs):
        alloc.extend((a, a + 1))
    alloc.extend(sorted(singles))
    return SolveResult(tuple(alloc), envy, "matching_graph", Guarantee.EXACT)


def solve_equal_cliques(r: int, q: int, profile) -> SolveResult:
    """``r`` cliques of size ``q`` take consecutive blocks of ``q`` sorted values."""
    profile = as_profile(profile)
    if r < 1 or q < 1 or len(profile) != r * q:
        raise InputError(f"expected r*q = {r * q} values, got {len(profile)}")
    ps = PrefixSums(profile.values)
    envy = sum((clique_cost(ps, i * q, (i + 1) * q) for i in range(r)), Fraction(0))
    return SolveResult(tuple(range(r * q)), envy, "equal_cliques", Guarantee.EXACT)


def _take_window(runs, start: int, size: int):
    """Split runs (in remaining order) into the window of ``size`` houses
    starting at remaining position ``start`` and the leftover runs."""
    window, left = [], []
    pos = 0
    end = start + size
    for a, b in runs:
        lo, hi = pos, pos + (b - a)
        # overlap of [lo, hi) with [start, end) in remaining positions
        s, e = max(lo, start), min(hi, end)
        if s < e:
            if lo < s:
                left.append((a, a + (s - lo)))
            window.append((a + (s - lo), a + (e - lo)))
            if e < hi:
                left.append((a + (e - lo), b))
        else:
            left.append((a, b))
        pos = hi
    merged = []
    for a, b in left:
        if merged and merged[-1][1] == a:
            merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return window, merged


def count_xp_leaves(sizes: Sequence[int]) -> int:
    sizes = sorted(sizes, reverse=True)
    rem = sum(sizes)
    out = 1
    for q in sizes[:-1]:
        out *= rem - q + 1
        rem -= q
    return out


def solve_cliques_xp(sizes: Sequence[int], profile, budget: int = DEFAULT_XP_BUDGET) -> SolveResult:
    """Largest clique first: try each contiguous window of the remaining
    values, recurse on what is left. Components keep the order of ``sizes``."""
    profile = as_profile(profile)
    sizes = list(sizes)
    if any(q < 1 for q in sizes):
        raise InputError("clique sizes must be positive")
    n = sum(sizes)
    if n != len(profile):
        raise InputError(f"cliques cover {n} vertices but there are {len(profile)} values")
    need = count_xp_leaves(sizes)
    if need > budget:
        raise BudgetExceeded("clique window choices", need, budget)
    order = sorted(range(len(sizes)), key=lambda i: (-sizes[i], i))
    ps = PrefixSums(profile.values)

    def rec(runs, depth):
        q = sizes[order[depth]]
        if depth == len(order) - 1:
            return ps.run_pairwise(runs), [runs]
        total = sum(b - a for a, b in runs)
        best = None
        for start in range(total - q + 1):
            window, left = _take_window(runs, start, q)
            c = ps.run_pairwise(window)
            if best is not None and c >= best[0]:
                continue
            sub, parts = rec(left, depth + 1)
            if best is None or c + sub < best[0]:
                best = (c + sub, [window] + parts)
        return best

    if not sizes:
        return SolveResult((), Fraction(0), "cliques_xp", Guarantee.EXACT)
    envy, parts = rec([(0, n)] if n else [], 0)
    houses = [None] * len(sizes)
    for idx, runs in zip(order, parts):
        houses[idx] = [h for a, b in runs for h in range(a, b)]
    alloc = tuple(h for hs in houses for h in hs)
    return SolveResult(alloc, envy, "cliques_xp", Guarantee.EXACT)
