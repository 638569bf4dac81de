"""Closed-form solvers for connected graph classes.

Every solver returns an allocation in the layout of the matching builder in
:mod:`housealloc.graphs`: path and cycle vertices in walk order, the star
center first, the larger bipartite side first.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import (
    Guarantee,
    InputError,
    PrefixSums,
    SolveResult,
    ValueMatrix,
    ValueProfile,
    as_profile,
)


def _check_len(profile: ValueProfile, n: int) -> None:
    if len(profile) != n:
        raise InputError(f"expected {n} values, got {len(profile)}")


def path_cost(ps: PrefixSums, a: int, b: int) -> Fraction:
    return ps.values[b - 1] - ps.values[a]


def cycle_cost(ps: PrefixSums, a: int, b: int) -> Fraction:
    return 2 * (ps.values[b - 1] - ps.values[a])


def star_center(k: int) -> int:
    """Offset of the center within a block of ``k`` sorted values (lower median)."""
    return (k - 1) // 2


def star_cost(ps: PrefixSums, a: int, b: int) -> Fraction:
    c = a + star_center(b - a)
    vc = ps.values[c]
    return (ps.total(c + 1, b) - (b - c - 1) * vc) + ((c - a) * vc - ps.total(a, c))


def clique_cost(ps: PrefixSums, a: int, b: int) -> Fraction:
    return ps.pairwise(a, b)


def star_layout(k: int, offset: int = 0) -> list[int]:
    """House ranks for a star block: median at the center, rest on spokes."""
    c = star_center(k)
    return [offset + c] + [offset + i for i in range(k) if i != c]


def solve_path(n: int, profile) -> SolveResult:
    """Houses in sorted order along the path."""
    profile = as_profile(profile)
    _check_len(profile, n)
    envy = profile[n - 1] - profile[0] if n else Fraction(0)
    return SolveResult(tuple(range(n)), envy, "path", Guarantee.EXACT)


def solve_cycle(n: int, profile) -> SolveResult:
    """Houses ascending around the cycle; envy is twice the value range."""
    profile = as_profile(profile)
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    _check_len(profile, n)
    return SolveResult(tuple(range(n)), 2 * (profile[n - 1] - profile[0]), "cycle", Guarantee.EXACT)


def solve_star(spokes: int, profile) -> SolveResult:
    """Lower median at the center (vertex 0), remaining houses on the spokes."""
    profile = as_profile(profile)
    k = spokes + 1
    _check_len(profile, k)
    alloc = tuple(star_layout(k))
    envy = star_cost(PrefixSums(profile.values), 0, k)
    return SolveResult(alloc, envy, "star", Guarantee.EXACT)


def bipartite_larger_side(r: int, s: int) -> list[int]:
    """House ranks given to the larger side of ``K_{r,s}`` (``r >= s``).

    Within each split pair the lower house goes to the larger side.
    """
    if r < s or s < 1:
        raise InputError("complete bipartite solver needs r >= s >= 1")
    d = r - s
    m = d // 2
    n = r + s
    larger = list(range(m))
    larger += [m + 2 * i for i in range(s)]
    tail = m if d % 2 == 0 else m + 1
    larger += list(range(n - tail, n))
    return larger


def bipartite_cost(values: Sequence[Fraction], side_a: Sequence[int]) -> Fraction:
    """Sum of ``|a - b|`` over ``a`` in side A and ``b`` in the other side, in O(n)."""
    in_a = [False] * len(values)
    for h in side_a:
        in_a[h] = True
    total = Fraction(0)
    cnt = [0, 0]
    acc = [Fraction(0), Fraction(0)]
    for h, v in enumerate(values):
        me = 0 if in_a[h] else 1
        other = 1 - me
        # every earlier house on the other side is below v
        total += cnt[other] * v - acc[other]
        cnt[me] += 1
        acc[me] += v
    return total


def solve_complete_bipartite(r: int, s: int, profile) -> SolveResult:
    """Split each consecutive pair across the sides; extra houses at both ends
    go to the larger side."""
    profile = as_profile(profile)
    _check_len(profile, r + s)
    larger = bipartite_larger_side(r, s)
    lset = set(larger)
    smaller = [h for h in range(r + s) if h not in lset]
    envy = bipartite_cost(profile.values, larger)
    return SolveResult(tuple(larger + smaller), envy, "complete_bipartite", Guarantee.EXACT)


def count_optima_bipartite(r: int, s: int) -> int:
    """Optimal allocations of ``K_{r,s}`` up to permutations within a side."""
    if r < s or s < 1:
        raise InputError("need r >= s >= 1")
    return 2**s if (r - s) % 2 == 0 else 1


def satisfies_bipartite_pairing(alloc: Sequence[int], r: int, s: int) -> bool:
    """Check the pairing structure an optimal ``K_{r,s}`` allocation must have.

    ``alloc`` is in layout order: the first ``r`` vertices form the larger side.
    """
    n = r + s
    on_larger = [False] * n
    for h in alloc[:r]:
        on_larger[h] = True
    d = r - s
    m = d // 2
    tail = m if d % 2 == 0 else m + 1
    if not all(on_larger[h] for h in range(m)):
        return False
    if not all(on_larger[h] for h in range(n - tail, n)):
        return False
    for i in range(s):
        lo, hi = m + 2 * i, m + 2 * i + 1
        if d % 2 == 0:
            if on_larger[lo] == on_larger[hi]:
                return False
        elif not (on_larger[lo] and not on_larger[hi]):
            return False
    return True


def solve_clique(n: int, profile) -> SolveResult:
    """Every allocation is optimal; envy is the sum of pairwise differences."""
    profile = as_profile(profile)
    _check_len(profile, n)
    envy = PrefixSums(profile.values).pairwise(0, n)
    return SolveResult(tuple(range(n)), envy, "clique", Guarantee.EXACT)


def matching_weights(matrix: ValueMatrix) -> list[list[Fraction]]:
    """Weight of giving house ``h`` to agent ``i``: the agent's envy toward all
    other houses."""
    out = []
    for row in matrix.entries:
        out.append([sum((max(x - row[h], 0) for x in row), Fraction(0)) for h in range(len(row))])
    return out


def min_cost_assignment(cost: Sequence[Sequence[Fraction]]) -> tuple[list[int], Fraction]:
    """Hungarian method with potentials, exact over rationals. O(n^3).

    Returns ``(assign, total)`` with ``assign[i]`` the column of row ``i``.
    """
    n = len(cost)
    if n == 0:
        return [], Fraction(0)
    INF = None
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv: list = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is INF or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is INF or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    total = sum((cost[i][assign[i]] for i in range(n)), Fraction(0))
    return assign, total


def solve_complete_general(matrix: ValueMatrix) -> SolveResult:
    """Minimum envy on ``K_n`` under per-agent valuations via min-weight matching.

    ``allocation[i]`` is the (unsorted) house index given to agent ``i``.
    """
    weights = matching_weights(matrix)
    assign, total = min_cost_assignment(weights)
    return SolveResult(tuple(assign), total, "complete_general", Guarantee.EXACT)
