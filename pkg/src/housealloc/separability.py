"""Splitting predicates, exhaustive separability reports and the figure
instances where contiguity fails.

Values are compared by house rank, so ties follow the profile's symbolic
tie-break.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import InputError, ValueProfile, as_profile, integer_scale, total_envy
from .graphs import Graph, connected_components, disjoint_union, empty_graph, complete_graph, path_graph
from .io import Instance
from .oracle import enumerate_optima

FIGURES = ("fig3-top", "fig3-bottom", "fig4", "fig5")
FIG5_DEFAULT = (9, 12, 15, 18)


def _ranks(alloc: Sequence[int], comp: Sequence[int]) -> list[int]:
    return sorted(alloc[v] for v in comp)


def splits(alloc: Sequence[int], comp_a: Sequence[int], comp_b: Sequence[int], profile=None) -> bool:
    """True iff ``comp_a``'s houses are uninterrupted within the houses of both components."""
    if set(comp_a) & set(comp_b):
        raise InputError("components overlap")
    ra = set(alloc[v] for v in comp_a)
    union = sorted(ra | set(alloc[v] for v in comp_b))
    pos = [i for i, h in enumerate(union) if h in ra]
    return not pos or pos[-1] - pos[0] + 1 == len(pos)


def is_contiguous(alloc: Sequence[int], comp: Sequence[int]) -> bool:
    r = _ranks(alloc, comp)
    return not r or r[-1] - r[0] + 1 == len(r)


def contiguous_blocks(alloc: Sequence[int], comps: Sequence[Sequence[int]]) -> bool:
    """Every component holds a run of consecutive ranks."""
    return all(is_contiguous(alloc, c) for c in comps)


def interleaving(alloc: Sequence[int], comp_a: Sequence[int], comp_b: Sequence[int]):
    """Ranks ``(u, v, u2, v2)`` with ``u < v < u2 < v2``, ``u, u2`` in A and
    ``v, v2`` in B, or ``None``."""
    la = [(alloc[v], 0) for v in comp_a] + [(alloc[v], 1) for v in comp_b]
    la.sort()
    picked: list[int] = []
    want = 0
    for h, side in la:
        if side == want:
            picked.append(h)
            want = 1 - want
            if len(picked) == 4:
                return tuple(picked)
    return None


def find_interleaving(alloc: Sequence[int], comps: Sequence[Sequence[int]]):
    for i, j in itertools.permutations(range(len(comps)), 2):
        q = interleaving(alloc, comps[i], comps[j])
        if q is not None:
            return (i, j, q)
    return None


@dataclass
class SeparabilityReport:
    components: list[tuple[int, ...]]
    optimum: Fraction
    optima: int
    strongly_separable_witness: tuple[int, ...] | None
    separable_witness_per_ordering: dict[tuple[int, ...], tuple[int, ...] | None] | None
    inseparable_evidence: dict | None
    truncated: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def contiguous_optimum_exists(self) -> bool:
        return self.strongly_separable_witness is not None

    def as_dict(self) -> dict:
        per = None
        if self.separable_witness_per_ordering is not None:
            per = {
                ",".join(map(str, k)): (list(v) if v is not None else None)
                for k, v in self.separable_witness_per_ordering.items()
            }
        return {
            "components": [list(c) for c in self.components],
            "optimum": self.optimum,
            "optima": self.optima,
            "truncated": self.truncated,
            "contiguous_optimum_exists": self.contiguous_optimum_exists,
            "strongly_separable_witness": (
                list(self.strongly_separable_witness) if self.strongly_separable_witness else None
            ),
            "separable_witness_per_ordering": per,
            "inseparable_evidence": self.inseparable_evidence,
            "notes": list(self.notes),
        }


MAX_ORDERINGS = math.factorial(7)


def classify_separability_empirical(
    graph: Graph, profile, budget: int | None = None, limit: int | None = None
) -> SeparabilityReport:
    """Enumerate every optimum and report how its components sit on the values."""
    profile = as_profile(profile)
    comps = [c.vertices for c in connected_components(graph)]
    opt = enumerate_optima(graph, profile, budget=budget, limit=limit)
    r = len(comps)
    strong = next((a for a in opt.allocations if contiguous_blocks(a, comps)), None)

    per_ordering = None
    notes = []
    if math.factorial(r) <= MAX_ORDERINGS:
        # optima sharing a split relation are interchangeable here
        relations: dict[frozenset, tuple[int, ...]] = {}
        for a in opt.allocations:
            rel = frozenset(
                (i, j) for i, j in itertools.permutations(range(r), 2) if splits(a, comps[i], comps[j])
            )
            relations.setdefault(rel, a)
        per_ordering = {}
        for order in itertools.permutations(range(r)):
            need = [(order[x], order[y]) for x in range(r) for y in range(x + 1, r)]
            per_ordering[order] = next(
                (a for rel, a in relations.items() if all(p in rel for p in need)), None
            )
    else:
        notes.append(f"{r} components: per-ordering witnesses skipped")

    evidence = None
    found = [find_interleaving(a, comps) for a in opt.allocations]
    if found and all(f is not None for f in found):
        i, j, quad = found[0]
        evidence = {
            "allocation": list(opt.allocations[0]),
            "components": [i, j],
            "quadruple": list(quad),
            "all_optima_interleave": True,
        }
    return SeparabilityReport(
        components=[tuple(c) for c in comps],
        optimum=opt.envy,
        optima=len(opt.allocations),
        strongly_separable_witness=strong,
        separable_witness_per_ordering=per_ordering,
        inseparable_evidence=evidence,
        truncated=opt.truncated,
        notes=notes,
    )


def check_mla_contiguity(graph: Graph, budget: int | None = None) -> bool:
    """Under values ``1..n`` some optimum gives every component a contiguous block."""
    profile = ValueProfile.from_values(range(1, graph.n + 1))
    comps = [c.vertices for c in connected_components(graph)]
    if len(comps) <= 1:
        return True
    opt = enumerate_optima(graph, profile, budget=budget)
    return any(contiguous_blocks(a, comps) for a in opt.allocations)


# Figure instances


def double_star(p: int, q: int) -> Graph:
    """Centers 0 and 1 joined by an edge; center 0 has ``p`` leaves, center 1 has ``q``.

    Leaves of center 0 are ``2..p+1``, leaves of center 1 follow.
    """
    edges = [(0, 1)] + [(0, 2 + i) for i in range(p)] + [(1, 2 + p + i) for i in range(q)]
    return Graph(p + q + 2, tuple(edges))


def check_fig5_params(s: Sequence[int]) -> None:
    if len(s) != 4:
        raise InputError("fig5 needs four star sizes s1..s4")
    if any(x < 1 for x in s):
        raise InputError("star sizes must be positive")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise InputError("fig5 needs s1 < s2 < s3 < s4")
    for i, j in itertools.combinations(range(4), 2):
        if abs(s[i] - s[j]) < 3:
            raise InputError(f"|s{i + 1} - s{j + 1}| >= 3 violated")
    for i, j in itertools.combinations(range(4), 2):
        for k in range(4):
            if k in (i, j):
                continue
            if not s[i] + s[j] > s[k] + 2:
                raise InputError(f"s{i + 1} + s{j + 1} > s{k + 1} + 2 violated")


def make_figure_instance(which: str, **params) -> Instance:
    """Concrete rational realizations of the contiguity counterexamples.

    * ``fig3-top``: edge + triangle, values ``(0, eps, C, C+eps, C+2eps)``.
    * ``fig3-bottom``: edge + triangle, values ``(0, M-delta, M, M+delta, 2M)``.
    * ``fig4``: double star with two leaves per center plus an isolated vertex,
      values ``(0, delta, 2delta, M, 2M-2delta, 2M-delta, 2M)``.
    * ``fig5``: two double stars with ``s1 + s3`` and ``s2 + s4`` leaves,
      four clusters of ``s_i + 1`` values ``eps`` apart at positions
      ``0, D, 2D, 3D``.
    """
    F = Fraction
    if which == "fig3-top":
        eps = F(params.get("epsilon", F(1, 100)))
        C = F(params.get("C", 100))
        if not (0 < 2 * eps < C):
            raise InputError("fig3-top needs 0 < 2*epsilon < C")
        g = disjoint_union(path_graph(2), complete_graph(3))
        vals = (F(0), eps, C, C + eps, C + 2 * eps)
        meta = {"figure": which, "epsilon": eps, "C": C}
    elif which == "fig3-bottom":
        M = F(params.get("M", 50))
        d = F(params.get("delta", 1))
        if not (0 < d < M):
            raise InputError("fig3-bottom needs 0 < delta < M")
        g = disjoint_union(path_graph(2), complete_graph(3))
        vals = (F(0), M - d, M, M + d, 2 * M)
        meta = {"figure": which, "M": M, "delta": d}
    elif which == "fig4":
        M = F(params.get("M", 50))
        d = F(params.get("delta", 1))
        if not (0 < 4 * d < M):
            raise InputError("fig4 needs 0 < 4*delta < M")
        g = disjoint_union(double_star(2, 2), empty_graph(1))
        vals = (F(0), d, 2 * d, M, 2 * M - 2 * d, 2 * M - d, 2 * M)
        meta = {"figure": which, "M": M, "delta": d}
    elif which == "fig5":
        s = tuple(int(x) for x in params.get("s", FIG5_DEFAULT))
        check_fig5_params(s)
        n = sum(s) + 4
        D = F(params.get("D", 1))
        eps = F(params.get("epsilon", F(1, 100 * n)))
        if not (0 < eps * max(s) * 4 < D):
            raise InputError("fig5 needs clusters much narrower than their spacing")
        g = disjoint_union(double_star(s[0], s[2]), double_star(s[1], s[3]))
        vals = tuple(c * D + j * eps for c in range(4) for j in range(s[c] + 1))
        meta = {"figure": which, "s": list(s), "D": D, "epsilon": eps}
    else:
        raise InputError(f"unknown figure {which!r}; expected one of {', '.join(FIGURES)}")
    return Instance(g, values=vals, metadata=meta)


def solve_double_star_block(p: int, q: int, values: Sequence[Fraction]) -> tuple[Fraction, tuple[int, ...]]:
    """Exact optimum of :func:`double_star` ``(p, q)`` on the given sorted values.

    With the centers fixed, the lower center's leaves take the lowest of the
    remaining houses (exchanging a crossed pair of leaves never hurts), so
    trying every pair of center houses is exhaustive. Returns the envy and
    an allocation of local ranks in the double-star layout.
    """
    n = p + q + 2
    if len(values) != n:
        raise InputError("block size does not match the double star")
    ints, d = integer_scale(list(values))
    best = None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rest = [h for h in range(n) if h not in (i, j)]
            if ints[i] <= ints[j]:
                leaves_i, leaves_j = rest[:p], rest[p:]
            else:
                leaves_j, leaves_i = rest[:q], rest[q:]
            cost = abs(ints[i] - ints[j])
            cost += sum(abs(ints[h] - ints[i]) for h in leaves_i)
            cost += sum(abs(ints[h] - ints[j]) for h in leaves_j)
            if best is None or cost < best[0]:
                best = (cost, (i, j, *leaves_i, *leaves_j))
    return Fraction(best[0], d), best[1]


def fig5_structural_check(inst: Instance | None = None) -> dict:
    """Compare the interleaved allocation with every contiguous-blocks one.

    The interleaved allocation puts star ``i`` on cluster ``i``; each
    contiguous alternative gives one double star the lower block and the
    other the upper block, each solved exactly.
    """
    inst = inst or make_figure_instance("fig5")
    s = tuple(inst.metadata["s"])
    profile = inst.profile
    vals = profile.values
    starts = [0]
    for x in s:
        starts.append(starts[-1] + x + 1)

    def star_on_cluster(c: int) -> tuple[int, list[int]]:
        lo, hi = starts[c], starts[c + 1]
        mid = lo + (hi - lo - 1) // 2
        return mid, [h for h in range(lo, hi) if h != mid]

    c1, l1 = star_on_cluster(0)
    c2, l2 = star_on_cluster(1)
    c3, l3 = star_on_cluster(2)
    c4, l4 = star_on_cluster(3)
    interleaved = tuple([c1, c3] + l1 + l3 + [c2, c4] + l2 + l4)
    envy_inter = total_envy(interleaved, inst.graph, profile)

    na = s[0] + s[2] + 2
    nb = s[1] + s[3] + 2
    options = []
    for a_first in (True, False):
        a_lo = 0 if a_first else nb
        b_lo = na if a_first else 0
        ea, _ = solve_double_star_block(s[0], s[2], vals[a_lo : a_lo + na])
        eb, _ = solve_double_star_block(s[1], s[3], vals[b_lo : b_lo + nb])
        options.append(ea + eb)
    best_contig = min(options)
    return {
        "s": list(s),
        "n": inst.n,
        "interleaved_envy": envy_inter,
        "best_contiguous_envy": best_contig,
        "interleaved_strictly_better": envy_inter < best_contig,
        "interleaved_allocation": list(interleaved),
    }
