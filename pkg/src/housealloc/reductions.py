"""Instance generators from minimum bisection and unary bin packing, with
exhaustive verifiers for small inputs."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import InputError, format_rational, to_rational
from .graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    path_graph,
    star_graph,
)
from .io import Instance
from .oracle import brute_force

UNARY_LIMIT = 10**6


class Family(str, enum.Enum):
    PATHS = "paths"
    CYCLES = "cycles"
    STARS = "stars"
    CLIQUES = "cliques"


@dataclass(frozen=True)
class BinPackingInput:
    sizes: tuple[int, ...]
    B: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if self.B < 1 or self.k < 1:
            raise InputError("bin capacity and bin count must be positive")
        if any(s < 1 for s in self.sizes):
            raise InputError("item sizes must be positive")
        if any(s > self.B for s in self.sizes):
            raise InputError("every item must fit in a bin")
        if sum(self.sizes) > UNARY_LIMIT or self.k * self.B > UNARY_LIMIT:
            raise InputError(f"unary sizes above {UNARY_LIMIT}")


def min_bisection(graph: Graph) -> int:
    """Fewest crossing edges over all balanced partitions (exhaustive)."""
    n = graph.n
    if n % 2:
        raise InputError("bisection needs an even vertex count")
    if n == 0:
        return 0
    best = None
    # fix vertex 0 on side A so each partition is seen once
    for rest in itertools.combinations(range(1, n), n // 2 - 1):
        side = {0, *rest}
        cut = sum(1 for u, v in graph.edges if (u in side) != (v in side))
        if best is None or cut < best:
            best = cut
    return best


def gen_from_bisection(graph: Graph, epsilon=None) -> Instance:
    """Same graph; half the values at ``0, e/n, 2e/n, ...`` and half at ``1 + j e/n``."""
    n = graph.n
    if n % 2:
        raise InputError("bisection reduction needs an even vertex count")
    eps = Fraction(1, max(n, 1) ** 3) if epsilon is None else to_rational(epsilon)
    if eps <= 0:
        raise InputError("epsilon must be positive")
    step = eps / n if n else eps
    half = n // 2
    vals = tuple(j * step for j in range(half)) + tuple(1 + j * step for j in range(half))
    meta = {"source": "min-bisection", "epsilon": format_rational(eps)}
    return Instance(graph, values=vals, metadata=meta)


def verify_bisection_small(graph: Graph, k: int, epsilon=None, budget: int | None = None) -> bool:
    """Check ``bisection <= k`` iff ``optimal envy <= k + n^2 eps`` on the generated instance."""
    inst = gen_from_bisection(graph, epsilon)
    eps = to_rational(inst.metadata["epsilon"])
    n = graph.n
    envy = brute_force(graph, inst.profile, budget=budget).envy
    return (min_bisection(graph) <= k) == (envy <= k + n * n * eps)


def family_graph(family: Family | str, t: int) -> Graph:
    family = Family(family)
    if family is Family.PATHS:
        return path_graph(t)
    if family is Family.CYCLES:
        if t < 3:
            raise InputError(f"cycle family cannot encode an item of size {t}")
        return cycle_graph(t)
    if family is Family.STARS:
        return star_graph(t - 1)
    return complete_graph(t)


def default_C(n: int, spread: Fraction) -> Fraction:
    return 4 * n * (spread + 1)


def gen_from_binpacking(
    inp: BinPackingInput, family: Family | str, C=None, epsilon=None
) -> Instance:
    """``k`` clusters of ``B`` values, ``C + eps`` apart, internal spacing ``eps / n``.

    The graph is one family member per item, padded with isolated vertices
    up to ``kB`` vertices.
    """
    family = Family(family)
    n = inp.k * inp.B
    if sum(inp.sizes) > n:
        raise InputError("items exceed total bin capacity")
    eps = Fraction(1, n**3) if epsilon is None else to_rational(epsilon)
    if eps <= 0:
        raise InputError("epsilon must be positive")
    step = eps / n
    spread = (inp.B - 1) * step
    C = default_C(n, spread) if C is None else to_rational(C)
    if C <= spread:
        raise InputError("C must exceed the cluster width")
    parts = [family_graph(family, t) for t in inp.sizes]
    parts.append(empty_graph(n - sum(inp.sizes)))
    graph = disjoint_union(*parts)
    vals = tuple(c * (C + eps) + j * step for c in range(inp.k) for j in range(inp.B))
    meta = {
        "source": "unary-bin-packing",
        "items": list(inp.sizes),
        "B": inp.B,
        "k": inp.k,
        "family": family.value,
        "C": format_rational(C),
        "epsilon": format_rational(eps),
    }
    return Instance(graph, values=vals, metadata=meta)


def packing_exists(inp: BinPackingInput) -> bool:
    """Exhaustive search, largest items first, skipping symmetric bins."""
    items = sorted(inp.sizes, reverse=True)
    loads = [0] * inp.k

    def rec(i: int) -> bool:
        if i == len(items):
            return True
        tried = set()
        for b in range(inp.k):
            if loads[b] in tried or loads[b] + items[i] > inp.B:
                continue
            tried.add(loads[b])
            loads[b] += items[i]
            if rec(i + 1):
                return True
            loads[b] -= items[i]
        return False

    return rec(0)


def verify_binpacking_small(
    inp: BinPackingInput, family: Family | str, C=None, epsilon=None, budget: int | None = None
) -> bool:
    """Check ``packing exists`` iff ``optimal envy < C`` on the generated instance."""
    inst = gen_from_binpacking(inp, family, C, epsilon)
    C = to_rational(inst.metadata["C"])
    envy = brute_force(inst.graph, inst.profile, budget=budget).envy
    return packing_exists(inp) == (envy < C)


def random_binpacking(rng, max_n: int = 9, min_size: int = 1) -> BinPackingInput:
    """Small random input with ``kB <= max_n``."""
    while True:
        B = rng.randint(max(1, min_size), max_n)
        k = rng.randint(1, max_n // B)
        cap = k * B
        sizes: list[int] = []
        while True:
            t = rng.randint(min_size, B)
            if sum(sizes) + t > cap or rng.random() < 0.2 and sizes:
                break
            sizes.append(t)
        if sizes:
            return BinPackingInput(tuple(sizes), B, k)


def sizes_from_text(text: str) -> Sequence[int]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise InputError(f"bad item list {text!r}") from exc
