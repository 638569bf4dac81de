"""Undirected simple graphs, component decomposition and class recognition."""
from __future__ import annotations

import enum
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .core import InputError


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v``, in first-seen
    order, without duplicates.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        seen = set()
        norm = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InputError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def relabel(self, order: Sequence[int]) -> "Graph":
        """Graph whose vertex ``i`` is ``order[i]`` of this graph."""
        pos = {v: i for i, v in enumerate(order)}
        return Graph(len(order), tuple((pos[u], pos[v]) for u, v in self.edges))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        pos = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            tuple((pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos),
        )


class Kind(str, enum.Enum):
    PATH = "path"
    CYCLE = "cycle"
    STAR = "star"
    CLIQUE = "clique"
    COMPLETE_BIPARTITE = "complete_bipartite"
    BINARY_TREE = "binary_tree"
    GENERIC = "generic"


@dataclass(frozen=True)
class ComponentClass:
    """Recognized shape of a connected graph.

    ``params`` is ``(n,)`` for paths, cycles, cliques, binary trees and generic
    graphs, ``(spokes,)`` for stars and ``(r, s)`` with ``r >= s`` for complete
    bipartite graphs. ``order`` lists the component's vertices in the layout
    the class solvers use (path order, cycle order, center first, larger side
    first, root first).
    """

    kind: Kind
    params: tuple[int, ...]
    order: tuple[int, ...] = field(default=(), compare=False)

    @property
    def size(self) -> int:
        if self.kind is Kind.STAR:
            return self.params[0] + 1
        if self.kind is Kind.COMPLETE_BIPARTITE:
            return self.params[0] + self.params[1]
        return self.params[0]

    def __str__(self) -> str:
        p = ",".join(str(x) for x in self.params)
        return f"{self.kind.value}({p})"


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    graph: Graph


def connected_components(graph: Graph) -> list[Component]:
    """Components ordered by smallest vertex; each carries its induced graph.

    ``component.vertices[i]`` is the parent label of local vertex ``i``.
    """
    seen = [False] * graph.n
    adj = graph.adjacency
    comps = []
    for s in range(graph.n):
        if seen[s]:
            continue
        seen[s] = True
        verts = [s]
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    verts.append(w)
                    q.append(w)
        verts.sort()
        comps.append(Component(tuple(verts), graph.induced(verts)))
    return comps


def is_connected(graph: Graph) -> bool:
    return graph.n <= 1 or len(connected_components(graph)) == 1


def _walk(adj, start: int, n: int) -> list[int]:
    order = [start]
    prev, cur = -1, start
    while len(order) < n:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        if cur == start:
            break
        order.append(cur)
    return order


def _bipartition(graph: Graph):
    color = [-1] * graph.n
    adj = graph.adjacency
    for s in range(graph.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    q.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def bipartite_sides(graph: Graph) -> tuple[list[int], list[int]] | None:
    """Sides of a connected complete bipartite graph, larger first, else ``None``."""
    if graph.n < 2 or not is_connected(graph):
        return None
    color = _bipartition(graph)
    if color is None:
        return None
    a = [v for v in range(graph.n) if color[v] == 0]
    b = [v for v in range(graph.n) if color[v] == 1]
    if graph.m != len(a) * len(b):
        return None
    return (a, b) if len(a) >= len(b) else (b, a)


def _bfs_order(adj, root: int) -> list[int]:
    order = [root]
    seen = {root}
    q = deque([root])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                q.append(w)
    return order


def classify_component(component: Graph) -> ComponentClass:
    """Most specific class, with precedence path > cycle > star > clique >
    complete bipartite > binary tree > generic."""
    n, m = component.n, component.m
    if n == 0:
        raise InputError("empty component")
    if not is_connected(component):
        raise InputError("component is not connected")
    adj = component.adjacency
    deg = component.degrees()
    if n == 1:
        return ComponentClass(Kind.PATH, (1,), (0,))
    if m == n - 1 and max(deg) <= 2:
        start = min(v for v in range(n) if deg[v] == 1)
        return ComponentClass(Kind.PATH, (n,), tuple(_walk(adj, start, n)))
    if m == n and all(d == 2 for d in deg):
        return ComponentClass(Kind.CYCLE, (n,), tuple(_walk(adj, 0, n)))
    if m == n - 1 and deg.count(n - 1) == 1 and deg.count(1) == n - 1:
        center = deg.index(n - 1)
        return ComponentClass(Kind.STAR, (n - 1,), (center,) + tuple(v for v in range(n) if v != center))
    if m == n * (n - 1) // 2:
        return ComponentClass(Kind.CLIQUE, (n,), tuple(range(n)))
    color = _bipartition(component)
    if color is not None:
        a = [v for v in range(n) if color[v] == 0]
        b = [v for v in range(n) if color[v] == 1]
        if m == len(a) * len(b):
            if len(b) > len(a):
                a, b = b, a
            return ComponentClass(Kind.COMPLETE_BIPARTITE, (len(a), len(b)), tuple(a + b))
    if m == n - 1 and deg.count(2) == 1 and all(d in (1, 2, 3) for d in deg):
        root = deg.index(2)
        return ComponentClass(Kind.BINARY_TREE, (n,), tuple(_bfs_order(adj, root)))
    return ComponentClass(Kind.GENERIC, (n,), tuple(range(n)))


@dataclass(frozen=True)
class RootedTree:
    graph: Graph
    root: int

    def __post_init__(self):
        g = self.graph
        if not (0 <= self.root < max(g.n, 1)):
            raise InputError("root out of range")
        if g.m != g.n - 1 or not is_connected(g):
            raise InputError("rooted tree must be connected and acyclic")

    @cached_property
    def parent(self) -> tuple[int, ...]:
        par = [-1] * self.graph.n
        adj = self.graph.adjacency
        order = _bfs_order(adj, self.root)
        seen = {self.root}
        for u in order:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    par[w] = u
        return tuple(par)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.graph.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        d = [0] * self.graph.n
        for u in _bfs_order(self.graph.adjacency, self.root):
            p = self.parent[u]
            if p >= 0:
                d[u] = d[p] + 1
        return tuple(d)

    def subtree(self, v: int) -> list[int]:
        out = [v]
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self.children[u]:
                out.append(c)
                stack.append(c)
        return sorted(out)

    def internal_nodes(self) -> list[int]:
        return [v for v in range(self.graph.n) if self.children[v]]


def validate_binary_tree(tree: RootedTree) -> bool:
    """True iff every node has 0 or 2 children under the given root."""
    return all(len(c) in (0, 2) for c in tree.children)


# Builders. Vertex labels follow the layout used by the class solvers.

def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def star_graph(spokes: int) -> Graph:
    """Center is vertex 0."""
    return Graph(spokes + 1, tuple((0, i) for i in range(1, spokes + 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def complete_bipartite_graph(r: int, s: int) -> Graph:
    """Sides ``0..r-1`` and ``r..r+s-1``."""
    return Graph(r + s, tuple((i, r + j) for i in range(r) for j in range(s)))


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for g in graphs:
        edges.extend((u + off, v + off) for u, v in g.edges)
        off += g.n
    return Graph(off, tuple(edges))


def shape_graph(cls: ComponentClass) -> Graph:
    """Graph in solver layout for a class tag."""
    builders = {
        Kind.PATH: lambda p: path_graph(p[0]),
        Kind.CYCLE: lambda p: cycle_graph(p[0]),
        Kind.STAR: lambda p: star_graph(p[0]),
        Kind.CLIQUE: lambda p: complete_graph(p[0]),
        Kind.COMPLETE_BIPARTITE: lambda p: complete_bipartite_graph(p[0], p[1]),
    }
    if cls.kind not in builders:
        raise InputError(f"no canonical layout for {cls}")
    return builders[cls.kind](cls.params)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform random labelled tree via a Pruefer sequence."""
    if n <= 1:
        return Graph(n)
    if n == 2:
        return Graph(2, ((0, 1),))
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [w for w in range(n) if degree[w] == 1]
    edges.append((u, v))
    return Graph(n, tuple(edges))


def random_binary_tree(n: int, rng: random.Random) -> RootedTree:
    """Random full binary tree on ``n`` (odd) vertices rooted at 0."""
    if n < 1 or n % 2 == 0:
        raise InputError("a full binary tree has an odd number of vertices")
    edges = []
    leaves = [0]
    nxt = 1
    while nxt < n:
        leaf = leaves.pop(rng.randrange(len(leaves)))
        edges.append((leaf, nxt))
        edges.append((leaf, nxt + 1))
        leaves.extend((nxt, nxt + 1))
        nxt += 2
    return RootedTree(Graph(n, tuple(edges)), 0)
