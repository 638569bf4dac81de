"""Input checks shared by the estimator and the CLI."""
from __future__ import annotations

from typing import Any, Iterable, Sequence

from .core import InputError, ValueMatrix, ValueProfile, as_profile
from .graphs import Graph


def check_graph(graph: Any) -> Graph:
    """Accept a :class:`Graph` or an ``(n, edges)`` pair."""
    if isinstance(graph, Graph):
        return graph
    if isinstance(graph, tuple) and len(graph) == 2:
        n, edges = graph
        return Graph(int(n), tuple(tuple(e) for e in edges))
    raise InputError(f"expected a Graph or (n, edges), got {type(graph).__name__}")


def check_values(values: Any, n: int | None = None) -> ValueProfile:
    profile = as_profile(values)
    if n is not None and len(profile) != n:
        raise InputError(f"expected {n} values, got {len(profile)}")
    return profile


def check_value_matrix(rows: Any, n: int | None = None) -> ValueMatrix:
    matrix = rows if isinstance(rows, ValueMatrix) else ValueMatrix.from_rows(rows)
    if n is not None and matrix.n != n:
        raise InputError(f"expected a {n}x{n} value matrix, got {matrix.n}x{matrix.n}")
    return matrix


def check_houses(houses: Iterable[Any], n: int) -> tuple[int, ...]:
    """A bijection from vertices to house ids ``0..n-1``."""
    try:
        out = tuple(int(h) for h in houses)
    except (TypeError, ValueError) as exc:
        raise InputError(f"allocation entries must be integers: {exc}") from exc
    if len(out) != n:
        raise InputError(f"allocation has {len(out)} entries for {n} vertices")
    if sorted(out) != list(range(n)):
        raise InputError("allocation must use every house exactly once")
    return out


def check_budget(budget: Any) -> int | None:
    if budget is None:
        return None
    try:
        b = int(budget)
    except (TypeError, ValueError) as exc:
        raise InputError(f"budget must be an integer: {budget!r}") from exc
    if b < 1:
        raise InputError("budget must be positive")
    return b


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def parse_value_list(text: str) -> Sequence[str]:
    return [x.strip() for x in text.split(",") if x.strip()]
