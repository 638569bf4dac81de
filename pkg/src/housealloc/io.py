"""Instance files: one JSON document per instance.

Layout::

    {
      "schema": "housealloc.instance",
      "version": 1,
      "n": 5,
      "edges": [[0, 1], [1, 2]],
      "values": ["1", "5/2", "4"],        # or "value_matrix": [[...], ...]
      "root": 0,                          # optional
      "metadata": {...}                   # optional
    }

Values are exact rational strings (``"p/q"``, integers or decimals). Vertex
ids are 0-based. Allocations exchanged with users name houses by their
position in ``values`` (or the column of ``value_matrix``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .core import InputError, ValueMatrix, ValueProfile, format_rational, to_rational
from .graphs import Graph

SCHEMA = "housealloc.instance"
VERSION = 1


@dataclass(frozen=True)
class Instance:
    graph: Graph
    values: tuple[Fraction, ...] | None = None
    matrix: ValueMatrix | None = None
    root: int | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.values is None) == (self.matrix is None):
            raise InputError("exactly one of values and value_matrix is required")
        if self.values is not None:
            object.__setattr__(self, "values", tuple(to_rational(v) for v in self.values))
            if len(self.values) != self.graph.n:
                raise InputError(f"{len(self.values)} values for {self.graph.n} vertices")
            if any(v < 0 for v in self.values):
                raise InputError("house values must be non-negative")
        elif self.matrix.n != self.graph.n:
            raise InputError("value matrix size does not match the graph")
        if self.root is not None and not (0 <= self.root < self.graph.n):
            raise InputError("root out of range")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def general(self) -> bool:
        return self.matrix is not None

    @property
    def profile(self) -> ValueProfile:
        if self.values is None:
            raise InputError("instance has per-agent valuations, not a value profile")
        return ValueProfile.from_values(self.values)


def houses_to_ranks(houses: Sequence[int], profile: ValueProfile) -> tuple[int, ...]:
    """Input-position house ids to profile ranks."""
    rank = {orig: k for k, orig in enumerate(profile.original_index)}
    try:
        out = tuple(rank[int(h)] for h in houses)
    except KeyError as exc:
        raise InputError(f"unknown house index {exc.args[0]}") from exc
    if len(set(out)) != len(out):
        raise InputError("each house may be used only once")
    return out


def ranks_to_houses(alloc: Sequence[int], profile: ValueProfile) -> tuple[int, ...]:
    return tuple(profile.original_index[a] for a in alloc)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def to_dict(inst: Instance) -> dict:
    doc: dict[str, Any] = {"schema": SCHEMA, "version": VERSION, "n": inst.n}
    doc["edges"] = [list(e) for e in inst.graph.edges]
    if inst.values is not None:
        doc["values"] = [format_rational(v) for v in inst.values]
    else:
        doc["value_matrix"] = [[format_rational(x) for x in row] for row in inst.matrix.entries]
    if inst.root is not None:
        doc["root"] = inst.root
    if inst.metadata:
        doc["metadata"] = _jsonable(inst.metadata)
    return doc


def from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise InputError(f"unknown schema {doc.get('schema')!r}")
    if int(doc.get("version", VERSION)) > VERSION:
        raise InputError(f"unsupported instance version {doc['version']}")
    try:
        n = int(doc["n"])
        edges = tuple(tuple(int(x) for x in e) for e in doc.get("edges", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance: {exc}") from exc
    if any(len(e) != 2 for e in edges):
        raise InputError("every edge must be a pair")
    graph = Graph(n, edges)
    values = doc.get("values")
    matrix = doc.get("value_matrix")
    if values is not None and matrix is not None:
        raise InputError("give either values or value_matrix, not both")
    return Instance(
        graph,
        values=None if values is None else tuple(to_rational(v) for v in values),
        matrix=None if matrix is None else ValueMatrix.from_rows(matrix),
        root=doc.get("root"),
        metadata=dict(doc.get("metadata") or {}),
    )


def dumps(inst: Instance) -> str:
    return json.dumps(to_dict(inst), indent=2, sort_keys=False) + "\n"


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return from_dict(doc)


def read_instance(path: str | Path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(inst))
