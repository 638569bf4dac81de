"""Plain-text drawing of the valuation interval with one segment per edge."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import ValueProfile, format_rational, total_envy
from .graphs import Graph


def _col(x: Fraction, lo: Fraction, hi: Fraction, width: int) -> int:
    if hi == lo:
        return 0
    return int(round((x - lo) / (hi - lo) * (width - 1)))


def render_interval(graph: Graph, profile: ValueProfile, alloc: Sequence[int], width: int = 60) -> str:
    """House marks on an axis, then each edge as a bar between its endpoints' values."""
    width = max(width, 10)
    vals = profile.values
    if not vals:
        return "(no houses)\n"
    lo, hi = vals[0], vals[-1]
    axis = ["-"] * width
    for v in vals:
        axis[_col(v, lo, hi, width)] = "|"
    lines = [
        f"{format_rational(lo)} .. {format_rational(hi)}",
        "".join(axis),
    ]
    label_w = max((len(f"{u}-{v}") for u, v in graph.edges), default=3)
    for u, v in graph.edges:
        a, b = sorted((vals[alloc[u]], vals[alloc[v]]))
        row = [" "] * width
        ca, cb = _col(a, lo, hi, width), _col(b, lo, hi, width)
        for c in range(ca, cb + 1):
            row[c] = "="
        row[ca] = row[cb] = "o"
        lines.append(f"{''.join(row)}  {u}-{v}".ljust(width + 2 + label_w) + f"  {format_rational(b - a)}")
    lines.append(f"total envy: {format_rational(total_envy(alloc, graph, profile))}")
    return "\n".join(lines) + "\n"
