"""Exact-arithmetic primitives: house values, allocations and envy.

All values are :class:`fractions.Fraction`. A :class:`ValueProfile` holds the
house values sorted ascending; an allocation is a tuple ``alloc`` where
``alloc[v]`` is the rank (0-based index into the sorted profile) of the house
given to vertex ``v``. Equal values are ordered by input position, which acts
as a symbolic tie-break.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Iterable, Sequence

if TYPE_CHECKING:
    from .graphs import Graph

Rational = Fraction


class InputError(ValueError):
    """Raised on malformed or inconsistent inputs."""


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive method would exceed its configured budget."""

    def __init__(self, what: str, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: {needed} exceeds budget {budget}")


class Guarantee(str, enum.Enum):
    EXACT = "Exact"
    HEURISTIC = "Heuristic"


def to_rational(x: Any) -> Fraction:
    """Parse ``x`` exactly. Strings may be ``"p/q"`` or decimals like ``"0.25"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational value: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # float is taken at its exact binary value; prefer strings
        if x != x or x in (float("inf"), float("-inf")):
            raise InputError(f"not a finite value: {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational {x!r}") from exc
    raise InputError(f"not a rational value: {x!r}")


def format_rational(x: Fraction) -> str:
    """Canonical string: ``"p/q"`` in lowest terms, or ``"p"`` for integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, places: int = 6) -> str:
    q = round(Fraction(x), places)
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q.numerator * 10**places // q.denominator
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


@dataclass(frozen=True)
class ValueProfile:
    """House values sorted ascending, with the input position of each house.

    ``original_index[k]`` is the position in the caller's input of the house
    with rank ``k``.
    """

    values: tuple[Fraction, ...]
    original_index: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.original_index):
            raise InputError("values and original_index differ in length")
        if sorted(self.original_index) != list(range(len(self.values))):
            raise InputError("original_index is not a permutation")
        for a, b in zip(self.values, self.values[1:]):
            if a > b:
                raise InputError("profile values must be sorted ascending")
        if self.values and self.values[0] < 0:
            raise InputError("house values must be non-negative")

    @classmethod
    def from_values(cls, values: Iterable[Any]) -> "ValueProfile":
        vals = [to_rational(v) for v in values]
        order = sorted(range(len(vals)), key=lambda i: (vals[i], i))
        return cls(tuple(vals[i] for i in order), tuple(order))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def is_strict(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    def shifted(self, c: Fraction) -> "ValueProfile":
        return ValueProfile(tuple(v + c for v in self.values), self.original_index)

    def input_order(self) -> list[Fraction]:
        """Values in the caller's original order."""
        out: list[Fraction] = [Fraction(0)] * len(self.values)
        for k, i in enumerate(self.original_index):
            out[i] = self.values[k]
        return out


def as_profile(values: ValueProfile | Iterable[Any]) -> ValueProfile:
    if isinstance(values, ValueProfile):
        return values
    return ValueProfile.from_values(values)


@dataclass(frozen=True)
class ValueMatrix:
    """Per-agent valuations: ``entries[i][h]`` is agent ``i``'s value for house ``h``."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise InputError("value matrix must be square")
            if any(x < 0 for x in row):
                raise InputError("valuations must be non-negative")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Any]]) -> "ValueMatrix":
        return cls(tuple(tuple(to_rational(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SolveResult:
    allocation: tuple[int, ...]
    envy: Fraction
    solver: str
    guarantee: Guarantee = Guarantee.EXACT
    info: dict = field(default_factory=dict, compare=False)

    @property
    def exact(self) -> bool:
        return self.guarantee is Guarantee.EXACT


def check_allocation(alloc: Sequence[int], n: int) -> tuple[int, ...]:
    alloc = tuple(int(a) for a in alloc)
    if len(alloc) != n:
        raise InputError(f"allocation has length {len(alloc)}, expected {n}")
    if sorted(alloc) != list(range(n)):
        raise InputError("allocation is not a bijection onto the houses")
    return alloc


def edge_envy(alloc: Sequence[int], edge: tuple[int, int], profile: ValueProfile) -> Fraction:
    if len(alloc) != len(profile):
        raise InputError("allocation length does not match profile length")
    u, v = edge
    n = len(alloc)
    if not (0 <= u < n and 0 <= v < n):
        raise InputError(f"edge {edge} has an out-of-range endpoint")
    return abs(profile.values[alloc[u]] - profile.values[alloc[v]])


def total_envy(alloc: Sequence[int], graph: "Graph", profile: ValueProfile) -> Fraction:
    """Sum over edges of ``|v(alloc[i]) - v(alloc[j])|``."""
    if graph.n != len(profile):
        raise InputError(f"graph has {graph.n} vertices but profile has {len(profile)} values")
    if len(alloc) != graph.n:
        raise InputError("allocation length does not match graph")
    vals = profile.values
    x = [vals[a] for a in alloc]
    return sum((abs(x[i] - x[j]) for i, j in graph.edges), Fraction(0))


def total_envy_general(alloc: Sequence[int], graph: "Graph", matrix: ValueMatrix) -> Fraction:
    """Envy under per-agent valuations: both directed envies summed on each edge."""
    if matrix.n != graph.n or len(alloc) != graph.n:
        raise InputError("size mismatch between graph, matrix and allocation")
    rows = matrix.entries
    total = Fraction(0)
    for i, j in graph.edges:
        total += max(rows[i][alloc[j]] - rows[i][alloc[i]], 0)
        total += max(rows[j][alloc[i]] - rows[j][alloc[j]], 0)
    return total


def perturb_distinct(values: ValueProfile | Iterable[Any], epsilon: Any) -> ValueProfile:
    """Make all values distinct by adding ``epsilon / (n^2 2^k)`` to the k-th house.

    ``k`` is the 1-based input position. For any graph and allocation the total
    envy moves by less than ``epsilon``.
    """
    eps = to_rational(epsilon)
    if eps <= 0:
        raise InputError("epsilon must be positive")
    raw = values.input_order() if isinstance(values, ValueProfile) else [to_rational(v) for v in values]
    n = len(raw)
    bumped = [v + eps / (n * n * 2 ** (k + 1)) for k, v in enumerate(raw)]
    return ValueProfile.from_values(bumped)


def invert_profile(profile: ValueProfile) -> ValueProfile:
    """Map each value ``x`` to ``max - x``. House rank ``k`` becomes ``n-1-k``."""
    if not profile.values:
        return profile
    top = profile.values[-1]
    return ValueProfile(
        tuple(top - v for v in reversed(profile.values)),
        tuple(reversed(profile.original_index)),
    )


def invert_allocation(alloc: Sequence[int]) -> tuple[int, ...]:
    n = len(alloc)
    return tuple(n - 1 - a for a in alloc)


def integer_scale(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Scale rationals to integers over a common denominator ``d``."""
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return [v.numerator * (d // v.denominator) for v in values], d


class PrefixSums:
    """Prefix sums of ``v_k`` and ``k * v_k`` for O(1) block costs."""

    def __init__(self, values: Sequence[Fraction]):
        s = [Fraction(0)]
        w = [Fraction(0)]
        for k, v in enumerate(values):
            s.append(s[-1] + v)
            w.append(w[-1] + k * v)
        self.values = values
        self._s = s
        self._w = w

    def total(self, a: int, b: int) -> Fraction:
        """Sum of values with rank in ``[a, b)``."""
        return self._s[b] - self._s[a]

    def weighted(self, a: int, b: int) -> Fraction:
        return self._w[b] - self._w[a]

    def pairwise(self, a: int, b: int) -> Fraction:
        """Sum of ``v_j - v_i`` over ranks ``a <= i < j < b``."""
        k = b - a
        return 2 * self.weighted(a, b) - (2 * a + k - 1) * self.total(a, b)

    def run_pairwise(self, runs: Sequence[tuple[int, int]]) -> Fraction:
        """Pairwise differences summed over the union of disjoint ascending runs."""
        size = sum(b - a for a, b in runs)
        out = Fraction(0)
        offset = 0
        for a, b in runs:
            # rank of value i within the union is offset + (i - a); coefficient 2*rank - size + 1
            out += 2 * self.weighted(a, b) + (2 * (offset - a) - size + 1) * self.total(a, b)
            offset += b - a
        return out
