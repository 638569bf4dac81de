"""scikit-learn style front end."""
from __future__ import annotations

from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .core import InputError, ValueMatrix, total_envy, total_envy_general
from .dispatch import SOLVERS, solve, solve_general
from .validation import check_budget, check_graph, check_houses, check_value_matrix, check_values


class MinEnvyAllocator(BaseEstimator):
    """Minimum-envy house allocation on a social graph.

    ``fit(graph, values)`` solves the instance. ``values`` is a list of house
    values (identical valuations) or an ``n x n`` :class:`ValueMatrix`.
    After fitting, ``houses_[v]`` is the input index of vertex ``v``'s house
    and ``envy_`` is the exact total envy.

    Parameters
    ----------
    solver : str
        ``"auto"`` or one of :data:`housealloc.dispatch.SOLVERS`.
    budget : int or None
        Cap on exhaustive enumeration. ``None`` uses the library defaults.
    """

    def __init__(self, solver: str = "auto", budget: int | None = None):
        self.solver = solver
        self.budget = budget

    def fit(self, graph, values):
        if self.solver not in SOLVERS:
            raise InputError(f"unknown solver {self.solver!r}")
        graph = check_graph(graph)
        budget = check_budget(self.budget)
        if isinstance(values, ValueMatrix) or _looks_like_matrix(values):
            matrix = check_value_matrix(values, graph.n)
            res = solve_general(graph, matrix, self.solver, budget)
            self.houses_ = res.allocation
            self.profile_ = None
            self.matrix_ = matrix
        else:
            profile = check_values(values, graph.n)
            res = solve(graph, profile, self.solver, budget)
            self.houses_ = tuple(profile.original_index[a] for a in res.allocation)
            self.profile_ = profile
            self.matrix_ = None
        self.graph_ = graph
        self.result_ = res
        self.allocation_ = res.allocation
        self.envy_ = res.envy
        self.solver_ = res.solver
        self.guarantee_ = res.guarantee
        return self

    def _check_fitted(self):
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit before using this estimator")

    def predict(self, graph=None):
        """House index per vertex for the fitted instance."""
        self._check_fitted()
        if graph is not None and check_graph(graph) != self.graph_:
            raise InputError("predict only answers for the fitted graph")
        return list(self.houses_)

    def fit_predict(self, graph, values):
        return self.fit(graph, values).predict()

    def evaluate(self, houses) -> Fraction:
        """Exact envy of another allocation (house index per vertex) on the fitted instance."""
        self._check_fitted()
        houses = check_houses(houses, self.graph_.n)
        if self.matrix_ is not None:
            return total_envy_general(houses, self.graph_, self.matrix_)
        rank = {orig: k for k, orig in enumerate(self.profile_.original_index)}
        return total_envy(tuple(rank[h] for h in houses), self.graph_, self.profile_)

    def score(self, graph, values) -> float:
        """Negative envy, so larger is better."""
        return -float(self.fit(graph, values).envy_)


def _looks_like_matrix(values) -> bool:
    try:
        first = next(iter(values))
    except (TypeError, StopIteration):
        return False
    return isinstance(first, (list, tuple))
