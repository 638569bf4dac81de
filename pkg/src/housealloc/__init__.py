"""Minimum-envy house allocation on social graphs with exact rational arithmetic."""
from .core import (
    BudgetExceeded,
    Guarantee,
    InputError,
    SolveResult,
    ValueMatrix,
    ValueProfile,
    total_envy,
    total_envy_general,
)
from .dispatch import SOLVERS, solve, solve_general
from .estimator import MinEnvyAllocator
from .graphs import Graph, RootedTree, connected_components
from .io import Instance, read_instance, write_instance
from .oracle import brute_force, enumerate_optima

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Graph",
    "Guarantee",
    "InputError",
    "Instance",
    "MinEnvyAllocator",
    "RootedTree",
    "SOLVERS",
    "SolveResult",
    "ValueMatrix",
    "ValueProfile",
    "brute_force",
    "connected_components",
    "enumerate_optima",
    "read_instance",
    "solve",
    "solve_general",
    "total_envy",
    "total_envy_general",
    "write_instance",
]
