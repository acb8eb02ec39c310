"""Optimizing compiler from finite-domain constraint models to CNF.

Integers are order-encoded (bit i means X >= i); constraints act as
propagators of equalities between Boolean literals and constants, which
are factored out by unification before anything is encoded.
"""

from .literals import (CONTRADICTION, Contradiction, EquiFormula, FALSE,
                       TRUE, Unifier, apply_unifier, build_unifier)
from .model import Constraint, Model, ShiftedView, UnaryInt, domain_of, shift_view
from .parser import parse_model, print_model
from .pipeline import compile_model, solve_model
from .propagate import alldiff_ep, complete_ep, decompose, fd_adapter, fixpoint

__version__ = "0.1.0"

__all__ = [
    "CONTRADICTION",
    "Contradiction",
    "Constraint",
    "EquiFormula",
    "FALSE",
    "Model",
    "ShiftedView",
    "TRUE",
    "UnaryInt",
    "Unifier",
    "alldiff_ep",
    "apply_unifier",
    "build_unifier",
    "compile_model",
    "complete_ep",
    "decompose",
    "domain_of",
    "fd_adapter",
    "fixpoint",
    "parse_model",
    "print_model",
    "shift_view",
    "solve_model",
    "__version__",
]
