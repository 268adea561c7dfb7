"""Adomian-decomposition solver and neural surrogate for the geophysical KdV equation."""

from .adm import AdmSolution, eval_partial_sum, residual, solve
from .exact import exact_eval, initial_condition_eval
from .hyperalgebra import HyperPoly, HyperTerm, canonicalize
from .params import GkdvParams

__version__ = "0.1.0"

__all__ = [
    "AdmSolution", "GkdvParams", "HyperPoly", "HyperTerm", "canonicalize",
    "eval_partial_sum", "exact_eval", "initial_condition_eval", "residual", "solve",
]
