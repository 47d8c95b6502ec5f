"""Characters of exceptional vertex operator (super)algebras.

Exact arithmetic over Q and Q(c): Eisenstein q-series, Virasoro Fock spaces,
Zhu recursion for (twisted) modular linear differential equations, Frobenius
solutions, the genus-zero derivation of p_l(c) and rational (c, h) scans.
"""
from .errors import (Degenerate, ExvoaError, Inconsistent, NotCoprime, ResonantObstruction,
                     ResonantSymbolic, SingularMatrix)
from .frobenius import indicial, p_function, solve_at, solve_symbolic, vacuum_forcing
from .genus0 import derive_pl
from .kernel import Matrix, RatFunc, UniPoly
from .qseries import QSeries
from .scan import evaluate_candidate, scan
from .zhu import ModLinOp, assemble, assemble_mlde, assemble_tmlde

__version__ = "0.1.0"

__all__ = [
    "Degenerate", "ExvoaError", "Inconsistent", "NotCoprime", "ResonantObstruction",
    "ResonantSymbolic", "SingularMatrix", "indicial", "p_function", "solve_at",
    "solve_symbolic", "vacuum_forcing", "derive_pl", "Matrix", "RatFunc", "UniPoly",
    "QSeries", "evaluate_candidate", "scan", "ModLinOp", "assemble", "assemble_mlde",
    "assemble_tmlde",
]
