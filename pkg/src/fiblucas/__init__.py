"""Certified computations for F_k = L_m L_n and L_k = F_m F_n.

Modules: ``sequences`` (exact terms, growth bounds), ``algebraic`` (Q(√5)
arithmetic and heights), ``bounds`` (Matveev constants and index bounds),
``reduction`` (continued fractions and the reduction lemma), ``search``
(exhaustive enumeration) and ``cli``.
"""

from .algebraic import QuadraticNumber, log_height, minimal_polynomial, multiplicatively_dependent
from .certified import CertifiedReal, precision
from .equations import EquationKind
from .errors import ConfigError, InvariantViolation, NonConvergence, PrecisionExhausted
from .search import SearchRange, SolutionTriple, enumerate_solutions
from .sequences import binet_round, fib, growth_bounds_hold, lucas

__version__ = "0.1.0"

__all__ = [
    "CertifiedReal",
    "ConfigError",
    "EquationKind",
    "InvariantViolation",
    "NonConvergence",
    "PrecisionExhausted",
    "QuadraticNumber",
    "SearchRange",
    "SolutionTriple",
    "binet_round",
    "enumerate_solutions",
    "fib",
    "growth_bounds_hold",
    "log_height",
    "lucas",
    "minimal_polynomial",
    "multiplicatively_dependent",
    "precision",
]
