"""Certified computations for the Lagrange and Markov spectra.

Submodules: ``surd`` and ``enclosure`` (exact numbers and intervals), ``cf``
(continued fractions), ``markov`` (Markov triples), ``spectrum`` (Perron
values, Freiman's sequences, Hall's ray), ``cantor`` (Gauss-Cantor sets),
``boxdim`` (unstable scales and box dimension), ``lattice`` (holonomy
vectors) and ``verify`` (the acceptance suite).
"""

from .cf import CFExpansion, cf_expand, convergents, parse_cf
from .enclosure import BoundedValue
from .errors import BudgetExceeded, DomainError, InsufficientPrecision
from .spectrum import BiSequence, lagrange_value, markov_value, parse_bisequence
from .surd import QuadraticSurd, parse_real

__version__ = "0.1.0"

__all__ = [
    "BiSequence",
    "BoundedValue",
    "BudgetExceeded",
    "CFExpansion",
    "DomainError",
    "InsufficientPrecision",
    "QuadraticSurd",
    "cf_expand",
    "convergents",
    "lagrange_value",
    "markov_value",
    "parse_bisequence",
    "parse_cf",
    "parse_real",
]
