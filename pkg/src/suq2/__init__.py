"""Exact noncommutative integrals, cocycles and spectral action coefficients for SU_q(2)."""
from .qfield import QScalar, parse_qscalar, qpow
from .pbw import AlgebraElement, gen
from .oneform import OneForm
from .dsl import parse_form

__all__ = ["QScalar", "parse_qscalar", "qpow", "AlgebraElement", "gen", "OneForm", "parse_form"]
__version__ = "0.1.0"
