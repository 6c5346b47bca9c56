"""Exact rationals and truncated formal-series rings."""

from .formal_n import evaluate_at, formal_n, formal_n_field
from .kernel import BACKEND
from .multiseries import MultiSeries, Ring
from .newton import algebraic_series_solve
from .rational import ONE, ZERO, Rational, as_rational, factorial, rational_str
from .uniseries import LaurentSeries, UniSeries


def series_log(s):
    """Logarithm of a series with constant term 1."""
    return s.log()


def series_exp(s):
    """Exponential of a series with constant term 0."""
    return s.exp()


def series_revert(s):
    """Compositional inverse of a UniSeries with s(0)=0, s'(0)!=0."""
    return s.revert()


__all__ = [
    "BACKEND",
    "LaurentSeries",
    "MultiSeries",
    "ONE",
    "Rational",
    "Ring",
    "UniSeries",
    "ZERO",
    "algebraic_series_solve",
    "as_rational",
    "evaluate_at",
    "factorial",
    "formal_n",
    "formal_n_field",
    "rational_str",
    "series_exp",
    "series_log",
    "series_revert",
]
