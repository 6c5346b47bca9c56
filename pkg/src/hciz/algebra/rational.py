"""Exact rationals.

``Rational`` is gmpy2's ``mpq``: always reduced, positive denominator, exact.
"""

from fractions import Fraction

import gmpy2

Rational = gmpy2.mpq

ZERO = Rational(0)
ONE = Rational(1)


def as_rational(x):
    """Coerce ints, Fractions, mpq and strings like ``"-3/4"`` to Rational."""
    if isinstance(x, type(ZERO)):
        return x
    if isinstance(x, (int, Fraction)):
        return Rational(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        return Rational(Fraction(s))
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Rational(x)


def rational_str(x):
    """``num/den`` rendering used in every exact output channel."""
    x = as_rational(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


def factorial(n):
    return int(gmpy2.fac(n))
