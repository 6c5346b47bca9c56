"""Exact rational functions of a formal symbol ``N``.

Backed by sympy's sparse rational-function field over QQ (whose ground type
is gmpy2's mpq here), imported lazily because sympy is slow to load.
"""

from functools import lru_cache


@lru_cache(maxsize=1)
def formal_n_field():
    """Return ``(K, N)``: the field Q(N) and its generator."""
    from sympy import QQ
    from sympy.polys.fields import field

    K, N = field("N", QQ)
    return K, N


def formal_n(expr=None):
    """Element of Q(N): the generator when ``expr`` is None, else a constant."""
    K, N = formal_n_field()
    if expr is None:
        return N
    return K(expr)


def evaluate_at(f, n):
    """Evaluate an element of Q(N) at an exact value of N."""
    from .rational import as_rational

    n = as_rational(n)
    num = f.numer.evaluate(0, n) if f.numer.degree() > 0 else f.numer.LC
    den = f.denom.evaluate(0, n) if f.denom.degree() > 0 else f.denom.LC
    num, den = as_rational(num), as_rational(den)
    if not den:
        raise ZeroDivisionError("denominator vanishes at this N")
    return num / den
