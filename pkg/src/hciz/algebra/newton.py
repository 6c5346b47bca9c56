"""Newton iteration for power-series roots of polynomial equations."""

from .rational import ZERO, as_rational
from .uniseries import UniSeries


def _order(s):
    return s.W


def _promote(coeffs, template, T):
    """Turn scalars among ``coeffs`` into series shaped like ``template``."""
    out = []
    for c in coeffs:
        if hasattr(c, "truncate"):
            out.append(c.truncate(T))
        elif isinstance(template, UniSeries):
            out.append(UniSeries.constant(as_rational(c), T, template.var))
        else:
            out.append(template.ring.const(as_rational(c), T))
    return out


def _horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _constant_eval(coeffs, x0):
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x0 + c.constant_term()
    return acc


def _seed_series(template, seed, T):
    if isinstance(template, UniSeries):
        return UniSeries.constant(seed, T, template.var)
    return template.ring.const(seed, T)


def algebraic_series_solve(P, seed, T=None):
    """Series root ``xi`` of ``sum_k P[k] * xi**k = 0`` with ``xi(0) = seed``.

    ``P`` lists the coefficients of the polynomial in ``xi``, lowest degree
    first; each is a UniSeries, a MultiSeries, or a scalar (at least one must
    be a series, which fixes the ring).  The root at the origin must be
    simple.  Precision doubles each step; the final residual is checked.
    """
    series = [c for c in P if hasattr(c, "truncate")]
    if not series:
        raise ValueError("at least one coefficient must be a series")
    template = series[0]
    if T is None:
        T = min(_order(s) for s in series)
    T = int(T)
    seed = as_rational(seed)
    full = _promote(P, template, T)
    while len(full) > 1 and not full[-1]:
        full.pop()
    if len(full) < 2:
        raise ValueError("polynomial has no dependence on the unknown")
    dfull = [c * k for k, c in enumerate(full)][1:]
    if _constant_eval(full, seed) != 0:
        raise ValueError("seed is not a root at the origin")
    if _constant_eval(dfull, seed) == 0:
        raise ValueError("degenerate seed: derivative vanishes at the origin")

    xi = _seed_series(template, seed, 0)
    prec = 0
    while prec < T:
        prec = min(max(2 * prec, 1), T)
        Pt = [c.truncate(prec) for c in full]
        dPt = [c.truncate(prec) for c in dfull]
        x = xi.extend(prec)
        xi = x - _horner(Pt, x) * _horner(dPt, x).inverse()
    xi = xi.truncate(T) if T else _seed_series(template, seed, 0)
    if _horner(full, xi):
        raise ArithmeticError("Newton iteration failed to converge")
    return xi
