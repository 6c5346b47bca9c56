"""Algebraic equations whose series roots give F along special slices."""

from ..algebra.multiseries import Ring
from ..algebra.newton import algebraic_series_solve
from ..algebra.rational import ONE, ZERO, Rational, as_rational, factorial
from ..algebra.uniseries import UniSeries


def cubic_coefficients(x):
    """Coefficients (lowest first) of ``16 xi^3 + 8 xi^2 + (1 - 36x) xi + x(27x - 1)``."""
    return [x * (27 * x - 1), 1 - 36 * x, 8 * (x * 0 + 1), 16 * (x * 0 + 1)]


def cubic_value(x, xi):
    c = cubic_coefficients(x)
    return sum(ci * xi ** k for k, ci in enumerate(c))


def cubic_xi_derivative(x, xi):
    c = cubic_coefficients(x)
    return sum(ci * k * xi ** (k - 1) for k, ci in enumerate(c) if k)


def critical_point():
    """``(x_c, xi_c) = (2/27, 1/12)``, where the cubic has a double root."""
    return Rational(2, 27), Rational(1, 12)


def xi_series(T):
    """Root of the cubic vanishing at ``x = 0``, through ``x^T``."""
    T = int(T)
    if T < 1:
        raise ValueError("T must be >= 1")
    x = UniSeries.variable(T)
    return algebraic_series_solve(cubic_coefficients(x), 0, T)


def xi_closed_form(n):
    """``[x^(n+1)] xi = (3n)! 2^n / ((n+1)! (2n+1)!)``."""
    return Rational(factorial(3 * n) * 2 ** n, factorial(n + 1) * factorial(2 * n + 1))


def diagonal_F(T):
    """``F(x)`` on the slice ``x = theta_1 theta~_1`` with ``x F' = xi``, ``F(0) = 0``.

    Known through ``x^T``.
    """
    xi = xi_series(T)
    return UniSeries([ZERO] + [xi[n] / n for n in range(1, T + 1)], T)


def _psi_coefficients(theta, one):
    """``-1 + psi + sum_q (-1)^q (2q)!/(q!)^2 theta_q psi^(2q+1)``, lowest first."""
    ell = max(theta) if theta else 0
    coeffs = [-one, one] + [one * 0] * (2 * ell)
    for q, th in theta.items():
        c = Rational(factorial(2 * q), factorial(q) ** 2)
        if q % 2:
            c = -c
        coeffs[2 * q + 1] = coeffs[2 * q + 1] + th * c
    return coeffs


def psi_ring(ell):
    return Ring([f"t{q}" for q in range(1, ell + 1)], list(range(1, ell + 1)))


def psi_series(theta, W):
    """Root with ``psi = 1`` at the origin of the degree-``2 ell + 1`` equation.

    ``theta`` is either an int ``ell`` (all ``theta_1..theta_ell`` formal,
    result a MultiSeries truncated at weight ``W``) or a mapping
    ``{q: series}`` of already-built series.  ``theta~_1`` is normalized to 1.
    """
    if isinstance(theta, int):
        ring = psi_ring(theta)
        theta = {q: ring.gen(f"t{q}", W) for q in range(1, theta + 1)}
    if not theta:
        raise ValueError("at least one theta_q is needed")
    template = next(iter(theta.values()))
    one = template * 0 + 1
    return algebraic_series_solve(_psi_coefficients(theta, one), 1, W)
