"""Residuals of the dispersionless equations satisfied by F."""

from ..algebra.rational import Rational
from .curves import diagonal_F, psi_series


def dkp_residual(ell, W):
    """``2 d2^2 chi + d1(-2 d3 chi + chi d1 chi)`` with ``chi = 2 psi^4``.

    ``psi`` comes from the degree-``2 ell + 1`` equation with ``theta_1..theta_ell``
    live; derivatives in absent variables vanish (the ``ell < 3`` negative
    control).  The residual is certified through weight ``W``.
    """
    ell = int(ell)
    psi = psi_series(ell, W + 4)
    chi = (psi ** 4) * 2
    names = set(chi.ring.names)

    def d(s, q, times=1):
        name = f"t{q}"
        if name not in names:
            return s.ring.zero(s.W - q * times)
        return s.derivative(name, times)

    inner = chi * d(chi, 1) - d(chi, 3) * 2
    res = d(chi, 2, 2) * 2 + d(inner, 1)
    return res.truncate(W)


def scaltodab_residual(T):
    """``exp(2F + 9 x^2 F'') - F' - x F''`` on the diagonal slice, through ``x^T``."""
    F = diagonal_F(T + 2)
    F1 = F.derivative()
    F2 = F1.derivative()
    x2F2 = F2.shift(2).truncate(T)
    lhs = (F.truncate(T) * 2 + x2F2 * 9).exp()
    rhs = F1.truncate(T) + F2.shift(1).truncate(T)
    return lhs - rhs


def scaltoda_residual(F):
    """Multivariate scaled Toda residual on a :class:`FreeEnergy`.

    ``exp(2F + sum c1(q) (th_q d_q + th~_q d~_q) F
    + sum c2(q, r) (th_q th_r d_q d_r + 2 th_q th~_r d_q d~_r + th~_q th~_r d~_q d~_r) F)
    - d_1 d~_1 F`` with ``c1 = (q/2 + 1)(q/2 - 2)`` and ``c2 = (q/2 + 1)(r/2 + 1)``.
    Certified through total weight ``2W - 2``.
    """
    S, Wside = F.series, F.W
    ring = S.ring
    T = 2 * Wside - 2
    g = {f"t{q}": ring.gen(f"t{q}", 2 * Wside) for q in range(1, Wside + 1)}
    g.update({f"tt{q}": ring.gen(f"tt{q}", 2 * Wside) for q in range(1, Wside + 1)})
    half = Rational(1, 2)

    def c1(q):
        return (q * half + 1) * (q * half - 2)

    def c2(q, r):
        return (q * half + 1) * (r * half + 1)

    def dd(s, a, b):
        # second derivative, padded back to the original order for products
        return s.derivative(a).derivative(b).with_order(s.W)

    expo = S * 2
    for q in range(1, Wside + 1):
        for v in (f"t{q}", f"tt{q}"):
            expo = expo + g[v] * S.derivative(v).with_order(S.W) * c1(q)
    for q in range(1, Wside + 1):
        for r in range(1, Wside + 1):
            k = c2(q, r)
            expo = expo + g[f"t{q}"] * g[f"t{r}"] * dd(S, f"t{q}", f"t{r}") * k
            expo = expo + g[f"t{q}"] * g[f"tt{r}"] * dd(S, f"t{q}", f"tt{r}") * (2 * k)
            expo = expo + g[f"tt{q}"] * g[f"tt{r}"] * dd(S, f"tt{q}", f"tt{r}") * k
    lhs = expo.truncate(T).exp()
    rhs = S.derivative("t1").derivative("tt1").truncate(T)
    return lhs - rhs
