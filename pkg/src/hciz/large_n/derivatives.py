"""Derivatives of F at theta = 0 from the curve b(a).

All generating functions use the rescaled operator
``nabla(a) = sum_q a^q d/dtheta_q``, so the coefficient of
``a1^q a2^r ...`` is exactly the partial derivative ``d_q d_r ... F``.
The only place where derivatives become Taylor coefficients of F is
:func:`derivative_to_coefficient`.
"""

from collections import Counter
from itertools import product

from ..algebra.multiseries import Ring
from ..algebra.rational import ONE, ZERO, factorial
from .cumulants import Curve


def derivative_to_coefficient(value, alpha):
    """Taylor coefficient from a derivative: divide by ``prod alpha_q!``.

    ``alpha`` is a tuple of theta indices (with repetition) or a
    ``{q: multiplicity}`` mapping.
    """
    counts = alpha if isinstance(alpha, dict) else Counter(alpha)
    den = 1
    for k in counts.values():
        den *= factorial(k)
    return value / den


def gradient_F(curve, Qmax):
    """``[dF/dtheta_q at theta=0 for q = 1..Qmax]`` = ``m_q / q``."""
    return [curve.cumulant(q) / q for q in range(1, Qmax + 1)]


class _Flat:
    """Ring of spectral variables (weight 1) joined with the curve's theta~ ring.

    With formal theta~, a monomial ``a^d`` multiplying a cumulant of weight
    ``k`` has total weight ``d + k``; truncation is by that total weight.
    """

    def __init__(self, curve, avars):
        self.curve = curve
        tr = curve.tilde_ring
        self.formal = tr is not None
        names = list(avars) + (list(tr.names) if tr else [])
        weights = [1] * len(avars) + (list(tr.weights) if tr else [])
        self.ring = Ring(names, weights)
        self.avars = list(avars)

    def scale(self, degree):
        """Total weight that carries a-degree ``degree`` (theta~-weight equals it)."""
        return 2 * degree if self.formal else degree

    def coef(self, c, W):
        if hasattr(c, "ring"):
            return c.embed(self.ring, W)
        return self.ring.const(c, W)

    def a(self, name, W):
        return self.ring.gen(name, W)

    def m(self, q, W):
        return self.coef(self.curve.cumulant(q), W)

    def extract(self, series, apowers):
        """Coefficient of ``prod a_i^{e_i}`` as a theta~-series (or Rational)."""
        ring = self.ring
        na = len(self.avars)
        tr = self.curve.tilde_ring
        out = {}
        for exps, c in series.terms():
            if tuple(exps[:na]) == tuple(apowers):
                out[tuple(exps[na:])] = c
        if tr is None:
            return out.get((), ZERO)
        Wt = sum(apowers)
        return tr.from_terms(out, max(Wt, tr_max_weight(self.curve)))


def tr_max_weight(curve):
    for v in curve.theta_tilde.values():
        if hasattr(v, "ring"):
            return v.W
    return curve.Q


def _pair_series(flat, ai, aj, W):
    """``(b(a_i) - b(a_j)) / (1/a_i - 1/a_j) = 1 - sum m_q sum_k a_i^k a_j^(q-k)``."""
    out = flat.ring.one(W)
    x, y = flat.a(ai, W), flat.a(aj, W)
    for q in range(2, flat.curve.Q + 1):
        if flat.scale(q) > W:
            break
        s = None
        for k in range(1, q):
            t = (x ** k) * (y ** (q - k))
            s = t if s is None else s + t
        out = out - flat.m(q, W) * s
    return out


def _require(curve, order):
    if curve.Q < order:
        raise ValueError(f"curve needs cumulants through {order} (has {curve.Q})")


def hessian_F(curve, Qmax):
    """``{(q, r): d_q d_r F at theta=0}`` for ``q, r >= 1``, ``q + r <= Qmax``.

    Coefficients of ``log((b(a1) - b(a2)) / (1/a1 - 1/a2))``.
    """
    _require(curve, Qmax)
    flat = _Flat(curve, ["a1", "a2"])
    W = flat.scale(Qmax)
    L = _pair_series(flat, "a1", "a2", W).log()
    return {
        (q, r): flat.extract(L, (q, r))
        for q in range(1, Qmax)
        for r in range(1, Qmax + 1 - q)
    }


def third_derivative_F(curve, Qmax):
    """``{(q, r, s): d_q d_r d_s F at theta=0}`` with ``q + r + s <= Qmax``.

    Coefficients of ``sum_cyclic b'(a_i) / ((b_i - b_j)(b_i - b_k)) + 1``.
    Writing ``b_i - b_j = R_ij (a_j - a_i)/(a_i a_j)`` and
    ``a^2 b'(a) = -1 + sum (q-1) m_q a^q`` gives a numerator over
    ``(a1-a2)(a1-a3)(a2-a3)`` which divides exactly.
    """
    _require(curve, Qmax)
    flat = _Flat(curve, ["a1", "a2", "a3"])
    W = flat.scale(Qmax) + 3
    a = {i: flat.a(f"a{i}", W) for i in (1, 2, 3)}
    R = {}
    for i, j in ((1, 2), (1, 3), (2, 3)):
        R[(i, j)] = R[(j, i)] = _pair_series(flat, f"a{i}", f"a{j}", W)

    def Sval(i, j, k):
        top = flat.ring.const(-ONE, W)
        for q in range(2, curve.Q + 1):
            if flat.scale(q) > W:
                break
            top = top + flat.m(q, W) * (a[i] ** q) * (q - 1)
        return top * (R[(i, j)] * R[(i, k)]).inverse()

    num = (
        a[2] * a[3] * (a[2] - a[3]) * Sval(1, 2, 3)
        - a[1] * a[3] * (a[1] - a[3]) * Sval(2, 1, 3)
        + a[1] * a[2] * (a[1] - a[2]) * Sval(3, 1, 2)
    )
    G = num.divide_linear("a1", "a2").divide_linear("a1", "a3").divide_linear("a2", "a3")
    G = G + 1
    out = {}
    for q, r, s in product(range(1, Qmax + 1), repeat=3):
        if q + r + s <= Qmax:
            out[(q, r, s)] = flat.extract(G, (q, r, s))
    return out


def mixed_derivative_F(curve, Qmax):
    """``{(q, r): d_q d~_r F at theta=0}`` for ``1 <= r <= q <= Qmax``.

    Coefficients of ``-log(1 - c / b(a))`` in ``a^q c^r``, with
    ``1 / b(a) = a / (1 + sum m_q a^q)``.
    """
    _require(curve, Qmax)
    flat = _Flat(curve, ["a", "c"])
    # a^q c^r with r <= q <= Qmax has a- and c-degree at most 2 Qmax
    W = 2 * Qmax
    x, c = flat.a("a", W), flat.a("c", W)
    den = flat.ring.one(W)
    for q in range(1, curve.Q + 1):
        if flat.scale(q) > W:
            break
        den = den + flat.m(q, W) * x ** q
    arg = flat.ring.one(W) - c * x * den.inverse()
    L = -arg.log()
    return {
        (q, r): flat.extract(L, (q, r))
        for q in range(1, Qmax + 1)
        for r in range(1, q + 1)
    }


def formal_curve(Qmax):
    return Curve.formal(Qmax)
