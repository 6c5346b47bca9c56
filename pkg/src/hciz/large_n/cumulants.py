"""Free cumulants of the second spectrum and the curve b(a)."""

from ..algebra.multiseries import Ring
from ..algebra.rational import ONE, ZERO, as_rational, factorial
from ..algebra.uniseries import LaurentSeries, UniSeries


def tilde_ring(Q):
    """Ring of ``tt1..ttQ`` with ``weight(tt_q) = q``."""
    return Ring([f"tt{q}" for q in range(1, Q + 1)], list(range(1, Q + 1)))


def formal_theta_tilde(Q, W=None):
    """Formal moments ``{q: tt_q}`` truncated at weight ``W`` (default Q)."""
    W = Q if W is None else W
    ring = tilde_ring(Q)
    return {q: ring.gen(f"tt{q}", W) for q in range(1, Q + 1)}


def _normalize(theta_tilde, Q):
    out = {}
    for q, v in theta_tilde.items():
        q = int(q)
        if q < 1:
            raise ValueError("moment index must be >= 1")
        if q <= Q:
            out[q] = v if hasattr(v, "ring") else as_rational(v)
    return out


def _zero_like(theta_tilde):
    for v in theta_tilde.values():
        if hasattr(v, "ring"):
            return v * 0
    return ZERO


def _compositions(q, parts):
    """Multiplicity vectors ``{i: alpha_i}`` with ``sum i alpha_i = q`` over ``parts``."""
    parts = sorted(parts, reverse=True)

    def rec(rem, idx):
        if rem == 0:
            yield {}
            return
        if idx == len(parts):
            return
        i = parts[idx]
        for k in range(rem // i, -1, -1):
            for rest in rec(rem - k * i, idx + 1):
                if k:
                    d = dict(rest)
                    d[i] = k
                    yield d
                else:
                    yield rest

    yield from rec(q, 0)


def free_cumulants_direct(theta_tilde, Q):
    """``[m_1, ..., m_Q]`` by direct summation over compositions.

    ``m_q = -sum (q + |alpha| - 2)!/(q-1)! prod (-th_i)^alpha_i / alpha_i!``
    """
    th = _normalize(theta_tilde, Q)
    zero = _zero_like(th)
    out = []
    for q in range(1, Q + 1):
        acc = zero
        for alpha in _compositions(q, [i for i in th]):
            n = sum(alpha.values())
            coef = as_rational(factorial(q + n - 2)) / factorial(q - 1)
            term = None
            for i, k in alpha.items():
                coef /= factorial(k)
                if k % 2:
                    coef = -coef
                f = th[i] ** k
                term = f if term is None else term * f
            acc = acc - term * coef
        out.append(acc)
    return out


def free_cumulants_inversion(theta_tilde, Q):
    """``[m_1, ..., m_Q]`` by reverting ``a(v) = v + sum th_q v^(q+1)``.

    With ``v = 1/b``, the inverse chart gives ``a / v(a) = 1 + sum m_q a^q``.
    """
    th = _normalize(theta_tilde, Q)
    zero = _zero_like(th)
    coeffs = [zero, ONE + zero] + [th.get(q, zero) + zero for q in range(1, Q + 1)]
    a_of_v = UniSeries(coeffs, Q + 1, "v")
    v_of_a = a_of_v.revert()
    ratio = UniSeries(v_of_a.c[1:], Q, "a").inverse()
    return [ratio[q] for q in range(1, Q + 1)]


class Curve:
    """``b(a) = 1/a + sum m_q a^(q-1)`` for given moments of the second spectrum."""

    def __init__(self, theta_tilde, Q, route="inversion"):
        self.Q = int(Q)
        self.theta_tilde = _normalize(theta_tilde, self.Q)
        if route == "inversion":
            m = free_cumulants_inversion(self.theta_tilde, self.Q)
        elif route == "direct":
            m = free_cumulants_direct(self.theta_tilde, self.Q)
        else:
            raise ValueError(f"unknown route {route!r}")
        self.cumulants = m

    @classmethod
    def formal(cls, Q, route="inversion"):
        return cls(formal_theta_tilde(Q), Q, route)

    @property
    def is_formal(self):
        return any(hasattr(v, "ring") for v in self.theta_tilde.values())

    @property
    def tilde_ring(self):
        for v in self.theta_tilde.values():
            if hasattr(v, "ring"):
                return v.ring
        return None

    def cumulant(self, q):
        if not 1 <= q <= self.Q:
            raise ValueError(f"cumulant {q} not computed (Q={self.Q})")
        return self.cumulants[q - 1]

    def b_of_a(self):
        zero = _zero_like(self.theta_tilde)
        return LaurentSeries(-1, UniSeries([ONE + zero] + list(self.cumulants), self.Q, "a"))

    def a_of_v(self):
        """``a`` as a polynomial in ``v = 1/b``: ``v + sum th_q v^(q+1)``."""
        zero = _zero_like(self.theta_tilde)
        coeffs = [zero, ONE + zero] + [self.theta_tilde.get(q, zero) + zero for q in range(1, self.Q + 1)]
        return UniSeries(coeffs, self.Q + 1, "v")
