"""Exact assembly of the leading free energy F = lim log I_N / N^2.

The character sum with power sums ``N theta_q`` is expanded in
``eps = 1/N``: each partition contributes

    s_lambda(p) s_lambda(p~) prod_cells (1 + c eps)^(-1),     p_q = N theta_q,

so a monomial ``theta^alpha theta~^beta`` carries ``N^d`` with
``d = len(alpha) + len(beta)`` from the power sums.  In the logarithm the
coefficient of ``theta^alpha theta~^beta eps^k`` multiplies ``N^(d-k)``;
boundedness by ``N^2`` means it vanishes for ``k < d - 2``, and the free
energy coefficient is the ``k = d - 2`` term.  Since ``d <= 2W`` the ``eps``
expansion is exact once kept to degree ``2W - 2``.
"""

from dataclasses import dataclass

from ..algebra.multiseries import MultiSeries, Ring
from ..algebra.rational import ONE, ZERO, Rational
from ..hciz_finite import formal_character_sum
from ..symfun import (
    complete_homogeneous_all,
    elementary_all,
    enumerate_partitions,
    schur_from_power_sums,
)


class ConsistencyError(ArithmeticError):
    """A log coefficient grew faster than N^2."""


def theta_names(W):
    return [f"t{q}" for q in range(1, W + 1)] + [f"tt{q}" for q in range(1, W + 1)]


def theta_ring(W):
    """Ring of ``t1..tW`` (theta) and ``tt1..ttW`` (theta~), weight q each."""
    return Ring(theta_names(W), list(range(1, W + 1)) * 2)


def _cell_factor(lam, D):
    """Coefficients of ``prod_cells (1 + c eps)^(-1)`` through ``eps^D``."""
    poly = [ONE] + [ZERO] * D
    for c in lam.contents():
        if c == 0:
            continue
        # multiply by sum_k (-c)^k eps^k
        out = [ZERO] * (D + 1)
        for i, a in enumerate(poly):
            if not a:
                continue
            f = a
            for k in range(0, D + 1 - i):
                out[i + k] += f
                f = f * -c
        poly = out
    return poly


@dataclass
class FreeEnergy:
    """F as a series in ``t_q`` (theta) and ``tt_q`` (theta~), per-side weight ``W``.

    The series is truncated at total weight ``2W``; every monomial has equal
    theta- and theta~-weight, so this is exactly per-side weight ``<= W``.
    """

    series: MultiSeries
    W: int

    def coefficient(self, theta=None, theta_tilde=None):
        """Coefficient of ``prod t_q^{a_q} prod tt_q^{b_q}`` given as ``{q: exponent}``."""
        mono = {}
        for q, e in (theta or {}).items():
            mono[f"t{q}"] = e
        for q, e in (theta_tilde or {}).items():
            mono[f"tt{q}"] = e
        for name in mono:
            if int(name.lstrip("t")) > self.W:
                return ZERO
        return self.series.coefficient(mono)

    def terms(self):
        return self.series.terms()

    def render(self):
        return self.series.render()

    def diagonal(self):
        """Coefficients of ``(t1 tt1)^n`` for ``n = 1..W``."""
        return [self.coefficient({1: n}, {1: n}) for n in range(1, self.W + 1)]

    def swapped(self):
        """Exchange theta and theta~."""
        ring = self.series.ring
        W = self.W
        out = {}
        for e, c in self.series.terms():
            out[tuple(e[W:]) + tuple(e[:W])] = c
        return FreeEnergy(ring.from_terms(out, 2 * W), W)

    def invariant_violations(self):
        """List of broken structural invariants (empty when all hold)."""
        bad = []
        W = self.W
        for e, c in self.series.terms():
            wa = sum((q + 1) * x for q, x in enumerate(e[:W]))
            wb = sum((q + 1) * x for q, x in enumerate(e[W:]))
            if wa != wb:
                bad.append(("bi-homogeneity", e))
            if wa == 0 or wb == 0:
                bad.append(("pure term", e))
        if self.swapped().series != self.series:
            bad.append(("exchange symmetry", None))
        return bad


def assemble_F(W):
    """Exact leading free energy through per-side weight ``W``."""
    W = int(W)
    if W < 1:
        raise ValueError("W must be >= 1")
    D = 2 * W - 2
    names = theta_names(W) + ["eps"]
    weights = list(range(1, W + 1)) * 2 + [0]
    caps = [None] * (2 * W) + [D]
    ring = Ring(names, weights, caps)
    T = 2 * W
    one = ring.one(T)
    p = {q: ring.gen(f"t{q}", T) for q in range(1, W + 1)}
    pt = {q: ring.gen(f"tt{q}", T) for q in range(1, W + 1)}
    h, e = complete_homogeneous_all(p, W, one), elementary_all(p, W, one)
    ht, et = complete_homogeneous_all(pt, W, one), elementary_all(pt, W, one)
    base = (0,) * (2 * W)

    def eps_terms(poly):
        return ring.from_terms({base + (k,): c for k, c in enumerate(poly) if c}, T)

    total = one
    for n in range(1, W + 1):
        for lam in enumerate_partitions(n):
            sa = schur_from_power_sums(lam, p, one, h=h, e=e)
            sb = schur_from_power_sums(lam, pt, one, h=ht, e=et)
            total = total + (sa * sb) * eps_terms(_cell_factor(lam, D))
    log_i = total.log()

    out_ring = theta_ring(W)
    F = {}
    for exps, c in log_i.terms():
        k = exps[-1]
        d = sum(exps[:-1])
        if k < d - 2:
            raise ConsistencyError(f"log coefficient grows like N^{d - k} at {exps[:-1]}")
        if k == d - 2:
            F[exps[:-1]] = c
    return FreeEnergy(out_ring.from_terms(F, T), W)


def leading_n2(f):
    """``lim f(N)/N^2`` for ``f`` in Q(N); raises if ``f`` grows faster."""
    num, den = f.numer, f.denom
    dn = num.degree() if num else -1
    dd = den.degree()
    if dn - dd > 2:
        raise ConsistencyError("coefficient grows faster than N^2")
    if dn - dd < 2 or dn < 0:
        return ZERO
    return Rational(num.LC) / Rational(den.LC)


def assemble_F_formal(W):
    """Same result through exact rational functions of N (slow; small W only)."""
    W = int(W)
    I = formal_character_sum(W)
    L = I.log()
    F = {}
    for exps, c in L.terms():
        v = leading_n2(c)
        if v:
            F[exps] = v
    return FreeEnergy(theta_ring(W).from_terms(F, 2 * W), W)

