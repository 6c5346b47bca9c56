"""Finite-N evaluators of the unitary-group integral

    I_N(A, B) = \\int dOmega exp(N tr(A Omega B Omega^dagger))

by three independent routes: the eigenvalue determinant formula, the
normalized character sum, and Haar-measure Monte Carlo.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import mpmath
import numpy as np

from .algebra.formal_n import formal_n_field
from .algebra.multiseries import Ring
from .algebra.rational import ONE, ZERO, Rational, as_rational, factorial
from .symfun import (
    content_product,
    content_product_at,
    complete_homogeneous_all,
    elementary_all,
    enumerate_partitions,
    power_sums_of,
    schur_from_power_sums,
)

CHUNK = 1024


class DegenerateSpectrumError(ValueError):
    """Repeated eigenvalues make the determinant formula 0/0."""


@dataclass(frozen=True)
class SpectrumPair:
    a: tuple
    b: tuple

    def __init__(self, a, b):
        a = tuple(as_rational(x) for x in a)
        b = tuple(as_rational(x) for x in b)
        if len(a) != len(b) or not a:
            raise ValueError("spectra must be nonempty and of equal length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def N(self):
        return len(self.a)

    def swapped(self):
        return SpectrumPair(self.b, self.a)


class ScalingConvention:
    """Moments and flow times.

    ``theta_q = tr A^q / N`` and ``t_q = N^(q/2 + 1) theta_q / q``; the
    ladder works in the unscaled ``t``, the free energy in ``theta``.
    """

    @staticmethod
    def theta(values, q):
        values = [as_rational(v) for v in values]
        return sum((v ** q for v in values), ZERO) / len(values)

    @staticmethod
    def t_from_theta(theta, q, N):
        return mpmath.mpf(N) ** (mpmath.mpf(q) / 2 + 1) * _to_mpf(theta) / q


def _to_mpf(x):
    x = as_rational(x)
    return mpmath.mpf(int(x.numerator)) / int(x.denominator)


def _check_distinct(values, label):
    if len(set(values)) != len(values):
        raise DegenerateSpectrumError(f"repeated eigenvalues in {label}")


def determinant_normalization(N):
    """``C_N = prod_{p<N} p! * N^(-N(N-1)/2)``, so that I_N -> 1 as B -> 0."""
    num = 1
    for p in range(1, N):
        num *= factorial(p)
    return Rational(num, N ** (N * (N - 1) // 2))


def hciz_determinant(s, dps=50):
    """``C_N det(exp(N a_i b_j)) / (Delta(a) Delta(b))`` at ``dps`` digits."""
    _check_distinct(s.a, "a")
    _check_distinct(s.b, "b")
    N = s.N
    with mpmath.workdps(dps):
        a = [_to_mpf(x) for x in s.a]
        b = [_to_mpf(x) for x in s.b]
        M = mpmath.matrix(N, N)
        for i in range(N):
            for j in range(N):
                M[i, j] = mpmath.exp(N * a[i] * b[j])
        det = mpmath.det(M) if N > 1 else M[0, 0]
        vand = ONE
        for i in range(N):
            for j in range(i + 1, N):
                vand *= (s.a[i] - s.a[j]) * (s.b[i] - s.b[j])
        val = det * _to_mpf(determinant_normalization(N)) / _to_mpf(vand)
        return +val


def _weights_numeric(N, n):
    Nq = Rational(N)
    return {
        lam: Nq ** n / content_product_at(lam, Nq)
        for lam in enumerate_partitions(n, max_rows=N)
    }


def character_sum_exact(s, cutoff, N=None):
    """Exact partial sum over partitions with ``|lambda| <= cutoff``.

    Partitions with more rows than N are skipped (their weight has a zero
    factor in the denominator's content product).
    """
    N = s.N if N is None else int(N)
    pa = power_sums_of(s.a, cutoff)
    pb = power_sums_of(s.b, cutoff)
    ha = complete_homogeneous_all(pa, cutoff)
    hb = complete_homogeneous_all(pb, cutoff)
    ea = elementary_all(pa, cutoff)
    eb = elementary_all(pb, cutoff)
    total = ZERO
    for n in range(cutoff + 1):
        for lam, w in _weights_numeric(N, n).items():
            sa = schur_from_power_sums(lam, pa, h=ha, e=ea)
            if not sa:
                continue
            sb = schur_from_power_sums(lam, pb, h=hb, e=eb)
            total += w * sa * sb
    return total


def formal_character_sum(cutoff):
    """The character sum with formal N as a series in ``theta``, ``theta~``.

    Power sums are ``N theta_q`` and ``N theta~_q``; coefficients live in
    Q(N).  Variables are named ``t{q}`` (theta) and ``tt{q}`` (theta~).
    """
    K, Nsym = formal_n_field()
    names = [f"t{q}" for q in range(1, cutoff + 1)] + [
        f"tt{q}" for q in range(1, cutoff + 1)
    ]
    weights = list(range(1, cutoff + 1)) * 2
    ring = Ring(names, weights)
    W = 2 * cutoff
    one = ring.const(K.one, W)
    p = {q: ring.gen(f"t{q}", W).scale(Nsym) for q in range(1, cutoff + 1)}
    pt = {q: ring.gen(f"tt{q}", W).scale(Nsym) for q in range(1, cutoff + 1)}
    h, e = complete_homogeneous_all(p, cutoff, one), elementary_all(p, cutoff, one)
    ht, et = complete_homogeneous_all(pt, cutoff, one), elementary_all(pt, cutoff, one)
    total = one
    for n in range(1, cutoff + 1):
        for lam in enumerate_partitions(n):
            w = Nsym ** n / content_product(lam)
            sa = schur_from_power_sums(lam, p, one, h=h, e=e)
            sb = schur_from_power_sums(lam, pt, one, h=ht, e=et)
            total = total + (sa * sb).scale(w)
    return total


def hciz_character_sum(s, cutoff, N=None, dps=50):
    """Numeric character sum (``s`` a SpectrumPair) or, with ``N="formal"``,
    the exact series of :func:`formal_character_sum` (``s`` is ignored)."""
    if N == "formal":
        return formal_character_sum(cutoff)
    exact = character_sum_exact(s, cutoff, N)
    with mpmath.workdps(dps):
        return +_to_mpf(exact)


# --- Monte Carlo ------------------------------------------------------------

def _haar_batch(N, n, rng):
    """``n`` Haar unitaries of size N, shape ``(n, N, N)``."""
    z = (rng.standard_normal((n, N, N)) + 1j * rng.standard_normal((n, N, N))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    phase = d / np.abs(d)
    # Q diag(phase) is the unique factor with positive diagonal in R
    return q * phase[:, None, :]


def haar_sample(N, rng):
    """One Haar-distributed N x N unitary."""
    return _haar_batch(N, 1, rng)[0]


def _chunk_stats(a, b, N, n, seed, k):
    rng = np.random.default_rng([seed, k])
    U = _haar_batch(N, n, rng)
    w = np.abs(U) ** 2
    x = np.exp(N * np.einsum("i,kij,j->k", a, w, b))
    mean = float(x.mean())
    m2 = float(((x - mean) ** 2).sum())
    return n, mean, m2


def hciz_monte_carlo(s, samples, seed=0, jobs=1):
    """Sample mean and standard error of ``exp(N tr(A U B U^dagger))``.

    Samples are drawn in chunks of 1024; chunk ``k`` uses the RNG stream
    ``(seed, k)`` and chunk statistics are merged in chunk order, so results
    do not depend on ``jobs``.
    """
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples")
    N = s.N
    if N == 1:
        return math.exp(float(s.a[0] * s.b[0])), 0.0
    a = np.array([float(x) for x in s.a])
    b = np.array([float(x) for x in s.b])
    sizes = [min(CHUNK, samples - k * CHUNK) for k in range((samples + CHUNK - 1) // CHUNK)]
    args = [(a, b, N, n, seed, k) for k, n in enumerate(sizes)]
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            stats = list(ex.map(lambda t: _chunk_stats(*t), args))
    else:
        stats = [_chunk_stats(*t) for t in args]
    count, mean, m2 = 0, 0.0, 0.0
    for n, mu, q in stats:
        tot = count + n
        delta = mu - mean
        mean += delta * n / tot
        m2 += q + delta * delta * count * n / tot
        count = tot
    var = m2 / (count - 1)
    return mean, math.sqrt(var / count)
