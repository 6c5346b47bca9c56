import math

import mpmath
import numpy as np
import pytest

from hciz.algebra import Rational, evaluate_at, formal_n
from hciz.hciz_finite import (
    DegenerateSpectrumError,
    ScalingConvention,
    SpectrumPair,
    character_sum_exact,
    determinant_normalization,
    haar_sample,
    hciz_character_sum,
    hciz_determinant,
    hciz_monte_carlo,
)
from hciz.large_n.free_energy import leading_n2

def _close(x, y, digits):
    with mpmath.workdps(digits + 10):
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        return abs(x - y) <= mpmath.mpf(10) ** (-digits) * max(1, abs(y))

# --- determinant route ----------------------------------------------------------

def test_scalar_case():
    # [TRIVIAL] N = 1 is exp(ab)
    with mpmath.workdps(50):
        assert _close(hciz_determinant(SpectrumPair([1], [1])), mpmath.e, 40)
        assert _close(hciz_determinant(SpectrumPair([2], [3])), mpmath.exp(6), 40)

def test_two_by_two_closed_forms():
    # [DERIVED] sum_n 2^n/(n+1)! = (e^2 - 1)/2
    with mpmath.workdps(50):
        v = hciz_determinant(SpectrumPair([1, 0], [1, 0]))
        assert _close(v, (mpmath.exp(2) - 1) / 2, 45)
        assert mpmath.nstr(v, 10) == "3.194528049"
        # [DERIVED] C_2 det[[e^2, e^-2], [e^-2, e^2]] / 4
        v = hciz_determinant(SpectrumPair([1, -1], [1, -1]))
        assert _close(v, (mpmath.exp(4) - mpmath.exp(-4)) / 8, 45)

def test_normalization_constant():
    assert determinant_normalization(1) == 1
    assert determinant_normalization(2) == Rational(1, 2)
    assert determinant_normalization(3) == Rational(2, 27)

def test_degenerate_spectrum_rejected():
    with pytest.raises(DegenerateSpectrumError):
        hciz_determinant(SpectrumPair([1, 1], [0, 1]))
    with pytest.raises(ValueError):
        SpectrumPair([1, 2], [1])
    with pytest.raises(ValueError):
        SpectrumPair([], [])

def test_determinant_symmetry_and_shift_covariance():
    s = SpectrumPair([Rational(1, 2), -1, 0], [1, Rational(1, 3), -Rational(1, 2)])
    with mpmath.workdps(50):
        base = hciz_determinant(s)
        assert _close(hciz_determinant(s.swapped()), base, 40)
        # A -> A + c I multiplies I_N by exp(N c tr B)
        c = Rational(1, 4)
        shifted = SpectrumPair([x + c for x in s.a], s.b)
        ntrb = 3 * c * sum(s.b)
        factor = mpmath.exp(mpmath.mpf(int(ntrb.numerator)) / int(ntrb.denominator))
        assert _close(hciz_determinant(shifted), base * factor, 40)

# --- character sum --------------------------------------------------------------

def test_scalar_character_sum_partial_sums():
    # [TRIVIAL] single-row partitions: sum 1/n!
    s = SpectrumPair([1], [1])
    for cutoff in (0, 3, 7):
        expect = sum(Rational(1, math.factorial(n)) for n in range(cutoff + 1))
        assert character_sum_exact(s, cutoff) == expect
    assert _close(hciz_character_sum(s, 30), mpmath.e, 25)

@pytest.mark.parametrize(
    "a,b",
    [
        ([1, 0], [1, 0]),
        ([1, -1], [1, -1]),
        ([1, 0, -1], [1, 0, -1]),
        ([Rational(1, 2), 0, -1], [1, Rational(1, 3), 0]),
    ],
)
def test_character_sum_matches_determinant(a, b):
    s = SpectrumPair(a, b)
    ref = hciz_determinant(s)
    errs = [abs(hciz_character_sum(s, c) - ref) for c in (20, 28, 36)]
    assert errs[0] > errs[1] > errs[2] or errs[2] < mpmath.mpf("1e-30")
    assert errs[-1] < mpmath.mpf("1e-10")

def test_character_sum_exact_symmetry():
    s = SpectrumPair([Rational(1, 2), 0, -1], [1, Rational(1, 3), 0])
    assert character_sum_exact(s, 8) == character_sum_exact(s.swapped(), 8)

def test_formal_character_sum_leading_terms():
    # [DERIVED] lambda = (1): N (N theta1)(N theta1~) / N = N^2 theta1 theta1~
    N = formal_n()
    I = hciz_character_sum(None, 2, N="formal")
    assert I.coefficient({"t1": 1, "tt1": 1}) == N ** 2
    assert I.constant_term() == I.ring.one(0).constant_term()
    # the exact numeric sum is the formal one evaluated at N and at theta_q = p_q / N
    s = SpectrumPair([1, 0], [Rational(1, 2), -1])
    p = {q: sum(Rational(x) ** q for x in s.a) / 2 for q in (1, 2)}
    pt = {q: sum(Rational(x) ** q for x in s.b) / 2 for q in (1, 2)}
    total = Rational(0)
    for e, c in I.terms():
        term = evaluate_at(c, 2)
        for q, k in zip((1, 2), e[:2]):
            term *= p[q] ** k
        for q, k in zip((1, 2), e[2:]):
            term *= pt[q] ** k
        total += term
    assert total == character_sum_exact(s, 2)

def test_log_is_order_n_squared():
    I = hciz_character_sum(None, 3, N="formal")
    for _, c in I.log().terms():
        leading_n2(c)  # raises when a coefficient grows faster than N^2

def test_scaling_convention():
    assert ScalingConvention.theta([1, 0, -1], 2) == Rational(2, 3)
    assert ScalingConvention.t_from_theta(Rational(1), 2, 4) == 8

# --- Monte Carlo ----------------------------------------------------------------

def test_haar_sample_is_unitary_and_unbiased():
    rng = np.random.default_rng(3)
    U = haar_sample(4, rng)
    assert np.allclose(U @ U.conj().T, np.eye(4), atol=1e-12)
    u1 = haar_sample(1, rng)
    assert abs(abs(u1[0, 0]) - 1) < 1e-12
    n = 20000
    from hciz.hciz_finite import _haar_batch

    batch = _haar_batch(3, n, np.random.default_rng(11))
    assert abs(np.mean(np.abs(batch[:, 0, 0]) ** 2) - 1 / 3) < 4 * math.sqrt(1 / n)
    assert abs(np.mean(batch[:, 0, 0])) < 4 / math.sqrt(n)

def test_haar_phase_distribution_uniform():
    # phase of the top-left entry is uniform on the circle for Haar measure
    from hciz.hciz_finite import _haar_batch

    batch = _haar_batch(2, 40000, np.random.default_rng(5))
    ph = np.angle(batch[:, 0, 0])
    hist, _ = np.histogram(ph, bins=8, range=(-math.pi, math.pi))
    expected = len(ph) / 8
    chi2 = float(((hist - expected) ** 2 / expected).sum())
    assert chi2 < 30  # 7 degrees of freedom

def test_monte_carlo_scalar_exact():
    est, se = hciz_monte_carlo(SpectrumPair([2], [3]), 10)
    assert est == math.exp(6) and se == 0.0

@pytest.mark.parametrize(
    "a,b,seed",
    [([1, 0], [1, 0], 42), ([1, 0, -1], [1, 0, -1], 7)],
)
def test_monte_carlo_within_three_sigma(a, b, seed):
    s = SpectrumPair(a, b)
    est, se = hciz_monte_carlo(s, 100000, seed)
    ref = float(hciz_determinant(s))
    assert abs(est - ref) <= 3 * se

def test_monte_carlo_deterministic_across_jobs():
    s = SpectrumPair([1, 0], [Rational(1, 2), -1])
    assert hciz_monte_carlo(s, 5000, 9, jobs=1) == hciz_monte_carlo(s, 5000, 9, jobs=3)
    with pytest.raises(ValueError):
        hciz_monte_carlo(s, 1)
