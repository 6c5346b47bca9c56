from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hciz.algebra import Rational, Ring, evaluate_at, formal_n
from hciz.algebra.rational import factorial
from hciz.symfun import (
    Partition,
    complete_homogeneous,
    content_product,
    content_product_at,
    enumerate_partitions,
    power_sums_of,
    schur_from_power_sums,
    standard_tableaux_count,
)

from oracles import partitions_brute, ssyt_schur

P_RING = Ring(["p1", "p2", "p3", "p4"], [1, 2, 3, 4])


def _p(W):
    return {q: P_RING.gen(f"p{q}", W) for q in range(1, 5)}


def test_partition_validation_and_shape():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    lam = Partition((3, 1))
    assert lam.size == 4 and lam.rows == 2
    assert lam.conjugate() == Partition((2, 1, 1))
    assert sorted(lam.contents()) == [-1, 0, 1, 2]
    assert lam.hooks() == [4, 2, 1, 1]
    assert lam.shifted_weights(3) == [5, 2, 0]
    with pytest.raises(ValueError):
        lam.shifted_weights(1)


def test_enumerate_small_cases():
    assert enumerate_partitions(0) == [Partition()]
    assert len(enumerate_partitions(4)) == 5
    # [DERIVED] brute force with row filter
    assert [p.parts for p in enumerate_partitions(6, max_rows=2)] == [(6,), (5, 1), (4, 2), (3, 3)]


@pytest.mark.parametrize("n", range(0, 9))
def test_enumerate_matches_brute_force(n):
    got = [p.parts for p in enumerate_partitions(n)]
    assert set(got) == (partitions_brute(n) if n else {()})
    assert got == sorted(got, reverse=True)  # reverse-lexicographic
    assert len(got) == len(set(got))


def test_content_product_examples():
    N = formal_n()
    assert content_product(Partition((1,))) == N
    assert content_product(Partition((2, 1))) == N ** 3 - N
    assert content_product(Partition((2,))) == N * (N + 1)


@pytest.mark.parametrize("lam", [p for n in range(1, 7) for p in enumerate_partitions(n)])
def test_gl_dimension_is_positive_integer(lam):
    hooks = 1
    for h in lam.hooks():
        hooks *= h
    for N in range(lam.rows, lam.rows + 4):
        dim = content_product_at(lam, N) / hooks
        assert dim.denominator == 1 and dim > 0
        assert evaluate_at(content_product(lam), N) == content_product_at(lam, N)
    # a row beyond N kills the cell (rows, 1)
    assert content_product_at(lam, lam.rows - 1) == 0


def test_complete_homogeneous_examples():
    W = 4
    p = _p(W)
    x1, x2 = p[1], p[2]
    assert complete_homogeneous(0, p, P_RING.one(W)) == P_RING.one(W)
    assert complete_homogeneous(1, p, P_RING.one(W)) == x1
    assert complete_homogeneous(2, p, P_RING.one(W)) == (x1 * x1 + x2) / 2


def test_schur_examples():
    W = 4
    p = _p(W)
    one = P_RING.one(W)
    x1, x2 = p[1], p[2]
    assert schur_from_power_sums(Partition((1,)), p, one) == x1
    assert schur_from_power_sums(Partition((2,)), p, one) == (x1 * x1 + x2) / 2
    assert schur_from_power_sums(Partition((1, 1)), p, one) == (x1 * x1 - x2) / 2


values = st.lists(
    st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1, max_size=3
)


@settings(max_examples=25, deadline=None)
@given(values, st.sampled_from([p for n in range(1, 5) for p in enumerate_partitions(n)]))
def test_schur_matches_tableau_enumeration(xs, lam):
    # [DERIVED] semistandard tableau sum in explicit variables
    p = power_sums_of([Rational(x) for x in xs], lam.size)
    got = schur_from_power_sums(lam, p)
    assert Fraction(int(got.numerator), int(got.denominator)) == ssyt_schur(lam.parts, xs)


@pytest.mark.parametrize("lam", [p for n in range(1, 6) for p in enumerate_partitions(n)])
def test_schur_on_single_power_sum(lam):
    # s_lambda(p1 = x, p_q>=2 = 0) = x^n f_lambda / n!
    W = lam.size
    ring = Ring(["x"], [1])
    x = ring.gen("x", W)
    s = schur_from_power_sums(lam, {1: x}, ring.one(W))
    # the tableau count is itself checked by brute force below
    f = standard_tableaux_count(lam)
    assert s.coefficient({"x": W}) == Rational(f, factorial(W))
    assert s.nterms() == 1


@pytest.mark.parametrize("lam", [p for n in range(1, 6) for p in enumerate_partitions(n)])
def test_standard_tableaux_count_brute_force(lam):
    # [DERIVED] f_lambda = coefficient of x1 x2 ... xn in s_lambda(x1..xn)
    n = lam.size
    cells = [(i, j) for i, row in enumerate(lam.parts) for j in range(row)]
    count = 0
    for fill in product(range(n), repeat=n):
        if len(set(fill)) != n:
            continue
        T = dict(zip(cells, fill))
        if all(
            (j == 0 or T[(i, j - 1)] < T[(i, j)]) and (i == 0 or T[(i - 1, j)] < T[(i, j)])
            for i, j in cells
        ):
            count += 1
    assert standard_tableaux_count(lam) == count


@pytest.mark.parametrize("n", range(0, 7))
def test_cauchy_identity(n):
    # sum_{|lambda|=n} s_lambda(p) s_lambda(p') = weight-n part of exp(sum p_q p'_q / q)
    W = n
    names = [f"a{q}" for q in range(1, 7)] + [f"b{q}" for q in range(1, 7)]
    ring = Ring(names, list(range(1, 7)) * 2)
    one = ring.one(2 * W)
    pa = {q: ring.gen(f"a{q}", 2 * W) for q in range(1, 7)}
    pb = {q: ring.gen(f"b{q}", 2 * W) for q in range(1, 7)}
    lhs = ring.zero(2 * W)
    for lam in enumerate_partitions(n):
        lhs = lhs + schur_from_power_sums(lam, pa, one) * schur_from_power_sums(lam, pb, one)
    arg = ring.zero(2 * W)
    for q in range(1, 7):
        arg = arg + pa[q] * pb[q] / q
    rhs = arg.exp().homogeneous(2 * n)
    assert lhs == rhs
