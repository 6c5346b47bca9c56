"""Partitions, complete homogeneous and Schur functions in power sums.

Symmetric functions are built over any commutative coefficient ring: the
power sums are passed as a mapping ``q -> p_q`` whose values may be Rationals,
MultiSeries, or elements of Q(N).  ``one`` is the unit of that ring.
"""

from functools import lru_cache

from .algebra.formal_n import formal_n_field
from .algebra.rational import ONE, ZERO, Rational


class Partition:
    """A Young diagram, stored as a weakly decreasing tuple of positive parts."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("partition parts must be weakly decreasing")
        self.parts = parts

    def __repr__(self):
        return f"Partition({self.parts})"

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    @property
    def size(self):
        return sum(self.parts)

    @property
    def rows(self):
        return len(self.parts)

    def cells(self):
        for i, row in enumerate(self.parts):
            for j in range(row):
                yield i, j

    def contents(self):
        return [j - i for i, j in self.cells()]

    def conjugate(self):
        if not self.parts:
            return Partition()
        return Partition(
            sum(1 for p in self.parts if p > j) for j in range(self.parts[0])
        )

    def hooks(self):
        conj = self.conjugate().parts
        return [self.parts[i] - j + conj[j] - i - 1 for i, j in self.cells()]

    def shifted_weights(self, N):
        """``h_i = lambda_i + N - i`` for ``i = 1..N`` (zero rows included)."""
        if N < self.rows:
            raise ValueError("more rows than N")
        parts = self.parts + (0,) * (N - self.rows)
        return [parts[i] + N - 1 - i for i in range(N)]


def enumerate_partitions(n, max_rows=None):
    """All partitions of ``n`` in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []

    def rec(rem, cap, acc):
        if rem == 0:
            out.append(Partition(acc))
            return
        if max_rows is not None and len(acc) >= max_rows:
            return
        for p in range(min(rem, cap), 0, -1):
            acc.append(p)
            rec(rem - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return out


def content_product(lam):
    """``prod over cells of (N + j - i)`` as an element of Q(N)."""
    K, N = formal_n_field()
    out = K.one
    for c in lam.contents():
        out = out * (N + c)
    return out


def content_product_at(lam, N):
    """Numeric ``prod (N + j - i)`` at an exact value of N."""
    out = ONE
    for c in lam.contents():
        out *= N + c
    return Rational(out)


def standard_tableaux_count(lam):
    """Hook length formula."""
    from .algebra.rational import factorial

    num = factorial(lam.size)
    den = 1
    for h in lam.hooks():
        den *= h
    return num // den


# --- symmetric functions over a generic ring -------------------------------

def complete_homogeneous_all(p, K, one=ONE):
    """``[h_0, ..., h_K]`` from power sums via ``k h_k = sum_q p_q h_{k-q}``."""
    h = [one]
    for k in range(1, K + 1):
        acc = None
        for q in range(1, k + 1):
            pq = p.get(q)
            if pq is None:
                continue
            term = pq * h[k - q]
            acc = term if acc is None else acc + term
        h.append(one * 0 if acc is None else acc / k)
    return h


def elementary_all(p, K, one=ONE):
    """``[e_0, ..., e_K]`` via ``k e_k = sum_q (-1)^(q-1) p_q e_{k-q}``."""
    e = [one]
    for k in range(1, K + 1):
        acc = None
        for q in range(1, k + 1):
            pq = p.get(q)
            if pq is None:
                continue
            term = pq * e[k - q]
            if q % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        e.append(one * 0 if acc is None else acc / k)
    return e


def complete_homogeneous(k, p, one=ONE):
    """``h_k`` as a polynomial in the power sums ``p``."""
    return complete_homogeneous_all(p, k, one)[k]


def _determinant(entry, n, one):
    """Laplace expansion along rows, memoized on the set of used columns.

    ``entry(i, j)`` returns None for structural zeros.
    """
    memo = {}

    def rec(row, used):
        if row == n:
            return one
        if used in memo:
            return memo[used]
        acc = None
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            a = entry(row, col)
            if a is not None:
                term = a * rec(row + 1, used | (1 << col))
                if sign < 0:
                    term = -term
                acc = term if acc is None else acc + term
            sign = -sign
        memo[used] = one * 0 if acc is None else acc
        return memo[used]

    return rec(0, 0)


def jacobi_trudi(parts, seq, one=ONE):
    """``det(seq[parts_i - i + j])`` with ``seq[0] = 1`` and negatives 0."""
    n = len(parts)

    def entry(i, j):
        k = parts[i] - i + j
        if k < 0:
            return None
        if k == 0:
            return one
        return seq[k]

    return _determinant(entry, n, one)


def schur_from_power_sums(lam, p, one=ONE, h=None, e=None):
    """``s_lambda`` in the power sums ``p`` via Jacobi-Trudi.

    Uses ``det(h_{lambda_i - i + j})`` or its dual ``det(e_{lambda'_i - i + j})``,
    whichever matrix is smaller.  Precomputed ``h``/``e`` lists may be passed.
    """
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    if lam.size == 0:
        return one
    conj = lam.conjugate()
    if conj.rows < lam.rows:
        if e is None:
            e = elementary_all(p, lam.size, one)
        return jacobi_trudi(conj.parts, e, one)
    if h is None:
        h = complete_homogeneous_all(p, lam.size, one)
    return jacobi_trudi(lam.parts, h, one)


@lru_cache(maxsize=None)
def _numeric_power_sums(values, K):
    return {q: sum((v ** q for v in values), ZERO) for q in range(1, K + 1)}


def power_sums_of(values, K):
    """Exact power sums ``sum_i v_i**q`` for ``q = 1..K``."""
    vals = tuple(Rational(v) for v in values)
    return dict(_numeric_power_sums(vals, K))

