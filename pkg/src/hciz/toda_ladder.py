"""Finite-N moment matrix, biorthogonal factorization, Lax matrices and the
Toda / KP / Lax / string identities as exact truncated-series checks.

Everything is square-root free.  The moment matrix factors as
``M = L G R`` (L unit lower, G = diag(h_n^2), R unit upper), and all Lax
matrices are stored in the frame ``X' = H^-1 X H`` with ``H = diag(h_n)``:

    U' = R Z R^-1,            Z = ones on the subdiagonal,
    V' = G^-1 L^-1 Z^T L G,   (the transposed second Lax matrix),

so every entry is a series with rational coefficients.  Similarity by a
diagonal matrix preserves commutators and the half-diagonal projections;
the time dependence of ``H`` enters as ``Lambda = H^-1 dH = diag(dG / 2G)``.

Variables are ``t{q}`` and ``tt{q}`` (unscaled flow times), weight q.
"""

from dataclasses import dataclass, field

from .algebra.multiseries import Ring
from .algebra.rational import ONE, Rational, factorial
from .symfun import (
    complete_homogeneous_all,
    content_product_at,
    elementary_all,
    enumerate_partitions,
    schur_from_power_sums,
)


# --- rings and the moment matrix -------------------------------------------

def ladder_ring(t_support, tt_support):
    """Ring of flow times ``t_q`` (q in t_support) and ``tt_q`` (q in tt_support)."""
    t_support = sorted(set(int(q) for q in t_support))
    tt_support = sorted(set(int(q) for q in tt_support))
    names = [f"t{q}" for q in t_support] + [f"tt{q}" for q in tt_support]
    return Ring(names, t_support + tt_support)


def _support(ring, prefix):
    out = []
    for name, w in zip(ring.names, ring.weights):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            out.append(int(name[len(prefix):]))
    return out


def flow_generator_coefficients(ring, prefix, W, M):
    """``[s_0..s_M]`` with ``exp(sum_q t_q v^q) = sum_m s_m v^m``.

    Recurrence ``m s_m = sum_q q t_q s_(m-q)``.
    """
    support = _support(ring, prefix)
    s = [ring.one(W)]
    for m in range(1, M + 1):
        acc = ring.zero(W)
        for q in support:
            if q <= m:
                acc = acc + ring.gen(f"{prefix}{q}", W) * s[m - q] * q
        s.append(acc / m)
    return s


@dataclass
class MomentData:
    """Generator coefficients shared by all moment entries at cutoff ``W``."""

    ring: Ring
    W: int
    s: list = field(default_factory=list)
    st: list = field(default_factory=list)

    def ensure(self, M):
        if len(self.s) <= M:
            self.s = flow_generator_coefficients(self.ring, "t", self.W, M)
            self.st = flow_generator_coefficients(self.ring, "tt", self.W, M)


def moment_entry(i, j, W, ring=None, data=None):
    """``m_ij = sum_(k >= max(i, j, 0)) s_(k-j)(t) s~_(k-i)(t~) / k!``.

    Indices may be -1 (used by the string equation).  Only ``k <= max(i,j) + W``
    can contribute at weight ``<= W``.
    """
    if data is None:
        if ring is None:
            ring = ladder_ring(range(1, W + 1), range(1, W + 1))
        data = MomentData(ring, W)
    ring, W = data.ring, data.W
    lo = max(i, j, 0)
    hi = max(i, j) + W
    data.ensure(hi + 2)
    acc = ring.zero(W)
    for k in range(lo, hi + 1):
        a, b = k - j, k - i
        if a + b > W:
            # s_m has weight >= m
            continue
        acc = acc + data.s[a] * data.st[b] * Rational(1, factorial(k))
    return acc


def moment_matrix(n, W, ring=None, offset=0, data=None):
    """``[m_(i+offset, j+offset)]`` for ``0 <= i, j < n``."""
    if data is None:
        if ring is None:
            ring = ladder_ring(range(1, W + 1), range(1, W + 1))
        data = MomentData(ring, W)
    return [[moment_entry(i + offset, j + offset, W, data=data) for j in range(n)] for i in range(n)]


# --- small dense matrix helpers (None is a structural zero) ----------------

def _mm(A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = [[None] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for k in range(m):
            a = Ai[k]
            if a is None or not a:
                continue
            Bk = B[k]
            for j in range(p):
                b = Bk[j]
                if b is None or not b:
                    continue
                t = a * b
                out[i][j] = t if out[i][j] is None else out[i][j] + t
    return out


def _madd(A, B, sb=1):
    out = []
    for ra, rb in zip(A, B):
        row = []
        for a, b in zip(ra, rb):
            if b is not None and sb != 1:
                b = b * sb
            if a is None:
                row.append(b)
            elif b is None:
                row.append(a)
            else:
                row.append(a + b)
        out.append(row)
    return out


def _mmap(A, f):
    return [[None if a is None else f(a) for a in row] for row in A]


def _comm(A, B):
    return _madd(_mm(A, B), _mm(B, A), -1)


def _identity(ring, n, W):
    return [[ring.one(W) if i == j else None for j in range(n)] for i in range(n)]


def _diag(entries):
    n = len(entries)
    return [[entries[i] if i == j else None for j in range(n)] for i in range(n)]


def _unit_lower_inverse(L):
    n = len(L)
    X = [[None] * n for _ in range(n)]
    for j in range(n):
        X[j][j] = L[j][j]  # the unit
        for i in range(j + 1, n):
            acc = None
            for k in range(j, i):
                a, b = L[i][k], X[k][j]
                if a is None or b is None:
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            X[i][j] = None if acc is None else -acc
    return X


def _transpose(A):
    return [list(r) for r in zip(*A)]


def _unit_upper_inverse(R):
    return _transpose(_unit_lower_inverse(_transpose(R)))


def _power(A, q, ring, W):
    out = _identity(ring, len(A), W)
    for _ in range(q):
        out = _mm(out, A)
    return out


# --- factorization -----------------------------------------------------------

class StructuralError(ArithmeticError):
    """A pivot without invertible constant term."""


@dataclass
class Ladder:
    """``M = L G R`` on an ``n x n`` window, plus derived Lax matrices."""

    ring: Ring
    W: int
    M: list
    L: list
    G: list
    R: list

    @property
    def n(self):
        return len(self.G)

    @property
    def h2(self):
        """Squared normalizations ``h_n^2``."""
        return list(self.G)

    def r2(self):
        """``r_n^2 = h_n^2 / h_(n-1)^2`` for ``n >= 1``."""
        return [self.G[k] * self.G[k - 1].inverse() for k in range(1, self.n)]

    def tau(self, k=None):
        """``tau_k = prod_(i<k) h_i^2`` (default ``k = n``)."""
        k = self.n if k is None else k
        out = self.ring.one(self.W)
        for i in range(k):
            out = out * self.G[i]
        return out

    def Rinv(self):
        return _unit_upper_inverse(self.R)

    def Linv(self):
        return _unit_lower_inverse(self.L)

    def p_hat(self):
        """Rescaled coefficients ``p_kn h_n``: column n holds ``h_n p_n(u)``."""
        return self.Rinv()

    def q_hat(self):
        """Rescaled coefficients ``q_kn h_n`` (``Q^T = H^-1 L^-1``)."""
        return _transpose(self.Linv())

    def lax_u(self):
        """``U' = R Z R^-1`` (one on the subdiagonal, upper bands)."""
        n = self.n
        RZ = [[self.R[i][j + 1] if j + 1 < n else None for j in range(n)] for i in range(n)]
        return _mm(RZ, self.Rinv())

    def lax_v(self):
        """``V' = G^-1 (L^-1 Z^T L) G`` (superdiagonal plus lower bands)."""
        n = self.n
        ZtL = [[self.L[i + 1][j] if i + 1 < n else None for j in range(n)] for i in range(n)]
        X = _mm(self.Linv(), ZtL)
        Ginv = [g.inverse() for g in self.G]
        return [
            [None if X[i][j] is None else Ginv[i] * X[i][j] * self.G[j] for j in range(n)]
            for i in range(n)
        ]

    def derivative_op(self):
        """``D' = R Z_D R^-1`` with ``(Z_D)_(j-1, j) = j`` (d/du on monomials)."""
        n = self.n
        RZ = [
            [self.R[i][j - 1] * j if j >= 1 and self.R[i][j - 1] is not None else None for j in range(n)]
            for i in range(n)
        ]
        return _mm(RZ, self.Rinv())


def biorthogonalize(M, ring=None, W=None):
    """Doolittle ``L G R`` factorization over the series ring."""
    n = len(M)
    ring = ring or M[0][0].ring
    W = M[0][0].W if W is None else W
    L = [[None] * n for _ in range(n)]
    R = [[None] * n for _ in range(n)]
    G = []
    for k in range(n):
        L[k][k] = ring.one(W)
        R[k][k] = ring.one(W)

    def reduced(i, j, k):
        acc = M[i][j]
        for m in range(k):
            a, b = L[i][m], R[m][j]
            if a is None or b is None:
                continue
            acc = acc - a * G[m] * b
        return acc

    for k in range(n):
        g = reduced(k, k, k)
        if not g.constant_term():
            raise StructuralError(f"pivot {k} has zero constant term")
        G.append(g)
        gi = g.inverse()
        for j in range(k + 1, n):
            R[k][j] = reduced(k, j, k) * gi
        for i in range(k + 1, n):
            L[i][k] = reduced(i, k, k) * gi
    return Ladder(ring, W, M, L, G, R)


def build_ladder(n, W, t_support=None, tt_support=None):
    t_support = range(1, W + 1) if t_support is None else t_support
    tt_support = range(1, W + 1) if tt_support is None else tt_support
    ring = ladder_ring(t_support, tt_support)
    return biorthogonalize(moment_matrix(n, W, ring), ring, W)


def build_lax(ladder):
    """The pair ``(U', V')`` in the rational frame."""
    return ladder.lax_u(), ladder.lax_v()


def tau_determinant(N, W, ring):
    """``det M_N`` by cofactor-free elimination (same as the product of pivots)."""
    if N == 0:
        return ring.one(W)
    return biorthogonalize(moment_matrix(N, W, ring), ring, W).tau()


def tau_schur_sum(N, W, ring=None):
    """``tau_N`` as ``prod_(j<N) 1/j! * sum s_lam(q t_q) s_lam(q t~_q) / prod(N + c)``.

    Sum over partitions with at most N rows and ``2|lam| <= W``.
    """
    if ring is None:
        ring = ladder_ring(range(1, W + 1), range(1, W + 1))
    one = ring.one(W)
    K = W // 2
    ts, tts = _support(ring, "t"), _support(ring, "tt")
    p = {q: ring.gen(f"t{q}", W) * q for q in ts if q <= K}
    pt = {q: ring.gen(f"tt{q}", W) * q for q in tts if q <= K}
    h, e = complete_homogeneous_all(p, K, one), elementary_all(p, K, one)
    ht, et = complete_homogeneous_all(pt, K, one), elementary_all(pt, K, one)
    total = ring.zero(W)
    for n in range(K + 1):
        for lam in enumerate_partitions(n, max_rows=N):
            sa = schur_from_power_sums(lam, p, one, h=h, e=e)
            if not sa:
                continue
            sb = schur_from_power_sums(lam, pt, one, h=ht, e=et)
            total = total + sa * sb / content_product_at(lam, N)
    norm = ONE
    for j in range(N):
        norm /= factorial(j)
    return total * norm


# --- residual checks ------------------------------------------------------

@dataclass
class WindowResidual:
    """Entrywise residual series on an interior window."""

    entries: dict
    W: int
    margin: int = 0

    @property
    def is_zero(self):
        return all(not v for v in self.entries.values())

    def nonzero(self):
        return {k: v for k, v in self.entries.items() if v}

    def worst(self):
        """``(entry, monomial, coefficient)`` with the largest |coefficient|, or None."""
        best = None
        for k, v in self.entries.items():
            for e, c in v.terms():
                if best is None or abs(c) > abs(best[2]):
                    best = (k, v.ring.render_monomial(e), c)
        return best


def verify_toda(n, W, t_support=None, tt_support=None):
    """``tau_(n+1) tau_(n-1) - tau_n^2 d_t1 d_tt1 log(tau_n / tau_n(0))``, through weight W."""
    if n < 1:
        raise ValueError("n must be >= 1")
    Wc = W + 2
    t_support = range(1, Wc + 1) if t_support is None else t_support
    tt_support = range(1, Wc + 1) if tt_support is None else tt_support
    ring = ladder_ring(set(t_support) | {1}, set(tt_support) | {1})
    lad = biorthogonalize(moment_matrix(n + 1, Wc, ring), ring, Wc)
    taus = [lad.tau(k) for k in range(n + 2)]
    tn = taus[n]
    logt = (tn / tn.constant_term()).log()
    lhs = (taus[n + 1] * taus[n - 1]).truncate(W)
    rhs = (tn * tn).truncate(W) * logt.derivative("t1").derivative("tt1")
    return (lhs - rhs).truncate(W)


def verify_kp(N, W, tt_support=(1, 2)):
    """KP residual for ``chi = 2 d_t1^2 log tau_N``.

    ``3 d_t2^2 chi + d_t1(-4 d_t3 chi + 6 chi d_t1 chi + d_t1^3 chi)``.

    Monomials of ``tau_N`` have equal t- and t~-weight, and every residual
    monomial has t~-weight six more than its t-weight, so ``W`` bounds the
    t-weight: inputs are computed through total weight ``2(W + 6)`` and the
    residual is exact through total weight ``2W + 6``.
    """
    Wc = 2 * (W + 6)
    ring = ladder_ring((1, 2, 3), tt_support)
    tau = tau_determinant(N, Wc, ring)
    logt = (tau / tau.constant_term()).log()
    chi = logt.derivative("t1", 2) * 2
    d = lambda s, v, k=1: s.derivative(v, k)
    inner = d(chi, "t3") * -4 + chi * d(chi, "t1") * 6 + d(chi, "t1", 3)
    res = d(chi, "t2", 2) * 3 + d(inner, "t1")
    return res.truncate(2 * W + 6)


def _plus(X, n, half):
    """Strictly lower part plus half the diagonal."""
    return [
        [
            (X[i][j] if i > j else (X[i][j] * half if i == j and X[i][j] is not None else None))
            for j in range(n)
        ]
        for i in range(n)
    ]


def _minus(X, n, half):
    """Strictly upper part plus half the diagonal."""
    return [
        [
            (X[i][j] if i < j else (X[i][j] * half if i == j and X[i][j] is not None else None))
            for j in range(n)
        ]
        for i in range(n)
    ]


def _window(X, K, W):
    return {
        (i, j): (X[i][j].truncate(W) if X[i][j] is not None else None)
        for i in range(K)
        for j in range(K)
    }


def _clean(entries, ring, W):
    return {k: (ring.zero(W) if v is None else v) for k, v in entries.items()}


def verify_lax_evolution(q, which, K, W, margin=None, t_support=None, tt_support=None):
    """Lax flows on the interior ``K x K`` window, exact through weight ``W``.

    ``which="t"``:  ``dU'/dt_q + [Lambda, U'] + [(U'^q)_+, U'] = 0`` and the same for V';
    ``which="tt"``: ``dU'/dt~_q + [Lambda~, U'] - [(V'^q)_-, U'] = 0`` and likewise.
    ``Lambda = diag(d h_n / h_n)``.  Returns residuals for both matrices.
    """
    if which not in ("t", "tt"):
        raise ValueError("which must be 't' or 'tt'")
    margin = 2 * q + 2 if margin is None else margin
    n = K + margin
    Wc = W + q
    t_support = range(1, Wc + 1) if t_support is None else t_support
    tt_support = range(1, Wc + 1) if tt_support is None else tt_support
    ts, tts = set(t_support), set(tt_support)
    (ts if which == "t" else tts).add(q)
    ring = ladder_ring(ts, tts)
    lad = biorthogonalize(moment_matrix(n, Wc, ring), ring, Wc)
    U, V = lad.lax_u(), lad.lax_v()
    var = f"{which}{q}"
    half = Rational(1, 2)
    lam = _diag([g.derivative(var) * g.truncate(W).inverse() * half for g in lad.G])
    if which == "t":
        B = _plus(_power(U, q, ring, Wc), n, half)
        sign = 1
    else:
        B = _minus(_power(V, q, ring, Wc), n, half)
        sign = -1
    out = {}
    for label, X in (("U", U), ("V", V)):
        dX = _mmap(X, lambda s: s.derivative(var))
        res = _madd(_madd(dX, _comm(lam, X)), _comm(B, X), sign)
        out[label] = WindowResidual(_clean(_window(res, K, W), ring, W), W, margin)
    return out


def verify_string(K, W, margin=None, t_support=None, tt_support=None):
    """``U' D' + sum_q q t_q U'^q - K'`` on the interior ``K x K`` window.

    ``K' = G^-1 L^-1 M_s R^-1`` with ``(M_s)_(ab) = m_(a-1, b-1)`` is the
    product of the two one-sided inverses, built from moment entries with
    index -1.
    """
    margin = max(W + 2, 4) if margin is None else margin
    n = K + margin
    t_support = range(1, W + 1) if t_support is None else t_support
    tt_support = range(1, W + 1) if tt_support is None else tt_support
    ring = ladder_ring(t_support, tt_support)
    data = MomentData(ring, W)
    lad = biorthogonalize(moment_matrix(n, W, ring, data=data), ring, W)
    U, D = lad.lax_u(), lad.derivative_op()
    res = _mm(U, D)
    powers = {}
    P = _identity(ring, n, W)
    for k in range(1, max(_support(ring, "t") or [0]) + 1):
        P = _mm(P, U)
        powers[k] = P
    for q in _support(ring, "t"):
        coef = ring.gen(f"t{q}", W) * q
        res = _madd(res, _mmap(powers[q], lambda s: coef * s))
    Ms = moment_matrix(n, W, ring, offset=-1, data=data)
    Kp = _mm(_mm(lad.Linv(), Ms), lad.Rinv())
    Ginv = [g.inverse() for g in lad.G]
    Kp = [[None if Kp[i][j] is None else Ginv[i] * Kp[i][j] for j in range(n)] for i in range(n)]
    res = _madd(res, Kp, -1)
    return WindowResidual(_clean(_window(res, K, W), ring, W), W, margin)
