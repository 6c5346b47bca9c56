"""Truncated multivariate power series graded by weight.

Every variable of a :class:`Ring` carries a nonnegative integer weight; a
:class:`MultiSeries` keeps exactly the monomials of total weight ``<= W``.
Variables of weight 0 are allowed only together with a degree cap (the
truncation is then ``weight <= W`` *and* ``deg_x <= cap_x``), which is still
an ideal, so ring operations remain exact modulo it.

Exponent vectors are packed into Python ints with 16-bit fields, so the key of
a product monomial is the sum of the keys.
"""

import re

from .kernel import axpy_block, mul_block, mul_blocks
from .rational import ONE, ZERO, Rational, as_rational, rational_str

BITS = 16
FIELD = (1 << BITS) - 1

_NAME_RE = re.compile(r"^([A-Za-z_]+?)(\d+)$")


class Ring:
    """Variable names, weights and optional degree caps."""

    __slots__ = ("names", "weights", "caps", "_index", "_cap_checks", "_hash")

    def __init__(self, names, weights=None, caps=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        n = len(names)
        weights = tuple(int(w) for w in (weights if weights is not None else (1,) * n))
        caps = tuple(caps) if caps is not None else (None,) * n
        if len(weights) != n or len(caps) != n:
            raise ValueError("names, weights and caps must have equal length")
        for w, c in zip(weights, caps):
            if w < 0:
                raise ValueError("negative weight")
            if w == 0 and c is None:
                raise ValueError("weight-0 variables need a degree cap")
            if c is not None and not 0 <= c < FIELD // 2:
                raise ValueError("cap out of range")
        self.names = names
        self.weights = weights
        self.caps = caps
        self._index = {s: i for i, s in enumerate(names)}
        self._cap_checks = tuple(
            (BITS * i, FIELD, c) for i, c in enumerate(caps) if c is not None
        )
        self._hash = hash((names, weights, caps))

    def __eq__(self, other):
        return isinstance(other, Ring) and (
            self.names == other.names
            and self.weights == other.weights
            and self.caps == other.caps
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Ring({list(self.names)!r})"

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def key(self, exps):
        k = 0
        for i, e in enumerate(exps):
            if e:
                if not 0 < e < FIELD // 2:
                    raise ValueError("exponent out of range")
                k |= e << (BITS * i)
        return k

    def unpack(self, key):
        return tuple((key >> (BITS * i)) & FIELD for i in range(len(self.names)))

    def weight_of(self, exps):
        return sum(e * w for e, w in zip(exps, self.weights))

    def exps_from(self, mono):
        """Accept an exponent tuple or a ``{name: exponent}`` mapping."""
        if isinstance(mono, dict):
            exps = [0] * len(self.names)
            for name, e in mono.items():
                exps[self.index(name)] += e
            return tuple(exps)
        exps = tuple(mono)
        if len(exps) != len(self.names):
            raise ValueError("exponent vector has wrong length")
        return exps

    def within_caps(self, exps):
        return all(c is None or e <= c for e, c in zip(exps, self.caps))

    # constructors
    def zero(self, W):
        return MultiSeries(self, W)

    def const(self, c, W):
        c = _coerce_coef(c)
        return MultiSeries(self, W, {0: {0: c}} if c else {})

    def one(self, W):
        return self.const(ONE, W)

    def gen(self, name, W):
        i = self.index(name)
        w = self.weights[i]
        if w > W:
            return MultiSeries(self, W)
        return MultiSeries(self, W, {w: {1 << (BITS * i): ONE}})

    def from_terms(self, terms, W):
        """Build from ``{exponents-or-mapping: coefficient}``; drops weight > W."""
        blocks = {}
        for mono, c in terms.items():
            c = _coerce_coef(c)
            if not c:
                continue
            exps = self.exps_from(mono)
            w = self.weight_of(exps)
            if w > W or not self.within_caps(exps):
                continue
            blk = blocks.setdefault(w, {})
            k = self.key(exps)
            v = blk.get(k, 0) + c
            if v:
                blk[k] = v
            else:
                blk.pop(k, None)
        return MultiSeries(self, W, {w: b for w, b in blocks.items() if b})

    def render_monomial(self, exps):
        parts = []
        for name, e in zip(self.names, exps):
            if e:
                m = _NAME_RE.match(name)
                base = f"{m.group(1)}:{m.group(2)}" if m else name
                parts.append(f"{base}^{e}")
        return "*".join(parts) if parts else "1"


def _coerce_coef(c):
    if isinstance(c, (int, type(ONE))) or type(c).__name__ == "Fraction":
        return as_rational(c)
    return c


def _inv_coef(c):
    if isinstance(c, type(ONE)):
        return ONE / c
    return 1 / c


class MultiSeries:
    """Immutable truncated series; see module docstring."""

    __slots__ = ("ring", "W", "_b")

    def __init__(self, ring, W, blocks=None):
        self.ring = ring
        self.W = int(W)
        self._b = blocks if blocks is not None else {}

    # -- inspection -------------------------------------------------------
    def __repr__(self):
        n = sum(len(b) for b in self._b.values())
        return f"<MultiSeries {n} terms, W={self.W}, {self.ring!r}>"

    def __bool__(self):
        return any(self._b.values())

    def is_zero(self):
        return not self

    def nterms(self):
        return sum(len(b) for b in self._b.values())

    def blocks(self):
        return {w: dict(b) for w, b in self._b.items()}

    def weights_present(self):
        return sorted(w for w, b in self._b.items() if b)

    def terms(self):
        """``(exponents, coefficient)`` pairs in canonical order."""
        out = []
        unpack = self.ring.unpack
        for w, blk in self._b.items():
            for k, c in blk.items():
                e = unpack(k)
                out.append(((w, tuple(-x for x in e)), e, c))
        out.sort(key=lambda t: t[0])
        return [(e, c) for _, e, c in out]

    def as_dict(self):
        return {e: c for e, c in self.terms()}

    def coefficient(self, mono):
        exps = self.ring.exps_from(mono)
        w = self.ring.weight_of(exps)
        if w > self.W:
            raise ValueError(f"weight {w} exceeds truncation order {self.W}")
        return self._b.get(w, {}).get(self.ring.key(exps), ZERO)

    def constant_term(self):
        return self._b.get(0, {}).get(0, ZERO)

    def homogeneous(self, w):
        blk = self._b.get(w)
        return MultiSeries(self.ring, self.W, {w: dict(blk)} if blk else {})

    def max_abs_coefficient(self):
        best = ZERO
        for blk in self._b.values():
            for c in blk.values():
                a = abs(c)
                if a > best:
                    best = a
        return best

    def render(self):
        """Canonical text: one ``key<TAB>num/den`` line per monomial."""
        lines = []
        for e, c in self.terms():
            v = rational_str(c) if isinstance(c, (int, type(ONE))) else str(c)
            lines.append(f"{self.ring.render_monomial(e)}\t{v}")
        return "\n".join(lines) + ("\n" if lines else "")

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if other.ring != self.ring:
            raise TypeError("series over different rings")

    def truncate(self, W):
        W = min(int(W), self.W)
        return MultiSeries(
            self.ring, W, {w: b for w, b in self._b.items() if w <= W}
        )

    def with_order(self, W):
        """Same stored terms at order ``W``; raising it reads unknowns as 0."""
        if W <= self.W:
            return self.truncate(W)
        return MultiSeries(self.ring, W, dict(self._b))

    extend = with_order

    def __neg__(self):
        return MultiSeries(
            self.ring, self.W, {w: {k: -c for k, c in b.items()} for w, b in self._b.items()}
        )

    def __add__(self, other):
        if isinstance(other, MultiSeries):
            self._check(other)
            W = min(self.W, other.W)
            out = {w: dict(b) for w, b in self._b.items() if w <= W}
            for w, b in other._b.items():
                if w > W:
                    continue
                acc = out.setdefault(w, {})
                axpy_block(acc, b, ONE)
                if not acc:
                    del out[w]
            return MultiSeries(self.ring, W, out)
        c = _coerce_coef(other)
        if not c:
            return self
        out = {w: dict(b) for w, b in self._b.items()}
        b0 = out.setdefault(0, {})
        v = b0.get(0, 0) + c
        if v:
            b0[0] = v
        else:
            b0.pop(0, None)
            if not b0:
                del out[0]
        return MultiSeries(self.ring, self.W, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        s = _coerce_coef(s)
        if not s:
            return MultiSeries(self.ring, self.W)
        return MultiSeries(
            self.ring,
            self.W,
            {w: {k: c * s for k, c in b.items()} for w, b in self._b.items()},
        )

    def __mul__(self, other):
        if isinstance(other, MultiSeries):
            self._check(other)
            W = min(self.W, other.W)
            return MultiSeries(
                self.ring, W, mul_blocks(self._b, other._b, W, self.ring._cap_checks)
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, MultiSeries):
            return self * other.inverse()
        return MultiSeries(
            self.ring,
            self.W,
            {w: {k: c / other for k, c in b.items()} for w, b in self._b.items()},
        )

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one(self.W)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiSeries):
            if other.ring != self.ring:
                return False
            return not (self - other)
        try:
            return not (self - other)
        except TypeError:
            return NotImplemented

    __hash__ = None

    # -- calculus ---------------------------------------------------------
    def derivative(self, name, times=1):
        i = self.ring.index(name)
        w = self.ring.weights[i]
        shift = BITS * i
        res = self
        for _ in range(times):
            out = {}
            for wt, blk in res._b.items():
                nb = {}
                for k, c in blk.items():
                    e = (k >> shift) & FIELD
                    if e:
                        nb[k - (1 << shift)] = c * e
                if nb:
                    out[wt - w] = nb
            res = MultiSeries(res.ring, res.W - w, out)
        return res

    def euler(self):
        """Apply the weight (Euler) operator: multiply each block by its weight."""
        return MultiSeries(
            self.ring,
            self.W,
            {w: {k: c * w for k, c in b.items()} for w, b in self._b.items() if w},
        )

    def restrict_zero(self, names):
        """Set the named variables to zero (exact)."""
        idx = [self.ring.index(n) for n in names]
        out = {}
        for w, blk in self._b.items():
            nb = {
                k: c
                for k, c in blk.items()
                if all(((k >> (BITS * i)) & FIELD) == 0 for i in idx)
            }
            if nb:
                out[w] = nb
        return MultiSeries(self.ring, self.W, out)

    def subs(self, values, W):
        """Substitute constants for variables; the caller states the valid order ``W``."""
        idx = [(self.ring.index(n), _coerce_coef(v)) for n, v in values.items()]
        out = {}
        for w, blk in self._b.items():
            for k, c in blk.items():
                wt = w
                for i, v in idx:
                    e = (k >> (BITS * i)) & FIELD
                    if e:
                        k -= e << (BITS * i)
                        wt -= e * self.ring.weights[i]
                        c = c * v**e
                if wt > W or not c:
                    continue
                acc = out.setdefault(wt, {})
                nv = acc.get(k, 0) + c
                if nv:
                    acc[k] = nv
                else:
                    acc.pop(k, None)
        return MultiSeries(self.ring, W, {w: b for w, b in out.items() if b})

    def map_coefficients(self, f):
        out = {}
        for w, blk in self._b.items():
            nb = {}
            for k, c in blk.items():
                v = f(c)
                if v:
                    nb[k] = v
            if nb:
                out[w] = nb
        return MultiSeries(self.ring, self.W, out)

    def embed(self, ring, W=None):
        """Re-express in a ring containing all our variables (by name)."""
        W = self.W if W is None else W
        pos = [ring.index(n) for n in self.ring.names]
        for i, j in enumerate(pos):
            if ring.weights[j] != self.ring.weights[i]:
                raise ValueError("embedding must preserve weights")
        out = {}
        for w, blk in self._b.items():
            if w > W:
                continue
            nb = {}
            for k, c in blk.items():
                nk = 0
                for i, j in enumerate(pos):
                    e = (k >> (BITS * i)) & FIELD
                    if e:
                        nk |= e << (BITS * j)
                nb[nk] = c
            out[w] = nb
        return MultiSeries(ring, W, out)

    # -- transcendental ops ----------------------------------------------
    def _weight0(self):
        b0 = self._b.get(0, {})
        if any(k != 0 for k in b0):
            raise ValueError("weight-0 part is not a constant")
        return b0.get(0, ZERO)

    def inverse(self):
        c0 = self._weight0()
        if not c0:
            raise ZeroDivisionError("constant term is zero; series not invertible")
        ic = _inv_coef(c0)
        caps = self.ring._cap_checks
        h = {0: {0: ic}}
        for w in range(1, self.W + 1):
            acc = {}
            for j in range(1, w + 1):
                fj = self._b.get(j)
                hw = h.get(w - j)
                if fj and hw:
                    axpy_block(acc, mul_block(fj, hw, caps), ONE)
            if acc:
                h[w] = {k: -c * ic for k, c in acc.items()}
        return MultiSeries(self.ring, self.W, h)

    def log(self):
        """Logarithm of a series with constant term exactly 1."""
        if self._weight0() != 1:
            raise ValueError("series_log needs constant term 1")
        caps = self.ring._cap_checks
        EL = {}
        for w in range(1, self.W + 1):
            acc = {k: c * w for k, c in self._b.get(w, {}).items()}
            for j in range(1, w):
                a = EL.get(j)
                f = self._b.get(w - j)
                if a and f:
                    axpy_block(acc, mul_block(a, f, caps), -ONE)
            if acc:
                EL[w] = acc
        return MultiSeries(
            self.ring, self.W, {w: {k: c / w for k, c in b.items()} for w, b in EL.items()}
        )

    def exp(self):
        """Exponential of a series with zero constant term."""
        b0 = self._b.get(0)
        if b0:
            raise ValueError("series_exp needs constant term 0")
        caps = self.ring._cap_checks
        Eg = {w: {k: c * w for k, c in b.items()} for w, b in self._b.items()}
        f = {0: {0: ONE}}
        for w in range(1, self.W + 1):
            acc = {}
            for j in range(1, w + 1):
                g = Eg.get(j)
                fw = f.get(w - j)
                if g and fw:
                    axpy_block(acc, mul_block(g, fw, caps), ONE)
            if acc:
                f[w] = {k: c / w for k, c in acc.items()}
        return MultiSeries(self.ring, self.W, f)

    def divide_linear(self, xi, xj):
        """Exact quotient by ``(xi - xj)``; raises if not divisible.

        Both variables must share a positive weight ``d``; the quotient is
        known to order ``W - d``.
        """
        i, j = self.ring.index(xi), self.ring.index(xj)
        d = self.ring.weights[i]
        if d != self.ring.weights[j] or d == 0:
            raise ValueError("linear divisor must be homogeneous of positive weight")
        si, sj = BITS * i, BITS * j
        ui, uj = 1 << si, 1 << sj
        out = {}
        for w, blk in self._b.items():
            if w - d > self.W - d or w < d:
                if blk and w < d:
                    raise ValueError("series not divisible by the linear form")
                continue
            # group by exponent of xi: C_k holds keys with the xi field cleared
            by_deg = {}
            for k, c in blk.items():
                e = (k >> si) & FIELD
                by_deg.setdefault(e, {})[k - (e << si)] = c
            n = max(by_deg)
            q = {}
            cur = {}
            for kdeg in range(n, 0, -1):
                # Q_{k-1} = C_k + xj * Q_k
                nxt = dict(by_deg.get(kdeg, {}))
                for k, c in cur.items():
                    kk = k + uj
                    v = nxt.get(kk, 0) + c
                    if v:
                        nxt[kk] = v
                    else:
                        nxt.pop(kk, None)
                cur = nxt
                for k, c in cur.items():
                    q[k + (kdeg - 1) * ui] = c
            rem = dict(by_deg.get(0, {}))
            for k, c in cur.items():
                kk = k + uj
                v = rem.get(kk, 0) + c
                if v:
                    rem[kk] = v
                else:
                    rem.pop(kk, None)
            if rem:
                raise ValueError("series not divisible by the linear form")
            if q:
                out[w - d] = q
        return MultiSeries(self.ring, self.W - d, out)
