"""Univariate truncated power series and Laurent series.

Coefficients are generic ring elements (Rational by default, or MultiSeries
when a family of series is carried symbolically).  ``T`` is inclusive: the
coefficients of ``x**0 .. x**T`` are known.
"""

from fractions import Fraction

from .rational import ONE, ZERO, Rational


def _coerce(a):
    if isinstance(a, (int, Fraction)):
        return Rational(a)
    return a


def _is_zero(c):
    return not c


def _inv(c):
    if hasattr(c, "inverse"):
        return c.inverse()
    return ONE / c


class UniSeries:
    __slots__ = ("var", "T", "c")

    def __init__(self, coeffs, T=None, var="x"):
        coeffs = [_coerce(a) for a in coeffs]
        if T is None:
            T = len(coeffs) - 1
        T = int(T)
        if T < 0:
            raise ValueError("truncation order must be >= 0")
        coeffs = coeffs[: T + 1]
        coeffs += [ZERO] * (T + 1 - len(coeffs))
        self.var = var
        self.T = T
        self.c = coeffs

    @classmethod
    def variable(cls, T, var="x"):
        return cls([ZERO, ONE], T, var)

    @classmethod
    def constant(cls, a, T, var="x"):
        return cls([a], T, var)

    @property
    def W(self):
        return self.T

    def __repr__(self):
        return f"UniSeries({self.c!r}, T={self.T}, var={self.var!r})"

    def __getitem__(self, k):
        return self.c[k] if 0 <= k <= self.T else ZERO

    def __len__(self):
        return self.T + 1

    def __bool__(self):
        return any(bool(a) for a in self.c)

    def coefficients(self):
        return list(self.c)

    def constant_term(self):
        return self.c[0]

    def truncate(self, T):
        T = min(int(T), self.T)
        return UniSeries(self.c[: T + 1], T, self.var)

    def extend(self, T):
        """Same known coefficients, higher nominal order (unknowns read as 0)."""
        return UniSeries(self.c, max(T, self.T), self.var)

    def valuation(self):
        for k, a in enumerate(self.c):
            if not _is_zero(a):
                return k
        return None

    def __eq__(self, other):
        if isinstance(other, UniSeries):
            T = min(self.T, other.T)
            return all(
                _is_zero(self.c[k] - other.c[k]) for k in range(T + 1)
            )
        return self == UniSeries.constant(other, self.T, self.var)

    __hash__ = None

    def __neg__(self):
        return UniSeries([-a for a in self.c], self.T, self.var)

    def __add__(self, other):
        if not isinstance(other, UniSeries):
            c = list(self.c)
            c[0] = c[0] + other
            return UniSeries(c, self.T, self.var)
        T = min(self.T, other.T)
        return UniSeries([self.c[k] + other.c[k] for k in range(T + 1)], T, self.var)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        return UniSeries([a * s for a in self.c], self.T, self.var)

    def __mul__(self, other):
        if not isinstance(other, UniSeries):
            return self.scale(other)
        T = min(self.T, other.T)
        a, b = self.c, other.c
        out = []
        for n in range(T + 1):
            acc = ZERO
            for k in range(n + 1):
                x, y = a[k], b[n - k]
                if _is_zero(x) or _is_zero(y):
                    continue
                acc = acc + x * y
            out.append(acc)
        return UniSeries(out, T, self.var)

    def __rmul__(self, other):
        return UniSeries([other * a for a in self.c], self.T, self.var)

    def __truediv__(self, other):
        if isinstance(other, UniSeries):
            return self * other.inverse()
        return UniSeries([a / other for a in self.c], self.T, self.var)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = UniSeries.constant(ONE, self.T, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        c0 = self.c[0]
        if _is_zero(c0):
            raise ZeroDivisionError("constant term is zero")
        ic = _inv(c0)
        h = [ic]
        for n in range(1, self.T + 1):
            acc = ZERO
            for k in range(1, n + 1):
                if not _is_zero(self.c[k]):
                    acc = acc + self.c[k] * h[n - k]
            h.append(-(acc * ic))
        return UniSeries(h, self.T, self.var)

    def derivative(self):
        if self.T == 0:
            return UniSeries([ZERO], 0, self.var)
        return UniSeries([self.c[k] * k for k in range(1, self.T + 1)], self.T - 1, self.var)

    def integral(self, constant=ZERO):
        return UniSeries(
            [constant] + [self.c[k] / (k + 1) for k in range(self.T + 1)],
            self.T + 1,
            self.var,
        )

    def shift(self, k):
        """Multiply by ``var**k`` (k >= 0)."""
        return UniSeries([ZERO] * k + self.c, self.T + k, self.var)

    def log(self):
        if self.c[0] != 1:
            raise ValueError("series_log needs constant term 1")
        d = self.derivative() * self.truncate(self.T - 1).inverse() if self.T else None
        if d is None:
            return UniSeries([ZERO], 0, self.var)
        return d.integral()

    def exp(self):
        if not _is_zero(self.c[0]):
            raise ValueError("series_exp needs constant term 0")
        # n f_n = sum_k k g_k f_{n-k}
        f = [ONE]
        for n in range(1, self.T + 1):
            acc = ZERO
            for k in range(1, n + 1):
                if not _is_zero(self.c[k]):
                    acc = acc + self.c[k] * f[n - k] * k
            f.append(acc / n)
        return UniSeries(f, self.T, self.var)

    def compose(self, g):
        """``self(g(x))`` for ``g`` with zero constant term (Horner)."""
        if not _is_zero(g.c[0]):
            raise ValueError("inner series must have zero constant term")
        T = min(self.T, g.T)
        g = g.truncate(T)
        result = UniSeries.constant(self.c[T], T, g.var)
        for k in range(T - 1, -1, -1):
            result = result * g + self.c[k]
        return result

    def revert(self):
        """Compositional inverse by Lagrange inversion.

        ``[y^n] g = (1/n) [z^{n-1}] (z / s(z))^n``.
        """
        if not _is_zero(self.c[0]):
            raise ValueError("series_revert needs zero constant term")
        if self.T < 1 or _is_zero(self.c[1]):
            raise ValueError("series_revert needs an invertible linear term")
        T = self.T
        phi = UniSeries(self.c[1:], T - 1, self.var).inverse()  # z / s(z)
        out = [ZERO]
        power = UniSeries.constant(ONE, T - 1, self.var)
        for n in range(1, T + 1):
            power = power * phi
            out.append(power[n - 1] / n)
        return UniSeries(out, T, self.var)

    def evaluate_polynomial(self, x):
        """Sum the known coefficients at a value (treats the series as a polynomial)."""
        acc = ZERO
        for a in reversed(self.c):
            acc = acc * x + a
        return acc


class LaurentSeries:
    """``x**val * body`` with ``body`` a UniSeries; known through ``x**(val + body.T)``."""

    __slots__ = ("val", "body")

    def __init__(self, val, body):
        self.val = int(val)
        self.body = body

    @classmethod
    def from_coefficients(cls, val, coeffs, T=None, var="x"):
        return cls(val, UniSeries(coeffs, T, var))

    @property
    def var(self):
        return self.body.var

    @property
    def order(self):
        """Highest exponent whose coefficient is known."""
        return self.val + self.body.T

    def __repr__(self):
        return f"LaurentSeries(val={self.val}, {self.body.c!r})"

    def __getitem__(self, k):
        return self.body[k - self.val]

    def normalized(self):
        """Strip leading zeros so the leading coefficient is nonzero."""
        v = self.body.valuation()
        if v is None or v == 0:
            return self
        return LaurentSeries(self.val + v, UniSeries(self.body.c[v:], self.body.T - v, self.var))

    def leading_coefficient(self):
        s = self.normalized()
        return s.body.c[0]

    def _aligned(self, other):
        val = min(self.val, other.val)
        order = min(self.order, other.order)
        a = [self[k] for k in range(val, order + 1)]
        b = [other[k] for k in range(val, order + 1)]
        return val, order, a, b

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries(0, UniSeries.constant(other, max(self.order, 0), self.var))
        val, order, a, b = self._aligned(other)
        return LaurentSeries(val, UniSeries([x + y for x, y in zip(a, b)], order - val, self.var))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.val, -self.body)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            a, b = self.normalized(), other.normalized()
            # absolute precision: val_a + val_b + min(T_a, T_b)
            return LaurentSeries(a.val + b.val, a.body * b.body)
        return LaurentSeries(self.val, self.body.scale(other))

    def inverse(self):
        s = self.normalized()
        return LaurentSeries(-s.val, s.body.inverse())

    def derivative(self):
        T = self.body.T
        coeffs = [self.body.c[i] * (self.val + i) for i in range(T + 1)]
        return LaurentSeries(self.val - 1, UniSeries(coeffs, T, self.var))

    def nonnegative_part(self):
        """Coefficients of ``x**0 .. x**order`` as a UniSeries."""
        if self.order < 0:
            raise ValueError("no nonnegative coefficients known")
        return UniSeries([self[k] for k in range(0, self.order + 1)], self.order, self.var)
