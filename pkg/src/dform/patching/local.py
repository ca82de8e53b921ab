"""Local rings used by the patching engine.

``Series`` is Z_p[[x]] modulo the ideal (x, p)^N: the coefficient of x^b is
kept modulo p^(N-b). ``QRat`` is a rational function over Q kept as an
unreduced numerator/denominator pair, with the Gauss valuation read off the
coefficients.
"""

from fractions import Fraction

from .. import polys
from ..errors import NonUnit, PrecisionExhausted
from ..fields import INF, vp


def _p_integral(c, p, m):
    """The p-integral rational c as an integer modulo p^m."""
    c = Fraction(c)
    if c.denominator % p == 0:
        raise NonUnit(f"{c} is not {p}-integral")
    pm = p ** m
    return c.numerator * pow(c.denominator, -1, pm) % pm


class Series:
    __slots__ = ("p", "N", "c")

    def __init__(self, p, N, coeffs=None):
        self.p = p
        self.N = N
        c = {}
        for b, v in (coeffs or {}).items():
            if 0 <= b < N:
                v = _p_integral(v, p, N - b)
                if v:
                    c[b] = v
        self.c = c

    @classmethod
    def constant(cls, p, N, v):
        return cls(p, N, {0: v})

    def _new(self, coeffs):
        return Series(self.p, self.N, coeffs)

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(self.p, self.N, other)
        out = dict(self.c)
        for b, v in other.c.items():
            out[b] = out.get(b, 0) + v
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({b: -v for b, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(self.p, self.N, other)
        out = {}
        for i, u in self.c.items():
            for j, v in other.c.items():
                if i + j < self.N:
                    out[i + j] = out.get(i + j, 0) + u * v
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = Series.constant(self.p, self.N, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(self.p, self.N, other)
        return (self - other).c == {}

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def shift(self, e=0, f=0):
        """Multiply by x^e p^f (e, f >= 0)."""
        return self._new({b + e: v * self.p ** f for b, v in self.c.items()})

    def order(self):
        """Least a + b with p^a x^b occurring, INF for zero."""
        if not self.c:
            return INF
        return min(b + vp(v, self.p) for b, v in self.c.items())

    def is_unit(self):
        return self.c.get(0, 0) % self.p != 0

    def constant_term(self):
        return self.c.get(0, 0)

    def with_precision(self, N):
        return Series(self.p, N, self.c)

    def inverse(self):
        if not self.is_unit():
            raise NonUnit("series is not a unit")
        y = Series.constant(self.p, self.N, pow(self.c[0], -1, self.p))
        for _ in range(2 * self.N.bit_length() + 4):
            y = y * (2 - self * y)
        if self * y != 1:
            raise PrecisionExhausted("series inverse did not converge")
        return y

    def dth_root(self, d, r0):
        """Newton iteration for Z^d = self starting from the integer r0."""
        z = Series.constant(self.p, self.N, r0)
        for _ in range(2 * self.N.bit_length() + 6):
            err = z ** d - self
            if err == 0:
                return z
            z = z - err * (d * z ** (d - 1)).inverse()
        raise PrecisionExhausted(f"no {d}-th root of the series to precision {self.N}")

    def to_json(self):
        return {str(b): v for b, v in sorted(self.c.items())}

    def __repr__(self):
        terms = [f"{v}*x^{b}" for b, v in sorted(self.c.items())]
        return " + ".join(terms) or "0"


def linear_power(p, N, a0, a1, m):
    """(a0 + a1 x)^m in the truncated ring."""
    return Series(p, N, {0: a0, 1: a1}) ** m


class QRat:
    """num/den with coefficient tuples over Q (low degree first), never reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),)):
        num = polys.trim(Fraction(c) for c in num)
        den = polys.trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    @classmethod
    def const(cls, c):
        return cls((Fraction(c),))

    def __add__(self, other):
        other = _as_qrat(other)
        if self.den == other.den:
            return QRat(polys.add(self.num, other.num), self.den)
        return QRat(polys.add(polys.mul(self.num, other.den), polys.mul(other.num, self.den)),
                    polys.mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return QRat(polys.neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-_as_qrat(other))

    def __mul__(self, other):
        other = _as_qrat(other)
        return QRat(polys.mul(self.num, other.num), polys.mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_qrat(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return QRat(polys.mul(self.num, other.den), polys.mul(self.den, other.num))

    def __pow__(self, k):
        return QRat(polys.power(self.num, k) or (), polys.power(self.den, k))

    def is_zero(self):
        return not self.num

    def gauss_valuation(self, p):
        """min v_p(numerator coefficients) - min v_p(denominator coefficients)."""
        if not self.num:
            return INF
        return _content_val(self.num, p) - _content_val(self.den, p)

    def reduce_mod(self, p, M):
        """Drop numerator terms of Gauss valuation >= M (requires a unit denominator)."""
        if _content_val(self.den, p) != 0:
            raise NonUnit("denominator must have Gauss valuation 0")
        pm = p ** M
        num = []
        for c in self.num:
            if c == 0 or vp(c.numerator, p) - vp(c.denominator, p) >= M:
                num.append(Fraction(0))
            else:
                num.append(Fraction(_p_integral(c, p, M)) if vp(c.denominator, p) == 0 else c)
        return QRat(num, self.den)

    def to_json(self):
        return {"num": [_frac_json(c) for c in self.num], "den": [_frac_json(c) for c in self.den]}

    def __repr__(self):
        return f"({list(map(str, self.num))})/({list(map(str, self.den))})"


def _frac_json(c):
    return c.numerator if c.denominator == 1 else str(c)


def _as_qrat(x):
    return x if isinstance(x, QRat) else QRat.const(x)


def _content_val(a, p):
    return min(vp(c.numerator, p) - vp(c.denominator, p) for c in a if c != 0)


def binomial_coefficient(d, k):
    """binom(1/d, k) as an exact rational."""
    out = Fraction(1)
    a = Fraction(1, d)
    for i in range(k):
        out = out * (a - i) / (i + 1)
    return out
