"""Ground fields: finite fields F_q, the p-adic field Q_p on exact rationals,
and iterated Laurent series fields K((t)) over any of these.

Every field exposes the same small valued-field vocabulary so that the
Springer recursion can walk down a tower without caring what it is:
``valuation``, ``unit_part``, ``residue``, ``lift``, ``uniformizer``,
``dth_power_class``, ``dth_root``, ``inverse``, ``truncate`` and
``approx_zero``. A finite field answers these as the bottom of a tower
(height 0).

Elements are immutable. F_q elements are ``FqElement``; Q_p elements are
``fractions.Fraction`` (inputs exact, witnesses are integers reduced modulo
p^N); Laurent elements are ``LaurentElement`` holding finitely many terms.
"""

import math
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, integer_nthroot, isprime

from . import polys
from .errors import (
    FieldMismatch,
    FieldTooLarge,
    InputError,
    NonUnit,
    NotADthPower,
    PrecisionExhausted,
    UnsupportedCharacteristic,
    ZeroInput,
)

INF = math.inf
DEFAULT_PREC = 20
MAX_FIELD_ORDER = 1 << 16
# extra working precision for Newton steps in towers; doubled on failure
_GUARD = 4


def _coerce_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational {x!r}") from exc
    raise InputError(f"cannot interpret {x!r} as a rational number")


def check_characteristic(field, d):
    p = field.residue_characteristic
    if p <= d:
        raise UnsupportedCharacteristic(
            f"residue characteristic {p} divides {d}! (need p > d)")


# --------------------------------------------------------------------------
# Finite fields


class FqElement:
    __slots__ = ("field", "n")

    def __init__(self, field, n):
        self.field = field
        self.n = n

    def _other(self, other):
        if isinstance(other, FqElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.n
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other).n
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field._add(self.n, o))

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.field, self.field._neg(self.n))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field._add(self.n, self.field._neg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field._mul(self.n, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field._mul(self.n, self.field._inv(o)))

    def __rtruediv__(self, other):
        return FqElement(self.field, self.field._inv(self.n)) * other

    def __pow__(self, k):
        F = self.field
        if self.n == 0:
            if k < 0:
                raise ZeroDivisionError("0 has no inverse")
            return F.one if k == 0 else F.zero
        return FqElement(F, F._exp[(F._log[self.n] * k) % (F.q - 1)])

    def __eq__(self, other):
        if isinstance(other, FqElement):
            return self.n == other.n and (self.field is other.field or self.field == other.field)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self.n == self.field(other).n
            except NonUnit:
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.n)

    def __bool__(self):
        return self.n != 0

    @property
    def coords(self):
        return self.field._coords(self.n)

    def __int__(self):
        if self.field.e != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.n

    def __repr__(self):
        F = self.field
        if F.e == 1:
            return str(self.n)
        terms = []
        for i, c in reversed(list(enumerate(self.coords))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"


def _pmul_int(a, b, modulus, p):
    """Multiply coordinate tuples modulo the monic ``modulus`` over F_p."""
    e = len(modulus) - 1
    out = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    for k in range(len(out) - 1, e - 1, -1):
        c = out[k] % p
        if c:
            for j in range(e):
                out[k - e + j] -= c * modulus[j]
        out[k] = 0
    return tuple(c % p for c in out[:e])


class FiniteField:
    """F_q with q = p^e, built on log/antilog tables.

    Elements are encoded by the integer sum(c_i p^i) of their coordinates in
    the power basis of the modulus. The canonical modulus is the
    lexicographically least monic irreducible polynomial, and the canonical
    generator is the primitive element of least encoding.
    """

    is_finite = True
    height = 0

    def __init__(self, p, e=1, modulus=None, generator=None):
        if not isprime(p):
            raise InputError(f"{p} is not prime")
        if e < 1:
            raise InputError("extension degree must be >= 1")
        self.p, self.e, self.q = p, e, p ** e
        if self.q > MAX_FIELD_ORDER:
            raise FieldTooLarge(f"q = {self.q} exceeds the table budget {MAX_FIELD_ORDER}")
        self._canonical_modulus = modulus is None
        if e == 1:
            modulus = (0, 1)
        elif modulus is None:
            prime = prime_field(p)
            mod = next(polys.irreducibles(prime, e))
            modulus = tuple(c.n for c in mod)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            prime = prime_field(p)
            if len(modulus) != e + 1 or modulus[-1] != 1 or not polys.is_irreducible(
                    tuple(prime(c) for c in modulus), prime):
                raise InputError(f"modulus {modulus} is not monic irreducible of degree {e}")
        self.modulus = modulus
        self._all_coords = [self._digits(n) for n in range(self.q)] if e > 1 else None
        self.generator_n = self._find_generator(generator)
        self._exp = [0] * (self.q - 1)
        self._log = [None] * self.q
        x = 1
        for k in range(self.q - 1):
            self._exp[k] = x
            self._log[x] = k
            x = self._slow_mul(x, self.generator_n)
        self.zero = FqElement(self, 0)
        self.one = FqElement(self, 1)

    # -- encodings ---------------------------------------------------------

    def _digits(self, n):
        out = []
        for _ in range(self.e):
            n, r = divmod(n, self.p)
            out.append(r)
        return tuple(out)

    def _coords(self, n):
        return (n,) if self.e == 1 else self._all_coords[n]

    def _encode(self, coords):
        n = 0
        for c in reversed(coords):
            n = n * self.p + c % self.p
        return n

    def encode(self, x):
        return self(x).n

    def _slow_mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        return self._encode(_pmul_int(self._coords(a), self._coords(b), self.modulus, self.p))

    def _slow_pow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    def _find_generator(self, generator):
        order = self.q - 1
        primes = list(factorint(order)) if order > 1 else []

        def primitive(n):
            return n != 0 and all(self._slow_pow(n, order // r) != 1 for r in primes)

        if generator is not None:
            n = generator.n if isinstance(generator, FqElement) else int(generator)
            if not primitive(n):
                raise InputError(f"{generator} is not a primitive element")
            return n
        for n in range(1, self.q):
            if primitive(n):
                return n
        raise AssertionError("no primitive element")  # unreachable for a field

    # -- table arithmetic --------------------------------------------------

    def _add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        ca, cb = self._all_coords[a], self._all_coords[b]
        return self._encode(tuple(x + y for x, y in zip(ca, cb)))

    def _neg(self, a):
        if self.e == 1:
            return -a % self.p
        return self._encode(tuple(-x for x in self._all_coords[a]))

    def _mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return self._exp[-self._log[a] % (self.q - 1)]

    # -- construction ------------------------------------------------------

    def __call__(self, x):
        if isinstance(x, FqElement):
            if x.field != self:
                raise FieldMismatch(f"{x.field} element given to {self}")
            return x if x.field is self else FqElement(self, x.n)
        if isinstance(x, bool):
            raise InputError(f"not a field element: {x!r}")
        if isinstance(x, int):
            return FqElement(self, x % self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise NonUnit(f"{x} is not {self.p}-integral")
            return FqElement(self, x.numerator * pow(x.denominator, -1, self.p) % self.p)
        if isinstance(x, (list, tuple)):
            if len(x) != self.e:
                raise InputError(f"expected {self.e} coordinates, got {len(x)}")
            return FqElement(self, self._encode(tuple(int(c) for c in x)))
        if isinstance(x, str):
            return self(_coerce_fraction(x))
        raise InputError(f"cannot interpret {x!r} in {self}")

    def elements(self):
        return (FqElement(self, n) for n in range(self.q))

    def units(self):
        return (FqElement(self, n) for n in range(1, self.q))

    @property
    def generator(self):
        return FqElement(self, self.generator_n)

    @property
    def gen(self):
        """Image of the polynomial variable: the class of ``a`` modulo the modulus."""
        return FqElement(self, self.p if self.e > 1 else 0)

    def dlog(self, x):
        x = self(x)
        if x.n == 0:
            raise ZeroInput("discrete log of 0")
        return self._log[x.n]

    # -- valued-field vocabulary (bottom of a tower) -----------------------

    @property
    def residue_characteristic(self):
        return self.p

    @property
    def base_field(self):
        return self

    def d_star(self, d):
        return math.gcd(d, self.q - 1)

    def dth_power_class(self, x, d):
        x = self(x)
        if x.n == 0:
            raise ZeroInput("0 has no d-th power class")
        return self._log[x.n] % self.d_star(d)

    def is_dth_power(self, x, d):
        return self.dth_power_class(x, d) == 0

    def dth_roots(self, c, d):
        """All d-th roots of c, in encoding order."""
        c = self(c)
        if c.n == 0:
            return [self.zero]
        n = self.q - 1
        g = math.gcd(d, n)
        k = self._log[c.n]
        if k % g:
            return []
        m = n // g
        j0 = (k // g) * pow(d // g, -1, m) % m if m > 1 else 0
        return sorted((FqElement(self, self._exp[(j0 + i * m) % n]) for i in range(g)),
                      key=lambda y: y.n)

    def dth_root(self, c, d, prec=None):
        roots = self.dth_roots(c, d)
        if not roots:
            raise NotADthPower(f"{c} is not a {d}-th power in {self}")
        return roots[0]

    def inverse(self, x, prec=None):
        return 1 / self(x)

    def truncate(self, x, prec):
        return x

    def approx_zero(self, x, prec):
        return x == 0

    def is_exact(self, x):
        return True

    def valuation_of(self, x):
        """Order used for normalising vectors: 0 for nonzero, infinity for 0."""
        return INF if x == 0 else 0

    # -- descriptors -------------------------------------------------------

    @property
    def label(self):
        return f"F_{self.q}"

    def to_json(self):
        out = {"kind": "fq", "p": self.p, "e": self.e}
        if not self._canonical_modulus and self.e > 1:
            out["modulus"] = list(self.modulus)
        return out

    def element_to_json(self, x):
        x = self(x)
        return x.n if self.e == 1 else list(x.coords)

    def element_from_json(self, obj):
        return self(obj)

    def _key(self):
        return ("fq", self.p, self.e, self.modulus, self.generator_n)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return self.label


@lru_cache(maxsize=None)
def finite_field(p, e=1):
    """Shared canonical instance of F_{p^e}."""
    return FiniteField(p, e)


def prime_field(p):
    return finite_field(p, 1)


def field_of_order(q):
    f = factorint(q)
    if len(f) != 1:
        raise InputError(f"{q} is not a prime power")
    (p, e), = f.items()
    return finite_field(p, e)


# --------------------------------------------------------------------------
# p-adic numbers on exact rationals


def vp(n, p):
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PAdicField:
    """Q_p with elements stored as exact Fractions.

    Valuation and residue are exact, so isotropy decisions never depend on
    truncation; only Hensel-lifted witnesses are reduced modulo p^N.
    """

    is_finite = False
    height = 1

    def __init__(self, p, prec=DEFAULT_PREC):
        if not isprime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.prec = prec
        self.residue_field = prime_field(p)
        self.zero = Fraction(0)
        self.one = Fraction(1)
        self.uniformizer = Fraction(p)

    def __call__(self, x):
        if isinstance(x, FqElement):
            raise InputError("use lift() to move residue elements into Q_p")
        if isinstance(x, dict):
            return sum((Fraction(int(c)) * Fraction(self.p) ** int(k) for k, c in x.items()), Fraction(0))
        return _coerce_fraction(x)

    @property
    def residue_characteristic(self):
        return self.p

    @property
    def base_field(self):
        return self.residue_field

    def valuation(self, x):
        x = Fraction(x)
        if x == 0:
            return INF
        return vp(x.numerator, self.p) - vp(x.denominator, self.p)

    valuation_of = valuation

    def unit_part(self, x):
        v = self.valuation(x)
        if v == INF:
            raise ZeroInput("0 has no unit part")
        return Fraction(x) / Fraction(self.p) ** v

    def uniformizer_power(self, k):
        return Fraction(self.p) ** k

    def residue(self, x):
        x = Fraction(x)
        if self.valuation(x) != 0:
            raise NonUnit(f"{x} has valuation {self.valuation(x)} in Q_{self.p}")
        return self.residue_field(x)

    def reduce(self, x):
        """Image in the residue field of an element of valuation >= 0."""
        v = self.valuation(x)
        if v < 0:
            raise NonUnit(f"{x} is not {self.p}-integral")
        return self.residue_field.zero if v > 0 else self.residue(x)

    def lift(self, y):
        return Fraction(self.residue_field(y).n)

    def dth_power_class(self, x, d):
        if x == 0:
            raise ZeroInput("0 has no d-th power class")
        v = self.valuation(x)
        return (v % d, self.residue_field.dth_power_class(self.residue(self.unit_part(x)), d))

    def is_dth_power(self, x, d):
        return self.dth_power_class(x, d) == (0, 0)

    def _mod(self, x, M):
        x = Fraction(x)
        pm = self.p ** M
        return x.numerator * pow(x.denominator, -1, pm) % pm

    def dth_root(self, c, d, prec=None):
        """A d-th root of the unit c, correct modulo p^prec (exact when c is a
        rational d-th power)."""
        prec = self.prec if prec is None else prec
        c = Fraction(c)
        if self.valuation(c) != 0:
            raise NonUnit(f"{c} is not a unit of Q_{self.p}")
        check_characteristic(self, d)
        r0 = self.residue_field.dth_root(self.residue(c), d)
        sign = -1 if c < 0 and d % 2 else 1
        num, exact_n = integer_nthroot(abs(c.numerator), d)
        den, exact_d = integer_nthroot(c.denominator, d)
        if exact_n and exact_d and (c > 0 or d % 2):
            return Fraction(sign * num, den)
        pm = self.p ** prec
        cm = self._mod(c, prec)
        x = r0.n
        for _ in range(2 * prec.bit_length() + 4):
            err = (pow(x, d, pm) - cm) % pm
            if err == 0:
                return Fraction(x)
            x = (x - err * pow(d * pow(x, d - 1, pm), -1, pm)) % pm
        raise PrecisionExhausted(f"Newton iteration for a {d}-th root of {c} did not converge")

    def inverse(self, x, prec=None):
        return 1 / Fraction(x)

    def truncate(self, x, prec):
        x = Fraction(x)
        if x == 0:
            return x
        v = self.valuation(x)
        if v >= prec:
            return Fraction(0)
        u = self._mod(self.unit_part(x), prec - v)
        return Fraction(self.p) ** v * u

    def approx_zero(self, x, prec):
        return self.valuation(x) >= prec

    def is_exact(self, x):
        return True

    @property
    def label(self):
        return f"Q_{self.p}"

    def to_json(self):
        return {"kind": "padic", "p": self.p, "prec": self.prec}

    def element_to_json(self, x):
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else str(x)

    def element_from_json(self, obj):
        return self(obj)

    def _key(self):
        return ("padic", self.p)

    def __eq__(self, other):
        return isinstance(other, PAdicField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return self.label


# --------------------------------------------------------------------------
# Laurent series


class LaurentElement:
    """Finite Laurent polynomial sum c_k t^k over the residue level.

    ``prec`` is None for exact values; otherwise the element is only known
    modulo t^prec (terms at exponent >= prec are dropped).
    """

    __slots__ = ("field", "terms", "prec")

    def __init__(self, field, terms, prec=None):
        self.field = field
        if prec is None:
            self.terms = {k: c for k, c in terms.items() if c != 0}
        else:
            self.terms = {k: c for k, c in terms.items() if c != 0 and k < prec}
        self.prec = prec

    def _other(self, other):
        if isinstance(other, LaurentElement) and other.field is self.field:
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._other(other)
        terms = dict(self.terms)
        for k, c in o.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return LaurentElement(self.field, terms, _min_prec(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return LaurentElement(self.field, {k: -c for k, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        terms = {}
        for i, a in self.terms.items():
            for j, b in o.terms.items():
                k = i + j
                terms[k] = terms[k] + a * b if k in terms else a * b
        prec = None
        if self.prec is not None or o.prec is not None:
            pa = INF if self.prec is None else self.prec + o.valuation()
            pb = INF if o.prec is None else o.prec + self.valuation()
            prec = min(pa, pb)
            prec = None if prec == INF else prec
        return LaurentElement(self.field, terms, prec)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("negative powers need an exact monomial; use field.inverse")
            (e, c), = self.terms.items()
            return LaurentElement(self.field, {e * k: c ** k})
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        o = self._other(other)
        if len(o.terms) != 1:
            raise ValueError("exact division only by monomials; use field.inverse")
        return self * o ** -1

    def __rtruediv__(self, other):
        return self._other(other) / self

    def valuation(self):
        return min(self.terms) if self.terms else INF

    def __eq__(self, other):
        try:
            o = self._other(other)
        except (InputError, FieldMismatch, TypeError):
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def shift(self, k):
        prec = None if self.prec is None else self.prec + k
        return LaurentElement(self.field, {e + k: c for e, c in self.terms.items()}, prec)

    def __repr__(self):
        if not self.terms:
            return "0"
        t = self.field.var
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            cs = repr(c)
            if any(ch in cs for ch in "+- ") and k != 0:
                cs = f"({cs})"
            if k == 0:
                parts.append(cs)
            else:
                mono = t if k == 1 else f"{t}^{k}"
                parts.append(mono if cs == "1" else f"{cs}*{mono}")
        s = " + ".join(parts)
        if self.prec is not None:
            s += f" + O({t}^{self.prec})"
        return s


def _newton_precisions(field, prec):
    """Working precisions for Newton steps.

    Over a finite residue field the precision doubles, 2, 4, ..., prec.
    Deeper in a tower truncation also cuts the inner levels, so every step
    runs at full precision instead.
    """
    if not field.residue_field.is_finite:
        return [prec] * (prec.bit_length() + 3)
    out = [prec]
    while out[-1] > 2:
        out.append((out[-1] + 1) // 2)
    return out[::-1]


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentField:
    """K((t)) over a residue level K (finite, p-adic or another Laurent field)."""

    is_finite = False

    def __init__(self, residue, var="t", prec=DEFAULT_PREC):
        self.residue_field = residue
        self.var = var
        self.prec = prec
        self.height = residue.height + 1
        self.zero = LaurentElement(self, {})
        self.one = LaurentElement(self, {0: residue.one})
        self.uniformizer = LaurentElement(self, {1: residue.one})

    def __call__(self, x):
        if isinstance(x, LaurentElement) and x.field is self:
            return x
        if isinstance(x, LaurentElement) and x.field == self:
            return LaurentElement(self, dict(x.terms), x.prec)
        if isinstance(x, dict):
            return LaurentElement(self, {int(k): self.residue_field(v) for k, v in x.items()})
        return LaurentElement(self, {0: self.residue_field(x)})

    @property
    def residue_characteristic(self):
        return self.residue_field.residue_characteristic

    @property
    def base_field(self):
        return self.residue_field.base_field

    @property
    def gen(self):
        return self.uniformizer

    def monomial(self, c, k):
        return LaurentElement(self, {k: self.residue_field(c)})

    def uniformizer_power(self, k):
        return LaurentElement(self, {k: self.residue_field.one})

    def valuation(self, x):
        return self(x).valuation()

    valuation_of = valuation

    def unit_part(self, x):
        x = self(x)
        v = x.valuation()
        if v == INF:
            raise ZeroInput("0 has no unit part")
        return x.shift(-v)

    def residue(self, x):
        x = self(x)
        if x.valuation() != 0:
            raise NonUnit(f"{x} has valuation {x.valuation()}")
        return x.terms[0]

    def reduce(self, x):
        x = self(x)
        v = x.valuation()
        if v < 0:
            raise NonUnit(f"{x} has negative valuation")
        return x.terms.get(0, self.residue_field.zero)

    def lift(self, y):
        return LaurentElement(self, {0: self.residue_field(y)})

    def leading_coefficient(self, x):
        x = self(x)
        return x.terms[x.valuation()]

    def dth_power_class(self, x, d):
        x = self(x)
        if not x:
            raise ZeroInput("0 has no d-th power class")
        v = x.valuation()
        return (v % d, self.residue_field.dth_power_class(x.terms[v], d))

    def is_dth_power(self, x, d):
        cls = self.dth_power_class(x, d)
        return cls[0] == 0 and _class_is_trivial(cls[1])

    def truncate(self, x, prec):
        x = self(x)
        R = self.residue_field
        return LaurentElement(self, {k: R.truncate(c, prec) for k, c in x.terms.items() if k < prec}, prec)

    def approx_zero(self, x, prec):
        R = self.residue_field
        return all(R.approx_zero(c, prec) for k, c in self(x).terms.items() if k < prec)

    def is_exact(self, x):
        x = self(x)
        return x.prec is None and all(self.residue_field.is_exact(c) for c in x.terms.values())

    def inverse(self, x, prec=None):
        """Inverse of x, correct modulo t^(prec - v(x))."""
        prec = self.prec if prec is None else prec
        x = self(x)
        if len(x.terms) == 1 and x.prec is None and self.residue_field.is_finite:
            return x ** -1
        v = x.valuation()
        if v == INF:
            raise ZeroDivisionError("0 has no inverse")
        u = x.shift(-v)
        y = self.lift(self.residue_field.inverse(u.terms[0], prec))
        two = self.one + self.one
        for w in _newton_precisions(self, prec):
            y = self.truncate(y * (two - self.truncate(u, w) * y), w)
        for _ in range(4):
            if self.approx_zero(u * y - self.one, prec):
                break
            y = self.truncate(y * (two - u * y), prec)
        return y.shift(-v)

    def dth_root(self, c, d, prec=None):
        """Newton iteration x <- x - (x^d - c)/(d x^(d-1)) from the lifted residue
        root; returns x with x^d - c approximately zero to ``prec``."""
        prec = self.prec if prec is None else prec
        c = self(c)
        if c.valuation() != 0:
            raise NonUnit(f"{c} is not a unit")
        check_characteristic(self, d)
        guard = _GUARD
        for _ in range(4):
            W = prec + guard
            x = self.lift(self.residue_field.dth_root(c.terms[0], d, W))
            dd = self(d)
            for w in _newton_precisions(self, W):
                cw = self.truncate(c, w)
                x = self.truncate(x - (x ** d - cw) * self.inverse(dd * x ** (d - 1), w), w)
            for _ in range(2 * W.bit_length() + 4):
                err = x ** d - c
                if self.approx_zero(err, W):
                    break
                x = self.truncate(x - err * self.inverse(dd * x ** (d - 1), W), W)
            if self.approx_zero(x ** d - c, prec):
                return LaurentElement(self, x.terms, None if not x.terms else W)
            guard *= 2
        raise PrecisionExhausted(f"no {d}-th root of {c} to precision {prec}")

    @property
    def label(self):
        return f"{self.residue_field.label}(({self.var}))"

    def to_json(self):
        return {"kind": "laurent", "residue": self.residue_field.to_json(),
                "var": self.var, "prec": self.prec}

    def element_to_json(self, x):
        x = self(x)
        return {str(k): self.residue_field.element_to_json(c) for k, c in sorted(x.terms.items())}

    def element_from_json(self, obj):
        if isinstance(obj, dict):
            return LaurentElement(self, {int(k): self.residue_field.element_from_json(v)
                                         for k, v in obj.items()})
        return self.lift(self.residue_field.element_from_json(obj))

    def _key(self):
        return ("laurent", self.var, self.residue_field._key())

    def __eq__(self, other):
        return isinstance(other, LaurentField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return self.label


def _class_is_trivial(cls):
    if isinstance(cls, tuple):
        return cls[0] == 0 and _class_is_trivial(cls[1])
    return cls == 0


def tower(base, variables, prec=DEFAULT_PREC):
    """Iterate Laurent levels over ``base``: tower(F_7, ["t1", "t2"]) = F_7((t1))((t2))."""
    field = base
    for v in variables:
        field = LaurentField(field, v, prec)
    return field


def tower_levels(field):
    """Fields from the top of the tower down to its finite base."""
    out = [field]
    while not field.is_finite:
        field = field.residue_field
        out.append(field)
    return out


def field_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError(f"field descriptor must be an object with 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "fq":
            if "q" in obj and "p" not in obj:
                return field_of_order(int(obj["q"]))
            p, e = int(obj["p"]), int(obj.get("e", 1))
            if "modulus" in obj:
                return FiniteField(p, e, modulus=obj["modulus"])
            return finite_field(p, e)
        if kind == "padic":
            return PAdicField(int(obj["p"]), int(obj.get("prec", DEFAULT_PREC)))
        if kind == "laurent":
            return LaurentField(field_from_json(obj["residue"]), obj.get("var", "t"),
                                int(obj.get("prec", DEFAULT_PREC)))
    except KeyError as exc:
        raise InputError(f"field descriptor {kind!r} is missing {exc}") from exc
    raise InputError(f"unknown field kind {kind!r}")
