"""Rational function fields F_q(t) and a budgeted isotropy semi-decision.

The decision first scans completions at the places of degree one, the
place at infinity and (for prime q) the places of degree two; an anisotropic
completion proves anisotropy. It then searches for a zero with polynomial
entries of bounded degree, and otherwise answers Unknown.
"""

from dataclasses import dataclass
from itertools import combinations, product
from math import ceil

from .. import polys
from ..errors import CertificateError, InputError
from ..fields import LaurentField, check_characteristic, field_of_order
from ..forms import DiagonalForm, evaluate, make_form
from ..isotropy import Certificate, ProofNode, Verdict, decide_cdv

DEFAULT_DEGREE_BUDGET = 1
DEFAULT_STATE_CAP = 200_000


class RationalFunction:
    """num/den over a finite field with den monic and gcd(num, den) = 1."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den=None):
        K = field.base
        num = polys.trim(K(c) for c in num)
        den = polys.trim(K(c) for c in den) if den is not None else (K.one,)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = polys.gcd(num, den)
            if polys.deg(g) > 0:
                num = polys.divmod_(num, g)[0]
                den = polys.divmod_(den, g)[0]
        else:
            den = (K.one,)
        lead = den[-1]
        if lead != 1:
            inv = 1 / lead
            num, den = polys.scale(num, inv), polys.scale(den, inv)
        self.field, self.num, self.den = field, num, den

    def _other(self, other):
        return other if isinstance(other, RationalFunction) else self.field(other)

    def __add__(self, other):
        o = self._other(other)
        return RationalFunction(self.field, polys.add(polys.mul(self.num, o.den), polys.mul(o.num, self.den)),
                                polys.mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, polys.neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        return RationalFunction(self.field, polys.mul(self.num, o.num), polys.mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if not o.num:
            raise ZeroDivisionError("division by zero")
        return RationalFunction(self.field, polys.mul(self.num, o.den), polys.mul(self.den, o.num))

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, k):
        if k < 0:
            return self.field.one / self ** (-k)
        return RationalFunction(self.field, polys.power(self.num, k) if self.num else (), polys.power(self.den, k))

    def __eq__(self, other):
        try:
            o = self._other(other)
        except InputError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(c.n for c in self.num), tuple(c.n for c in self.den)))

    def __bool__(self):
        return bool(self.num)

    @property
    def is_polynomial(self):
        return len(self.den) == 1

    def __repr__(self):
        v = self.field.var
        if self.is_polynomial:
            return poly_label(self.num, v)
        return f"({poly_label(self.num, v)})/({poly_label(self.den, v)})"


def poly_label(a, var="t"):
    terms = []
    for k, c in enumerate(a):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        coef = repr(c)
        terms.append(coef if not mono else (mono if c == 1 else f"{coef}*{mono}"))
    return " + ".join(reversed(terms)) or "0"


class RationalFunctionField:
    is_finite = False

    def __init__(self, base, var="t"):
        self.base = base
        self.var = var
        self.zero = RationalFunction(self, ())
        self.one = RationalFunction(self, (base.one,))
        self.gen = RationalFunction(self, (base.zero, base.one))

    def __call__(self, x):
        if isinstance(x, RationalFunction):
            if x.field == self:
                return x
            raise InputError("rational function from another field")
        if isinstance(x, (tuple, list)):
            return RationalFunction(self, tuple(x))
        if isinstance(x, dict) and "num" in x:
            return RationalFunction(self, [self.base.element_from_json(c) for c in x["num"]],
                                    [self.base.element_from_json(c) for c in x.get("den", [1])])
        return RationalFunction(self, (self.base(x),))

    def polynomial(self, coeffs):
        return RationalFunction(self, tuple(coeffs))

    @property
    def residue_characteristic(self):
        return self.base.p

    @property
    def label(self):
        return f"{self.base.label}({self.var})"

    def to_json(self):
        return {"kind": "rational_function", "base": self.base.to_json(), "var": self.var}

    def element_to_json(self, x):
        x = self(x)
        out = {"num": [self.base.element_to_json(c) for c in x.num]}
        if not x.is_polynomial:
            out["den"] = [self.base.element_to_json(c) for c in x.den]
        return out

    def element_from_json(self, obj):
        return self(obj)

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and (self.base, self.var) == (other.base, other.var)

    def __hash__(self):
        return hash(("rational_function", self.base, self.var))

    def __repr__(self):
        return self.label


# --------------------------------------------------------------------------
# places


@dataclass(frozen=True)
class Place:
    """Infinity (poly is None) or the zero set of a monic irreducible polynomial."""

    poly: tuple = None

    @property
    def at_infinity(self):
        return self.poly is None

    @property
    def degree(self):
        return 1 if self.poly is None else polys.deg(self.poly)

    def label(self, var="t"):
        if self.poly is None:
            return "infinity"
        return f"({poly_label(self.poly, var)})"


def places(K, max_degree=2):
    """Degree-one places, then infinity, then degree-two places when q is prime."""
    out = [Place(f) for f in polys.irreducibles(K, 1)]
    out.append(Place())
    if max_degree >= 2 and K.e == 1:
        out.extend(Place(f) for f in polys.irreducibles(K, 2))
    return out


def _residue_embedding(K, g):
    """kappa(P) = K[t]/(g) as a field, with the image of t."""
    if polys.deg(g) == 1:
        return K, -g[0]
    L = field_of_order(K.q ** polys.deg(g))
    lifted = tuple(L(c.n) for c in g)
    theta = next(x for x in L.elements() if polys.evaluate(lifted, x) == 0)
    return L, theta


def _split_off(a, g):
    """Return (v, h) with a = g^v * h and g not dividing h."""
    v = 0
    while True:
        q, r = polys.divmod_(a, g)
        if r:
            return v, a
        a, v = q, v + 1


def local_data(f, place, embed):
    """(valuation, residue of the unit part) of f at a place; the uniformizer is
    g at a finite place and 1/t at infinity."""
    if place.at_infinity:
        return polys.deg(f.den) - polys.deg(f.num), f.num[-1] / f.den[-1]
    L, theta = embed
    vn, hn = _split_off(f.num, place.poly)
    vd, hd = _split_off(f.den, place.poly)
    K = f.field.base
    lift = (lambda c: c) if L is K else (lambda c: L(c.n))
    value = polys.evaluate(tuple(lift(c) for c in hn), theta) / polys.evaluate(tuple(lift(c) for c in hd), theta)
    return vn - vd, value


def completion_form(form, place):
    """The form over kappa(P)((s)) with monomial coefficients of matching
    valuation and leading residue."""
    K = form.field.base
    embed = None if place.at_infinity else _residue_embedding(K, place.poly)
    kappa = K if embed is None else embed[0]
    C = LaurentField(kappa, "s")
    coeffs = []
    for a in form.coeffs:
        v, r = local_data(a, place, embed)
        coeffs.append(C.monomial(r, v))
    return make_form(form.degree, coeffs, C)


def local_obstruction(form, max_degree=2, prec=20):
    """First place whose completion makes the form anisotropic, with the proof."""
    for place in places(form.field.base, max_degree):
        local = completion_form(form, place)
        cert = decide_cdv(local, prec)
        if cert.verdict is Verdict.ANISOTROPIC:
            return place, cert
    return None


# --------------------------------------------------------------------------
# witness search


def _strip_powers(form):
    """Clear denominators and remove d-th power factors.

    Returns (polynomial coefficients c_i, h_i) with a_i = D * h_i^d * c_i for
    a common D; a zero y of <c_i> gives the zero (y_i / h_i) of the form.
    """
    d = form.degree
    K = form.field.base
    D = (K.one,)
    for a in form.coeffs:
        D = polys.mul(D, polys.divmod_(a.den, polys.gcd(D, a.den))[0])
    stripped, hs = [], []
    for a in form.coeffs:
        b = polys.mul(a.num, polys.divmod_(D, a.den)[0])
        lead, factors = polys.factor(b, K)
        c, h = (lead,), (K.one,)
        for g, e in factors:
            c = polys.mul(c, polys.power(g, e % d))
            h = polys.mul(h, polys.power(g, e // d))
        stripped.append(c)
        hs.append(h)
    return stripped, hs


def _values(K, c, d, B):
    """(contribution c*y^d, y) for every polynomial y of degree <= B."""
    elems = list(K.elements())
    out = []
    for digits in product(elems, repeat=B + 1):
        y = polys.trim(digits)
        out.append((polys.mul(c, polys.power(y, d)) if y else (), y))
    return out


def _half_sums(value_lists):
    sums = {(): ((), False)}
    for vals in value_lists:
        new = {}
        for s, (vec, nz) in sums.items():
            for v, y in vals:
                s2 = polys.add(s, v)
                nz2 = nz or bool(y)
                cur = new.get(s2)
                if cur is None or (nz2 and not cur[1]):
                    new[s2] = (vec + (y,), nz2)
        sums = new
    return sums


def _mitm(value_lists):
    half = (len(value_lists) + 1) // 2
    left = _half_sums(value_lists[:half])
    right = _half_sums(value_lists[half:])
    for s, (vr, nzr) in right.items():
        hit = left.get(polys.neg(s))
        if hit is not None and (hit[1] or nzr):
            return hit[0] + vr
    return None


def search_witness(form, degree_budget=DEFAULT_DEGREE_BUDGET, state_cap=DEFAULT_STATE_CAP):
    """Zero of the form with polynomial entries, or None within the budget."""
    K = form.field.base
    d, n = form.degree, form.dim
    cs, hs = _strip_powers(form)
    work = 0
    for B in range(degree_budget + 1):
        per_slot = K.q ** (B + 1)
        k = n
        while k > 2 and per_slot ** ceil(k / 2) > state_cap:
            k -= 1
        if per_slot ** ceil(k / 2) > state_cap:
            continue
        values = [_values(K, c, d, B) for c in cs]
        for subset in combinations(range(n), k):
            work += per_slot ** ceil(k / 2)
            if work > 20 * state_cap:
                return None
            y = _mitm([values[i] for i in subset])
            if y is None:
                continue
            full = [()] * n
            for i, yi in zip(subset, y):
                full[i] = yi
            return _clear_denominators(form.field, full, hs)
    return None


def _clear_denominators(F, ys, hs):
    """x_i = y_i / h_i scaled by lcm(h) to polynomial entries."""
    L = (F.base.one,)
    for h in hs:
        L = polys.mul(L, polys.divmod_(h, polys.gcd(L, h))[0])
    return tuple(F(polys.mul(y, polys.divmod_(L, h)[0])) if y else F.zero for y, h in zip(ys, hs))


def decide_fqt(form, degree_budget=DEFAULT_DEGREE_BUDGET, max_place_degree=2,
               state_cap=DEFAULT_STATE_CAP, prec=20):
    """Three-phase semi-decision over F_q(t)."""
    check_characteristic(form.field.base, form.degree)
    obstruction = local_obstruction(form, max_place_degree, prec)
    if obstruction is not None:
        place, cert = obstruction
        label = f"completion at {place.label(form.field.var)}"
        node = ProofNode("local_obstruction", form, label=label,
                         children=((place.label(form.field.var), tuple(range(form.dim)), cert.tree),))
        return Certificate(Verdict.ANISOTROPIC, form, tree=node, note=f"anisotropic {label}")
    x = search_witness(form, degree_budget, state_cap)
    if x is not None:
        if evaluate(form, x) != 0 or not any(x):
            raise CertificateError("polynomial witness failed exact re-evaluation")
        return Certificate(Verdict.ISOTROPIC, form, x, note="exact polynomial witness")
    return Certificate(Verdict.UNKNOWN, form,
                       note=(f"no anisotropic completion at places of degree <= {max_place_degree} "
                             f"or infinity; no zero with entries of degree <= {degree_budget}"))


def make_fqt_form(d, coeffs, K, var="t"):
    """Diagonal form over K(t) from polynomials (coefficient lists) or RationalFunctions."""
    F = RationalFunctionField(K, var)
    return make_form(d, [F(c) for c in coeffs], F)


def verify_fqt_witness(form, x):
    x = [form.field(v) for v in x]
    return any(x) and evaluate(form, x) == 0
