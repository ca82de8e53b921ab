"""Model data for P^1 over Z_p and the two decompositions of a diagonal form.

A coefficient is c * prod (t - alpha)^m with alpha rational and p-integral.
The reductions of the alphas together with the point at infinity form the
set S of closed points of the special fiber; U is its complement, a single
affine patch. Distinct alphas must have distinct reductions, which makes the
support divisor strict normal crossings without any blow-up.
"""

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .. import polys
from ..errors import InputError, NotSNC
from ..fields import check_characteristic, prime_field, vp
from ..forms import make_form
from .local import Series

INFINITY = None

_FACTOR_RE = re.compile(r"^t\s*(?:([+-])\s*([0-9]+(?:/[0-9]+)?))?$")


def _parse_rational(s):
    try:
        return Fraction(str(s).replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {s!r}") from exc


def parse_factor(obj):
    """["t-1", 2] or [alpha, m] -> (alpha, m)."""
    try:
        base, m = obj
        m = int(m)
    except (TypeError, ValueError) as exc:
        raise InputError(f"factor must be a [base, multiplicity] pair: {obj!r}") from exc
    if m < 1:
        raise InputError(f"factor multiplicity must be positive: {obj!r}")
    if isinstance(base, str):
        match = _FACTOR_RE.match(base.strip())
        if not match:
            raise InputError(f"factor must look like 't', 't-a' or 't+a': {base!r}")
        sign, val = match.groups()
        alpha = Fraction(0) if val is None else _parse_rational(val)
        if sign == "+":
            alpha = -alpha
        return alpha, m
    return _parse_rational(base), m


def _factor_label(alpha):
    if alpha == 0:
        return "t"
    return f"t-{alpha}" if alpha > 0 else f"t+{-alpha}"


@dataclass(frozen=True)
class ModelCoefficient:
    """c * prod (t - alpha)^m over Q."""

    c: Fraction
    factors: tuple = ()

    def __post_init__(self):
        if self.c == 0:
            raise InputError("coefficient constant must be nonzero")
        merged = {}
        for alpha, m in self.factors:
            merged[Fraction(alpha)] = merged.get(Fraction(alpha), 0) + m
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @classmethod
    def from_json(cls, obj, p=None):
        if isinstance(obj, (int, str)):
            return cls(_parse_rational(obj))
        try:
            c = _parse_rational(obj["c"])
        except KeyError as exc:
            raise InputError(f"coefficient descriptor is missing 'c': {obj!r}") from exc
        if c == 0:
            raise InputError("coefficient constant must be nonzero")
        factors = tuple(parse_factor(f) for f in obj.get("factors", []))
        if "pexp" in obj and p is not None:
            v = vp(c.numerator, p) - vp(c.denominator, p)
            if int(obj["pexp"]) != v:
                raise InputError(f"pexp {obj['pexp']} does not match v_{p}({c}) = {v}")
        return cls(c, factors)

    def to_json(self, p=None):
        out = {"c": str(self.c), "factors": [[_factor_label(a), m] for a, m in self.factors]}
        if p is not None:
            out["pexp"] = self.pexp(p)
        return out

    @property
    def degree(self):
        return sum(m for _, m in self.factors)

    @property
    def order_at_infinity(self):
        return -self.degree

    def pexp(self, p):
        return vp(self.c.numerator, p) - vp(self.c.denominator, p)

    def polynomial(self):
        """Coefficients over Q, low degree first."""
        out = (self.c,)
        for alpha, m in self.factors:
            out = polys.mul(out, polys.power((-alpha, Fraction(1)), m))
        return out

    def multiplicity(self, alpha):
        return dict(self.factors).get(Fraction(alpha), 0)

    def value_at(self, beta, skip=None):
        """c * prod (beta - alpha)^m over factors with alpha != skip."""
        out = self.c
        for alpha, m in self.factors:
            if alpha != skip:
                out *= (beta - alpha) ** m
        return out

    def __repr__(self):
        parts = [str(self.c)] + [f"({_factor_label(a)})" + (f"^{m}" if m > 1 else "")
                                 for a, m in self.factors]
        return "*".join(parts)


@dataclass(frozen=True)
class ClosedPoint:
    """A point of S: the reduction of alpha, or infinity (alpha is None)."""

    alpha: Fraction = None
    residue: int = None

    @property
    def at_infinity(self):
        return self.alpha is None

    def label(self, p):
        if self.at_infinity:
            return f"(1/t,{p})"
        return f"({_factor_label(Fraction(self.residue))},{p})"

    def short(self):
        return "inf" if self.at_infinity else str(self.residue)


@dataclass(frozen=True)
class ModelData:
    p: int
    degree: int
    coeffs: tuple
    alphas: tuple
    points: tuple
    prec: int = 20
    grid_prec: int = 12

    @property
    def residue_field(self):
        return prime_field(self.p)

    @property
    def finite_points(self):
        return tuple(P for P in self.points if not P.at_infinity)

    def point(self, key):
        """Look a point up by its reduction (int), 'inf', or a ClosedPoint.

        Rational points outside S are allowed; there every coefficient is a
        unit times a power of p, centred at the least integer lift.
        """
        if isinstance(key, ClosedPoint):
            return key
        for P in self.points:
            if P.short() == str(key).strip():
                return P
        try:
            r = int(key)
        except (TypeError, ValueError):
            raise InputError(f"{key!r} is not a closed point of the special fiber") from None
        if not 0 <= r < self.p:
            raise InputError(f"{key!r} is not a residue modulo {self.p}")
        return ClosedPoint(Fraction(r), r)

    def u_description(self):
        fs = [_factor_label(Fraction(P.residue)) for P in self.finite_points]
        if not fs:
            return f"Spec F_{self.p}[t]"
        f = "".join(x if x == "t" else f"({x})" for x in fs)
        return f"Spec F_{self.p}[t, 1/({f})]" if len(fs) > 1 else f"Spec F_{self.p}[t, 1/{f}]"

    def to_json(self):
        return {
            "p": self.p,
            "degree": self.degree,
            "coeffs": [a.to_json(self.p) for a in self.coeffs],
            "S": [P.label(self.p) for P in self.points],
            "U": self.u_description(),
        }


def build_model(d, coeffs, p, prec=20, grid_prec=12):
    coeffs = tuple(a if isinstance(a, ModelCoefficient) else ModelCoefficient.from_json(a, p)
                   for a in coeffs)
    if not coeffs:
        raise InputError("a diagonal form needs at least one slot")
    check_characteristic(prime_field(p), d)
    alphas = sorted({alpha for a in coeffs for alpha, _ in a.factors})
    seen = {}
    for alpha in alphas:
        if alpha.denominator % p == 0:
            raise NotSNC(f"t = {alpha} reduces to infinity mod {p}")
        r = alpha.numerator * pow(alpha.denominator, -1, p) % p
        if r in seen:
            raise NotSNC(f"t = {seen[r]} and t = {alpha} both reduce to {r} mod {p}")
        seen[r] = alpha
    points = tuple(ClosedPoint(alpha, r) for r, alpha in sorted(seen.items())) + (ClosedPoint(),)
    return ModelData(p, d, coeffs, tuple(alphas), points, prec, grid_prec)


def model_from_json(obj):
    try:
        d, p = int(obj["degree"]), int(obj["p"])
        coeffs = [ModelCoefficient.from_json(c, p) for c in obj["coeffs"]]
    except KeyError as exc:
        raise InputError(f"model descriptor is missing {exc}") from exc
    return build_model(d, coeffs, p, int(obj.get("prec", 20)), int(obj.get("grid_prec", 12)))


# --------------------------------------------------------------------------
# decomposition over U: phi = rho_0 + s rho_1 + ... + s^(d-1) rho_(d-1), s = p


@dataclass(frozen=True)
class LineSlot:
    index: int
    j: int
    shift: int
    unit: ModelCoefficient


def residue_polynomial(a, p):
    """Reduction mod p of the unit part c/p^v * prod (t - alpha)^m, over F_p."""
    F = prime_field(p)
    u = a.c / Fraction(p) ** a.pexp(p)
    out = (F(u),)
    for alpha, m in a.factors:
        out = polys.mul(out, polys.power((F(-alpha), F.one), m))
    return out


def decompose_at_U(model):
    """Return {j: [LineSlot]} and the residue forms {j: list of F_p[t] polynomials}."""
    d, p = model.degree, model.p
    blocks = {}
    for i, a in enumerate(model.coeffs):
        v = a.pexp(p)
        unit = ModelCoefficient(a.c / Fraction(p) ** v, a.factors)
        blocks.setdefault(v % d, []).append(LineSlot(i, v % d, v // d, unit))
    residues = {j: [residue_polynomial(s.unit, p) for s in slots] for j, slots in blocks.items()}
    return dict(sorted(blocks.items())), dict(sorted(residues.items()))


# --------------------------------------------------------------------------
# decomposition at a closed point P: phi = sum x^i y^j phi_ij, (x, y) = (t - alpha, p)


@dataclass(frozen=True)
class GridSlot:
    index: int
    ex: int
    ey: int
    unit: ModelCoefficient

    def cell(self, d):
        return (self.ex % d, self.ey % d)


@dataclass(frozen=True)
class LocalGrid:
    point: ClosedPoint
    degree: int
    p: int
    slots: tuple
    cells: dict = dc_field(default_factory=dict)

    def residue_form(self, cell):
        """The reduction of phi_ij over kappa(P) = F_p."""
        F = prime_field(self.p)
        return make_form(self.degree, [unit_residue(s, self.point, self.p) for s in self.cells[cell]], F)

    def to_json(self):
        return {f"{i},{j}": [s.index for s in slots] for (i, j), slots in self.cells.items()}


def unit_residue(slot, P, p):
    """Value at P of the unit part of a slot, in F_p."""
    F = prime_field(p)
    u = slot.unit
    if P.at_infinity:
        return F(u.c)
    return F(u.value_at(P.alpha, skip=P.alpha))


def unit_series(slot, P, p, N):
    """The unit part of a slot as an element of Z_p[[x]] / (x, p)^N."""
    u = slot.unit
    out = Series.constant(p, N, u.c)
    for alpha, m in u.factors:
        if P.at_infinity:
            out = out * Series(p, N, {0: 1, 1: -alpha}) ** m
        elif alpha != P.alpha:
            out = out * Series(p, N, {0: P.alpha - alpha, 1: 1}) ** m
    return out


def decompose_at_P(model, P):
    P = model.point(P)
    d, p = model.degree, model.p
    slots = []
    for i, a in enumerate(model.coeffs):
        ey = a.pexp(p)
        if P.at_infinity:
            ex = a.order_at_infinity
            factors = a.factors
        else:
            ex = a.multiplicity(P.alpha)
            factors = tuple((al, m) for al, m in a.factors if al != P.alpha)
        slots.append(GridSlot(i, ex, ey, ModelCoefficient(a.c / Fraction(p) ** ey, factors)))
    cells = {}
    for s in slots:
        cells.setdefault(s.cell(d), []).append(s)
    return LocalGrid(P, d, p, tuple(slots), dict(sorted(cells.items())))
