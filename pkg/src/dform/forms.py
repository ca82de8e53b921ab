"""Diagonal forms <a_1, ..., a_n> of degree d and their Springer decomposition."""

from dataclasses import dataclass, field as dc_field

from .errors import (
    DegenerateForm,
    DegreeMismatch,
    DimensionMismatch,
    FieldMismatch,
    InputError,
    UnsupportedDegree,
)
from .fields import check_characteristic


@dataclass(frozen=True)
class DiagonalForm:
    field: object
    degree: int
    coeffs: tuple

    @property
    def dim(self):
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        inner = ", ".join(repr(a) for a in self.coeffs)
        return f"<{inner}> (d={self.degree}) over {self.field.label}"

    def to_json(self):
        return {
            "degree": self.degree,
            "field": self.field.to_json(),
            "coeffs": [self.field.element_to_json(a) for a in self.coeffs],
        }


def make_form(d, coeffs, field):
    """Validated diagonal form of degree d; coefficients are coerced into ``field``."""
    if d < 2:
        raise InputError("degree must be at least 2")
    coeffs = tuple(field(a) for a in coeffs)
    if not coeffs:
        raise InputError("a diagonal form needs at least one slot")
    check_characteristic(field, d)
    for i, a in enumerate(coeffs):
        if a == 0:
            raise DegenerateForm(f"coefficient {i} is zero")
    return DiagonalForm(field, d, coeffs)


def form_from_json(obj, field_from_json):
    try:
        field = field_from_json(obj["field"])
        coeffs = [field.element_from_json(a) for a in obj["coeffs"]]
        return make_form(int(obj["degree"]), coeffs, field)
    except KeyError as exc:
        raise InputError(f"form descriptor is missing {exc}") from exc


def evaluate(form, x):
    if len(x) != form.dim:
        raise DimensionMismatch(f"vector of length {len(x)} for a form of dimension {form.dim}")
    F = form.field
    d = form.degree
    total = F.zero
    for a, xi in zip(form.coeffs, x):
        xi = F(xi)
        if xi != 0:
            total = total + a * xi ** d
    return total


def orthogonal_sum(phi, psi):
    if phi.field != psi.field:
        raise FieldMismatch(f"{phi.field.label} vs {psi.field.label}")
    if phi.degree != psi.degree:
        raise DegreeMismatch(f"{phi.degree} vs {psi.degree}")
    return DiagonalForm(phi.field, phi.degree, phi.coeffs + psi.coeffs)


def scaled(form, c):
    """The form c*phi."""
    c = form.field(c)
    return make_form(form.degree, [c * a for a in form.coeffs], form.field)


def permuted(form, perm):
    return DiagonalForm(form.field, form.degree, tuple(form.coeffs[i] for i in perm))


@dataclass(frozen=True)
class SpringerBlock:
    """Slots whose valuation is congruent to ``j`` modulo d.

    Slot ``indices[i]`` has coefficient units[i] * pi^(j + d*shifts[i]).
    """

    j: int
    indices: tuple
    units: tuple
    shifts: tuple
    unit_form: DiagonalForm
    residue_form: DiagonalForm


@dataclass(frozen=True)
class SpringerDecomposition:
    form: DiagonalForm
    blocks: dict = dc_field(default_factory=dict)

    def block_of(self, slot):
        for b in self.blocks.values():
            if slot in b.indices:
                return b
        raise KeyError(slot)

    def reassembled(self):
        """The form with d-th powers stripped: slot i becomes u_i * pi^j."""
        F = self.form.field
        coeffs = [None] * self.form.dim
        for b in self.blocks.values():
            pj = F.uniformizer_power(b.j)
            for i, u in zip(b.indices, b.units):
                coeffs[i] = u * pj
        return DiagonalForm(F, self.form.degree, tuple(coeffs))

    def stripped_shift(self, slot):
        b = self.block_of(slot)
        return b.shifts[b.indices.index(slot)]


def springer_decompose(form):
    """Sort slots by valuation mod d and strip the d-th powers of the uniformizer."""
    F = form.field
    if F.is_finite:
        raise InputError("Springer decomposition needs a valued field")
    d = form.degree
    groups = {}
    for i, a in enumerate(form.coeffs):
        v = F.valuation(a)
        j, k = v % d, v // d
        groups.setdefault(j, []).append((i, F.unit_part(a), k))
    blocks = {}
    R = F.residue_field
    for j in sorted(groups):
        idx, units, shifts = zip(*groups[j])
        blocks[j] = SpringerBlock(
            j=j,
            indices=tuple(idx),
            units=tuple(units),
            shifts=tuple(shifts),
            unit_form=DiagonalForm(F, d, tuple(units)),
            residue_form=DiagonalForm(R, d, tuple(F.residue(u) for u in units)),
        )
    return SpringerDecomposition(form, blocks)


def power_classes(form):
    F, d = form.field, form.degree
    return [F.dth_power_class(a, d) for a in form.coeffs]


def is_isomorphic(phi, psi):
    """Return (True, perm) with <psi_i> = <phi_perm[i]> up to d-th powers, or (False, None).

    Only for d >= 3, where isometry of diagonal forms reduces to matching
    slots by d-th power class.
    """
    if phi.degree != psi.degree:
        raise DegreeMismatch(f"{phi.degree} vs {psi.degree}")
    if phi.degree < 3:
        raise UnsupportedDegree("slot-matching isomorphism test needs d >= 3")
    if phi.field != psi.field:
        raise FieldMismatch(f"{phi.field.label} vs {psi.field.label}")
    if phi.dim != psi.dim:
        return False, None
    free = {}
    for i, c in enumerate(power_classes(phi)):
        free.setdefault(c, []).append(i)
    perm = []
    for c in power_classes(psi):
        slots = free.get(c)
        if not slots:
            return False, None
        perm.append(slots.pop(0))
    return True, tuple(perm)


def format_element(F, x):
    """Compact text for an element: 2, 3/7, 2t^2 + t, (1+x)y, a+1."""
    terms = getattr(x, "terms", None)
    if terms is None:
        if F.is_finite:
            return str(x.n) if F.e == 1 else repr(x)
        return str(x)
    if not terms:
        return "0"
    R, v = F.residue_field, F.var
    parts = []
    for k in sorted(terms):
        c = format_element(R, terms[k])
        if k == 0:
            parts.append(c)
            continue
        mono = v if k == 1 else f"{v}^{k}"
        if c == "1":
            parts.append(mono)
        elif c == "-1":
            parts.append("-" + mono)
        elif any(ch in c for ch in "+ ") or ("-" in c[1:]):
            parts.append(f"({c}){mono}")
        else:
            parts.append(c + mono)
    return " + ".join(parts)


def form_text(form):
    inner = ",".join(format_element(form.field, a) for a in form.coeffs)
    return f"⟨{inner}⟩"
