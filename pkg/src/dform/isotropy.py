"""Isotropy decisions with certificates.

Over F_q the decision is an exhaustive search over slot values (a
meet-in-the-middle join of partial sums); over a complete discretely valued
tower it is the Springer recursion: the form is isotropic iff one of its
residue blocks is, and an isotropic residue block is Hensel-lifted to a
witness. Anisotropy over valued fields is certified by the recursion tree,
never by a failed search.
"""

import enum
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import (
    CertificateError,
    DimensionMismatch,
    InexactCoefficient,
    NotAnisotropic,
    NotLiftable,
    PrecisionExhausted,
    ZeroVector,
)
from .fields import DEFAULT_PREC, INF, check_characteristic
from .forms import DiagonalForm, evaluate, form_text, springer_decompose

_LIFT_GUARDS = (4, 12, 40)


class Verdict(str, enum.Enum):
    ISOTROPIC = "isotropic"
    ANISOTROPIC = "anisotropic"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ProofNode:
    """One node of an anisotropy proof.

    ``exhausted`` leaves record a complete search over a finite field;
    ``springer`` nodes map each block j to the proof for its residue form.
    Other kinds (local obstructions, patching grids) are produced by the
    patching module and carry a free-form ``label``.
    """

    kind: str
    form: DiagonalForm
    searched: int = 0
    children: tuple = ()
    label: str = ""

    def to_json(self):
        F = self.form.field
        out = {"kind": self.kind, "field": F.label,
               "form": [F.element_to_json(a) for a in self.form.coeffs],
               "text": form_text(self.form)}
        if self.label:
            out["label"] = self.label
        if self.kind == "exhausted":
            out["searched"] = self.searched
        if self.children:
            out["blocks"] = [{"j": j, "slots": list(slots), "proof": child.to_json()}
                             for j, slots, child in self.children]
        return out

    def leaves(self):
        if not self.children:
            yield self
        for _, _, child in self.children:
            yield from child.leaves()

    def depth(self):
        return 0 if not self.children else 1 + max(c.depth() for _, _, c in self.children)


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    form: DiagonalForm
    witness: tuple = None
    precision: int = None
    tree: ProofNode = None
    note: str = ""
    path: tuple = ()

    @property
    def isotropic(self):
        return self.verdict is Verdict.ISOTROPIC

    @property
    def anisotropic(self):
        return self.verdict is Verdict.ANISOTROPIC

    def to_json(self):
        out = {"verdict": self.verdict.value}
        if self.verdict is Verdict.ISOTROPIC:
            F = self.witness_field
            out["witness"] = [F.element_to_json(x) for x in self.witness]
            out["precision"] = self.precision
            if self.path:
                out["blocks"] = list(self.path)
        elif self.verdict is Verdict.ANISOTROPIC:
            out["tree"] = self.tree.to_json()
        else:
            out["budget_note"] = self.note
        if self.note and self.verdict is not Verdict.UNKNOWN:
            out["note"] = self.note
        return out

    @property
    def witness_field(self):
        return self.form.field


# --------------------------------------------------------------------------
# finite fields


@lru_cache(maxsize=256)
def _root_table(F, d):
    """Map each nonzero d-th power h to its least d-th root."""
    table = {}
    for y in F.units():
        table.setdefault(y ** d, y)
    return table


def _slot_values(F, a, d):
    return [(F.zero, F.zero)] + [(a * h, y) for h, y in _root_table(F, d).items()]


def _partial_sums(F, value_lists):
    sums = {F.zero: ((), False)}
    for vals in value_lists:
        new = {}
        for s, (vec, nz) in sums.items():
            for v, y in vals:
                s2 = s + v
                nz2 = nz or y != 0
                cur = new.get(s2)
                if cur is None or (nz2 and not cur[1]):
                    new[s2] = (vec + (y,), nz2)
        sums = new
    return sums


def _normalize_fq_witness(x):
    lead = next(v for v in x if v != 0)
    inv = 1 / lead
    return tuple(v * inv for v in x)


def _mitm_zero(form):
    F, d = form.field, form.degree
    values = [_slot_values(F, a, d) for a in form.coeffs]
    half = (len(values) + 1) // 2
    left = _partial_sums(F, values[:half])
    right = _partial_sums(F, values[half:])
    for s, (vr, nzr) in sorted(right.items(), key=lambda kv: kv[0].n):
        hit = left.get(-s)
        if hit is not None and (hit[1] or nzr):
            return hit[0] + vr
    return None


def decide_fq(form, seed=0):
    """Decide isotropy of a diagonal form over a finite field."""
    F, d = form.field, form.degree
    check_characteristic(F, d)
    n = form.dim
    ds = F.d_star(d)
    searched = (len(_root_table(F, d)) + 1) ** n
    if n > ds:
        # isotropic since u_diag(d, F_q) <= d*; random probing usually wins fast
        rng = random.Random(seed)
        elems = list(F.elements())
        for _ in range(64 * n):
            x = tuple(rng.choice(elems) for _ in range(n))
            if any(v != 0 for v in x) and evaluate(form, x) == 0:
                return Certificate(Verdict.ISOTROPIC, form, _normalize_fq_witness(x),
                                   note="randomized search")
    x = _mitm_zero(form)
    if x is not None:
        return Certificate(Verdict.ISOTROPIC, form, _normalize_fq_witness(x))
    return Certificate(Verdict.ANISOTROPIC, form,
                       tree=ProofNode("exhausted", form, searched=searched))


def enumerate_zero(form):
    """Naive search over all nonzero vectors with first nonzero entry 1."""
    F = form.field
    elems = list(F.elements())
    n = form.dim
    for k in range(n):
        for rest in product(elems, repeat=n - k - 1):
            x = (F.zero,) * k + (F.one,) + rest
            if evaluate(form, x) == 0:
                return x
    return None


# --------------------------------------------------------------------------
# valued towers


def decide(form, prec=DEFAULT_PREC, seed=0):
    if form.field.is_finite:
        return decide_fq(form, seed)
    return decide_cdv(form, prec, seed)


def decide_cdv(form, prec=DEFAULT_PREC, seed=0):
    """Springer recursion: isotropic iff some residue block is isotropic."""
    F = form.field
    check_characteristic(F, form.degree)
    for i, a in enumerate(form.coeffs):
        if not F.is_exact(a):
            raise InexactCoefficient(f"coefficient {i} is only known to finite precision")
    decomp = springer_decompose(form)
    children = []
    unknown = []
    for j, block in decomp.blocks.items():
        sub = decide(block.residue_form, prec, seed)
        if sub.verdict is Verdict.ISOTROPIC:
            x = lift_witness(decomp, j, sub.witness, prec)
            return Certificate(Verdict.ISOTROPIC, form, tuple(x), precision=prec,
                               path=(j,) + sub.path)
        if sub.verdict is Verdict.UNKNOWN:
            unknown.append(j)
        else:
            children.append((j, block.indices, sub.tree))
    if unknown:
        return Certificate(Verdict.UNKNOWN, form, note=f"residue blocks {unknown} undecided")
    return Certificate(Verdict.ANISOTROPIC, form,
                       tree=ProofNode("springer", form, children=tuple(children)))


def _order(R, v):
    return R.valuation_of(v)


def _normalizing_scale(R, vec):
    """Monomial s in the uniformizers of R making vec*s primitive at every level."""
    if R.is_finite:
        return R.one
    m = min(R.valuation(v) for v in vec)
    if m == INF:
        raise ZeroVector("zero vector")
    s = R.uniformizer_power(-m)
    vec = [v * s for v in vec]
    inner = _normalizing_scale(R.residue_field, [R.reduce(v) for v in vec])
    return s * R.lift(inner)


def normalize_vector(F, x):
    """Scale x by uniformizer powers so its minimum valuation is 0 at every level."""
    x = [F(v) for v in x]
    if all(v == 0 for v in x):
        raise ZeroVector("zero vector")
    if F.is_finite:
        return x
    s = _normalizing_scale(F, x)
    return [v * s for v in x]


def lift_witness(decomp, j, residue_witness, prec=DEFAULT_PREC):
    """Hensel-lift a zero of the residue of block j to a zero of the whole form.

    All coordinates but one (the least index of minimal residue order) are
    lifted canonically; that one is solved for by a d-th root. Coordinates
    outside the block are zero.
    """
    form = decomp.form
    F, d = form.field, form.degree
    R = F.residue_field
    block = decomp.blocks[j]
    xbar = [R(v) for v in residue_witness]
    if len(xbar) != len(block.indices):
        raise DimensionMismatch(f"residue witness has {len(xbar)} entries, block has {len(block.indices)}")
    if all(v == 0 for v in xbar):
        raise NotLiftable("residue witness is zero")
    xbar = normalize_vector(R, xbar)
    if not R.approx_zero(evaluate(block.residue_form, xbar), prec):
        raise NotLiftable("residue witness is not a zero of the residue form")
    orders = [_order(R, v) for v in xbar]
    i0 = orders.index(min(orders))
    if sum(1 for o in orders if o != INF) < 2:
        raise NotLiftable("a single nonzero slot cannot be a zero")
    for guard in _LIFT_GUARDS:
        W = prec + guard
        ys = [F.lift(v) for v in xbar]
        rest = F.zero
        for i, (u, y) in enumerate(zip(block.units, ys)):
            if i != i0 and y != 0:
                rest = rest + u * y ** d
        c = F.truncate(-rest * F.inverse(block.units[i0], W), W)
        ys[i0] = F.dth_root(c, d, W)
        K = max(k for k, y in zip(block.shifts, ys) if y != 0)
        x = [F.zero] * form.dim
        for slot, y, k in zip(block.indices, ys, block.shifts):
            x[slot] = y * F.uniformizer_power(K - k) if y != 0 else F.zero
        if verify_witness(form, x, prec):
            return x
    raise PrecisionExhausted(f"could not lift the block-{j} witness to precision {prec}")


def verify_witness(form, x, threshold=None):
    """True iff x is a nonzero vector at which the form vanishes (exactly over
    F_q, to valuation >= threshold after normalisation over valued fields)."""
    F = form.field
    if len(x) != form.dim:
        raise DimensionMismatch(f"vector of length {len(x)} for a form of dimension {form.dim}")
    x = [F(v) for v in x]
    if all(v == 0 for v in x):
        raise ZeroVector("the zero vector is not a witness")
    if F.is_finite:
        return evaluate(form, x) == 0
    T = F.prec if threshold is None else threshold
    x = normalize_vector(F, x)
    return F.approx_zero(evaluate(form, x), T)


def anisotropic_value_valuation(form, x, certificate=None):
    """v(phi(x)) for an anisotropic form; checks it equals min_i v(a_i) + d v(x_i)."""
    cert = certificate or decide(form)
    if cert.verdict is not Verdict.ANISOTROPIC:
        raise NotAnisotropic(f"form is {cert.verdict.value}")
    F, d = form.field, form.degree
    x = [F(v) for v in x]
    if all(v == 0 for v in x):
        raise ZeroVector("zero vector")
    got = F.valuation(evaluate(form, x))
    expected = min(F.valuation(a) + d * F.valuation(v) for a, v in zip(form.coeffs, x))
    if got != expected:
        raise CertificateError(f"value valuation {got} != {expected} for an anisotropic form")
    return got


def check_anisotropy_tree(form, node):
    """Re-derive an anisotropy proof from scratch and compare it with ``node``."""
    F = form.field
    if F.is_finite:
        if node["kind"] != "exhausted":
            return False
        if F.q ** form.dim <= 10 ** 6:
            return enumerate_zero(form) is None
        return decide_fq(form).anisotropic
    if node["kind"] != "springer":
        return False
    decomp = springer_decompose(form)
    blocks = {b["j"]: b for b in node.get("blocks", [])}
    if set(blocks) != set(decomp.blocks):
        return False
    for j, block in decomp.blocks.items():
        if tuple(blocks[j]["slots"]) != block.indices:
            return False
        if not check_anisotropy_tree(block.residue_form, blocks[j]["proof"]):
            return False
    return True
