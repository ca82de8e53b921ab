"""Isotropy over the patching fields F_U, F_P, F_p of P^1 over Z_p, the
local-to-patch implication check, and the dimension threshold rules."""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .. import polys
from ..errors import NotLiftable, PrecisionExhausted, TheoremViolation
from ..fields import INF, LaurentField, PAdicField, prime_field
from ..forms import make_form
from ..isotropy import ProofNode, Verdict, decide_cdv, decide_fq
from .functionfield import DEFAULT_DEGREE_BUDGET, RationalFunctionField, decide_fqt
from .local import QRat, Series, binomial_coefficient
from .model import decompose_at_P, decompose_at_U, unit_residue, unit_series


@dataclass
class NodeResult:
    node: str
    verdict: Verdict
    witness: tuple = None
    witness_json: list = None
    precision: int = None
    tree: ProofNode = None
    note: str = ""
    block: object = None

    @property
    def isotropic(self):
        return self.verdict is Verdict.ISOTROPIC

    def to_json(self):
        out = {"node": self.node, "verdict": self.verdict.value}
        if self.block is not None:
            out["block"] = list(self.block) if isinstance(self.block, tuple) else self.block
        if self.isotropic:
            out["witness"] = self.witness_json
            out["precision"] = self.precision
        elif self.verdict is Verdict.ANISOTROPIC:
            out["tree"] = self.tree.to_json()
        if self.note:
            out["note"] = self.note
        return out


def node_U():
    return "U"


def node_P(model, P):
    return f"P={P.label(model.p)}"


def node_pair(model, P):
    return f"p=(U,P={P.label(model.p)})"


# --------------------------------------------------------------------------
# F_U: the s-adic completion with residue field k(U) = F_p(t)


def residue_forms_U(model):
    """rho-bar_j over F_p(t), keyed by j."""
    blocks, residues = decompose_at_U(model)
    F = RationalFunctionField(prime_field(model.p))
    return blocks, {j: make_form(model.degree, [F(r) for r in res], F) for j, res in residues.items()}


def _int_poly(a, p, M):
    """A p-integral rational polynomial as integers modulo p^M."""
    pm = p ** M
    return polys.trim(Fraction(c.numerator * pow(c.denominator, -1, pm) % pm) for c in a)


def _mod_poly(a, p, M):
    pm = p ** M
    return polys.trim(Fraction(int(c) % pm) for c in a)


def lift_U_witness(model, slots, residue_witness, prec):
    """Lift a zero of rho-bar_j to the s-adic completion.

    Entries other than the first nonzero one are lifted coefficientwise;
    the first is x~ (1 + w)^(1/d) with w = c / x~^d - 1 of Gauss valuation
    >= 1, expanded by the binomial series.
    """
    p, d = model.p, model.degree
    ws = [tuple(Fraction(c.n) for c in (r.num if r else ())) for r in residue_witness]
    i0 = next(i for i, w in enumerate(ws) if w)
    for M in (prec + 2, prec + 8, 2 * prec + 8):
        units = [_int_poly(s.unit.polynomial(), p, M) for s in slots]
        rest = ()
        for i, (u, w) in enumerate(zip(units, ws)):
            if i != i0 and w:
                rest = polys.add(rest, polys.mul(u, polys.power(w, d)))
        xt = ws[i0]
        # w = A / D with A = -rest - u_i0 x~^d and D = u_i0 x~^d
        D = _mod_poly(polys.mul(units[i0], polys.power(xt, d)), p, M)
        A = _mod_poly(polys.sub(polys.neg(rest), D), p, M)
        if QRat(A).gauss_valuation(p) < 1:
            raise NotLiftable("residue witness does not reduce to a zero")
        num = ()
        a_pow = (Fraction(1),)
        d_pows = [(Fraction(1),)]
        for _ in range(M - 1):
            d_pows.append(_mod_poly(polys.mul(d_pows[-1], D), p, M))
        for k in range(M):
            b = binomial_coefficient(d, k)
            term = polys.scale(polys.mul(a_pow, d_pows[M - 1 - k]), b)
            num = _mod_poly(polys.add(num, _int_poly(term, p, M)), p, M)
            a_pow = _mod_poly(polys.mul(a_pow, A), p, M)
        y = QRat(_mod_poly(polys.mul(xt, num), p, M), d_pows[M - 1])
        K = max(s.shift for s, w in zip(slots, ws) if w)
        entries = {}
        for i, (s, w) in enumerate(zip(slots, ws)):
            if not w:
                continue
            val = y if i == i0 else QRat(w)
            entries[s.index] = val * Fraction(p) ** (K - s.shift)
        x = tuple(entries.get(i, QRat(())) for i in range(len(model.coeffs)))
        if verify_U_witness(model, x, prec):
            return x
    raise PrecisionExhausted(f"could not lift the F_U witness to Gauss valuation {prec}")


def verify_U_witness(model, x, prec):
    """phi(x) has Gauss valuation >= prec + d * min Gauss valuation of x."""
    p, d = model.p, model.degree
    vals = [v.gauss_valuation(p) for v in x]
    mu = min(vals)
    if mu == INF:
        return False
    total = QRat(())
    for a, v in zip(model.coeffs, x):
        if not v.is_zero():
            total = total + QRat(a.polynomial()) * v ** d
    return total.gauss_valuation(p) >= prec + d * mu


def _in_R_U(model, w):
    """True when the polynomial w over F_p is a unit of F_p[t][1/f]."""
    K = prime_field(model.p)
    if polys.deg(w) <= 0:
        return True
    _, factors = polys.factor(w, K)
    roots = {P.residue for P in model.finite_points}
    return all(polys.deg(g) == 1 and (-g[0]).n in roots for g, _ in factors)


def decide_FU(model, degree_budget=DEFAULT_DEGREE_BUDGET, prec=None):
    """Isotropy over the s-adic completion of F with residue field k(U)."""
    prec = model.prec if prec is None else prec
    blocks, forms = residue_forms_U(model)
    children, unknown = [], []
    for j, rho in forms.items():
        cert = decide_fqt(rho, degree_budget)
        if cert.verdict is Verdict.ISOTROPIC:
            x = lift_U_witness(model, blocks[j], cert.witness, prec)
            i0 = next(i for i, w in enumerate(cert.witness) if w)
            where = "R_U" if _in_R_U(model, cert.witness[i0].num) else "the Gauss-valuation completion"
            return NodeResult(node_U(), Verdict.ISOTROPIC, x, [v.to_json() for v in x], prec,
                              block=j, note=f"rho_{j} isotropic over F_{model.p}(t); witness in {where}")
        if cert.verdict is Verdict.UNKNOWN:
            unknown.append(j)
        else:
            children.append((j, tuple(s.index for s in blocks[j]), cert.tree))
    if unknown:
        return NodeResult(node_U(), Verdict.UNKNOWN, note=f"rho_j undecided for j in {unknown}")
    # the s-adic completion; F_U itself is not claimed
    top = make_form(model.degree, [c for rho in forms.values() for c in rho.coeffs],
                    next(iter(forms.values())).field)
    tree = ProofNode("springer", top, children=tuple(children),
                     label="s-adic completion: every rho_j anisotropic over k(U)")
    return NodeResult(node_U(), Verdict.ANISOTROPIC, tree=tree,
                      note="anisotropic over the s-adic completion of F")


# --------------------------------------------------------------------------
# F_P: the local grid at a closed point


def _cell_label(cell):
    i, j = cell
    return f"x^{i} y^{j}"


def _shifts(grid):
    d = grid.degree
    cx = max(0, -min(s.ex for s in grid.slots))
    cy = max(0, -min(s.ey for s in grid.slots))
    return cx, cy


def verify_P_witness(model, grid, X, N):
    """(x^cx p^cy) phi(X) vanishes modulo (x, p)^(N + d mu), mu = min order of X."""
    p, d = model.p, model.degree
    orders = [s.order() for s in X]
    mu = min(orders)
    if mu == INF:
        return False
    V = N + d * mu
    cx, cy = _shifts(grid)
    total = Series(p, V)
    for s, Xs in zip(grid.slots, X):
        if Xs.c:
            term = unit_series(s, grid.point, p, V) * Xs.with_precision(V) ** d
            total = total + term.shift(s.ex + cx, s.ey + cy)
    return total == 0


def lift_P_witness(model, grid, cell, z, N):
    p, d = model.p, model.degree
    slots = grid.cells[cell]
    zs = [v.n for v in z]
    i0 = next(i for i, v in enumerate(zs) if v)
    live = [s for s, v in zip(slots, zs) if v]
    Kx = max(s.ex // d for s in live)
    Ky = max(s.ey // d for s in live)
    spread = d * (Kx + Ky - min(s.ex // d for s in live) - min(s.ey // d for s in live))
    W = N + spread + 2
    for _ in range(4):
        units = [unit_series(s, grid.point, p, W) for s in slots]
        rest = Series(p, W)
        for i, (u, v) in enumerate(zip(units, zs)):
            if i != i0 and v:
                rest = rest + u * v ** d
        target = -rest * units[i0].inverse()
        Z = target.dth_root(d, zs[i0])
        X = [Series(p, W) for _ in grid.slots]
        pos = {s.index: k for k, s in enumerate(grid.slots)}
        for i, (s, v) in enumerate(zip(slots, zs)):
            if not v:
                continue
            base = Z if i == i0 else Series.constant(p, W, v)
            X[pos[s.index]] = base.shift(Kx - s.ex // d, Ky - s.ey // d)
        if verify_P_witness(model, grid, X, N):
            return X
        W += N
    raise PrecisionExhausted(f"could not lift the grid witness at bidegree {N}")


def decide_FP(model, P, N=None):
    """Isotropic iff some cell phi-bar_ij is isotropic over kappa(P) = F_p."""
    N = model.grid_prec if N is None else N
    P = model.point(P)
    grid = decompose_at_P(model, P)
    children = []
    for cell in grid.cells:
        rf = grid.residue_form(cell)
        cert = decide_fq(rf)
        if cert.isotropic:
            X = lift_P_witness(model, grid, cell, cert.witness, N)
            order = [s.index for s in grid.slots]
            by_slot = dict(zip(order, X))
            witness = tuple(by_slot[i] for i in range(len(model.coeffs)))
            return NodeResult(node_P(model, P), Verdict.ISOTROPIC, witness,
                              [w.to_json() for w in witness], N, block=cell,
                              note=f"cell {_cell_label(cell)} isotropic over F_{model.p}")
        children.append((_cell_label(cell), tuple(s.index for s in grid.cells[cell]), cert.tree))
    tree = ProofNode("patch_grid", local_tower_form(model, P), children=tuple(children),
                     label=f"every cell at {P.label(model.p)} anisotropic")
    return NodeResult(node_P(model, P), Verdict.ANISOTROPIC, tree=tree)


def local_tower_form(model, P):
    """phi at P as monomials over kappa(P)((x))((y)); Springer over this tower
    sees exactly the grid cells."""
    grid = decompose_at_P(model, P)
    k = prime_field(model.p)
    X = LaurentField(k, "x")
    Y = LaurentField(X, "y")
    coeffs = [None] * len(model.coeffs)
    for s in grid.slots:
        r = unit_residue(s, grid.point, model.p)
        coeffs[s.index] = Y.monomial(X.monomial(r, s.ex), s.ey)
    return make_form(model.degree, coeffs, Y)


def decide_Fp(model, P, N=None):
    """F_p is complete with residue field kappa(P)((x)): Springer twice. An
    isotropic verdict carries the F_P witness, valid since R-hat_P lies in R_p."""
    P = model.point(P)
    cert = decide_cdv(local_tower_form(model, P))
    node = node_pair(model, P)
    if cert.anisotropic:
        return NodeResult(node, Verdict.ANISOTROPIC, tree=cert.tree)
    fp = decide_FP(model, P, N)
    if not fp.isotropic:
        raise TheoremViolation(f"branch field at {P.label(model.p)} isotropic but F_P is not")
    return NodeResult(node, Verdict.ISOTROPIC, fp.witness, fp.witness_json, fp.precision,
                      block=list(cert.path), note="witness from the completed local ring at P")


# --------------------------------------------------------------------------
# the implication check


def sample_points(model):
    """Degree-one closed points t = beta of the generic fiber, then infinity."""
    p = model.p
    betas = set(model.alphas) | {Fraction(b) for b in range(p)} | {Fraction(p), Fraction(p + 1), Fraction(1, p)}
    return sorted(betas) + [None]


def generic_point_form(model, beta):
    """phi over Q_p((s)), s = t - beta (or 1/t), as monomials lead * s^v."""
    C = LaurentField(PAdicField(model.p, model.prec), "s")
    coeffs = []
    for a in model.coeffs:
        if beta is None:
            coeffs.append(C.monomial(a.c, a.order_at_infinity))
        else:
            coeffs.append(C.monomial(a.value_at(beta, skip=beta), a.multiplicity(beta)))
    return make_form(model.degree, coeffs, C)


def _point_label(beta):
    return "t = infinity" if beta is None else f"t = {beta}"


@dataclass
class TheoremReport:
    model: object
    hypothesis: list = dc_field(default_factory=list)
    fast_path: bool = False
    status: str = ""
    violated_at: str = None
    nodes: list = dc_field(default_factory=list)
    asserted: bool = False

    def to_json(self):
        return {
            "model": self.model.to_json(),
            "hypothesis": self.hypothesis,
            "fast_path": self.fast_path,
            "status": self.status,
            "violated_at": self.violated_at,
            "asserted": self.asserted,
            "nodes": [n.to_json() for n in self.nodes],
        }


def decide_nodes(model, degree_budget=DEFAULT_DEGREE_BUDGET):
    out = [decide_FU(model, degree_budget)]
    out += [decide_FP(model, P) for P in model.points]
    out += [decide_Fp(model, P) for P in model.points]
    return out


def check_theorem21(model, degree_budget=DEFAULT_DEGREE_BUDGET):
    """Check the hypothesis on engine-visible valuations, then assert that every
    patching field sees an isotropic form."""
    d, n = model.degree, len(model.coeffs)
    report = TheoremReport(model)
    nodes = decide_nodes(model, degree_budget)
    report.nodes = nodes
    inconclusive = []
    if n > d ** 3 + 1:
        report.fast_path = True
        report.hypothesis.append({"valuation": "all", "verdict": "isotropic",
                                  "reason": f"dimension {n} > d^3+1 = {d ** 3 + 1}"})
    else:
        gauss = nodes[0]
        report.hypothesis.append({"valuation": "Gauss valuation", "verdict": gauss.verdict.value})
        if gauss.verdict is Verdict.ANISOTROPIC:
            report.violated_at = "the Gauss valuation"
        elif gauss.verdict is Verdict.UNKNOWN:
            inconclusive.append("the Gauss valuation")
        for beta in sample_points(model):
            cert = decide_cdv(generic_point_form(model, beta), model.prec)
            label = _point_label(beta)
            report.hypothesis.append({"valuation": label, "verdict": cert.verdict.value})
            if cert.anisotropic and report.violated_at is None:
                report.violated_at = label
            elif cert.verdict is Verdict.UNKNOWN:
                inconclusive.append(label)
    if report.violated_at is not None:
        report.status = f"hypothesis violated at {report.violated_at}; no assertion made"
        return report
    if inconclusive:
        report.status = f"inconclusive: hypothesis undecided at {', '.join(inconclusive)}"
        return report
    report.asserted = True
    undecided = [r.node for r in nodes if r.verdict is Verdict.UNKNOWN]
    failed = [r.node for r in nodes if r.verdict is Verdict.ANISOTROPIC]
    if failed:
        raise TheoremViolation(f"hypothesis holds but the form is anisotropic at {', '.join(failed)}")
    if undecided:
        report.status = f"inconclusive: search budget exhausted at {', '.join(undecided)}"
    else:
        report.status = "hypothesis holds; isotropic at U, every P in S and every pair (U,P)"
    return report


# --------------------------------------------------------------------------
# threshold rules


def threshold_report(d, n, r=None, k_finite=True, hypothesis="u_diag"):
    """Which dimension rule guarantees local isotropy of an n-dimensional form.

    ``hypothesis`` says what the declared r means: "u_diag" for
    u_diag(d, k(t)) = d r with 1 <= r <= d-1, or "function_fields" for
    "every diagonal form in more than d r variables over every one-variable
    function field over k is isotropic".
    """
    rules = []
    bound = d ** 3 + 1
    rules.append({
        "rule": "d^3+1",
        "hypothesis": "K p-adic with finite residue field, char k not dividing d!",
        "declared": bool(k_finite),
        "inequality": f"{n} > {bound}",
        "holds": n > bound,
    })
    if r is not None and hypothesis == "u_diag":
        ok = 1 <= r <= d - 1
        bound = d * d * r + 1
        rules.append({
            "rule": "d^2 r+1",
            "hypothesis": f"u_diag(d, k(t)) = d r = {d * r} < d^2",
            "declared": ok,
            "inequality": f"{n} > {bound}",
            "holds": n > bound,
        })
    if r is not None and hypothesis == "function_fields":
        ok = r >= 1 and d >= 3
        bound = d * d * r
        rules.append({
            "rule": "d^2 r",
            "hypothesis": f"forms in more than d r = {d * r} variables over one-variable function fields over k are isotropic",
            "declared": ok,
            "inequality": f"{n} > {bound}",
            "holds": n > bound,
        })
    for rule in rules:
        rule["applies"] = rule["declared"] and rule["holds"]
    by = [rule["rule"] for rule in rules if rule["applies"]]
    return {"d": d, "n": n, "r": r, "rules": rules, "guaranteed": bool(by), "guaranteed_by": by,
            "conclusion": ("isotropic over every F_v, F_U and F_P" if by else "no guarantee")}
