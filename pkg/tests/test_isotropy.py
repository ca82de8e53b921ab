from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dform.errors import NotAnisotropic, NotLiftable, ZeroVector
from dform.fields import LaurentField, PAdicField, finite_field, tower
from dform.forms import evaluate, make_form, springer_decompose
from dform.isotropy import (
    Verdict,
    anisotropic_value_valuation,
    check_anisotropy_tree,
    decide,
    enumerate_zero,
    lift_witness,
    verify_witness,
)

from oracles import achievable_isotropic_prime, laurent_has_primitive_zero, padic_has_primitive_zero

F7 = finite_field(7)
Q7 = PAdicField(7)
L7 = LaurentField(F7, "t")


@settings(max_examples=150)
@given(st.sampled_from([(5, 3), (7, 3), (13, 3), (13, 4), (11, 5), (17, 4)]), st.data())
def test_finite_field_verdict_matches_oracle(pd, data):
    p, d = pd
    coeffs = data.draw(st.lists(st.integers(1, p - 1), min_size=1, max_size=5))
    cert = decide(make_form(d, coeffs, finite_field(p)))
    assert cert.isotropic == achievable_isotropic_prime(p, d, coeffs)
    if cert.isotropic:
        assert sum(a * pow(x.n, d, p) for a, x in zip(coeffs, cert.witness)) % p == 0


def test_extension_field_decision_against_enumeration():
    F = finite_field(5, 2)
    g = F.generator
    for coeffs in ([F.one, g], [F.one, g, g ** 2], [g, g ** 5]):
        f = make_form(3, coeffs, F)
        cert = decide(f)
        assert cert.isotropic == (enumerate_zero(f) is not None)


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(1, 6), st.integers(0, 1)), min_size=1, max_size=4))
def test_padic_verdict_matches_oracle(slots):
    coeffs = [c * 7 ** a for c, a in slots]
    cert = decide(make_form(3, coeffs, Q7))
    maxv = max(a for _, a in slots)
    assert cert.verdict is not Verdict.UNKNOWN
    assert cert.isotropic == padic_has_primitive_zero(7, 3, coeffs, maxv + 1)


@settings(max_examples=25)
@given(st.lists(st.tuples(st.integers(1, 6), st.integers(0, 1)), min_size=1, max_size=3))
def test_laurent_verdict_matches_oracle(slots):
    coeffs = [L7({a: c}) for c, a in slots]
    series = [[0] * a + [c] for c, a in slots]
    cert = decide(make_form(3, coeffs, L7))
    maxv = max(a for _, a in slots)
    assert cert.isotropic == laurent_has_primitive_zero(7, 3, series, maxv + 1)


def test_anisotropic_tree_shape():
    f = make_form(3, [1, 2, 7, 14, 49, 98], Q7)
    cert = decide(f)
    assert cert.anisotropic
    tree = cert.tree
    assert tree.kind == "springer"
    assert [j for j, _, _ in tree.children] == [0, 1, 2]
    assert all(leaf.kind == "exhausted" for leaf in tree.leaves())
    assert check_anisotropy_tree(f, tree.to_json())


def test_tampered_tree_rejected():
    f = make_form(3, [1, 2, 7, 14, 49, 98], Q7)
    tree = decide(f).tree.to_json()
    tree["blocks"][0]["slots"] = [0]
    assert not check_anisotropy_tree(f, tree)
    assert not check_anisotropy_tree(make_form(3, [1, 6, 7], Q7), decide(f).tree.to_json())


def test_isotropic_witness_precision():
    f = make_form(3, [1, 2, 3, 7], Q7)
    cert = decide(f, prec=30)
    assert cert.isotropic
    x = cert.witness
    assert min(Q7.valuation(v) for v in x if v != 0) == 0
    assert Q7.valuation(evaluate(f, x)) >= 30


def test_q5_block_zero_lift():
    # residue zero of <1,2> over F_5 is (1,3): 1 + 2*27 = 55; (1,4) gives 129 = 4 mod 5
    Q5 = PAdicField(5)
    f = make_form(3, [1, 2, 5], Q5)
    cert = decide(f, prec=20)
    assert cert.isotropic
    x1, x2, x3 = cert.witness
    assert x3 == 0 and Q5.residue(x2).n == 3
    assert Q5.valuation(x1 ** 3 + 2 * x2 ** 3) >= 20


def test_witness_in_higher_block_is_scaled():
    f = make_form(3, [1, 7, 7 * 6, 2 * 343], Q7)
    cert = decide(f)
    assert cert.isotropic and cert.path[0] == 1
    assert verify_witness(f, cert.witness, 20)


def test_two_level_tower():
    T = tower(F7, ["t1", "t2"])
    t1 = T.residue_field.gen
    f = make_form(3, [T.one, T(2), T(t1), T(2 * t1), T.gen, T(6) * T.gen], T)
    cert = decide(f)
    assert cert.isotropic
    assert verify_witness(f, cert.witness, 20)


def test_lift_rejects_bad_residue_witness():
    f = make_form(3, [1, 2, 3], Q7)
    dec = springer_decompose(f)
    with pytest.raises(NotLiftable):
        lift_witness(dec, 0, [F7(1), F7(0), F7(0)])
    with pytest.raises(NotLiftable):
        lift_witness(dec, 0, [F7(1), F7(1), F7(1)])


def test_value_valuation_identity_needs_anisotropy():
    with pytest.raises(NotAnisotropic):
        anisotropic_value_valuation(make_form(3, [1, 6], Q7), [1, 1])
    f = make_form(3, [1, 2, 7], Q7)
    with pytest.raises(ZeroVector):
        anisotropic_value_valuation(f, [0, 0, 0])
    assert anisotropic_value_valuation(f, [Fraction(1, 7), 1, 0]) == -3


def test_verify_witness_rejects_non_zero():
    f = make_form(3, [1, 2], F7)
    assert not verify_witness(f, [1, 1])
    with pytest.raises(ZeroVector):
        verify_witness(f, [0, 0])


def test_seed_does_not_change_result():
    f = make_form(3, [1, 2, 3, 4, 5], finite_field(13))
    a, b = decide(f, seed=0), decide(f, seed=99)
    assert a.verdict == b.verdict
