from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dform.errors import DegenerateForm, DimensionMismatch, InputError, UnsupportedDegree
from dform.fields import LaurentField, PAdicField, finite_field
from dform.forms import (
    evaluate,
    form_text,
    is_isomorphic,
    make_form,
    orthogonal_sum,
    permuted,
    scaled,
    springer_decompose,
)

Q7 = PAdicField(7)
F7 = finite_field(7)
L7 = LaurentField(F7, "t")


def test_zero_coefficient_rejected():
    with pytest.raises(DegenerateForm):
        make_form(3, [1, 0, 2], F7)


def test_degree_one_rejected():
    with pytest.raises(InputError):
        make_form(1, [1, 2], Q7)


def test_evaluate_and_dimension_check():
    f = make_form(3, [1, 2], F7)
    assert evaluate(f, [1, 3]) == F7(1 + 2 * 27)
    with pytest.raises(DimensionMismatch):
        evaluate(f, [1])


def test_orthogonal_sum_and_scaling():
    f = make_form(3, [1, 2], Q7)
    g = orthogonal_sum(f, make_form(3, [7], Q7))
    assert g.coeffs == (1, 2, 7)
    assert scaled(g, 3).coeffs == (3, 6, 21)
    assert permuted(g, [2, 0, 1]).coeffs == (7, 1, 2)


def test_springer_blocks_of_demo_form():
    f = make_form(3, [1, 2, 7, 14, 49, 98, 343], Q7)
    dec = springer_decompose(f)
    assert sorted(dec.blocks) == [0, 1, 2]
    assert dec.blocks[0].indices == (0, 1, 6)
    assert dec.blocks[0].shifts == (0, 0, 1)
    assert [a.n for a in dec.blocks[1].residue_form.coeffs] == [1, 2]


@given(st.lists(st.tuples(st.integers(1, 6), st.integers(-4, 8)), min_size=1, max_size=8))
def test_springer_reassembly_differs_by_dth_powers(slots):
    f = make_form(3, [c * Fraction(7) ** a for c, a in slots], Q7)
    dec = springer_decompose(f)
    g = dec.reassembled()
    for i, (a, b) in enumerate(zip(f.coeffs, g.coeffs)):
        k = dec.stripped_shift(i)
        assert a == b * Fraction(7) ** (3 * k)
        assert 0 <= Q7.valuation(b) < 3


def test_springer_over_laurent_tower():
    f = make_form(3, [L7({0: 1}), L7({4: 2}), L7({2: 3, 3: 1})], L7)
    dec = springer_decompose(f)
    assert {j: b.indices for j, b in dec.blocks.items()} == {1: (1,), 2: (2,), 0: (0,)}
    assert dec.blocks[2].residue_form.coeffs == (F7(3),)


def test_isomorphism_by_power_classes():
    f = make_form(3, [1, 2, 7], Q7)
    g = make_form(3, [2 * 8, 1, 7 * 343], Q7)
    ok, perm = is_isomorphic(f, g)
    assert ok and perm == (1, 0, 2)
    assert not is_isomorphic(f, make_form(3, [1, 3, 7], Q7))[0]
    with pytest.raises(UnsupportedDegree):
        is_isomorphic(make_form(2, [1], Q7), make_form(2, [1], Q7))


def test_form_text():
    f = make_form(3, [L7({0: 1}), L7({1: 2}), L7({2: 1})], L7)
    assert form_text(f) == "⟨1,2t,t^2⟩"
    assert form_text(make_form(3, [1, Fraction(3, 7)], Q7)) == "⟨1,3/7⟩"
