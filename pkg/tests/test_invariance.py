import random

import pytest
from hypothesis import given, settings, strategies as st

from dform.forms import make_form, permuted
from dform.isotropy import decide, verify_witness

from generators import FIELD_CLASSES, T7, random_element, random_form, tower_monomial_form


def _transforms(form, rng):
    F, d = form.field, form.degree
    perm = list(range(form.dim))
    rng.shuffle(perm)
    twist = [random_element(F, rng, 2) for _ in form.coeffs]
    c = random_element(F, rng, 2)
    yield "permutation", permuted(form, perm)
    yield "twist", make_form(d, [a * y ** d for a, y in zip(form.coeffs, twist)], F)
    yield "scaling", make_form(d, [c * a for a in form.coeffs], F)


@pytest.mark.parametrize("name", sorted(FIELD_CLASSES))
@settings(max_examples=40)
@given(seed=st.integers(0, 2 ** 32), n=st.integers(1, 5))
def test_verdict_is_invariant(name, seed, n):
    rng = random.Random(seed)
    F = FIELD_CLASSES[name]
    form = random_form(F, 3, n, rng)
    base = decide(form).verdict
    for what, other in _transforms(form, rng):
        cert = decide(other)
        assert cert.verdict == base, what
        if cert.isotropic:
            assert verify_witness(other, cert.witness, 20 if not F.is_finite else None)


@settings(max_examples=25)
@given(seed=st.integers(0, 2 ** 32), n=st.integers(1, 6))
def test_verdict_is_invariant_over_two_level_tower(seed, n):
    rng = random.Random(seed)
    form = tower_monomial_form(3, n, rng)
    base = decide(form).verdict
    perm = list(range(n))
    rng.shuffle(perm)
    t1 = T7.residue_field
    y = [T7({rng.randrange(-1, 2): t1({rng.randrange(-1, 2): rng.randrange(1, 7)})}) for _ in range(n)]
    for other in (permuted(form, perm),
                  make_form(3, [a * v ** 3 for a, v in zip(form.coeffs, y)], T7),
                  make_form(3, [y[0] * a for a in form.coeffs], T7)):
        assert decide(other).verdict == base
