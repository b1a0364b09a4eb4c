"""Property suites: field axioms, Fermat fixed point, norms, value-set reduction, trinomial powers."""
from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mvsfnc.curves import trinomial_power_check
from mvsfnc.gf import field_for_q, prime_powers_up_to
from mvsfnc.upoly import UniPoly, is_mvsp, parse_poly, value_set, value_set_size

SMALL_QS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256]


def _poly_strategy():
    @st.composite
    def build(draw):
        q = draw(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 16, 25, 27]))
        F = field_for_q(q)
        exps = draw(st.lists(st.integers(0, 3 * q), min_size=1, max_size=5, unique=True))
        coeffs = [draw(st.integers(1, q - 1)) for _ in exps]
        return UniPoly(F, dict(zip(exps, coeffs)))
    return build()


# property suites

@settings(max_examples=300, deadline=None)
@given(st.sampled_from(SMALL_QS), st.data())
def test_field_axioms(q, data):
    F = field_for_q(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, 0) == a and F.mul(a, 1) == a
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


def _vpow_by_squaring(F, a, e):
    acc = np.ones_like(a)
    while e:
        if e & 1:
            acc = F.vmul(acc, a)
        a = F.vmul(a, a)
        e >>= 1
    return acc


def test_fermat_fixed_point_exhaustive():
    for q in prime_powers_up_to(1 << 12):
        F = field_for_q(q)
        a = np.arange(q, dtype=np.int64)
        assert np.array_equal(_vpow_by_squaring(F, a, q), a), q


def test_power_table_roundtrip():
    for q in prime_powers_up_to(256):
        T = field_for_q(q).power_table
        assert np.array_equal(T.log[T.exp], np.arange(q - 1))
        nz = np.arange(1, q)
        assert np.array_equal(T.exp[T.log[nz]], nz)


def test_norm_multiplicative_and_surjective():
    for q in prime_powers_up_to(256):
        F = field_for_q(q)
        for m in range(1, F.n + 1):
            if F.n % m:
                continue
            norms = [F.norm(a, m) for a in F.elements()]
            for a in range(1, q):
                for b in range(1, q):
                    assert norms[F.mul(a, b)] == F.mul(norms[a], norms[b])
            assert set(norms[1:]) == set(F.subfield_elements(m)[1:])


@settings(max_examples=200, deadline=None)
@given(_poly_strategy())
def test_value_set_reduction_invariance(F):
    if F.is_constant():
        return
    R = F.reduce_fermat()
    if R.is_constant():
        assert value_set_size(F) == 1
        return
    assert value_set(F).values == value_set(R).values


def test_is_mvsp_not_reduction_invariant():
    # x^6 and x^2 agree as functions on GF(5) but face different degree bounds
    F = parse_poly(field_for_q(5), "x^6")
    R = F.reduce_fermat()
    assert R == parse_poly(field_for_q(5), "x^2")
    assert value_set_size(F) == value_set_size(R) == 3
    assert is_mvsp(R) and not is_mvsp(F)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_trinomial_power_only_for_p_powers(q):
    field = field_for_q(q)
    p = field.p
    powers = {p ** k for k in range(1, 5)}
    rng = random.Random(q)
    for _ in range(1000):
        exps = rng.sample(range(1, 2 * q + 2), 3)
        F = UniPoly(field, {e: rng.randint(1, q - 1) for e in exps})
        for s in range(2, 13):
            if trinomial_power_check(F, s):
                assert s in powers, (F.to_text(), s)
        assert trinomial_power_check(F, p)
