from __future__ import annotations

import random

import pytest

from mvsfnc.curves import SuperellipticCurve, fnc_bivariate_test, schmidt_irreducibility, superelliptic_fnc_test
from mvsfnc.gf import field_for_q
from mvsfnc.theoremb import (
    FAMILIES_B,
    CurveRecord,
    HarnessBoundError,
    NotQuadrinomialError,
    b_ix_alpha_zero,
    canonical_record,
    coefficient_orbit_reps,
    criteria_agreement,
    family_generate,
    family_membership,
    fermat_factorization,
    orbit_coefficients,
    orbit_records,
    type_i_fnc_tlift,
    verify_theorem_b,
    verify_type_i,
)
from mvsfnc.upoly import UniPoly, parse_poly

FIELDS_B = (4, 8, 9, 16, 25, 27, 32, 49, 64)


def record(q: int, text: str) -> CurveRecord:
    return CurveRecord.from_text(field_for_q(q), text)


def texts(gen) -> set[str]:
    return {c.to_text() for c in gen.curves}


def test_family_examples():
    assert texts(family_generate(field_for_q(4), "B-ii")) == {"y^3 = x^2+x+1"}
    assert texts(family_generate(field_for_q(8), "B-iv")) == {"y^7 = x^4+x^2+x"}
    assert texts(family_generate(field_for_q(8), "B-v")) == {"y^7 = x^6+x^5+x^3"}
    assert texts(family_generate(field_for_q(4), "B-vi")) == {"y^3 = x^3+x^2+x"}


def test_inapplicable_family_gives_reason():
    gen = family_generate(field_for_q(9), "B-ii")
    assert not gen.instances and gen.reason


def test_membership_examples():
    F = field_for_q(4)
    assert family_membership(record(4, "y^3 = x^2+x+1")).family == "B-ii"
    for mu in range(1, 4):
        f = UniPoly(F, {2: F.mul(mu, mu), 1: mu, 0: 1})
        assert family_membership(CurveRecord.from_polys(UniPoly.monomial(F, 3), f)).family == "B-ii"
    with pytest.raises(NotQuadrinomialError):
        record(4, "y^3 = x^2+x")
    assert family_membership(record(5, "y^4 = x^3+x^2+1")) is None


def test_record_classification():
    assert record(9, "y^4 = x^3+2*x+1").kind == "ii"
    assert record(9, "y^4 = x^3+2*x^2+x").kind == "iii"
    assert record(9, "y^3+y = x^3+x").kind == "i"
    rec = record(9, "2*y^4 = x^3+2*x+1")
    assert rec.g == UniPoly.monomial(field_for_q(9), 4)


@pytest.mark.parametrize("q", FIELDS_B)
def test_family_instances_are_fnc_and_irreducible(q):
    field = field_for_q(q)
    for fam in FAMILIES_B[1:]:
        for tag, rec in family_generate(field, fam).instances:
            C = rec.superelliptic_curve()
            assert superelliptic_fnc_test(C), (str(tag), rec.to_text())
            assert schmidt_irreducibility(C), (str(tag), rec.to_text())


@pytest.mark.parametrize("q", FIELDS_B)
def test_membership_roundtrip_and_rescaling_invariance(q):
    field = field_for_q(q)
    rng = random.Random(q)
    instances = {fam: family_generate(field, fam).instances for fam in FAMILIES_B[1:]}
    by_tag = {tag: rec for items in instances.values() for tag, rec in items}
    for fam, items in instances.items():
        for tag, rec in items:
            found = family_membership(rec)
            assert found is not None
            # overlapping families resolve to the earliest one, and parameters
            # to the first instance in the same rescaling orbit
            assert FAMILIES_B.index(found.family) <= FAMILIES_B.index(fam)
            assert canonical_record(by_tag[found]) == canonical_record(rec)
            for _ in range(4):
                lam, mu = rng.randint(1, q - 1), rng.randint(1, q - 1)
                assert family_membership(rec.rescale(lam, mu)) == found


def test_b_i_instances_pass_the_t_lift_route():
    for q in (3, 4, 5, 8, 9):
        field = field_for_q(q)
        gen = family_generate(field, "B-i", b_i_bound=2 * (q - 1))
        assert gen.instances
        for tag, rec in gen.instances:
            P = tag.params_dict()
            assert P["b"] % field.p == 1 and P["d"] % field.p == 1
            assert type_i_fnc_tlift(rec.g, rec.f)
            assert fnc_bivariate_test(rec.bipoly())


def test_orbits_are_consistent():
    field = field_for_q(9)
    rec = record(9, "y^4 = x^3+2*x^2+x")
    orbit = orbit_records(rec)
    assert rec in orbit
    assert {canonical_record(r) for r in orbit} == {canonical_record(rec)}
    rows = orbit_coefficients(field, rec.a, rec.exponents, rec.coefficients)
    assert len({tuple(r) for r in rows.tolist()}) == len(orbit)
    # one representative per orbit partitions all unit triples
    reps = coefficient_orbit_reps(field, 4, (3, 2, 1))
    covered = set()
    for c in reps:
        block = {tuple(r) for r in orbit_coefficients(field, 4, (3, 2, 1), c).tolist()}
        assert not covered & block
        covered |= block
    assert len(covered) == 8 ** 3


def test_theorem_b_small_fields():
    r = verify_theorem_b(field_for_q(4), "ii")
    assert r["match"] and r["irreducible_fnc"] == ["y^3 = x^2+x+1"]
    r = verify_theorem_b(field_for_q(4), "iii")
    assert r["match"] and r["irreducible_fnc"] == ["y^3 = x^3+x^2+x"]
    r = verify_theorem_b(field_for_q(8), "iii")
    assert r["match"]
    assert {"y^7 = x^4+x^2+x", "y^7 = x^6+x^5+x^3"} <= set(r["irreducible_fnc"])


def test_theorem_b_reducible_hits_are_fermat_products_for_type_ii():
    for q in (5, 7, 9):
        r = verify_theorem_b(field_for_q(q), "ii")
        assert r["match"] and r["reducible_match"]
        assert all(row["fermat_product"] and row["factors_fnc"] for row in r["reducible_fnc"])


def test_type_iii_reducible_hit_splits_into_fnc_components():
    # y^8 = (x^3 + x)^2 over GF(9): not a Fermat product, yet both components are FNC
    field = field_for_q(9)
    C = SuperellipticCurve(8, parse_poly(field, "x^6+2*x^4+x^2"))
    assert superelliptic_fnc_test(C) and not schmidt_irreducibility(C)
    split = fermat_factorization(C)
    assert split["gcd"] == 2 and split["factors_fnc"]


def test_b_ix_alpha_zero_trinomials():
    rows = b_ix_alpha_zero(field_for_q(4))
    assert rows and rows[0]["curve"] == "y^3 = x^2+x"
    assert all(r["fnc"] and r["irreducible"] for r in rows)


def test_harness_bound():
    with pytest.raises(HarnessBoundError):
        verify_theorem_b(field_for_q(256), "ii")
    with pytest.raises(HarnessBoundError):
        verify_type_i(field_for_q(64))


def test_type_i_examples():
    F4 = field_for_q(4)
    g = parse_poly(F4, "y^4+y", var="y")
    for alpha in range(1, 4):
        f = UniPoly(F4, {4: alpha, 1: alpha})
        assert type_i_fnc_tlift(g, f)

    rec = record(9, "y^3+y = x^3+x")
    assert rec.bipoly().divides_by_linear(1)
    assert fnc_bivariate_test(rec.bipoly())

    F3 = field_for_q(3)
    g = parse_poly(F3, "y^3-y", var="y")
    f = parse_poly(F3, "x^4-x^2")
    assert not type_i_fnc_tlift(g, f)
    assert not fnc_bivariate_test(CurveRecord.from_polys(g, f).bipoly())


@pytest.mark.parametrize("q", [3, 4, 5])
def test_type_i_harness_small_fields(q):
    r = verify_type_i(field_for_q(q))
    assert r["match"] and r["line_component_ok"] and r["bivariate_agree"]


def test_criteria_agreement_small_fields():
    for q in (3, 4, 5, 7, 8):
        r = criteria_agreement(field_for_q(q))
        assert r["agreement_match"] and r["screen_soundness_match"]
