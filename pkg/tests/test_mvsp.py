from __future__ import annotations

import random

import numpy as np
import pytest

from mvsfnc.gf import field_for_q
from mvsfnc.mvsp import (
    FamilyError,
    MillsCertificate,
    PthPowerError,
    SmallValueSetError,
    TheoremAFamilyTag,
    carlitz_decompose,
    classify_binomial,
    enumerate_mvsp_binomials,
    family_applicable,
    log_base,
    mills_certificate,
    mills_identity_holds,
    mills_structural_check,
    predicted_value_set,
    theorem_a_generate,
    verify_theorem_a,
    _family_triples,
)
from mvsfnc.upoly import UniPoly, is_mvsp, parse_poly, value_set


def P(q: int, text: str) -> UniPoly:
    return parse_poly(field_for_q(q), text)


def texts(polys) -> set[str]:
    return {F.to_text() for F in polys}


def test_generator_examples():
    F4 = field_for_q(4)
    assert texts(theorem_a_generate(F4, "A-v", max_degree=3)) == {"x^2+x", "x^2+g^1*x", "x^2+g^2*x"}
    assert texts(theorem_a_generate(field_for_q(3), "A-vi", max_degree=2)) == {"x^2+x", "x^2+2*x"}
    for q in (3, 4, 5, 8, 9):
        F = field_for_q(q)
        assert UniPoly.fermat(F) in theorem_a_generate(F, "A-ii", max_degree=q)


def test_generator_rejects_inapplicable_family():
    with pytest.raises(FamilyError):
        theorem_a_generate(field_for_q(9), "A-iii")
    with pytest.raises(FamilyError):
        theorem_a_generate(field_for_q(8), "A-vi")


def test_classifier_examples():
    tag = classify_binomial(P(4, "x^2+x"))
    assert tag.family == "A-iii" and "A-v" in tag.overlaps
    tag = classify_binomial(UniPoly.fermat(field_for_q(7)))
    assert tag.family == "A-ii" and tag.params_dict() == {"b": 1, "ell": 1}
    assert classify_binomial(P(7, "x^5+x^3")) is None


def test_classifier_records_av_avi_overlap():
    tag = classify_binomial(P(9, "x^8+x^4"))
    assert tag.family == "A-iv"
    assert "A-vi" in tag.overlaps


def test_enumeration_examples():
    assert texts(F for F, _ in enumerate_mvsp_binomials(field_for_q(3), 2)) >= {"x^2+1", "x^2+2", "x^2+x", "x^2+2*x"}
    deg2 = {F.to_text() for F, _ in enumerate_mvsp_binomials(field_for_q(3), 2) if F.degree == 2}
    assert deg2 == {"x^2+1", "x^2+2", "x^2+x", "x^2+2*x"}
    deg2 = {F.to_text() for F, _ in enumerate_mvsp_binomials(field_for_q(4), 2) if F.degree == 2}
    assert deg2 == {"x^2+x", "x^2+g^1*x", "x^2+g^2*x"}
    for q in (3, 4, 5):
        lin = [F for F, _ in enumerate_mvsp_binomials(field_for_q(q), 1)]
        assert len(lin) == q - 1 and all(F.degree == 1 for F in lin)


def test_predicted_value_set_examples():
    F9 = field_for_q(9)
    assert predicted_value_set(TheoremAFamilyTag("A-ii", (1, 1), field=F9)) == {0}
    assert predicted_value_set(TheoremAFamilyTag("A-vi", (1, 4, 1), field=F9)) == {0, 2}
    F4 = field_for_q(4)
    assert predicted_value_set(TheoremAFamilyTag("A-iii", (1,), field=F4)) == {0, 1}


def test_carlitz_examples():
    c = carlitz_decompose(UniPoly.fermat(field_for_q(8)))
    assert c.size == 1 and c.alpha == 0 and c.R == UniPoly.constant(field_for_q(8), 1)
    c = carlitz_decompose(P(3, "x^2+x"))
    assert (c.size, c.alpha, c.beta, c.S) == (2, 0, 2, (0, 2))
    assert c.function_match and c.polynomial_match
    c = carlitz_decompose(P(5, "x^5-x"))
    assert c.alpha == 0 and c.R.to_text() == "1"


def test_mills_examples():
    F = P(8, "x^2+x")
    cert = mills_certificate(F)
    assert (cert.nu, cert.k, cert.m, cert.omegas) == (1, 1, 2, (1, 1, 1))
    rep = mills_structural_check(F, cert)
    assert rep.passed
    assert rep.witnesses[cert.gamma0] == UniPoly.constant(F.field, 1)

    G = P(9, "x^3+x")
    cert = mills_certificate(G)
    assert (cert.nu, cert.k, cert.m, cert.omegas) == (1, 1, 1, (2, 1))
    assert mills_structural_check(G, cert).passed

    assert mills_certificate(P(5, "x^3")) is None


def test_tampered_certificate_fails():
    F = P(8, "x^2+x")
    cert = mills_certificate(F)
    bad = MillsCertificate(cert.nu, cert.k, cert.m, (0,) + cert.omegas[1:], cert.gamma0, cert.r)
    assert not mills_identity_holds(F, bad)


def test_mills_preconditions():
    with pytest.raises(PthPowerError):
        mills_certificate(P(9, "x^3+x^6"))
    with pytest.raises(SmallValueSetError):
        mills_certificate(P(8, "x^7"))


def test_identity_forms_differ_only_when_nu_not_one_mod_p():
    F = P(27, "x^2+1")
    rep = value_set(F)
    assert rep.nu == 2
    assert mills_certificate(F, rep, form="stated") is None
    cert = mills_certificate(F, rep, form="nu-scaled")
    assert cert is not None and mills_structural_check(F, cert, rep).passed


@pytest.mark.parametrize("q", [8, 9, 16, 27])
def test_no_certificate_for_non_mvsp_binomials(q):
    field = field_for_q(q)
    rng = random.Random(q)
    seen = 0
    while seen < 100:
        a = rng.randint(2, q - 1)
        b = rng.randint(1, a - 1)
        F = UniPoly(field, {a: 1, b: rng.randint(1, q - 1)})
        if is_mvsp(F) or F.is_p_power() or F.derivative().is_zero():
            continue
        rep = value_set(F)
        if rep.size < 3:
            continue
        seen += 1
        for form in ("stated", "nu-scaled"):
            assert mills_certificate(F, rep, form=form) is None


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32])
def test_theorem_a_small_fields(q):
    assert verify_theorem_a(field_for_q(q))["match"]


def test_classification_invariant_under_scaling():
    rng = random.Random(1)
    for q in (4, 5, 7, 8, 9, 13, 16):
        field = field_for_q(q)
        for F, tag in enumerate_mvsp_binomials(field, q - 1):
            for _ in range(3):
                c, lam = rng.randint(1, q - 1), rng.randint(1, q - 1)
                G = F.substitute_scale(lam).scale(c)
                assert classify_binomial(G).family == tag.family


def test_generated_members_are_mvsps():
    for q in (4, 5, 8, 9, 16, 25, 27):
        field = field_for_q(q)
        for fam in ("A-i", "A-ii", "A-iii", "A-iv", "A-v", "A-vi"):
            if not family_applicable(field, fam):
                continue
            polys = theorem_a_generate(field, fam)
            assert all(is_mvsp(F) for F in polys)


# candidate readings of the additive polynomial cutting out the value set of
# x^(p^ell t) + beta x^t; each maps (field, ell, s, beta) to its root set

def _roots(field, terms):
    return set(np.nonzero(UniPoly(field, terms).evaluate_all() == 0)[0].tolist())


def _tower(p, ell, j, step):
    return sum(p ** (i * step) for i in range(j + 1))


def _reading(field, ell, s, beta, top, beta_exp):
    terms = {}
    for j in range(top):
        e = field.p ** (j * ell)
        c = field.inv(field.pow(beta, beta_exp(j)))
        c = c if j % 2 else field.neg(c)
        terms[e] = field.add(terms.get(e, 0), c)
    return _roots(field, terms)


def _readings(field, ell, s, beta):
    p = field.p
    return {
        "R1": _reading(field, ell, s, beta, s, lambda j: _tower(p, ell, j, ell)),
        "R2": _reading(field, ell, s, beta, (s - 1) * ell + 1, lambda j: _tower(p, ell, j, ell)),
        "R3": _reading(field, ell, s, beta, s, lambda j: p ** (j * ell)),
        "R4": _reading(field, ell, s, beta, s, lambda j: _tower(p, 1, j * ell, 1)),
    }


def test_av_formula_reading_is_unique():
    matches = {"R1": True, "R2": True, "R3": True, "R4": True}
    count = 0
    for q in (8, 9, 16, 27, 64, 81):
        field = field_for_q(q)
        p, N = field.p, field.order
        for a, t, beta in _family_triples(field, "A-v", 1, N, 2):
            ell = log_base(a // t, p)
            s = log_base(N // t + 1, p) // ell
            actual = set(value_set(UniPoly(field, {a: 1, t: beta})).values)
            for name, roots in _readings(field, ell, s, beta).items():
                matches[name] &= roots == actual
            count += 1
    assert count > 100
    assert matches == {"R1": True, "R2": False, "R3": False, "R4": False}
