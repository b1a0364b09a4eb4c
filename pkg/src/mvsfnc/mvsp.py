"""Minimal value set binomials: families, classifier, brute force, Mills certificates."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from .gf import FieldSpec
from .linalg import solve_affine
from .upoly import (
    PolyError,
    UniPoly,
    ValueSetReport,
    binom_mod_p,
    mvsp_bound,
    value_set,
)

FAMILIES_A = ("A-i", "A-ii", "A-iii", "A-iv", "A-v", "A-vi")
# classifier precedence, earliest wins
PRECEDENCE_A = ("A-ii", "A-i", "A-iii", "A-iv", "A-v", "A-vi")


class FamilyError(ValueError):
    """Family parameters inconsistent with the field."""


class MillsPreconditionError(ValueError):
    pass


class PthPowerError(MillsPreconditionError):
    pass


class SmallValueSetError(MillsPreconditionError):
    pass


class ZeroDerivativeError(MillsPreconditionError):
    pass


class MalformedCertificate(ValueError):
    pass


def log_base(value: int, base: int) -> int | None:
    """e with base^e == value, or None."""
    if value < 1 or base < 2:
        return None
    e = 0
    while value % base == 0:
        value //= base
        e += 1
    return e if value == 1 else None


def multiplicative_order_mod(p: int, nu: int) -> int:
    """Least k >= 1 with nu | p^k - 1."""
    if nu == 1:
        return 1
    k, acc = 1, p % nu
    while acc != 1:
        acc = acc * p % nu
        k += 1
    return k


@dataclass(frozen=True)
class TheoremAFamilyTag:
    family: str
    params: tuple
    unit: int = 1
    overlaps: tuple = ()
    field: FieldSpec | None = dc_field(default=None, compare=False, repr=False)

    def params_dict(self) -> dict:
        names = {
            "A-i": ("a", "beta"),
            "A-ii": ("b", "ell"),
            "A-iii": ("beta",),
            "A-iv": ("beta",),
            "A-v": ("ell", "s", "t", "beta"),
            "A-vi": ("m", "t", "beta"),
        }[self.family]
        return dict(zip(names, self.params))


# classification

def _families_matching(field: FieldSpec, a: int, b: int, beta: int) -> list[tuple[str, tuple]]:
    """All families containing the monic x^a + beta x^b (b = 0 means x^a + beta)."""
    p, q, N = field.p, field.q, field.order
    minus_one = field.neg(1)
    hits: list[tuple[str, tuple]] = []
    if a <= b or beta == 0:
        return hits
    if b >= 1 and (a - b) % N == 0 and beta == minus_one:
        hits.append(("A-ii", (b, (a - b) // N)))
    if b == 0 and N % a == 0:
        hits.append(("A-i", (a, beta)))
    if b >= 1 and a <= N:
        if p == 2 and q > 2 and N % 3 == 0 and a == 2 * N // 3 and b == N // 3 and field.pow(beta, 3) == 1:
            hits.append(("A-iii", (beta,)))
        if p > 2 and a == N and b == N // 2 and field.pow(beta, 2) == 1:
            hits.append(("A-iv", (beta,)))
        if a % b == 0 and N % b == 0:
            ell = log_base(a // b, p)
            E = log_base(N // b + 1, p)
            if ell and E and E % ell == 0 and E // ell >= 2 and field.in_subfield(beta, E):
                s = E // ell
                target = 1 if s % 2 == 0 else minus_one
                if field.pow(beta, (p ** E - 1) // (p ** ell - 1)) == target:
                    hits.append(("A-v", (ell, s, b, beta)))
        if p > 2 and a == 2 * b and N % b == 0:
            m = log_base(N // b + 1, p)
            if m and field.in_subfield(beta, m):
                hits.append(("A-vi", (m, b, beta)))
    return hits


def _binomial_parts(F: UniPoly) -> tuple[int, int, int, int]:
    if len(F.terms) != 2:
        raise PolyError(f"not a binomial: {F}")
    a, b = max(F.terms), min(F.terms)
    unit = F.terms[a]
    beta = F.field.div(F.terms[b], unit)
    return a, b, beta, unit


def classify_binomial(F: UniPoly) -> TheoremAFamilyTag | None:
    """Family tag of a binomial, or None when it is not an MVSP."""
    a, b, beta, unit = _binomial_parts(F)
    return classify_normalized(F.field, a, b, beta, unit)


def classify_normalized(field: FieldSpec, a: int, b: int, beta: int, unit: int = 1) -> TheoremAFamilyTag | None:
    hits = _families_matching(field, a, b, beta)
    if not hits:
        return None
    hits.sort(key=lambda h: PRECEDENCE_A.index(h[0]))
    fam, params = hits[0]
    return TheoremAFamilyTag(fam, params, unit, tuple(h[0] for h in hits[1:]), field)


# generators

def family_applicable(field: FieldSpec, family: str) -> bool:
    p, q, N = field.p, field.q, field.order
    if family == "A-iii":
        return p == 2 and q > 2 and N % 3 == 0
    if family in ("A-iv", "A-vi"):
        return p > 2
    return family in FAMILIES_A


def _family_triples(field: FieldSpec, family: str, lo: int, hi: int, max_ell: int) -> list[tuple[int, int, int]]:
    """Monic members as (a, b, beta) with lo <= a <= hi."""
    if family not in FAMILIES_A:
        raise FamilyError(f"unknown family {family!r}")
    if not family_applicable(field, family):
        raise FamilyError(f"{family} is not defined over GF({field.q})")
    p, n, q, N = field.p, field.n, field.q, field.order
    units = range(1, q)
    out: list[tuple[int, int, int]] = []
    if family == "A-i":
        for a in range(max(lo, 1), min(hi, N) + 1):
            if N % a == 0:
                out += [(a, 0, beta) for beta in units]
    elif family == "A-ii":
        for ell in range(1, max_ell + 1):
            for b in range(1, hi - ell * N + 1):
                a = b + ell * N
                if lo <= a <= hi:
                    out.append((a, b, field.neg(1)))
    elif family == "A-iii":
        a, b = 2 * N // 3, N // 3
        if lo <= a <= hi:
            out += [(a, b, beta) for beta in units if field.pow(beta, 3) == 1]
    elif family == "A-iv":
        a, b = N, N // 2
        if lo <= a <= hi:
            out += [(a, b, beta) for beta in units if field.pow(beta, 2) == 1]
    elif family == "A-v":
        for E in range(2, n + 1):
            if n % E:
                continue
            t = N // (p ** E - 1)
            for ell in range(1, E // 2 + 1):
                if E % ell:
                    continue
                s = E // ell
                a = p ** ell * t
                if not lo <= a <= hi:
                    continue
                target = 1 if s % 2 == 0 else field.neg(1)
                e = (p ** E - 1) // (p ** ell - 1)
                for beta in field.subfield_elements(E)[1:]:
                    if field.pow(beta, e) == target:
                        out.append((a, t, beta))
    elif family == "A-vi":
        for m in range(1, n + 1):
            if n % m:
                continue
            t = N // (p ** m - 1)
            if lo <= 2 * t <= hi:
                out += [(2 * t, t, beta) for beta in field.subfield_elements(m)[1:]]
    return sorted(out)


def _triple_poly(field: FieldSpec, a: int, b: int, beta: int, unit: int = 1) -> UniPoly:
    return UniPoly(field, {a: unit, b: field.mul(beta, unit)})


def theorem_a_generate(field: FieldSpec, family: str, min_degree: int = 1,
                       max_degree: int | None = None, max_ell: int = 2) -> list[UniPoly]:
    hi = field.order if max_degree is None else max_degree
    return [_triple_poly(field, a, b, beta) for a, b, beta in _family_triples(field, family, min_degree, hi, max_ell)]


def theorem_a_catalog(field: FieldSpec, max_degree: int | None = None, max_ell: int = 2,
                      min_degree: int = 1) -> set[tuple[int, int, int]]:
    hi = field.order if max_degree is None else max_degree
    out: set[tuple[int, int, int]] = set()
    for fam in FAMILIES_A:
        if family_applicable(field, fam):
            out.update(_family_triples(field, fam, min_degree, hi, max_ell))
    return out


# value-set predictions

def av_value_polynomial(field: FieldSpec, ell: int, s: int, beta: int) -> UniPoly:
    """Additive polynomial whose roots form the value set of x^(p^ell t) + beta x^t.

    sum_{j<s} (-1)^(j+1) / beta^(1 + p^ell + ... + p^(j ell)) * x^(p^(j ell))
    """
    p = field.p
    terms = {}
    e = 0
    for j in range(s):
        e += p ** (j * ell)
        c = field.inv(field.pow(beta, e))
        terms[p ** (j * ell)] = c if j % 2 else field.neg(c)
    return UniPoly(field, terms)


def predicted_value_set(tag: TheoremAFamilyTag, field: FieldSpec | None = None) -> frozenset[int]:
    """Value set predicted by the family formulas, scaled by the tag's unit."""
    field = field or tag.field
    if field is None:
        raise ValueError("tag carries no field")
    P = tag.params_dict()
    N = field.order
    fam = tag.family
    if fam == "A-ii":
        vals = {0}
    elif fam == "A-i":
        a = P["a"]
        powers = {0} | {field.exp_of(a * k) for k in range(N)}
        vals = {field.add(v, P["beta"]) for v in powers}
    elif fam == "A-iii":
        vals = {0, field.pow(P["beta"], 2)}
    elif fam == "A-iv":
        vals = {0, field.from_int(2)}
    elif fam == "A-v":
        V = av_value_polynomial(field, P["ell"], P["s"], P["beta"])
        vals = {int(v) for v in np.nonzero(V.evaluate_all() == 0)[0]}
    elif fam == "A-vi":
        quarter = field.inv(field.from_int(4))
        b2 = field.mul(field.pow(P["beta"], 2), quarter)
        vals = {field.sub(field.mul(u, u), b2) for u in field.subfield_elements(P["m"])}
    else:
        raise ValueError(f"unknown family {fam}")
    return frozenset(field.mul(v, tag.unit) for v in vals)


# brute force

def mvsp_binomial_triples(field: FieldSpec, max_degree: int, min_degree: int = 1) -> list[tuple[int, int, int]]:
    """All monic MVSP binomials x^a + beta x^b (b = 0: x^a + beta), as sorted triples.

    The substitution x -> lam x sends beta to beta * lam^(b - a) up to the unit
    lam^a, so only beta = xi^j with j < gcd(a - b, q - 1) is evaluated and the
    verdict is copied to the whole coset.
    """
    q, N = field.q, field.order
    if max_degree < 1:
        return []
    exp = field.exp_np
    ks = np.arange(N, dtype=np.int64)
    out: list[tuple[int, int, int]] = []
    for a in range(max(1, min_degree), max_degree + 1):
        target = mvsp_bound(q, a)
        xa = exp[(a * ks) % N]
        bs = np.arange(a, dtype=np.int64)
        gs = np.gcd(a - bs, N)
        # chunk rows to bound memory
        row_b = np.repeat(bs, gs)
        row_j = np.concatenate([np.arange(g, dtype=np.int64) for g in gs])
        chunk = max(1, (1 << 22) // max(N, 1))
        for s in range(0, len(row_b), chunk):
            rb, rj = row_b[s:s + chunk], row_j[s:s + chunk]
            yb = exp[(rj[:, None] + rb[:, None] * ks[None, :]) % N]
            vals = field.vadd(xa[None, :], yb)
            at_zero = np.where(rb == 0, exp[rj], 0)
            allv = np.concatenate([vals, at_zero[:, None]], axis=1)
            allv.sort(axis=1)
            counts = 1 + np.count_nonzero(np.diff(allv, axis=1), axis=1)
            for i in np.nonzero(counts == target)[0]:
                b, j = int(rb[i]), int(rj[i])
                g = gcd(a - b, N)
                for t in range(j, N, g):
                    out.append((a, b, int(exp[t])))
    return sorted(out)


def enumerate_mvsp_binomials(field: FieldSpec, max_degree: int) -> list[tuple[UniPoly, TheoremAFamilyTag | None]]:
    if max_degree > 4 * field.q:
        raise ValueError(f"max_degree {max_degree} exceeds the enumeration bound {4 * field.q}")
    out = []
    for a, b, beta in mvsp_binomial_triples(field, max_degree):
        out.append((_triple_poly(field, a, b, beta), classify_normalized(field, a, b, beta)))
    return out


def verify_theorem_a(field: FieldSpec, max_degree: int | None = None, max_ell: int = 2) -> dict:
    hi = field.order if max_degree is None else max_degree
    brute = set(mvsp_binomial_triples(field, hi))
    catalog = theorem_a_catalog(field, hi, max_ell)
    mismatches = []
    for a, b, beta in sorted(brute ^ catalog):
        mismatches.append({
            "poly": _triple_poly(field, a, b, beta).to_text(),
            "in_brute_force": (a, b, beta) in brute,
            "in_families": (a, b, beta) in catalog,
        })
    return {
        "q": field.q,
        "modulus": field.modulus_string(),
        "brute_count": len(brute),
        "family_count": len(catalog),
        "match": not mismatches,
        "mismatches": mismatches,
    }


# small value sets

@dataclass
class CarlitzForm:
    size: int
    alpha: int
    R: UniPoly | None = None
    beta: int | None = None
    S: tuple[int, ...] = ()
    function_match: bool = True
    polynomial_match: bool = True
    two_sum: UniPoly | None = None


def indicator_sum(field: FieldSpec, points) -> UniPoly:
    """sum over mu in points of 1 - (x - mu)^(q-1)."""
    q, N = field.q, field.order
    pts = np.asarray(sorted(points), dtype=np.int64)
    terms: dict[int, int] = {}
    count = field.from_int(len(pts))
    for k in range(q):
        # coefficient of x^k in sum (x - mu)^(q-1) is C(q-1, k) * sum (-mu)^(q-1-k)
        b = binom_mod_p(N, k, field.p)
        if not b:
            continue
        powers = field.vpow(field.vneg(pts), N - k)
        acc = 0
        for v in powers:
            acc = field.add(acc, int(v))
        c = field.neg(field.mul(b, acc))
        if k == 0:
            c = field.add(c, count)
        if c:
            terms[k] = c
    return UniPoly(field, terms)


def carlitz_decompose(F: UniPoly, report: ValueSetReport | None = None) -> CarlitzForm:
    field = F.field
    rep = report or value_set(F)
    if rep.size > 2:
        raise ValueError(f"value set has {rep.size} > 2 elements")
    if rep.size == 1:
        alpha = rep.values[0]
        R, rem = (F - UniPoly.constant(field, alpha)).divrem(UniPoly.fermat(field))
        ok = rem.is_zero() and not R.is_zero()
        return CarlitzForm(1, alpha, R=R, function_match=ok, polynomial_match=ok)
    alpha, beta = rep.values
    S = tuple(a for a, _ in rep.fibers[alpha])
    others = [a for a in range(field.q) if a not in set(S)]
    T = indicator_sum(field, S).scale(alpha) + indicator_sum(field, others).scale(beta)
    function_match = bool(np.array_equal(T.evaluate_all(), F.evaluate_all()))
    return CarlitzForm(2, alpha, beta=beta, S=S, function_match=function_match,
                       polynomial_match=(T == F), two_sum=T)


# Mills certificates

# right-hand side of the certificate identity: -w0 (x^q - x) F' as stated, or
# -w0 (x^q - x) F' / nu, which is what differentiating F - g0 = L0^nu N0^(p^mk) gives
IDENTITY_FORMS = ("stated", "nu-scaled")


@dataclass(frozen=True)
class MillsCertificate:
    nu: int
    k: int
    m: int
    omegas: tuple[int, ...]
    gamma0: int
    r: int
    form: str = "stated"

    def validate(self, field: FieldSpec) -> None:
        p = field.p
        if self.nu < 1 or self.nu % p == 0:
            raise MalformedCertificate("nu must be positive and prime to p")
        if self.k != multiplicative_order_mod(p, self.nu):
            raise MalformedCertificate("k is not the order of p modulo nu")
        if self.m < 1 or 1 + self.nu * self.r != p ** (self.m * self.k):
            raise MalformedCertificate("1 + nu r != p^(mk)")
        if len(self.omegas) != self.m + 1:
            raise MalformedCertificate("omega vector must have m + 1 entries")
        if any(not 0 <= w < field.q for w in self.omegas):
            raise MalformedCertificate("omega outside the field")
        if self.omegas[-1] != 1:
            raise MalformedCertificate("omega_m must be 1")
        if self.form not in IDENTITY_FORMS:
            raise MalformedCertificate(f"unknown identity form {self.form!r}")

    def exponents(self, p: int) -> list[int]:
        return [1 + (p ** (self.k * i) - 1) // self.nu for i in range(self.m + 1)]


def _mills_columns(F: UniPoly, gamma0: int, nu: int, k: int, m: int,
                   form: str = "stated") -> tuple[list[UniPoly], UniPoly]:
    field = F.field
    G = F - UniPoly.constant(field, gamma0)
    powers = []
    for i in range(m + 1):
        powers.append(G ** (1 + (field.p ** (k * i) - 1) // nu))
    R = UniPoly.fermat(field) * F.derivative()
    if form == "nu-scaled":
        R = R.scale(field.inv(field.from_int(nu)))
    return powers, R


def mills_certificate(F: UniPoly, report: ValueSetReport | None = None,
                      form: str = "stated") -> MillsCertificate | None:
    """Solve the certificate identity for omega_0..omega_m (omega_m = 1, omega_0 != 0).

    ``form`` picks the right-hand side; see ``IDENTITY_FORMS``.  The two forms
    coincide when nu = 1 (mod p).
    """
    if form not in IDENTITY_FORMS:
        raise ValueError(f"unknown identity form {form!r}")
    field = F.field
    p = field.p
    if F.is_constant():
        raise MillsPreconditionError("constant polynomial")
    if F.is_p_power():
        raise PthPowerError("F is a p-th power")
    if F.derivative().is_zero():
        raise ZeroDerivativeError("F' = 0")
    rep = report or value_set(F)
    if rep.size < 3:
        raise SmallValueSetError(f"#V = {rep.size} < 3")
    nu, r, gamma0 = rep.nu, rep.r, rep.gamma0
    if nu % p == 0:
        return None
    k = multiplicative_order_mod(p, nu)
    e = log_base(1 + nu * r, p)
    if e is None or e % k:
        return None
    m = e // k
    powers, R = _mills_columns(F, gamma0, nu, k, m, form)
    cols = [powers[0] + R] + powers[1:m]
    rhs = -powers[m]
    exps = set(rhs.terms)
    for c in cols:
        exps.update(c.terms)
    order = sorted(exps)
    A = [[c.coeff(e) for c in cols] for e in order]
    b = [rhs.coeff(e) for e in order]
    sol = solve_affine(field, A, b)
    if sol is None:
        return None
    x, null = sol
    if x[0] == 0:
        for v in null:
            if v[0]:
                x = [field.add(xi, vi) for xi, vi in zip(x, v)]
                break
        else:
            return None
    cert = MillsCertificate(nu, k, m, tuple(x) + (1,), gamma0, r, form)
    assert mills_identity_holds(F, cert)
    return cert


def mills_identity_holds(F: UniPoly, cert: MillsCertificate) -> bool:
    """The certificate identity, checked as an exact polynomial identity."""
    field = F.field
    cert.validate(field)
    if cert.omegas[0] == 0:
        return False
    powers, R = _mills_columns(F, cert.gamma0, cert.nu, cert.k, cert.m, cert.form)
    lhs = UniPoly(field, {})
    for w, P in zip(cert.omegas, powers):
        lhs = lhs + P.scale(w)
    return lhs == -(R.scale(cert.omegas[0]))


@dataclass
class StructuralCheckReport:
    N0_ok: bool
    Ni_ok: bool
    L0_decomposition_ok: bool
    identity_e_ok: bool
    identity_f_ok: bool
    witnesses: dict = dc_field(default_factory=dict)
    A: UniPoly | None = None
    B: UniPoly | None = None

    @property
    def passed(self) -> bool:
        return self.N0_ok and self.Ni_ok and self.L0_decomposition_ok and self.identity_e_ok and self.identity_f_ok


def _vanishes_on(P: UniPoly, roots: list[int]) -> bool:
    if not roots:
        return True
    if len(roots) <= 8:
        return not any(P(a) for a in roots)
    return not np.any(P.evaluate_many(np.array(roots)))


def mills_structural_check(F: UniPoly, cert: MillsCertificate,
                           report: ValueSetReport | None = None) -> StructuralCheckReport:
    field = F.field
    p = field.p
    cert.validate(field)
    rep = report or value_set(F)
    if rep.gamma0 != cert.gamma0 or rep.nu != cert.nu or rep.r != cert.r:
        raise MalformedCertificate("certificate does not match the value set of F")
    pmk = p ** (cert.m * cert.k)
    witnesses: dict = {}

    # F - gamma0 = L0^nu N0^(p^mk)
    L0 = rep.fiber_poly(cert.gamma0)
    roots0 = [a for a, _ in rep.fibers[cert.gamma0]]
    N0 = None
    Q, rem = (F - UniPoly.constant(field, cert.gamma0)).divrem(L0 ** cert.nu)
    N0_ok = False
    if rem.is_zero():
        try:
            N0 = Q.pth_root(cert.m * cert.k)
            N0_ok = not _vanishes_on(N0, roots0)
        except PolyError:
            pass
    witnesses[cert.gamma0] = N0

    # F - gamma_i = L_i N_i^p
    Ni_ok = True
    for gamma in rep.values:
        if gamma == cert.gamma0:
            continue
        Li = rep.fiber_poly(gamma)
        Q, rem = (F - UniPoly.constant(field, gamma)).divrem(Li)
        Ni = None
        if rem.is_zero():
            try:
                Ni = Q.pth_root(1)
            except PolyError:
                Ni = None
        witnesses[gamma] = Ni
        if Ni is None or _vanishes_on(Ni, [a for a, _ in rep.fibers[gamma]]):
            Ni_ok = False

    # L0 = x A^(p^mk) + B^p through its exponent support
    A = B = None
    support_ok = all(e % p == 0 or e % pmk == 1 for e in L0.terms)
    L0_ok = False
    if support_ok:
        a_terms = {(e - 1) // pmk: c for e, c in L0.terms.items() if e % p and e % pmk == 1}
        b_terms = {e: c for e, c in L0.terms.items() if e % p == 0}
        A = UniPoly(field, {e: field.pth_root(c, cert.m * cert.k) for e, c in a_terms.items()})
        B = UniPoly(field, b_terms).pth_root(1)
        L0_ok = (A ** pmk).shift(1) + B.frobenius(1) == L0

    # sum omega_i L0^(p^(ki)) N0^(p^mk (p^(ki) - 1) / nu) = -omega_0 (x^q - x) L0'
    identity_e_ok = False
    if N0 is not None and cert.omegas[0] != 0:
        lhs = UniPoly(field, {})
        for i, w in enumerate(cert.omegas):
            if not w:
                continue
            pki = p ** (cert.k * i)
            term = L0.frobenius(cert.k * i) * (N0 ** ((pki - 1) // cert.nu)).frobenius(cert.m * cert.k)
            lhs = lhs + term.scale(w)
        rhs = (UniPoly.fermat(field) * L0.derivative()).scale(field.neg(cert.omegas[0]))
        identity_e_ok = lhs == rhs

    identity_f_ok = mills_identity_holds(F, cert)
    return StructuralCheckReport(N0_ok, Ni_ok, L0_ok, identity_e_ok, identity_f_ok, witnesses, A, B)
