"""Plane curves over GF(q): Frobenius nonclassicality tests and quadrinomial normal forms."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from .gf import FieldError, FieldSpec
from .upoly import (
    PolyError,
    UniPoly,
    fiber_multiplicities,
    parse_poly,
    squarefree_decomposition,
)


class CurveError(ValueError):
    pass


class PPowerFormError(CurveError):
    """The defining polynomial lies in GF(q)[x^p, y^p]."""


class QuadrinomialError(CurveError):
    pass


class BiPoly:
    """Sparse bivariate polynomial; ``terms`` maps (i, j) -> coefficient of x^i y^j."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: dict[tuple[int, int], int] | None = None):
        self.field = field
        self.terms = {}
        for (i, j), c in (terms or {}).items():
            if c:
                if i < 0 or j < 0 or not 0 <= c < field.q:
                    raise CurveError(f"bad term {c}*x^{i}*y^{j}")
                self.terms[(int(i), int(j))] = int(c)

    @classmethod
    def separated(cls, g: UniPoly, f: UniPoly) -> BiPoly:
        """g(y) - f(x)."""
        F = g.field
        terms: dict[tuple[int, int], int] = {}
        for j, c in g.terms.items():
            terms[(0, j)] = c
        for i, c in f.terms.items():
            terms[(i, 0)] = F.sub(terms.get((i, 0), 0), c)
        return cls(F, terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BiPoly) and self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.field, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"BiPoly({self.to_text()!r} over GF({self.field.q}))"

    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, var: str) -> int:
        k = 0 if var == "x" else 1
        return max((t[k] for t in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def is_p_power_form(self) -> bool:
        p = self.field.p
        return all(i % p == 0 and j % p == 0 for i, j in self.terms)

    def swap(self) -> BiPoly:
        return BiPoly(self.field, {(j, i): c for (i, j), c in self.terms.items()})

    def __add__(self, other: BiPoly) -> BiPoly:
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = F.add(out.get(k, 0), c)
        return BiPoly(F, out)

    def __neg__(self) -> BiPoly:
        return BiPoly(self.field, {k: self.field.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: BiPoly) -> BiPoly:
        return self + (-other)

    def __mul__(self, other: BiPoly) -> BiPoly:
        F = self.field
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = F.add(out.get(k, 0), F.mul(c1, c2))
        return BiPoly(F, out)

    def partial(self, var: str) -> BiPoly:
        F = self.field
        out = {}
        for (i, j), c in self.terms.items():
            e = i if var == "x" else j
            v = F.mul(F.from_int(e), c)
            if v:
                out[(i - 1, j) if var == "x" else (i, j - 1)] = v
        return BiPoly(F, out)

    def rescale(self, lam: int, mu: int) -> BiPoly:
        """F(lam x, mu y)."""
        F = self.field
        return BiPoly(F, {(i, j): F.mul(c, F.mul(F.pow(lam, i), F.pow(mu, j))) for (i, j), c in self.terms.items()})

    def rows(self, var: str = "y") -> dict[int, UniPoly]:
        """Coefficients as a polynomial in ``var`` over GF(q)[other]."""
        acc: dict[int, dict[int, int]] = {}
        for (i, j), c in self.terms.items():
            main, other = (j, i) if var == "y" else (i, j)
            acc.setdefault(main, {})[other] = c
        return {k: UniPoly(self.field, v) for k, v in acc.items()}

    def to_text(self) -> str:
        F = self.field
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda t: (-(t[0] + t[1]), -t[0])):
            c = self.terms[(i, j)]
            mono = [v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", j)) if e]
            coef = F.format_coefficient(c)
            if not mono:
                parts.append(coef)
            elif c == 1:
                parts.append("*".join(mono))
            else:
                parts.append("*".join([coef] + mono))
        return "+".join(parts)

    def divides_by_linear(self, lam: int) -> bool:
        """Whether x - lam*y divides this polynomial."""
        # substitute x = lam y; the result vanishes iff divisible
        F = self.field
        acc: dict[int, int] = {}
        for (i, j), c in self.terms.items():
            acc[i + j] = F.add(acc.get(i + j, 0), F.mul(c, F.pow(lam, i)))
        return not any(acc.values())


def parse_bipoly(field: FieldSpec, text: str) -> BiPoly:
    s = text.replace(" ", "")
    if not s:
        raise CurveError("empty polynomial")
    terms: dict[tuple[int, int], int] = {}
    pos = 0
    for tok in re.findall(r"[+-]?[^+-]+", s):
        sign = -1 if tok.startswith("-") else 1
        body = tok.lstrip("+-")
        i = j = 0
        coef = 1
        for factor in body.split("*"):
            m = re.fullmatch(r"([xy])(?:\^(\d+))?", factor)
            if m:
                e = int(m.group(2) or 1)
                if m.group(1) == "x":
                    i += e
                else:
                    j += e
            else:
                try:
                    coef = field.mul(coef, field.parse_element(factor))
                except FieldError as exc:
                    raise CurveError(f"bad factor {factor!r} at position {pos}: {exc}") from None
        if sign < 0:
            coef = field.neg(coef)
        terms[(i, j)] = field.add(terms.get((i, j), 0), coef)
        pos += len(tok)
    return BiPoly(field, terms)


@dataclass(frozen=True)
class SuperellipticCurve:
    m: int
    f: UniPoly

    def __post_init__(self):
        if self.m < 1:
            raise CurveError("m must be >= 1")
        if self.f.is_constant():
            raise CurveError("f must be nonconstant")

    @property
    def field(self) -> FieldSpec:
        return self.f.field

    def bipoly(self) -> BiPoly:
        return BiPoly.separated(UniPoly.monomial(self.field, self.m), self.f)

    def is_p_power_form(self) -> bool:
        p = self.field.p
        return self.m % p == 0 and self.f.is_p_power()

    def to_text(self) -> str:
        lhs = "y" if self.m == 1 else f"y^{self.m}"
        return f"{lhs} = {self.f.to_text()}"

    def __str__(self) -> str:
        return self.to_text()


def parse_curve(field: FieldSpec, text: str) -> tuple[UniPoly, UniPoly]:
    """Parse "g(y) = f(x)" into (g, f)."""
    if text.count("=") != 1:
        raise CurveError(f"expected exactly one '=' in {text!r}")
    lhs, rhs = text.split("=")
    try:
        g = parse_poly(field, lhs, var="y")
        f = parse_poly(field, rhs, var="x")
    except PolyError as exc:
        raise CurveError(str(exc)) from None
    return g, f


def parse_superelliptic(field: FieldSpec, text: str) -> SuperellipticCurve:
    g, f = parse_curve(field, text)
    if len(g.terms) != 1 or g.lc != 1 or g.degree < 1:
        raise CurveError(f"left side must be y^m, got {g.to_text('y')!r}")
    return SuperellipticCurve(g.degree, f)


# Frobenius nonclassicality

def fnc_target(F: BiPoly) -> BiPoly:
    """F_x (x^q - x) + F_y (y^q - y)."""
    field = F.field
    q = field.q
    minus1 = field.neg(1)
    xq = BiPoly(field, {(q, 0): 1, (1, 0): minus1})
    yq = BiPoly(field, {(0, q): 1, (0, 1): minus1})
    return F.partial("x") * xq + F.partial("y") * yq


def _reduce_rows(target: dict[int, UniPoly], lower: list[tuple[int, UniPoly]], D: int) -> dict[int, UniPoly]:
    """Reduce a polynomial in y (rows over GF(q)[x]) using y^D = sum lower."""
    out = {j: r for j, r in target.items() if not r.is_zero()}
    top = max(out, default=-1)
    for j in range(top, D - 1, -1):
        T = out.pop(j, None)
        if T is None or T.is_zero():
            continue
        for i, G in lower:
            k = j - D + i
            prod = T * G
            cur = out.get(k)
            out[k] = prod if cur is None else cur + prod
    return {j: r for j, r in out.items() if not r.is_zero()}


def fnc_bivariate_test(F: BiPoly) -> bool:
    """Whether F divides F_x (x^q - x) + F_y (y^q - y)."""
    field = F.field
    if F.total_degree() < 1:
        raise CurveError("constant polynomial")
    if F.is_p_power_form():
        raise PPowerFormError("polynomial lies in GF(q)[x^p, y^p]")
    main = None
    for var in ("y", "x"):
        rows = F.rows(var)
        D = max(rows)
        if D >= 1 and rows[D].is_constant():
            main = var
            break
    if main is None:
        raise CurveError("no unit leading coefficient in y or x")
    G = F if main == "y" else F.swap()
    rows = G.rows("y")
    D = max(rows)
    inv = field.inv(rows[D].lc)
    lower = [(j, (-r).scale(inv)) for j, r in rows.items() if j < D]
    target = fnc_target(G).rows("y")
    return not _reduce_rows(target, lower, D)


def superelliptic_fnc_test(C: SuperellipticCurve) -> bool:
    """Whether m | q - 1 and m f (f^((q-1)/m) - 1) = (x^q - x) f'."""
    if C.is_p_power_form():
        raise PPowerFormError("y^m - f(x) lies in GF(q)[x^p, y^p]")
    field, m, f = C.field, C.m, C.f
    q = field.q
    if (q - 1) % m:
        return False
    u = (q - 1) // m
    df = f.derivative()
    if df.is_zero():
        return False
    # both sides are nonzero, so their degrees must agree first
    if f.degree * (u + 1) != q + df.degree:
        return False
    one = UniPoly.constant(field, 1)
    lhs = (f * (f ** u - one)).scale(field.from_int(m))
    return lhs == UniPoly.fermat(field) * df


@dataclass
class CorollaryScreen:
    items: dict[str, bool]
    notes: dict[str, str] = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.items.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.items.items() if not v]


def corollary_checks(C: SuperellipticCurve) -> CorollaryScreen:
    """Necessary conditions for FNC components of y^m = f(x); a failure rules FNC out."""
    field, m, f = C.field, C.m, C.f
    p, q = field.p, field.q
    deg = f.degree
    df = f.derivative()
    d2f = df.derivative()
    items: dict[str, bool] = {}
    items["i"] = m % p != 0 and not df.is_zero()

    lower_ok = deg * (m + q - 1) >= m * q
    at_lower = deg * (m + q - 1) == m * q
    items["ii"] = (lower_ok and deg <= m
                   and (deg == m) == (deg % p != 0)
                   and at_lower == (df.degree <= 0))

    vals = f.evaluate_all()
    zeros = np.nonzero(vals == 0)[0]
    sqf = squarefree_decomposition(f)
    ok3 = True
    has_simple = False
    for S, k in sqf:
        n_rational = int(np.count_nonzero(S.evaluate_all() == 0))
        if k == 1:
            has_simple = True
        if k % p:
            ok3 &= n_rational == S.degree
        else:
            ok3 &= n_rational == 0
    items["iii"] = ok3
    items["iv"] = len(zeros) > 0 and (not has_simple or m % p == 1 % p)
    items["v"] = (m % p == 1 % p) == d2f.is_zero()

    n_values = len(np.unique(vals))
    ok6 = True
    if len(zeros):
        for k in fiber_multiplicities(f, zeros):
            k = int(k)
            if 0 < k < deg:
                ok6 &= k * n_values <= m - 1 and (k - m) % p == 0
    items["vi"] = ok6
    return CorollaryScreen(items)


@dataclass(frozen=True)
class TLift:
    T: UniPoly
    theta: int
    D: int


def t_lift_solve(f: UniPoly, H: UniPoly) -> TLift | None:
    """Monic T and theta != 0 with T(f) = theta H, via the f-adic expansion of H."""
    if H.is_zero():
        raise PolyError("H must be nonzero")
    if f.is_constant():
        raise PolyError("f must be nonconstant")
    if H.degree % f.degree:
        return None
    D = H.degree // f.degree
    digits = []
    R = H
    for _ in range(D + 1):
        R, c = R.divrem(f)
        if c.degree > 0:
            return None
        digits.append(c.coeff(0))
    if not R.is_zero():
        return None
    # H = lead * T(f) with T monic, so T(f) = H / lead
    field = f.field
    theta = field.inv(digits[D])
    T = UniPoly(field, {i: field.mul(c, theta) for i, c in enumerate(digits)})
    return TLift(T, theta, D)


def schmidt_irreducibility(C: SuperellipticCurve) -> bool:
    g = C.m
    for _, k in squarefree_decomposition(C.f):
        g = gcd(g, k)
    return g == 1


# quadrinomials

@dataclass(frozen=True)
class QuadrinomialInput:
    terms: tuple[tuple[int, int, int, int], ...]
    field: FieldSpec

    def __post_init__(self):
        if len(self.terms) != 4:
            raise QuadrinomialError("need exactly four terms")
        if len({t[:3] for t in self.terms}) != 4:
            raise QuadrinomialError("terms must be distinct")
        if any(t[3] == 0 for t in self.terms):
            raise QuadrinomialError("zero coefficient")
        if len({sum(t[:3]) for t in self.terms}) != 1:
            raise QuadrinomialError("terms must have equal total degree")

    @classmethod
    def homogenize(cls, F: BiPoly) -> QuadrinomialInput:
        d = F.total_degree()
        return cls(tuple((i, j, d - i - j, c) for (i, j), c in sorted(F.terms.items())), F.field)


@dataclass(frozen=True)
class QuadrinomialReduction:
    affine_type: str
    poly: BiPoly
    permutation: tuple[int, int, int]
    monomial: tuple[int, int, int]
    scale: int

    def rehomogenize(self) -> list[tuple[int, int, int, int]]:
        """The input terms, rebuilt from the affine form."""
        F = self.poly.field
        d = self.poly.total_degree()
        out = []
        for (i, j), c in self.poly.terms.items():
            permuted = (i, j, d - i - j)
            orig = [0, 0, 0]
            for slot, var in enumerate(self.permutation):
                orig[var] = permuted[slot]
            e = tuple(orig[v] + self.monomial[v] for v in range(3))
            out.append(e + (F.mul(c, self.scale),))
        return sorted(out)


def _shape(terms: list[tuple[int, int]]) -> str | None:
    pure_x = sorted(i for i, j in terms if i > 0 and j == 0)
    pure_y = sorted(j for i, j in terms if i == 0 and j > 0)
    mixed = [(i, j) for i, j in terms if i > 0 and j > 0]
    const = [t for t in terms if t == (0, 0)]
    nx, ny, nm, nc = len(pure_x), len(pure_y), len(mixed), len(const)
    if (nx, ny, nm, nc) == (2, 2, 0, 0):
        return "i"
    if (nx, ny, nm, nc) == (2, 1, 0, 1):
        return "ii"
    if (nx, ny, nm, nc) == (3, 1, 0, 0):
        return "iii"
    if (nx, ny, nm, nc) == (1, 1, 2, 0):
        return "iv"
    if (nx, ny, nm, nc) == (1, 1, 1, 1):
        return "v"
    return None


def _normalizing_term(kind: str, terms: list[tuple[int, int]]) -> tuple[int, int]:
    """The term whose coefficient the affine shape fixes to 1."""
    if kind in ("ii", "v"):
        return (0, 0)
    pure_y = sorted(t for t in terms if t[0] == 0)
    if kind == "i":
        return pure_y[-1]
    return pure_y[0]


def quadrinomial_reduce(Q: QuadrinomialInput) -> QuadrinomialReduction:
    field = Q.field
    mono = tuple(min(t[v] for t in Q.terms) for v in range(3))
    reduced = [(t[0] - mono[0], t[1] - mono[1], t[2] - mono[2], t[3]) for t in Q.terms]
    for kind in ("i", "ii", "iii", "iv", "v"):
        for perm in itertools.permutations(range(3)):
            # perm[slot] = original variable placed at slot (x, y, z); z is set to 1
            affine = [((t[perm[0]], t[perm[1]]), t[3]) for t in reduced]
            exps = [e for e, _ in affine]
            if len(set(exps)) != 4:
                continue
            if _shape(exps) != kind:
                continue
            norm = dict(affine)[_normalizing_term(kind, exps)]
            inv = field.inv(norm)
            poly = BiPoly(field, {e: field.mul(c, inv) for e, c in affine})
            return QuadrinomialReduction(kind, poly, tuple(perm), mono, norm)
    raise QuadrinomialError("no affine quadrinomial shape matches the reduced form")


# separated variables

FNC, NOT_FNC, INCONCLUSIVE = "FNC", "NotFNC", "Inconclusive"


def separated_fnc_via_mvsp(f: UniPoly, g: UniPoly) -> str:
    """Verdict on FNC components of f(x) = g(y) from value sets of f and g."""
    if f.is_constant() or g.is_constant():
        raise PolyError("f and g must be nonconstant")
    if f.is_p_power() and g.is_p_power():
        raise PPowerFormError("f(x) - g(y) lies in GF(q)[x^p, y^p]")
    field = f.field
    vf = np.unique(f.evaluate_all())
    vg = np.unique(g.evaluate_all())
    q = field.q
    f_min = len(vf) == (q - 1) // f.degree + 1
    g_min = len(vg) == (q - 1) // g.degree + 1
    if not (f_min and g_min and np.array_equal(vf, vg)):
        return NOT_FNC
    if len(vf) > 2 or (len(vf) == 2 and field.p == 2):
        return FNC
    return INCONCLUSIVE


def trinomial_power_check(F: UniPoly, s: int) -> bool:
    """Whether F^s still has exactly three terms."""
    if len(F.terms) != 3 or 0 in F.terms:
        raise PolyError("expected a trinomial with F(0) = 0")
    if s <= 1:
        raise ValueError("s must exceed 1")
    return len((F ** s).terms) == 3
