"""Sparse univariate polynomials over GF(q) and their value-set analysis."""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import FieldError, FieldSpec

# products with fewer coefficient pairs than this stay in pure Python
_DENSE_THRESHOLD = 400


class PolyError(ValueError):
    pass


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num = den = 1
        for i in range(ki):
            num = num * (ni - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return out


class UniPoly:
    """Immutable sparse polynomial: ``terms`` maps exponent -> nonzero coefficient code."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: FieldSpec, terms: dict[int, int] | None = None):
        self.field = field
        clean = {}
        if terms:
            q = field.q
            for e, c in terms.items():
                if c:
                    if e < 0 or not 0 <= c < q:
                        raise PolyError(f"bad term {c}*x^{e}")
                    clean[int(e)] = int(c)
        self.terms = clean
        self._hash = None

    # constructors

    @classmethod
    def _raw(cls, field: FieldSpec, terms: dict[int, int]) -> UniPoly:
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, c: int = 1) -> UniPoly:
        return cls(field, {e: c})

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> UniPoly:
        return cls(field, {0: c})

    @classmethod
    def x(cls, field: FieldSpec) -> UniPoly:
        return cls(field, {1: 1})

    @classmethod
    def fermat(cls, field: FieldSpec) -> UniPoly:
        """x^q - x."""
        return cls(field, {field.q: 1, 1: field.neg(1)})

    @classmethod
    def from_dense(cls, field: FieldSpec, arr) -> UniPoly:
        arr = np.asarray(arr)
        nz = np.nonzero(arr)[0]
        return cls._raw(field, {int(e): int(arr[e]) for e in nz})

    @classmethod
    def from_roots(cls, field: FieldSpec, roots) -> UniPoly:
        """Monic product of (x - r) over the given roots."""
        roots = [int(r) for r in roots]
        if len(roots) <= 16:
            coeffs = [1]
            for r in roots:
                nr = field.neg(r)
                nxt = [0] + coeffs
                for i, c in enumerate(coeffs):
                    nxt[i] = field.add(nxt[i], field.mul(c, nr))
                coeffs = nxt
            return cls._raw(field, {e: c for e, c in enumerate(coeffs) if c})
        acc = np.ones(1, dtype=np.int64)
        for r in roots:
            nr = field.neg(int(r))
            nxt = np.zeros(len(acc) + 1, dtype=np.int64)
            nxt[1:] = acc
            if nr:
                nxt[:-1] = field.vadd(nxt[:-1], field.vmul(acc, nr))
            acc = nxt
        return cls.from_dense(field, acc)

    # basic queries

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def lc(self) -> int:
        return self.terms[self.degree] if self.terms else 0

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def coeff(self, e: int) -> int:
        return self.terms.get(e, 0)

    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def dense(self, length: int | None = None) -> np.ndarray:
        d = self.degree
        arr = np.zeros(max(d + 1, length or 0), dtype=np.int64)
        for e, c in self.terms.items():
            arr[e] = c
        return arr

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"UniPoly({self.to_text()!r} over GF({self.field.q}))"

    def __str__(self) -> str:
        return self.to_text()

    # arithmetic

    def _same(self, other: UniPoly) -> None:
        if other.field is not self.field and other.field != self.field:
            raise FieldError("polynomials over different fields")

    def __add__(self, other: UniPoly) -> UniPoly:
        self._same(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return UniPoly._raw(F, out)

    def __neg__(self) -> UniPoly:
        neg = self.field.neg
        return UniPoly._raw(self.field, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def scale(self, c: int) -> UniPoly:
        if c == 0:
            return UniPoly._raw(self.field, {})
        if c == 1:
            return self
        mul = self.field.mul
        return UniPoly._raw(self.field, {e: mul(v, c) for e, v in self.terms.items()})

    def shift(self, k: int) -> UniPoly:
        return UniPoly._raw(self.field, {e + k: c for e, c in self.terms.items()})

    def __mul__(self, other) -> UniPoly:
        if isinstance(other, int):
            return self.scale(other)
        self._same(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return UniPoly._raw(self.field, {})
        if len(a) * len(b) <= _DENSE_THRESHOLD:
            F = self.field
            exp, log, add = F._exp, F._log, F.add
            out: dict[int, int] = {}
            for e1, c1 in a.items():
                l1 = log[c1]
                for e2, c2 in b.items():
                    e = e1 + e2
                    out[e] = add(out.get(e, 0), exp[l1 + log[c2]])
            return UniPoly._raw(F, {e: c for e, c in out.items() if c})
        return _dense_mul(self, other)

    def __pow__(self, e: int) -> UniPoly:
        if e < 0:
            raise PolyError("negative power")
        F = self.field
        if e == 0:
            return UniPoly.constant(F, 1)
        if len(self.terms) == 1:
            (d, c), = self.terms.items()
            return UniPoly._raw(F, {d * e: F.pow(c, e)})
        # base-p digits: F^e = prod_j (F^(p^j))^(e_j)
        result = None
        j = 0
        while e:
            digit = e % F.p
            if digit:
                part = _small_pow(self.frobenius(j), digit)
                result = part if result is None else result * part
            e //= F.p
            j += 1
        return result

    def frobenius(self, k: int = 1) -> UniPoly:
        """self^(p^k), computed termwise."""
        if k == 0:
            return self
        F = self.field
        pk = F.p ** k
        return UniPoly._raw(F, {e * pk: F.frobenius(c, k) for e, c in self.terms.items()})

    def is_p_power(self) -> bool:
        p = self.field.p
        return all(e % p == 0 for e in self.terms)

    def pth_root(self, k: int = 1) -> UniPoly:
        """The polynomial G with G^(p^k) = self; raises if none exists."""
        F = self.field
        pk = F.p ** k
        if any(e % pk for e in self.terms):
            raise PolyError(f"not a p^{k}-th power")
        return UniPoly._raw(F, {e // pk: F.pth_root(c, k) for e, c in self.terms.items()})

    def derivative(self) -> UniPoly:
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e:
                v = F.mul(F.from_int(e), c)
                if v:
                    out[e - 1] = v
        return UniPoly._raw(F, out)

    def hasse_derivative(self, k: int) -> UniPoly:
        """k-th Hasse derivative: sum of C(e, k) c_e x^(e - k)."""
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e >= k:
                b = binom_mod_p(e, k, F.p)
                if b:
                    out[e - k] = F.mul(b, c)
        return UniPoly._raw(F, out)

    def monic(self) -> UniPoly:
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.lc))

    def compose(self, inner: UniPoly) -> UniPoly:
        """self(inner) by Horner's rule."""
        self._same(inner)
        F = self.field
        acc = UniPoly._raw(F, {})
        if not self.terms:
            return acc
        prev = None
        for e in sorted(self.terms, reverse=True):
            if prev is not None:
                acc = acc * (inner ** (prev - e))
            acc = acc + UniPoly._raw(F, {0: self.terms[e]})
            prev = e
        if prev:
            acc = acc * (inner ** prev)
        return acc

    def substitute_scale(self, lam: int) -> UniPoly:
        """self(lam * x)."""
        F = self.field
        return UniPoly._raw(F, {e: F.mul(c, F.pow(lam, e)) for e, c in self.terms.items()})

    def reduce_fermat(self) -> UniPoly:
        """Reduction modulo x^q - x (same function on GF(q), degree <= q - 1)."""
        F = self.field
        N = F.order
        out: dict[int, int] = {}
        for e, c in self.terms.items():
            r = e if e < F.q else ((e - 1) % N) + 1
            out[r] = F.add(out.get(r, 0), c)
        return UniPoly._raw(F, {e: c for e, c in out.items() if c})

    def divrem(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        return divrem(self, other)

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return divrem(self, other)[0]

    def __mod__(self, other: UniPoly) -> UniPoly:
        return divrem(self, other)[1]

    # evaluation

    def __call__(self, a: int) -> int:
        F = self.field
        if a == 0:
            return self.terms.get(0, 0)
        la = F._log[a]
        N = F.order
        exp, log, add = F._exp, F._log, F.add
        acc = 0
        for e, c in self.terms.items():
            acc = add(acc, exp[(log[c] + la * e) % N])
        return acc

    def evaluate(self, a) -> int:
        code = a.code if hasattr(a, "code") else int(a)
        return self(code)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Values at an array of element codes."""
        F = self.field
        pts = np.asarray(points, dtype=np.int64)
        lp = F.log_np[pts]
        nz = lp >= 0
        lpn = np.where(nz, lp, 0)
        acc = np.zeros(len(pts), dtype=np.int64)
        for e, c in self.terms.items():
            vals = F.exp_np[(F._log[c] + lpn * e) % F.order]
            acc = F.vadd(acc, vals)
        const = self.terms.get(0, 0)
        return np.where(nz, acc, const)

    def evaluate_all(self) -> np.ndarray:
        """Values indexed by element code 0..q-1."""
        return self.evaluate_many(np.arange(self.field.q))

    # text

    def to_text(self, var: str = "x") -> str:
        return format_poly(self, var)

    # value sets

    def value_set(self) -> ValueSetReport:
        return value_set(self)


def _small_pow(P: UniPoly, e: int) -> UniPoly:
    result = None
    base = P
    while e:
        if e & 1:
            result = base if result is None else result * base
        e >>= 1
        if e:
            base = base * base
    return result


def _dense_mul(A: UniPoly, B: UniPoly) -> UniPoly:
    F = A.field
    if len(A.terms) > len(B.terms):
        A, B = B, A
    db = B.dense()
    lb = F.log_np[db]
    mask = lb >= 0
    lbz = np.where(mask, lb, 0)
    out = np.zeros(A.degree + B.degree + 1, dtype=np.int64)
    L = len(db)
    for e, c in A.terms.items():
        vals = np.where(mask, F.exp_np[lbz + F._log[c]], 0)
        out[e:e + L] = F.vadd(out[e:e + L], vals)
    return UniPoly.from_dense(F, out)


def divrem(A: UniPoly, B: UniPoly) -> tuple[UniPoly, UniPoly]:
    A._same(B)
    F = A.field
    if B.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    db = B.degree
    if A.degree < db:
        return UniPoly._raw(F, {}), A
    inv_lc = F.inv(B.lc)
    if len(B.terms) > 24 and A.degree - db > 24:
        return _dense_divrem(A, B, inv_lc)
    rem = dict(A.terms)
    heap = [-e for e in rem]
    heapq.heapify(heap)
    lower = [(e - db, c) for e, c in B.terms.items() if e != db]
    quo: dict[int, int] = {}
    exp, log, add = F._exp, F._log, F.add
    while heap:
        e = -heapq.heappop(heap)
        if e < db:
            break
        c = rem.pop(e, 0)
        if not c:
            continue
        t = F.mul(c, inv_lc)
        quo[e - db] = t
        nt = log[F.neg(t)]
        for off, bc in lower:
            k = e + off
            old = rem.get(k)
            v = exp[nt + log[bc]]
            if old is None:
                rem[k] = v
                heapq.heappush(heap, -k)
            else:
                s = add(old, v)
                if s:
                    rem[k] = s
                else:
                    del rem[k]
    return UniPoly._raw(F, quo), UniPoly._raw(F, {e: c for e, c in rem.items() if c})


def _dense_divrem(A: UniPoly, B: UniPoly, inv_lc: int) -> tuple[UniPoly, UniPoly]:
    F = A.field
    a = A.dense()
    b = B.dense()
    db = len(b) - 1
    lb = F.log_np[b[:db]]
    mask = lb >= 0
    lbz = np.where(mask, lb, 0)
    quo = np.zeros(len(a) - db, dtype=np.int64)
    for k in range(len(a) - 1, db - 1, -1):
        c = int(a[k])
        if not c:
            continue
        t = F.mul(c, inv_lc)
        quo[k - db] = t
        nt = F._log[F.neg(t)]
        a[k - db:k] = F.vadd(a[k - db:k], np.where(mask, F.exp_np[lbz + nt], 0))
        a[k] = 0
    return UniPoly.from_dense(F, quo), UniPoly.from_dense(F, a[:db])


def gcd(A: UniPoly, B: UniPoly) -> UniPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    A._same(B)
    while not B.is_zero():
        A, B = B, divrem(A, B)[1]
    return A.monic()


def derivative(F: UniPoly) -> UniPoly:
    return F.derivative()


def is_p_power(F: UniPoly) -> bool:
    return F.is_p_power()


def squarefree_decomposition(F: UniPoly) -> list[tuple[UniPoly, int]]:
    """Monic squarefree S_i with F = lc * prod S_i^i over the closure.

    Yun's algorithm, with the p-th power part handled through coefficient
    p-th roots.
    """
    if F.is_zero():
        raise PolyError("squarefree decomposition of the zero polynomial")
    field = F.field
    p = field.p
    out: dict[int, UniPoly] = {}

    def merge(S: UniPoly, mult: int) -> None:
        if S.degree <= 0:
            return
        if mult in out:
            out[mult] = out[mult] * S
        else:
            out[mult] = S

    def rec(G: UniPoly, scale: int) -> None:
        G = G.monic()
        if G.degree <= 0:
            return
        dG = G.derivative()
        if dG.is_zero():
            rec(G.pth_root(), scale * p)
            return
        c = gcd(G, dG)
        w = divrem(G, c)[0]
        i = 1
        while w.degree > 0:
            y = gcd(w, c)
            z = divrem(w, y)[0]
            merge(z.monic(), i * scale)
            i += 1
            w = y
            c = divrem(c, y)[0]
        if c.degree > 0:
            rec(c.pth_root(), scale * p)

    rec(F, 1)
    return sorted(((S, k) for k, S in out.items()), key=lambda t: t[1])


def squarefree_multiplicities(F: UniPoly) -> list[tuple[int, int]]:
    """(factor degree, multiplicity) pairs; factor degree counts roots in the closure."""
    return [(S.degree, k) for S, k in squarefree_decomposition(F)]


def root_multiplicity(F: UniPoly, a: int) -> int:
    """Multiplicity of a as a root of F, by repeated synthetic division by x - a."""
    field = F.field
    if F.is_zero():
        raise PolyError("zero polynomial")
    coeffs = [int(v) for v in F.dense()]
    mult = 0
    while len(coeffs) > 1:
        # synthetic division: quotient and remainder of coeffs / (x - a)
        acc = 0
        quo = [0] * (len(coeffs) - 1)
        for i in range(len(coeffs) - 1, -1, -1):
            acc = field.add(field.mul(acc, a), coeffs[i])
            if i:
                quo[i - 1] = acc
        if acc != 0:
            break
        mult += 1
        coeffs = quo
    return mult


def fiber_multiplicities(F: UniPoly, points: np.ndarray) -> np.ndarray:
    """Multiplicity of each point a as a root of F - F(a).

    The k-th Taylor coefficient of F at a is the k-th Hasse derivative at a,
    which is the remainder produced at the k-th step of repeated synthetic
    division; the multiplicity is the first k >= 1 with a nonzero remainder.
    """
    pts = np.asarray(points, dtype=np.int64)
    mult = np.zeros(len(pts), dtype=np.int64)
    at_zero = pts == 0
    if at_zero.any():
        # Taylor coefficients at 0 are the coefficients themselves
        mult[at_zero] = min((e for e in F.terms if e > 0), default=0)
    todo = np.nonzero(~at_zero)[0]
    k = 1
    deg = F.degree
    while len(todo) and k <= deg:
        vals = F.hasse_derivative(k).evaluate_many(pts[todo])
        hit = vals != 0
        mult[todo[hit]] = k
        todo = todo[~hit]
        k += 1
    if len(todo):
        raise PolyError("multiplicity exceeds degree")
    return mult


@dataclass
class ValueSetReport:
    poly: UniPoly
    values: list[int]
    fibers: dict[int, list[tuple[int, int]]]
    gamma0: int
    nu: int
    ell: dict[int, int] = dc_field(default_factory=dict)

    @property
    def r(self) -> int:
        return len(self.values) - 1

    @property
    def size(self) -> int:
        return len(self.values)

    def fiber_poly(self, gamma: int) -> UniPoly:
        cache = self.__dict__.setdefault("_fiber_polys", {})
        if gamma not in cache:
            cache[gamma] = UniPoly.from_roots(self.poly.field, [a for a, _ in self.fibers[gamma]])
        return cache[gamma]

    @property
    def L(self) -> dict[int, UniPoly]:
        return {g: self.fiber_poly(g) for g in self.values}


def value_set(F: UniPoly) -> ValueSetReport:
    if F.is_constant():
        raise PolyError("value set of a constant polynomial")
    field = F.field
    vals = F.evaluate_all()
    order = np.argsort(vals, kind="stable")
    sv = vals[order]
    cuts = np.nonzero(np.diff(sv))[0] + 1
    groups = np.split(order, cuts)
    mults = fiber_multiplicities(F, np.arange(field.q))
    fibers: dict[int, list[tuple[int, int]]] = {}
    ell: dict[int, int] = {}
    for g in groups:
        gamma = int(vals[g[0]])
        fibers[gamma] = [(int(a), int(mults[a])) for a in g]
        ell[gamma] = len(g)
    values = sorted(fibers)
    min_ell = min(ell.values())
    gamma0 = min(v for v in values if ell[v] == min_ell)
    nu = min(m for _, m in fibers[gamma0])
    return ValueSetReport(F, values, fibers, gamma0, nu, ell)


def value_set_size(F: UniPoly) -> int:
    return len(np.unique(F.evaluate_all()))


def mvsp_bound(q: int, degree: int) -> int:
    return (q - 1) // degree + 1


def is_mvsp(F: UniPoly) -> bool:
    if F.is_constant():
        raise PolyError("is_mvsp of a constant polynomial")
    return value_set_size(F) == mvsp_bound(F.field.q, F.degree)


# text format

def _split_terms(s: str) -> list[tuple[int, str]]:
    """Split on top-level + and - (not inside brackets or after ^)."""
    out = []
    start = 0
    depth = 0
    for i, ch in enumerate(s):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and s[i - 1] not in "^*":
            out.append((start, s[start:i]))
            start = i
    out.append((start, s[start:]))
    return out


def parse_poly(field: FieldSpec, text: str, var: str = "x") -> UniPoly:
    s = text.replace(" ", "")
    if not s:
        raise PolyError("empty polynomial text")
    terms: dict[int, int] = {}
    for pos, tok in _split_terms(s):
        body = tok
        sign = 1
        if body.startswith("+"):
            body = body[1:]
        elif body.startswith("-"):
            sign = -1
            body = body[1:]
        if not body:
            raise PolyError(f"empty term at position {pos}")
        if "*" in body:
            coef_txt, _, mono = body.partition("*")
            if not coef_txt or not mono:
                raise PolyError(f"dangling '*' in term {tok!r} at position {pos}")
        elif body.startswith(var):
            coef_txt, mono = "", body
        else:
            coef_txt, mono = body, ""
        if mono:
            m = re.fullmatch(re.escape(var) + r"(?:\^(\d+))?", mono)
            if not m:
                raise PolyError(f"bad monomial {mono!r} at position {pos}")
            e = int(m.group(1)) if m.group(1) else 1
        else:
            e = 0
        try:
            c = field.parse_element(coef_txt) if coef_txt else 1
        except FieldError as exc:
            raise PolyError(f"bad coefficient {coef_txt!r} at position {pos}: {exc}") from None
        if sign < 0:
            c = field.neg(c)
        terms[e] = field.add(terms.get(e, 0), c)
    return UniPoly(field, terms)


def format_poly(P: UniPoly, var: str = "x") -> str:
    F = P.field
    if P.is_zero():
        return "0"
    parts = []
    for e in sorted(P.terms, reverse=True):
        c = P.terms[e]
        coef = F.format_coefficient(c)
        if e == 0:
            parts.append(coef)
            continue
        mono = var if e == 1 else f"{var}^{e}"
        parts.append(mono if c == 1 else f"{coef}*{mono}")
    return "+".join(parts)
