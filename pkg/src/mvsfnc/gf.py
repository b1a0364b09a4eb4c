"""Finite fields GF(p^n) with table-driven arithmetic.

Elements are carried as integer codes: the element c_0 + c_1 t + ... + c_{n-1} t^{n-1}
of GF(p)[t]/(modulus) has code c_0 + c_1 p + ... + c_{n-1} p^{n-1}.  Codes order the
elements canonically, and the same ordering is used to pick the modulus and the
primitive element.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

HARD_MAX_Q = 1 << 20


class FieldError(ValueError):
    """Raised for invalid field parameters or mixed-field arithmetic."""


def max_q() -> int:
    """The active size guard; ``MVSP_MAX_Q`` can only lower it."""
    raw = os.environ.get("MVSP_MAX_Q")
    if not raw:
        return HARD_MAX_Q
    try:
        val = int(raw)
    except ValueError:
        raise FieldError(f"MVSP_MAX_Q must be an integer, got {raw!r}") from None
    return max(2, min(val, HARD_MAX_Q))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, n) with q = p^n, or None."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    (p, n), = f.items()
    return p, n


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- polynomials over the prime field, lists low-to-high; only used to find moduli

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, f, p)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible_prime_field(f: list[int], p: int) -> bool:
    """Ben-Or test for a monic polynomial over GF(p)."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    h = [0, 1]
    for _ in range(n // 2):
        acc = [1]
        base = h
        e = p
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        h = acc
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _trim(diff), p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    if n == 1:
        return (0, 1)
    for code in range(p ** n):
        coeffs = [(code // p ** i) % p for i in range(n)] + [1]
        if coeffs[0] == 0:
            continue
        if is_irreducible_prime_field(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")


@dataclass(frozen=True)
class PowerTable:
    xi: int
    exp: np.ndarray
    log: np.ndarray


class FieldSpec:
    """GF(p^n) with a fixed modulus; operations act on integer element codes."""

    def __init__(self, p: int, n: int, modulus: tuple[int, ...] | None = None):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if not isinstance(n, int) or n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        q = p ** n
        if q > max_q():
            raise FieldError(f"q = {q} exceeds the size guard {max_q()}")
        if modulus is None:
            modulus = smallest_irreducible(p, n)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree n")
            if any(not 0 <= c < p for c in modulus):
                raise FieldError("modulus coefficients must lie in [0, p)")
            if not is_irreducible_prime_field(list(modulus), p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.n = n
        self.q = q
        self.order = q - 1
        self.modulus = modulus
        self._build_tables()

    # construction

    def _digits_array(self, codes: np.ndarray) -> np.ndarray:
        out = np.empty((len(codes), self.n), dtype=np.int64)
        rest = np.asarray(codes, dtype=np.int64).copy()
        for i in range(self.n):
            out[:, i] = rest % self.p
            rest //= self.p
        return out

    def _codes_from_digits(self, digits: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(self.n, dtype=np.int64)
        return digits @ weights

    def _mul_digits_by(self, digits: np.ndarray, code: int) -> np.ndarray:
        p, n = self.p, self.n
        b = [(code // p ** i) % p for i in range(n)]
        prod = np.zeros((digits.shape[0], 2 * n - 1), dtype=np.int64)
        for j, c in enumerate(b):
            if c:
                prod[:, j:j + n] += c * digits
        prod %= p
        mod = np.array(self.modulus[:n], dtype=np.int64)
        for k in range(2 * n - 2, n - 1, -1):
            lead = prod[:, k].copy()
            prod[:, k] = 0
            prod[:, k - n:k] = (prod[:, k - n:k] - lead[:, None] * mod) % p
        return prod[:, :n]

    def _raw_mul(self, a: int, b: int) -> int:
        d = self._digits_array(np.array([a]))
        return int(self._codes_from_digits(self._mul_digits_by(d, b))[0])

    def _raw_pow(self, a: int, e: int) -> int:
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self._raw_mul(acc, base)
            base = self._raw_mul(base, base)
            e >>= 1
        return acc

    def _build_tables(self) -> None:
        N = self.order
        primes = list(factorize(N)) if N > 1 else []
        xi = None
        for c in range(1, self.q):
            if all(self._raw_pow(c, N // r) != 1 for r in primes):
                xi = c
                break
        assert xi is not None
        block = np.zeros((1, self.n), dtype=np.int64)
        block[0, 0] = 1
        step = xi
        while block.shape[0] < N:
            block = np.vstack([block, self._mul_digits_by(block, step)])
            step = self._raw_mul(step, step)
        exp = self._codes_from_digits(block[:N])
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(N)
        if N and (np.any(log[1:] < 0) or log[0] != -1):
            raise FieldError("power table is not a bijection; modulus not irreducible")
        self.xi = xi
        # doubled so exp2[i + j] needs no reduction for i, j < N
        self.exp_np = np.concatenate([exp, exp]) if N else exp
        self.log_np = log
        self._exp = [int(v) for v in self.exp_np]
        self._log = [int(v) for v in log]
        p, n, q = self.p, self.n, self.q
        self._neg = [int(v) for v in self._codes_from_digits((-self._digits_array(np.arange(q))) % p)]
        self._add_list = None
        self._add_np = None
        if p != 2 and n > 1:
            if q <= 2048:
                d = self._digits_array(np.arange(q))
                table = self._codes_from_digits(((d[:, None, :] + d[None, :, :]) % p).reshape(q * q, n))
                self._add_np = table.reshape(q, q)
                if q <= 512:
                    self._add_list = [int(v) for v in table]
            # Zech logarithms for scalar addition in larger fields
            if self._add_list is None:
                one_plus = self._codes_from_digits((self._digits_array(exp) + np.eye(1, n, dtype=np.int64)) % p)
                zech = log[one_plus]
                self._zech = [int(v) for v in zech]

    @cached_property
    def power_table(self) -> PowerTable:
        return PowerTable(self.xi, self.exp_np[:self.order].copy(), self.log_np.copy())

    # identity

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec({self.spec_string()})"

    def spec_string(self, explicit: bool = False) -> str:
        s = f"{self.p}^{self.n}"
        if explicit:
            s += ":" + ",".join(str(c) for c in self.modulus)
        return s

    def modulus_string(self) -> str:
        terms = []
        for i in range(self.n, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}" if i == 0 else f"{c}*{mono}")
        return "+".join(terms)

    # scalar arithmetic on codes

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            s = a + b
            return s - self.p if s >= self.p else s
        if self._add_list is not None:
            return self._add_list[a * self.q + b]
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        d = lb - la
        if d < 0:
            d += self.order
        z = self._zech[d]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        la = self._log[a]
        return self._exp[(self.order - la) % self.order]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % self.order]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[self._log[a] * e % self.order]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        k %= self.n
        return self.pow(a, self.p ** k) if k else a

    def pth_root(self, a: int, k: int = 1) -> int:
        """The unique b with b^(p^k) = a."""
        return self.frobenius(a, (-k) % self.n)

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime field."""
        return k % self.p

    def log_of(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return self._log[a]

    def exp_of(self, k: int) -> int:
        return self._exp[k % self.order]

    def mult_order(self, a: int) -> int:
        from math import gcd
        return self.order // gcd(self._log[a], self.order)

    def in_subfield(self, a: int, m: int) -> bool:
        if self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        return self.pow(a, self.p ** m) == a

    def subfield_elements(self, m: int) -> list[int]:
        if self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        step = self.order // (self.p ** m - 1)
        return [0] + sorted(self._exp[i] for i in range(0, self.order, step))

    def norm(self, a: int, m: int) -> int:
        """Norm from GF(q) onto GF(p^m)."""
        if m < 1 or self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        if a == 0:
            return 0
        r = self.pow(a, self.order // (self.p ** m - 1))
        assert self.in_subfield(r, m)
        return r

    def elements(self) -> range:
        return range(self.q)

    def element(self, code: int) -> FieldElement:
        return FieldElement(self, code)

    def primitive_element(self) -> FieldElement:
        return FieldElement(self, self.xi)

    def norm_to_subfield(self, m: int, a: FieldElement) -> FieldElement:
        self._check(a)
        return FieldElement(self, self.norm(a.code, m))

    def _check(self, a: FieldElement) -> None:
        if a.field is not self and a.field != self:
            raise FieldError("element belongs to a different field")

    def digits(self, code: int) -> tuple[int, ...]:
        return tuple((code // self.p ** i) % self.p for i in range(self.n))

    def from_digits(self, digits) -> int:
        if len(digits) != self.n:
            raise FieldError(f"expected {self.n} coordinates, got {len(digits)}")
        code = 0
        for i, c in enumerate(digits):
            c = int(c)
            if not 0 <= c < self.p:
                raise FieldError(f"coordinate {c} out of range [0, {self.p})")
            code += c * self.p ** i
        return code

    def subfield_embedding(self, m: int) -> list[int]:
        """Map codes of GF(p^m) (smallest modulus) into this field.

        Sends the generator of GF(p^m) to the root of its modulus with the
        smallest code here, so the map is a field homomorphism.
        """
        if self.n % m:
            raise FieldError(f"{m} does not divide {self.n}")
        sub = field_create(self.p, m)
        mod = sub.modulus
        root = None
        for r in range(self.q):
            acc = 0
            for c in reversed(mod):
                acc = self.add(self.mul(acc, r), c)
            if acc == 0:
                root = r
                break
        assert root is not None
        powers = [self.pow(root, i) for i in range(m)]
        out = []
        for code in range(sub.q):
            acc = 0
            for i, c in enumerate(sub.digits(code)):
                for _ in range(c):
                    acc = self.add(acc, powers[i])
            out.append(acc)
        return out

    # vectorized arithmetic on numpy code arrays

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % self.p
        if self._add_np is not None:
            return self._add_np[a, b]
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        ra, rb = a.copy(), b.copy()
        w = 1
        for _ in range(self.n):
            out += ((ra % self.p + rb % self.p) % self.p) * w
            ra //= self.p
            rb //= self.p
            w *= self.p
        return out

    def vneg(self, a):
        return np.asarray(self._neg, dtype=np.int64)[np.asarray(a, dtype=np.int64)] if self.p != 2 else np.asarray(a, dtype=np.int64)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log_np[a], self.log_np[b]
        zero = (la < 0) | (lb < 0)
        out = self.exp_np[np.where(zero, 0, la + lb)]
        return np.where(zero, 0, out)

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        la = self.log_np[a]
        if e == 0:
            return np.ones_like(a)
        out = self.exp_np[np.where(la < 0, 0, (la * e) % self.order)]
        return np.where(la < 0, 0, out)

    # text

    def format_element(self, code: int, style: str = "power") -> str:
        if style == "vector":
            return "[" + ",".join(str(c) for c in self.digits(code)) + "]"
        if code == 0:
            return "0"
        return f"g^{self._log[code]}"

    def format_coefficient(self, code: int) -> str:
        """Integer for prime-subfield values, g^k otherwise."""
        if code < self.p:
            return str(code)
        return f"g^{self._log[code]}"

    def parse_element(self, text: str) -> int:
        s = text.strip().replace(" ", "")
        if not s:
            raise FieldError("empty element")
        if s.startswith("[") and s.endswith("]"):
            parts = [t for t in s[1:-1].split(",") if t != ""]
            return self.from_digits([int(t) for t in parts])
        neg = False
        if s[0] in "+-":
            neg = s[0] == "-"
            s = s[1:]
        m = re.fullmatch(r"g(?:\^(-?\d+))?", s)
        if m:
            val = self.exp_of(int(m.group(1) or 1))
        elif re.fullmatch(r"\d+", s):
            val = self.from_int(int(s))
        else:
            raise FieldError(f"cannot parse field element {text!r}")
        return self.neg(val) if neg else val


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.q:
            raise FieldError(f"code {self.code} outside GF({self.field.q})")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            self.field._check(other)
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.div(self.code, o))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def __str__(self) -> str:
        return self.field.format_element(self.code)


@lru_cache(maxsize=None)
def _cached_field(p: int, n: int, modulus: tuple[int, ...] | None) -> FieldSpec:
    return FieldSpec(p, n, modulus)


def field_create(p: int, n: int = 1, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    if isinstance(p, int) and isinstance(n, int) and n >= 1 and p ** n > max_q():
        raise FieldError(f"q = {p}^{n} exceeds the size guard {max_q()}")
    return _cached_field(p, n, tuple(modulus) if modulus is not None else None)


def field_for_q(q: int) -> FieldSpec:
    pn = prime_power(q)
    if pn is None:
        raise FieldError(f"{q} is not a prime power")
    return field_create(*pn)


def parse_field(text: str) -> FieldSpec:
    """Parse "p^n", "q", or "p^n:c0,c1,...,1"."""
    s = text.strip().replace(" ", "")
    m = re.fullmatch(r"(\d+)(?:\^(\d+))?(?::([\d,]+))?", s)
    if not m:
        raise FieldError(f"malformed field {text!r}; expected p^n or p^n:c0,...,1")
    base, expo, mod = m.group(1), m.group(2), m.group(3)
    if expo is None:
        if mod is not None:
            raise FieldError("explicit modulus requires the p^n form")
        return field_for_q(int(base))
    p, n = int(base), int(expo)
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if mod is None:
        return field_create(p, n)
    coeffs = tuple(int(c) for c in mod.split(",") if c != "")
    return field_create(p, n, coeffs)


def prime_powers_up_to(bound: int) -> list[int]:
    return [q for q in range(2, bound + 1) if prime_power(q) is not None]
