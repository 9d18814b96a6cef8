"""Arithmetic for small finite fields GF(p^e).

Elements are coefficient vectors over F_p in a fixed polynomial basis. The
reducing modulus is chosen canonically (lexicographically smallest monic
irreducible, comparing coefficients from the constant term upward), so element
indices are reproducible across runs: element i has coefficients equal to the
base-p digits of i, index 0 is zero and index 1 is the multiplicative
identity.

Everything here is pure and immutable; fields and elements can be shared
freely across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

DEFAULT_ORDER_BOUND = 1 << 20

_FIELD_CACHE: dict[tuple[int, int], "FieldSpec"] = {}


class FieldError(ValueError):
    """Invalid field construction or illegal element operation."""


def is_prime(n: int) -> bool:
    """Trial-division primality test; all inputs here are desk scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p.  Coefficient tuples, constant term first.
# ---------------------------------------------------------------------------

def _trim(c: tuple[int, ...]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return c[:i]


def _pmod(a: tuple[int, ...], mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Remainder of a modulo the monic polynomial mod."""
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _trim(tuple(x % p for x in a[:dm]))


def _pmul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(tuple(out))


def _psub(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    m = max(len(a), len(b))
    out = [0] * m
    for i in range(m):
        if i < len(a):
            out[i] += a[i]
        if i < len(b):
            out[i] -= b[i]
        out[i] %= p
    return _trim(tuple(out))


def _pgcd(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    a, b = _trim(a), _trim(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = tuple((c * inv) % p for c in b)  # monic divisor
        r = list(a)
        db = len(bm) - 1
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] % p
            if c:
                for j in range(db + 1):
                    r[i - db + j] = (r[i - db + j] - c * bm[j]) % p
        a, b = b, _trim(tuple(r[:db]))
    return a


def _frobenius_power(base: tuple[int, ...], mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    """base^p reduced modulo mod, by square-and-multiply on the exponent p."""
    result: tuple[int, ...] = (1,)
    acc = base
    k = p
    while k:
        if k & 1:
            result = _pmod(_pmul(result, acc, p), mod, p)
        acc = _pmod(_pmul(acc, acc, p), mod, p)
        k >>= 1
    return result


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Degree <= 3 reduces to a root check; in general a reducible polynomial of
    degree e has an irreducible factor of degree <= e // 2, and the product of
    all monic irreducibles of degree dividing i is x^(p^i) - x.
    """
    e = len(coeffs) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    if e <= 3:
        return all(_eval_mod_p(coeffs, x, p) != 0 for x in range(p))
    t = (0, 1)  # the polynomial x
    for _ in range(e // 2):
        t = _frobenius_power(t, coeffs, p)
        g = _pgcd(coeffs, _psub(t, (0, 1), p), p)
        if len(g) - 1 > 0:
            return False
    return True


def _eval_mod_p(coeffs: tuple[int, ...], x: int, p: int) -> int:
    y = 0
    for c in reversed(coeffs):
        y = (y * x + c) % p
    return y


def canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e over F_p.

    Coefficient vectors are compared from the constant term upward.  Degree 1
    uses the placeholder modulus x, i.e. (0, 1); arithmetic is then plain
    mod-p.
    """
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        coeffs = tuple(tail) + (1,)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------
# Field and element types.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """Element of GF(p^e): e coefficients in [0, p), basis power i at slot i."""

    field: "FieldSpec"
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.field.e:
            raise FieldError(
                f"element needs exactly {self.field.e} coefficients, got {len(self.coeffs)}")
        if any(c < 0 or c >= self.field.p for c in self.coeffs):
            raise FieldError(f"coefficients not reduced mod {self.field.p}: {self.coeffs}")

    @property
    def index(self) -> int:
        return self.field.index(self)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElement(q={self.field.q}, index={self.index})"


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^e) with its canonical modulus and deterministic element order."""

    p: int
    e: int
    q: int
    modulus: tuple[int, ...]

    # -- enumeration ------------------------------------------------------

    def element(self, index: int) -> FieldElement:
        """Element whose coefficients are the base-p digits of index."""
        if index < 0 or index >= self.q:
            raise FieldError(f"element index {index} out of range [0, {self.q})")
        digits = []
        for _ in range(self.e):
            digits.append(index % self.p)
            index //= self.p
        return FieldElement(self, tuple(digits))

    def index(self, x: FieldElement) -> int:
        self._check(x)
        idx = 0
        for c in reversed(x.coeffs):
            idx = idx * self.p + c
        return idx

    def elements(self) -> Iterator[FieldElement]:
        return (self.element(i) for i in range(self.q))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.e)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.e - 1))

    def from_int(self, c: int) -> FieldElement:
        """Image of the integer c in the prime subfield."""
        return FieldElement(self, (c % self.p,) + (0,) * (self.e - 1))

    # -- arithmetic --------------------------------------------------------

    def _check(self, x: FieldElement) -> None:
        if x.field is not self and x.field != self:
            raise FieldError(f"element of GF({x.field.q}) used in GF({self.q})")

    def _wrap(self, coeffs: tuple[int, ...]) -> FieldElement:
        return FieldElement(self, tuple(coeffs) + (0,) * (self.e - len(coeffs)))

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a), self._check(b)
        return FieldElement(self, tuple((x + y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a), self._check(b)
        return FieldElement(self, tuple((x - y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: FieldElement) -> FieldElement:
        self._check(a)
        return FieldElement(self, tuple((-x) % self.p for x in a.coeffs))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a), self._check(b)
        if self.e == 1:
            return FieldElement(self, ((a.coeffs[0] * b.coeffs[0]) % self.p,))
        prod = _pmod(_pmul(a.coeffs, b.coeffs, self.p), self.modulus, self.p)
        return self._wrap(prod)

    def inv(self, a: FieldElement) -> FieldElement:
        self._check(a)
        if a.is_zero():
            raise FieldError("inversion of zero")
        return self.pow_(a, self.q - 2)

    def pow_(self, a: FieldElement, k: int) -> FieldElement:
        """a**k by square-and-multiply; negative k inverts first."""
        self._check(a)
        if k < 0:
            return self.pow_(self.inv(a), -k)
        result = self.one
        acc = a
        while k:
            if k & 1:
                result = self.mul(result, acc)
            acc = self.mul(acc, acc)
            k >>= 1
        return result

    def product(self, xs) -> FieldElement:
        out = self.one
        for x in xs:
            out = self.mul(out, x)
        return out

    def summary(self) -> dict:
        """JSON-ready description including the full enumeration table."""
        return {
            "p": self.p,
            "e": self.e,
            "q": self.q,
            "modulus": list(self.modulus),
            "elements": [list(self.element(i).coeffs) for i in range(self.q)],
        }


def make_field(p: int, e: int, max_order: int = DEFAULT_ORDER_BOUND) -> FieldSpec:
    """Construct GF(p^e) with the canonical modulus.

    Rejects non-prime p and orders above max_order (default 2**20).
    """
    if not isinstance(p, int) or not isinstance(e, int):
        raise FieldError("p and e must be integers")
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    q = p ** e
    if q > max_order:
        raise FieldError(f"field order {q} exceeds the configured bound {max_order}")
    key = (p, e)
    cached = _FIELD_CACHE.get(key)
    if cached is None:
        cached = FieldSpec(p=p, e=e, q=q, modulus=canonical_modulus(p, e))
        _FIELD_CACHE[key] = cached
    return cached


def arith(field: FieldSpec, op: str, a: FieldElement, b: FieldElement | int | None = None) -> FieldElement:
    """Dispatch one field operation: add, sub, mul, inv, neg, pow."""
    if op in ("add", "sub", "mul"):
        if not isinstance(b, FieldElement):
            raise FieldError(f"{op} needs a second field element")
        return getattr(field, op)(a, b)
    if op == "neg":
        return field.neg(a)
    if op == "inv":
        return field.inv(a)
    if op == "pow":
        if not isinstance(b, int):
            raise FieldError("pow needs an integer exponent")
        return field.pow_(a, b)
    raise FieldError(f"unknown operation {op!r}")


def quadratic_character(field: FieldSpec, x: FieldElement) -> int:
    """chi(x) in {-1, 0, 1}: 0 at zero, 1 on nonzero squares, -1 otherwise.

    Defined only in odd characteristic.
    """
    if field.p == 2:
        raise FieldError("quadratic character undefined in characteristic 2")
    field._check(x)
    if x.is_zero():
        return 0
    t = field.pow_(x, (field.q - 1) // 2)
    if t == field.one:
        return 1
    if t != field.neg(field.one):
        raise FieldError("quadratic character did not evaluate to +-1")  # unreachable
    return -1


def char_restriction_trivial(field: FieldSpec) -> bool:
    """Whether the quadratic character is 1 on every nonzero prime-subfield element.

    Computed by direct evaluation; equality with "extension degree is even" is
    a tested invariant, not an assumption.
    """
    if field.p == 2:
        raise FieldError("quadratic character undefined in characteristic 2")
    return all(quadratic_character(field, field.from_int(c)) == 1 for c in range(1, field.p))
