"""GF(p^n) as polynomials over Z_p reduced by a primitive modulus."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .errors import CapacityError, StructuralError
from .groups import GroupElement, GroupSpec, is_prime, prime_factors

FIELD_CAP = 2**20


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    m = _trim(list(m))
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        f = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _polymul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _powmod_x(k: int, m: list[int], p: int) -> list[int]:
    """``x^k mod m`` by square-and-multiply."""
    result, base = [1], [0, 1]
    while k:
        if k & 1:
            result = _polymod(_polymul(result, base, p), m, p)
        base = _polymod(_polymul(base, base, p), m, p)
        k >>= 1
    return result


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Rabin's test."""
    n = len(modulus) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if _powmod_x(p**n, modulus, p) != [0, 1]:
        return False
    for r in prime_factors(n):
        h = _powmod_x(p ** (n // r), modulus, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_polygcd(modulus, h, p)) != 1:
            return False
    return True


def is_primitive(modulus: list[int], p: int) -> bool:
    n = len(modulus) - 1
    if not is_irreducible(modulus, p):
        return False
    order = p**n - 1
    if _powmod_x(order, modulus, p) != [1]:
        return False
    return all(_powmod_x(order // q, modulus, p) != [1] for q in prime_factors(order))


def format_poly(modulus: list[int]) -> str:
    """Render a constant-first coefficient list as ``x^3+x+1``."""
    terms = []
    for i in range(len(modulus) - 1, -1, -1):
        c = modulus[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        mod = tuple(int(c) % self.p for c in self.modulus) if is_prime(self.p) else ()
        object.__setattr__(self, "modulus", mod)
        if not is_prime(self.p) or self.n < 1:
            raise StructuralError(f"GF({self.p}^{self.n}) is not a valid field")
        if len(mod) != self.n + 1 or mod[-1] != 1:
            raise StructuralError(f"modulus must be monic of degree {self.n}")
        if self.p**self.n > FIELD_CAP:
            raise CapacityError(f"{self.p}^{self.n} exceeds the field cap {FIELD_CAP}")
        if not is_primitive(list(mod), self.p):
            raise StructuralError(f"{format_poly(list(mod))} is not primitive over Z_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def additive_group(self) -> GroupSpec:
        return GroupSpec.elementary(self.p, self.n)

    def element(self, coeffs) -> FieldElement:
        c = [int(x) % self.p for x in coeffs]
        c = c[: self.n] if len(c) > self.n and not any(c[self.n:]) else c
        if len(c) > self.n:
            c = _polymod(c, list(self.modulus), self.p)
        return FieldElement(self, tuple(c + [0] * (self.n - len(c))))

    @property
    def zero(self) -> FieldElement:
        return self.element([])

    @property
    def one(self) -> FieldElement:
        return self.element([1])

    @property
    def alpha(self) -> FieldElement:
        """The root of the modulus, i.e. the residue class of ``x``."""
        return self.element([0, 1])

    @cached_property
    def power_coords(self) -> np.ndarray:
        """Row ``k`` holds ``additive_coords(alpha^k)`` for ``0 <= k < q - 1``."""
        out = np.zeros((self.q - 1, self.n), dtype=np.int64)
        cur = self.one
        a = self.alpha
        for k in range(self.q - 1):
            out[k] = cur.coords
            cur = cur * a
        return out

    def __str__(self) -> str:
        return f"GF({self.p}^{self.n}) mod {format_poly(list(self.modulus))}"


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def _same(self, other: FieldElement):
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise StructuralError("field elements belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return self.field.element(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return self.field.element(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __mul__(self, other: FieldElement) -> FieldElement:
        return ff_mul(self, other)

    def __pow__(self, k: int) -> FieldElement:
        return ff_pow(self, k)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(reversed(self.coeffs))

    def __str__(self) -> str:
        return format_poly(list(self.coeffs)).replace("x", "a")


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._same(b)
    f = a.field
    prod = _polymul(list(a.coeffs), list(b.coeffs), f.p)
    return f.element(_polymod(prod, list(f.modulus), f.p))


def ff_pow(a: FieldElement, k: int) -> FieldElement:
    f = a.field
    if k < 0:
        if a.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        k %= f.q - 1
    result, base = f.one, a
    while k:
        if k & 1:
            result = ff_mul(result, base)
        base = ff_mul(base, base)
        k >>= 1
    return result


def additive_coords(a: FieldElement) -> GroupElement:
    """Coefficient vector as an element of Z_p^n, highest degree first."""
    return GroupElement(a.field.additive_group, a.coords)


@lru_cache(maxsize=None)
def find_primitive_poly(p: int, n: int) -> FieldSpec:
    """Primitive monic modulus of degree ``n`` with the smallest value ``f(p)``.

    Comparing ``sum c_i p^i`` orders candidates by their high-degree
    coefficients first, which selects x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1
    over Z_2 and x^2+x+2 over Z_3.
    """
    if not is_prime(p) or n < 1:
        raise StructuralError(f"GF({p}^{n}) is not a valid field")
    if p**n > FIELD_CAP:
        raise CapacityError(f"{p}^{n} exceeds the field cap {FIELD_CAP}")
    for low in product(range(p), repeat=n):
        coeffs = list(reversed(low)) + [1]
        if coeffs[0] and is_primitive(coeffs, p):
            return FieldSpec(p, n, tuple(coeffs))
    raise AssertionError("a primitive polynomial always exists")
