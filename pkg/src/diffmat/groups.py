"""Finite abelian p-groups presented as direct products of cyclic p-groups.

A group ``Z_{p^a1} x ... x Z_{p^ar}`` is described by a :class:`GroupSpec`
holding ``p`` and the exponent list ``(a1, ..., ar)`` with ``a1 >= ... >= ar``.
Elements are coordinate vectors against that factor list, so ``(2, 1, 0)`` in
``Z4xZ2xZ2`` is written ``210`` in compressed form.  Coordinates of 10 or more
are parenthesised, e.g. ``(12)40``.

Bulk work (matrix entries, expansions, convolution) is done on integer arrays:
an element's *index* is its position in :meth:`GroupSpec.elements`, which is
lexicographic with the first coordinate most significant.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, StructuralError

ENUMERATION_CAP = 2**22


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def format_coords(coords: Iterable[int]) -> str:
    parts = [str(c) if c < 10 else f"({c})" for c in coords]
    return "".join(parts) if parts else "0"


_TOKEN = re.compile(r"\((\d+)\)|(\d)")


def parse_coords(text: str, rank: int | None = None) -> tuple[int, ...]:
    """Parse compressed notation such as ``"(12)40"`` into ``(12, 4, 0)``."""
    text = text.strip()
    pos, coords = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise StructuralError(f"cannot parse element {text!r} at offset {pos}")
        coords.append(int(m.group(1) if m.group(1) is not None else m.group(2)))
        pos = m.end()
    if rank is not None and len(coords) != rank:
        if rank == 0 and coords == [0]:
            return ()
        raise StructuralError(f"element {text!r} has {len(coords)} coordinates, expected {rank}")
    return tuple(coords)


@dataclass(frozen=True)
class GroupSpec:
    """``Z_{p^a1} x ... x Z_{p^ar}`` with nonincreasing exponents."""

    p: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(a) for a in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not is_prime(self.p):
            raise StructuralError(f"{self.p} is not prime")
        if any(a < 1 for a in exps):
            raise StructuralError(f"exponents must be positive, got {exps}")
        if any(a < b for a, b in zip(exps, exps[1:])):
            raise StructuralError(f"exponents must be nonincreasing, got {exps}")

    @classmethod
    def canonical(cls, p: int, exponents: Iterable[int]) -> GroupSpec:
        """Drop trivial factors and sort the rest into nonincreasing order."""
        return cls(p, tuple(sorted((a for a in exponents if a > 0), reverse=True)))

    @classmethod
    def elementary(cls, p: int, n: int) -> GroupSpec:
        return cls(p, (1,) * n)

    @classmethod
    def parse(cls, text: str | dict) -> GroupSpec:
        """Accept ``"Z4xZ2xZ2"``, ``"Z2^3"``, ``"Z8xZ2^3"`` or the JSON form."""
        if isinstance(text, dict):
            return cls(int(text["p"]), tuple(text["exponents"]))
        text = text.strip()
        if text.startswith("{"):
            return cls.parse(json.loads(text))
        orders = []
        for part in re.split(r"\s*[x×*]\s*", text.replace("_", "")):
            m = re.fullmatch(r"Z(\d+)(?:\^(\d+))?", part)
            if m is None:
                raise StructuralError(f"cannot parse group literal {text!r}")
            orders += [int(m.group(1))] * int(m.group(2) or 1)
        orders = [q for q in orders if q != 1]
        if not orders:
            raise StructuralError(f"group literal {text!r} has no nontrivial factor")
        p = prime_factors(orders[0])
        if len(p) != 1:
            raise StructuralError(f"factor Z{orders[0]} is not a prime power")
        p = p[0]
        exps = []
        for q in orders:
            a = 0
            while q % p == 0:
                q //= p
                a += 1
            if q != 1:
                raise StructuralError(f"{text!r} mixes different primes")
            exps.append(a)
        return cls.canonical(p, exps)

    def to_json(self) -> dict:
        return {"p": self.p, "exponents": list(self.exponents)}

    def __str__(self) -> str:
        if not self.exponents:
            return "Z1"
        return "x".join(f"Z{q}" for q in self.orders)

    # -- derived quantities -------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def n(self) -> int:
        """``log_p`` of the order."""
        return sum(self.exponents)

    @property
    def e(self) -> int:
        """``log_p`` of the exponent."""
        return self.exponents[0] if self.exponents else 0

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def exponent(self) -> int:
        return self.p**self.e

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.p**a for a in self.exponents)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @property
    def is_elementary_abelian(self) -> bool:
        return all(a == 1 for a in self.exponents)

    def isomorphic(self, other: GroupSpec) -> bool:
        return self.p == other.p and self.exponents == other.exponents

    # -- elements -----------------------------------------------------------

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords: Iterable[int] | str) -> GroupElement:
        """Build an element, reducing each coordinate modulo its factor."""
        if isinstance(coords, str):
            coords = parse_coords(coords, self.rank)
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise StructuralError(f"{coords} does not have rank {self.rank}")
        return GroupElement(self, tuple(int(c) % q for c, q in zip(coords, self.orders)))

    def unit(self, i: int) -> GroupElement:
        coords = [0] * self.rank
        coords[i] = 1
        return GroupElement(self, tuple(coords))

    def _check_cap(self, cap: int | None):
        cap = ENUMERATION_CAP if cap is None else cap
        if self.order > cap:
            raise CapacityError(f"|{self}| = {self.order} exceeds the enumeration cap {cap}")

    def elements(self, cap: int | None = None) -> list[GroupElement]:
        """All elements, lexicographic with coordinate 0 most significant."""
        self._check_cap(cap)
        return [GroupElement(self, c) for c in product(*(range(q) for q in self.orders))]

    @cached_property
    def weights(self) -> np.ndarray:
        """Mixed-radix weights turning coordinates into element indices."""
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.orders[i + 1]
        return w

    @cached_property
    def moduli(self) -> np.ndarray:
        return np.array(self.orders, dtype=np.int64)

    def coords_table(self, cap: int | None = None) -> np.ndarray:
        """``(order, rank)`` array of coordinates in enumeration order."""
        self._check_cap(cap)
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*(np.arange(q) for q in self.orders), indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1).astype(np.int64)

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Element indices of a ``(..., rank)`` coordinate array."""
        coords = np.asarray(coords, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        return (coords % self.moduli) @ self.weights

    def decode(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.weights) % self.moduli

    def reduce(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) % self.moduli

    def index(self, g: GroupElement) -> int:
        self._check_member(g)
        return int(np.dot(g.coords, self.weights)) if self.rank else 0

    def _check_member(self, g: GroupElement):
        if g.group != self:
            raise StructuralError(f"element {g} belongs to {g.group}, not {self}")

    def add_table(self, cap: int = 2**12) -> np.ndarray:
        """``table[i, j]`` is the index of ``elements[i] + elements[j]``."""
        self._check_cap(cap)
        c = self.coords_table()
        return self.encode(c[:, None, :] + c[None, :, :])

    def neg_table(self) -> np.ndarray:
        return self.encode(-self.coords_table())

    def scalar_table(self, c: int) -> np.ndarray:
        return self.encode(c * self.coords_table())


@dataclass(frozen=True)
class GroupElement:
    group: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise StructuralError(f"{self.coords} does not have rank {self.group.rank}")
        if any(not 0 <= c < q for c, q in zip(self.coords, self.group.orders)):
            raise StructuralError(f"{self.coords} is not reduced in {self.group}")

    def _same(self, other: GroupElement):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise StructuralError(f"cannot combine elements of {self.group} and "
                                  f"{getattr(other, 'group', type(other).__name__)}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return self.group.element(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return self.group.element(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> GroupElement:
        return self.group.element(-a for a in self.coords)

    def __rmul__(self, c: int) -> GroupElement:
        return self.group.element(c * a for a in self.coords)

    __mul__ = __rmul__

    @property
    def is_identity(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return format_coords(self.coords)

    def __repr__(self) -> str:
        return f"GroupElement({self.group}, {format_coords(self.coords)})"


def group_op(g: GroupElement, h: GroupElement, kind: str = "add") -> GroupElement:
    if kind == "add":
        return g + h
    if kind == "sub":
        return g - h
    raise StructuralError(f"unknown group operation {kind!r}")


def scalar_mul(c: int, g: GroupElement) -> GroupElement:
    return c * g


def enumerate_elements(spec: GroupSpec, cap: int | None = None) -> list[GroupElement]:
    return spec.elements(cap)


@dataclass(frozen=True)
class DiagonalSubgroup:
    """The subgroup of ``host`` generated by ``p^{b_i} e_i``.

    It is isomorphic to ``prod Z_{p^(a_i - b_i)}`` and the quotient to
    ``prod Z_{p^b_i}``.  Both are presented canonically (trivial factors
    dropped, stable sort by decreasing exponent); ``sub_positions`` and
    ``quot_positions`` record which host coordinate each canonical coordinate
    lives on.  Coset representatives have host coordinate ``i`` in
    ``[0, p^b_i)``.
    """

    host: GroupSpec
    cofactors: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.cofactors)
        object.__setattr__(self, "cofactors", b)
        if len(b) != self.host.rank:
            raise StructuralError(f"need {self.host.rank} cofactors, got {len(b)}")
        if any(not 0 <= bi <= ai for bi, ai in zip(b, self.host.exponents)):
            raise StructuralError(f"cofactors {b} not within exponents {self.host.exponents}")

    @cached_property
    def sub_positions(self) -> tuple[int, ...]:
        a, b = self.host.exponents, self.cofactors
        pos = [i for i in range(len(a)) if a[i] > b[i]]
        return tuple(sorted(pos, key=lambda i: -(a[i] - b[i])))

    @cached_property
    def quot_positions(self) -> tuple[int, ...]:
        b = self.cofactors
        pos = [i for i in range(len(b)) if b[i] > 0]
        return tuple(sorted(pos, key=lambda i: -b[i]))

    @cached_property
    def subgroup(self) -> GroupSpec:
        a, b = self.host.exponents, self.cofactors
        return GroupSpec(self.host.p, tuple(a[i] - b[i] for i in self.sub_positions))

    @cached_property
    def quotient(self) -> GroupSpec:
        return GroupSpec(self.host.p, tuple(self.cofactors[i] for i in self.quot_positions))

    @cached_property
    def _steps(self) -> np.ndarray:
        p = self.host.p
        return np.array([p ** self.cofactors[i] for i in self.sub_positions], dtype=np.int64)

    @cached_property
    def _qmod(self) -> np.ndarray:
        p = self.host.p
        return np.array([p ** self.cofactors[i] for i in self.quot_positions], dtype=np.int64)

    def generators(self) -> list[GroupElement]:
        """Host elements generating the subgroup, one per canonical coordinate."""
        return [self.embed(self.subgroup.unit(t)) for t in range(self.subgroup.rank)]

    # coordinate-array maps; trailing axis is the coordinate axis

    def embed_coords(self, h: np.ndarray) -> np.ndarray:
        h = np.asarray(h, dtype=np.int64)
        out = np.zeros(h.shape[:-1] + (self.host.rank,), dtype=np.int64)
        if self.sub_positions:
            out[..., list(self.sub_positions)] = h * self._steps
        return self.host.reduce(out)

    def rep_coords(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=np.int64)
        out = np.zeros(q.shape[:-1] + (self.host.rank,), dtype=np.int64)
        if self.quot_positions:
            out[..., list(self.quot_positions)] = q % self._qmod
        return out

    def project_coords(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=np.int64)
        return g[..., list(self.quot_positions)] % self._qmod

    def decompose_coords(self, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        g = self.host.reduce(g)
        q = self.project_coords(g)
        rest = (g - self.rep_coords(q))[..., list(self.sub_positions)]
        return q, rest // self._steps

    # element maps

    def embed(self, h: GroupElement) -> GroupElement:
        self.subgroup._check_member(h)
        return self.host.element(self.embed_coords(np.array(h.coords, dtype=np.int64)).tolist())

    def coset_rep(self, q: GroupElement) -> GroupElement:
        self.quotient._check_member(q)
        return self.host.element(self.rep_coords(np.array(q.coords, dtype=np.int64)).tolist())

    def project(self, g: GroupElement) -> GroupElement:
        self.host._check_member(g)
        return self.quotient.element(self.project_coords(np.array(g.coords, dtype=np.int64)).tolist())

    def decompose(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        """Split ``g`` as ``coset_rep(q) + embed(h)``; returns ``(q, h)``."""
        self.host._check_member(g)
        q, h = self.decompose_coords(np.array(g.coords, dtype=np.int64))
        return self.quotient.element(q.tolist()), self.subgroup.element(h.tolist())

    def contains(self, g: GroupElement) -> bool:
        return self.project(g).is_identity


def diagonal_subgroup(spec: GroupSpec, cofactors: Sequence[int]) -> DiagonalSubgroup:
    return DiagonalSubgroup(spec, tuple(cofactors))


@dataclass(frozen=True)
class Homomorphism:
    """``g -> (sum_i T[j][i] g_i mod |target factor j|)_j``."""

    source: GroupSpec
    target: GroupSpec
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        T = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", T)
        if self.source.p != self.target.p:
            raise StructuralError("homomorphisms between different primes are not supported")
        if len(T) != self.target.rank or any(len(r) != self.source.rank for r in T):
            raise StructuralError(
                f"matrix must be {self.target.rank}x{self.source.rank} for {self.source} -> {self.target}")
        p = self.source.p
        for j, bj in enumerate(self.target.exponents):
            for i, ai in enumerate(self.source.exponents):
                if T[j][i] % p ** max(0, bj - ai):
                    raise StructuralError(f"entry T[{j}][{i}] = {T[j][i]} makes the map ill-defined")

    @classmethod
    def identity(cls, spec: GroupSpec) -> Homomorphism:
        return cls(spec, spec, tuple(tuple(int(i == j) for i in range(spec.rank)) for j in range(spec.rank)))

    @classmethod
    def projection(cls, source: GroupSpec, keep: Sequence[int]) -> Homomorphism:
        """Keep the listed source coordinates, reducing each modulo its new factor.

        Factors of the target keep the source exponents, so ``keep`` must be
        ordered by nonincreasing exponent.
        """
        target = GroupSpec(source.p, tuple(source.exponents[i] for i in keep))
        T = tuple(tuple(int(i == k) for i in range(source.rank)) for k in keep)
        return cls(source, target, T)

    @classmethod
    def drop_last(cls, source: GroupSpec, count: int = 1) -> Homomorphism:
        return cls.projection(source, range(source.rank - count))

    @cached_property
    def _T(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64).reshape(self.target.rank, self.source.rank)

    def apply_coords(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=np.int64)
        return self.target.reduce(g @ self._T.T)

    def __call__(self, g: GroupElement) -> GroupElement:
        self.source._check_member(g)
        return self.target.element(self.apply_coords(np.array(g.coords, dtype=np.int64)).tolist())

    def image(self, cap: int | None = None) -> np.ndarray:
        """Sorted element indices of the image, by closure over generator images."""
        self.target._check_cap(cap)
        gens = [self.target.encode(self._T[:, i]) for i in range(self.source.rank)]
        seen = np.zeros(self.target.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        table = self.target.coords_table()
        while frontier.size:
            nxt = []
            for g in gens:
                cand = self.target.encode(table[frontier] + table[g])
                cand = cand[~seen[cand]]
                seen[cand] = True
                nxt.append(cand)
            frontier = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=np.int64)
        return np.flatnonzero(seen)

    def is_surjective(self, cap: int | None = None) -> bool:
        return self.image(cap).size == self.target.order

    def kernel_order(self, cap: int | None = None) -> int:
        return self.source.order // self.image(cap).size


def apply_hom(phi: Homomorphism, g: GroupElement) -> GroupElement:
    return phi(g)


def check_surjective(phi: Homomorphism) -> bool:
    return phi.is_surjective()


def abelian_p_groups(p: int, n: int) -> list[GroupSpec]:
    """Every abelian group of order ``p^n``, one per partition of ``n``."""

    def partitions(m, largest):
        if m == 0:
            yield ()
            return
        for a in range(min(m, largest), 0, -1):
            for rest in partitions(m - a, a):
                yield (a,) + rest

    return [GroupSpec(p, part) for part in partitions(n, n)]
