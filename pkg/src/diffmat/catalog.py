"""Best known ``(G, k, 0)`` matrices for the abelian 2-groups of order at most 64.

Each entry carries the published matrix as literal text together with a
recipe that rebuilds it from the constructions module, the number of rows,
the kind of result that supplies it and what is known about maximality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .constructions import (ChainPlan, chain_cdm, contracted_field_cdm, noncyclic2_cdm,
                            pan_chang_cdm, searched_cdm)
from .designs import ContractedDifferenceMatrix, DifferenceMatrix, p_expand, trivial_cdm, verify_cdm_fast
from .errors import DiffMatError
from .groups import GroupSpec, abelian_p_groups


class NotFoundError(DiffMatError, KeyError):
    """No catalog entry for the requested group."""


class Source(str, Enum):
    TRIVIAL = "trivial"
    CHAIN = "chain"
    NONCYCLIC2 = "noncyclic2"
    COMPUTER_SEARCH = "computer_search"
    FIELD = "field"


class Maximality(str, Enum):
    ROW_BOUND = "proven_row_bound"
    CYCLIC_SYLOW = "proven_cyclic_sylow2"
    EXHAUSTIVE = "proven_exhaustive"
    RESTRICTED = "restricted_exhaustive"
    UNKNOWN = "unknown"


APPENDIX_A: dict[str, list[str]] = {
    "Z2": ["1"],
    "Z2xZ2": ["01 10", "10 11"],
    "Z4": ["1 2"],
    "Z2xZ2xZ2": ["001 010 100", "010 100 011", "100 011 110"],
    "Z4xZ2": ["01 10 20", "21 01 10"],
    "Z8": ["1 2 4"],
    "Z2xZ2xZ2xZ2": ["0001 0010 0100 1000", "0010 0100 1000 0011",
                    "0100 1000 0011 0110", "1000 0011 0110 1100"],
    "Z4xZ2xZ2": ["001 010 100 200", "010 201 001 100", "211 100 201 210"],
    "Z4xZ4": ["01 10 02 20", "10 11 20 22"],
    "Z8xZ2": ["01 10 20 40", "41 01 10 20"],
    "Z16": ["1 2 4 8"],
    "Z2xZ2xZ2xZ2xZ2": ["00001 00010 00100 01000 10000", "00010 00100 01000 10000 00101",
                       "00100 01000 10000 00101 01010", "01000 10000 00101 01010 10100",
                       "10000 00101 01010 10100 01101"],
    "Z4xZ2xZ2xZ2": ["0001 0010 0100 1000 2000", "0010 0100 2001 0001 1000",
                    "1001 2110 0001 0010 0101"],
    "Z4xZ4xZ2": ["001 010 020 100 200", "021 001 211 010 100", "220 101 200 210 320"],
    "Z8xZ2xZ2": ["010 100 200 001 400", "210 010 100 400 401"],
    "Z8xZ4": ["01 10 20 02 40", "21 01 10 40 42"],
    "Z16xZ2": ["01 10 20 40 80", "81 01 10 20 40"],
    "Z32": ["1 2 4 8 (16)"],
    "Z2xZ2xZ2xZ2xZ2xZ2": ["000001 000010 000100 001000 010000 100000",
                          "000010 000100 001000 010000 100000 000011",
                          "000100 001000 010000 100000 000011 000110",
                          "001000 010000 100000 000011 000110 001100",
                          "010000 100000 000011 000110 001100 011000",
                          "100000 000011 000110 001100 011000 110000"],
    "Z4xZ2xZ2xZ2xZ2": ["00100 01000 20000 00001 00010 10000",
                       "01000 20000 01100 00010 10000 00011",
                       "20000 01100 21000 10000 00011 10010"],
    "Z4xZ4xZ2xZ2": ["0010 0200 2000 0001 0100 1000", "0200 2000 0210 0100 1000 0101",
                    "2000 0210 2200 1000 0101 1100"],
    "Z4xZ4xZ4": ["002 020 200 001 010 100", "020 200 022 010 100 011", "200 022 220 100 011 110"],
    "Z8xZ2xZ2xZ2": ["4101 2000 1100 0010 7111 0101", "4010 0111 2011 4001 7001 0001",
                    "4000 7110 5100 0011 5010 2011"],
    "Z8xZ4xZ2": ["020 400 010 200 001 100", "400 420 200 210 100 101"],
    "Z8xZ8": ["04 40 02 20 01 10", "40 44 20 22 10 11"],
    "Z16xZ2xZ2": ["010 800 001 100 200 400", "800 810 401 001 100 200"],
    "Z16xZ4": ["02 80 01 10 20 40", "80 82 41 01 10 20"],
    "Z32xZ2": ["01 10 20 40 80 (16)0", "(16)1 01 10 20 40 80"],
    "Z64": ["1 2 4 8 (16) (32)"],
}

_S, _M = Source, Maximality

# group, k, source, maximality, "can k be raised by one" flag
TABLE_2: list[tuple[str, int, Source, Maximality, bool]] = [
    ("Z2", 1, _S.TRIVIAL, _M.CYCLIC_SYLOW, False),
    ("Z2xZ2", 2, _S.CHAIN, _M.ROW_BOUND, False),
    ("Z4", 1, _S.TRIVIAL, _M.CYCLIC_SYLOW, False),
    ("Z2xZ2xZ2", 3, _S.CHAIN, _M.ROW_BOUND, False),
    ("Z4xZ2", 2, _S.NONCYCLIC2, _M.EXHAUSTIVE, False),
    ("Z8", 1, _S.TRIVIAL, _M.CYCLIC_SYLOW, False),
    ("Z2xZ2xZ2xZ2", 4, _S.CHAIN, _M.ROW_BOUND, False),
    ("Z4xZ2xZ2", 3, _S.COMPUTER_SEARCH, _M.EXHAUSTIVE, False),
    ("Z4xZ4", 2, _S.NONCYCLIC2, _M.EXHAUSTIVE, False),
    ("Z8xZ2", 2, _S.NONCYCLIC2, _M.EXHAUSTIVE, False),
    ("Z16", 1, _S.TRIVIAL, _M.CYCLIC_SYLOW, False),
    ("Z2xZ2xZ2xZ2xZ2", 5, _S.CHAIN, _M.ROW_BOUND, False),
    ("Z4xZ2xZ2xZ2", 3, _S.COMPUTER_SEARCH, _M.UNKNOWN, False),
    ("Z4xZ4xZ2", 3, _S.COMPUTER_SEARCH, _M.RESTRICTED, False),
    ("Z8xZ2xZ2", 2, _S.NONCYCLIC2, _M.RESTRICTED, False),
    ("Z8xZ4", 2, _S.NONCYCLIC2, _M.RESTRICTED, False),
    ("Z16xZ2", 2, _S.NONCYCLIC2, _M.RESTRICTED, False),
    ("Z32", 1, _S.TRIVIAL, _M.CYCLIC_SYLOW, False),
    ("Z2xZ2xZ2xZ2xZ2xZ2", 6, _S.CHAIN, _M.ROW_BOUND, False),
    ("Z4xZ2xZ2xZ2xZ2", 3, _S.CHAIN, _M.UNKNOWN, True),
    ("Z4xZ4xZ2xZ2", 3, _S.CHAIN, _M.UNKNOWN, True),
    ("Z4xZ4xZ4", 3, _S.CHAIN, _M.UNKNOWN, False),
    ("Z8xZ2xZ2xZ2", 3, _S.COMPUTER_SEARCH, _M.UNKNOWN, False),
    ("Z8xZ4xZ2", 2, _S.NONCYCLIC2, _M.UNKNOWN, True),
    ("Z8xZ8", 2, _S.NONCYCLIC2, _M.UNKNOWN, False),
    ("Z16xZ2xZ2", 2, _S.NONCYCLIC2, _M.UNKNOWN, False),
    ("Z16xZ4", 2, _S.NONCYCLIC2, _M.UNKNOWN, False),
    ("Z32xZ2", 2, _S.NONCYCLIC2, _M.UNKNOWN, False),
    ("Z64", 1, _S.TRIVIAL, _M.CYCLIC_SYLOW, False),
]


def _g(text: str) -> GroupSpec:
    return GroupSpec.parse(text)


def _plan(text: str, levels) -> Callable[[], ContractedDifferenceMatrix]:
    return lambda: chain_cdm(_g(text), ChainPlan(_g(text), levels))


def _field(n: int):
    return lambda: contracted_field_cdm(2, n)


# How each published matrix is rebuilt.  Where a construction leaves a free
# choice (which factors a chain reduces, which pair of factors is peeled
# first, which block comes first) the recipe pins the published one.
RECIPES: dict[str, Callable[[], ContractedDifferenceMatrix]] = {
    "Z2xZ2": _field(2),
    "Z2xZ2xZ2": _field(3),
    "Z2xZ2xZ2xZ2": _field(4),
    "Z2xZ2xZ2xZ2xZ2": _field(5),
    "Z2xZ2xZ2xZ2xZ2xZ2": _field(6),
    "Z4xZ2": lambda: pan_chang_cdm(2),
    "Z8xZ2": lambda: pan_chang_cdm(3),
    "Z16xZ2": lambda: pan_chang_cdm(4),
    "Z32xZ2": lambda: pan_chang_cdm(5),
    "Z4xZ4": lambda: noncyclic2_cdm(_g("Z4xZ4"), quotient_first=True),
    "Z8xZ4": lambda: noncyclic2_cdm(_g("Z8xZ4"), quotient_first=True),
    "Z8xZ2xZ2": lambda: noncyclic2_cdm(_g("Z8xZ2xZ2"), pair=(0, 2), quotient_first=True),
    "Z8xZ4xZ2": lambda: noncyclic2_cdm(_g("Z8xZ4xZ2")),
    "Z8xZ8": lambda: noncyclic2_cdm(_g("Z8xZ8")),
    "Z16xZ2xZ2": lambda: noncyclic2_cdm(_g("Z16xZ2xZ2")),
    "Z16xZ4": lambda: noncyclic2_cdm(_g("Z16xZ4")),
    "Z4xZ2xZ2": lambda: searched_cdm(_g("Z4xZ2xZ2")),
    "Z4xZ4xZ2": lambda: searched_cdm(_g("Z4xZ4xZ2")),
    "Z4xZ2xZ2xZ2": lambda: searched_cdm(_g("Z4xZ2xZ2xZ2")),
    "Z8xZ2xZ2xZ2": lambda: searched_cdm(_g("Z8xZ2xZ2xZ2")),
    "Z4xZ2xZ2xZ2xZ2": _plan("Z4xZ2xZ2xZ2xZ2", [(1, 0, 0, 1, 1)]),
    "Z4xZ4xZ2xZ2": _plan("Z4xZ4xZ2xZ2", [(1, 1, 0, 1)]),
    "Z4xZ4xZ4": lambda: chain_cdm(_g("Z4xZ4xZ4")),
}
for _name in ("Z2", "Z4", "Z8", "Z16", "Z32", "Z64"):
    RECIPES[_name] = (lambda t: lambda: trivial_cdm(_g(t)))(_name)


@dataclass(frozen=True)
class CatalogEntry:
    group: GroupSpec
    best_known_k: int
    source: Source
    maximality: Maximality
    rows: tuple[str, ...]
    may_increase: bool = False

    @property
    def matrix(self) -> ContractedDifferenceMatrix:
        return ContractedDifferenceMatrix.from_rows(self.group, 0, [r.split() for r in self.rows])

    def recipe(self) -> ContractedDifferenceMatrix:
        return RECIPES[str(self.group)]()

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "best_known_k": self.best_known_k,
            "source": self.source.value,
            "maximality": self.maximality.value,
            "may_increase": self.may_increase,
            "rows": list(self.rows),
        }


def catalog_entries() -> list[CatalogEntry]:
    return [CatalogEntry(_g(name), k, src, mx, tuple(APPENDIX_A[name]), dag)
            for name, k, src, mx, dag in TABLE_2]


def catalog_get(spec: GroupSpec | str) -> CatalogEntry:
    spec = _g(spec) if isinstance(spec, str) else spec
    for entry in catalog_entries():
        if entry.group == spec:
            return entry
    raise NotFoundError(f"{spec} is not in the catalog")


@dataclass(frozen=True)
class VerifyLine:
    group: str
    verified: bool
    k_matches: bool
    shape_ok: bool

    @property
    def ok(self) -> bool:
        return self.verified and self.k_matches and self.shape_ok


def catalog_verify_all() -> list[VerifyLine]:
    """Verify every stored matrix and check its row count against the table."""
    out = []
    for e in catalog_entries():
        M = e.matrix
        out.append(VerifyLine(str(e.group), bool(verify_cdm_fast(M)), M.k == e.best_known_k,
                              M.ncols == e.group.n))
    return out


def all_two_groups(max_n: int = 6) -> list[GroupSpec]:
    return [g for n in range(1, max_n + 1) for g in abelian_p_groups(2, n)]


@dataclass(frozen=True)
class ExternalRecord:
    """A published difference matrix that the catalog knows of but does not print."""

    group: GroupSpec
    m: int
    lam: int
    witness: Callable[[], DifferenceMatrix] | None = None

    @property
    def has_witness(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {"group": str(self.group), "m": self.m, "lambda": self.lam,
                "status": "witnessed" if self.witness else "external_record"}


EXTERNAL_RECORDS: list[ExternalRecord] = [
    ExternalRecord(_g("Z8xZ2"), 5, 1),
    ExternalRecord(_g("Z4xZ4"), 8, 1),
    ExternalRecord(_g("Z4xZ2xZ2"), 8, 1, lambda: p_expand(searched_cdm(_g("Z4xZ2xZ2")))),
]
