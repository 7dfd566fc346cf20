"""Rebuild the printed examples through the construction pipeline and diff them.

Each target returns a :class:`Report` made of named comparisons.  A text
comparison checks byte-level agreement and, on mismatch, names the first
differing entry; a fact comparison checks a value such as a verification
verdict or a row count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import golden
from .catalog import APPENDIX_A, RECIPES, TABLE_2
from .constructions import (ChainPlan, best_known_cdm, best_known_k, buratti_chain, chain_cdm,
                            chain_dm_kronecker, concat_compose_cdm, contracted_field_cdm, drake_dm,
                            hom_image_cdm, hom_image_dm, kronecker_compose_dm, pan_chang_dm,
                            searched_cdm, table2_source)
from .designs import ContractedDifferenceMatrix, DifferenceMatrix, p_expand, verify, verify_dm
from .errors import DiffMatError
from .groups import DiagonalSubgroup, GroupSpec, Homomorphism, format_coords
from .linking import (build_linking_system, hyperplane_subgroups, render_cosets,
                      render_multiplicative, verify_linking)
from .search import Mode, Outcome, SearchConfig, search_cdm


@dataclass(frozen=True)
class Comparison:
    label: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"label": self.label, "ok": self.ok, "detail": self.detail}


@dataclass
class Report:
    target: str
    comparisons: list[Comparison] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.comparisons) and all(c.ok for c in self.comparisons)

    def to_json(self) -> dict:
        return {"target": self.target, "ok": self.ok,
                "comparisons": [c.to_json() for c in self.comparisons]}

    def __str__(self) -> str:
        head = f"{self.target}: {'match' if self.ok else 'MISMATCH'}"
        lines = [head]
        for c in self.comparisons:
            mark = "ok  " if c.ok else "FAIL"
            lines.append(f"  {mark} {c.label}" + (f" ({c.detail})" if c.detail else ""))
        return "\n".join(lines)


def first_difference(expected: str, actual: str) -> str | None:
    """``None`` on byte equality, otherwise where the two tables first disagree."""
    if expected == actual:
        return None
    e_rows = [r.split() for r in expected.splitlines()]
    a_rows = [r.split() for r in actual.splitlines()]
    if len(e_rows) != len(a_rows):
        return f"expected {len(e_rows)} rows, got {len(a_rows)}"
    for i, (er, ar) in enumerate(zip(e_rows, a_rows)):
        if len(er) != len(ar):
            return f"row {i}: expected {len(er)} entries, got {len(ar)}"
        for j, (x, y) in enumerate(zip(er, ar)):
            if x != y:
                return f"row {i}, column {j}: expected {x}, got {y}"
    return "whitespace differs"


def text_cmp(label: str, expected: str, actual) -> Comparison:
    got = actual if isinstance(actual, str) else str(actual)
    diff = first_difference(expected, got)
    return Comparison(label, diff is None, diff or "")


def fact_cmp(label: str, expected, actual) -> Comparison:
    ok = expected == actual
    return Comparison(label, ok, "" if ok else f"expected {expected!r}, got {actual!r}")


def _cols(M, lo: int, hi: int) -> str:
    return "\n".join(" ".join(r[lo:hi]) for r in M.text_rows())


def _table(coords) -> str:
    return "\n".join(" ".join(format_coords(c) for c in row) for row in coords.tolist())


def _g(text: str) -> GroupSpec:
    return GroupSpec.parse(text)


def _chain_structure(plan: ChainPlan) -> str:
    return " > ".join(str(g) for g in [plan.group] + [s.subgroup for s in plan.subgroups])


# -- targets ------------------------------------------------------------------


def _example_1_1(r: Report):
    A = DifferenceMatrix.from_rows(_g("Z2^3"), 1, [row.split() for row in golden.EXAMPLE_1_1.splitlines()])
    r.comparisons.append(fact_cmp("(Z2^3,5,1) difference matrix verifies", True, bool(verify_dm(A))))
    r.comparisons.append(fact_cmp("shape", (5, 8), A.shape))


def _example_3_2(r: Report):
    r.comparisons.append(text_cmp("GF(4) multiplication table", golden.EXAMPLE_3_2, drake_dm(2, 2)))


def _example_3_3(r: Report):
    r.comparisons.append(text_cmp("GF(8) multiplication table", golden.EXAMPLE_3_3, drake_dm(2, 3)))


def _hom_image(r: Report):
    A = drake_dm(2, 3)
    verify_dm(A)
    B = hom_image_dm(A, Homomorphism.drop_last(A.group))
    r.comparisons.append(text_cmp("image under Z2^3 -> Z2^2", golden.HOM_IMAGE, B))
    r.comparisons.append(fact_cmp("lambda of the image", 2, B.lam))
    r.comparisons.append(fact_cmp("image verifies", True, bool(verify_dm(B))))


def _kronecker(r: Report):
    G = _g("Z4xZ2xZ2")
    sub = DiagonalSubgroup(G, (1, 0, 1))
    A, B = drake_dm(2, 2), drake_dm(2, 2)
    A = DifferenceMatrix(sub.subgroup, 1, A.entries)
    B = DifferenceMatrix(sub.quotient, 1, B.entries)
    verify_dm(A), verify_dm(B)
    r.comparisons.append(text_cmp("subgroup matrix in G", golden.KRONECKER_A, _table(sub.embed_coords(A.entries))))
    r.comparisons.append(text_cmp("coset representatives", golden.KRONECKER_B, _table(sub.rep_coords(B.entries))))
    C = kronecker_compose_dm(A, B, sub)
    r.comparisons.append(text_cmp("composed (G,4,1) matrix", golden.KRONECKER, C))
    r.comparisons.append(fact_cmp("composed matrix verifies", True, bool(verify_dm(C))))


def _example_3_7(r: Report):
    G = _g("Z8xZ8xZ4xZ2")
    chains = (([(1, 1, 1, 1), (2, 2, 2, 1)], 4, ["Z4xZ4xZ2", "Z2xZ2"], ["Z2^4", "Z2^3"]),
              ([(1, 1, 1, 0), (2, 2, 2, 0)], 8, ["Z4xZ4xZ2xZ2", "Z2^3"], ["Z2^3", "Z2^3"]))
    for levels, m, subgroups, quotients in chains:
        plan = ChainPlan(G, levels)
        got = [str(s.subgroup) for s in plan.subgroups] + [str(q) for q in plan.quotients]
        want = [str(_g(x)) for x in subgroups + quotients]
        r.comparisons.append(fact_cmp(f"chain {_chain_structure(plan)}", want, got))
        D = chain_dm_kronecker(plan, m)
        r.comparisons.append(fact_cmp(f"({G},{m},1) from that chain verifies", True, bool(verify_dm(D))))
    best = buratti_chain(G)
    r.comparisons.append(fact_cmp("row-maximizing chain", [(1, 1, 1, 0), (2, 2, 2, 0)], best.levels))


def _pan_chang_e3(r: Report):
    D = pan_chang_dm(3)
    r.comparisons.append(text_cmp("(Z8xZ2,4,1) matrix", golden.PAN_CHANG_E3, D))


def _expansion(r: Report, group: str, m_text: str, expected: str):
    M = ContractedDifferenceMatrix.from_rows(_g(group), 0, [x.split() for x in m_text.splitlines()])
    r.comparisons.append(fact_cmp(f"({group},{M.k},0) matrix verifies", True, bool(verify(M))))
    r.comparisons.append(text_cmp("p-expansion", expected, p_expand(M)))


def _example_5_3(r: Report):
    _expansion(r, "Z4xZ2", golden.EXPANSION_Z4Z2_M, golden.EXPANSION_Z4Z2)


def _expansion_z3z3(r: Report):
    _expansion(r, "Z3xZ3", golden.EXPANSION_Z3Z3_M, golden.EXPANSION_Z3Z3)


def _field_image(r: Report):
    r.comparisons.append(text_cmp("contracted (Z2^3,3,0) field matrix", golden.FIELD_Z2_3,
                                  contracted_field_cdm(2, 3)))
    F = contracted_field_cdm(2, 4)
    verify(F)
    r.comparisons.append(text_cmp("contracted (Z2^4,4,0) field matrix", golden.FIELD_Z2_4, F))
    img = hom_image_cdm(F, Homomorphism.drop_last(F.group, 2))
    r.comparisons.append(text_cmp("image (Z2^2,4,2)", golden.FIELD_IMAGE, img))
    r.comparisons.append(fact_cmp("image s", 2, img.s))
    r.comparisons.append(fact_cmp("image verifies", True, bool(verify(img))))


def _concat_z9z3z3(r: Report):
    G = _g("Z9xZ3xZ3")
    sub = DiagonalSubgroup(G, (1, 0, 1))
    L = ContractedDifferenceMatrix(sub.subgroup, 0, contracted_field_cdm(3, 2).entries)
    M = ContractedDifferenceMatrix(sub.quotient, 0, contracted_field_cdm(3, 2).entries)
    verify(L), verify(M)
    C = concat_compose_cdm(L, M, sub)
    r.comparisons.append(text_cmp("subgroup block", golden.CONCAT_H, _cols(C, 0, 2)))
    r.comparisons.append(text_cmp("quotient block", golden.CONCAT_Q, _cols(C, 2, 4)))
    r.comparisons.append(text_cmp("(Z9xZ3xZ3,2,0) matrix", golden.CONCAT_Z9Z3Z3, C))
    r.comparisons.append(fact_cmp("composed matrix verifies", True, bool(verify(C))))


def _chain_3x11(r: Report):
    G = _g("Z8xZ8xZ4xZ4xZ2")
    C = chain_cdm(G)
    r.comparisons.append(text_cmp("terminal block", golden.CHAIN_TERMINAL, _cols(C, 0, 5)))
    r.comparisons.append(text_cmp("second quotient block", golden.CHAIN_Q2, _cols(C, 5, 8)))
    r.comparisons.append(text_cmp("first quotient block", golden.CHAIN_Q1, _cols(C, 8, 11)))
    r.comparisons.append(text_cmp("(Z8xZ8xZ4xZ4xZ2,3,0) matrix", golden.CHAIN_3X11, C))
    r.comparisons.append(fact_cmp("chain matrix verifies", True, bool(verify(C))))


def _chain_z16z8z4(r: Report):
    G = _g("Z16xZ8xZ4")
    plan = ChainPlan.from_relative(G, [(2, 1, 1)])
    r.comparisons.append(fact_cmp("chain", golden.CHAIN_Z16Z8Z4_STRUCTURE, _chain_structure(plan)))
    C = best_known_cdm(G, 3, plan)
    r.comparisons.append(text_cmp("(Z16xZ8xZ4,3,0) matrix", golden.CHAIN_Z16Z8Z4, C))


def _chain_order_256(r: Report):
    G = _g("Z256xZ32xZ16xZ4xZ2")
    plan = ChainPlan.from_relative(G, [(3, 1, 0, 1, 1), (1, 2, 2, 0), (3, 1, 1, 1)])
    r.comparisons.append(fact_cmp("chain", golden.CHAIN_ORDER_256_STRUCTURE, _chain_structure(plan)))
    C = best_known_cdm(G, 3, plan)
    r.comparisons.append(fact_cmp("(G,3,0) matrix from the chain verifies", True, bool(verify(C))))


def _example_6_1(r: Report):
    for name in ("Z4xZ2xZ2", "Z4xZ4xZ2", "Z4xZ2xZ2xZ2", "Z8xZ2xZ2xZ2"):
        M = searched_cdm(_g(name))
        r.comparisons.append(text_cmp(f"({name},3,0) matrix", "\n".join(APPENDIX_A[name]), M))
        r.comparisons.append(fact_cmp(f"({name},3,0) matrix verifies", True, bool(verify(M))))
    res = search_cdm(SearchConfig(_g("Z4xZ2xZ2"), 3, mode=Mode.EXHAUSTIVE))
    r.comparisons.append(fact_cmp("exhaustive search over Z4xZ2xZ2 succeeds", Outcome.FOUND, res.outcome))
    if res.matrix is not None:
        r.comparisons.append(text_cmp("first matrix found by the search", "\n".join(APPENDIX_A["Z4xZ2xZ2"]),
                                      res.matrix))


def _appendix_a(r: Report):
    for name, rows in APPENDIX_A.items():
        r.comparisons.append(text_cmp(name, "\n".join(rows), RECIPES[name]()))


def _table_2(r: Report):
    for name, k, source, _, _ in TABLE_2:
        G = _g(name)
        got_k = best_known_k(G)
        got = (got_k, table2_source(G, got_k))
        r.comparisons.append(fact_cmp(name, (k, source.value), got))


def _example_4_4(r: Report):
    G = _g("Z4xZ2xZ2")
    E = DiagonalSubgroup(G, (1, 1, 0))
    names = [render_multiplicative(G, tuple(G.decode(h[1:2])[0].tolist())) for h in hyperplane_subgroups(E)]
    r.comparisons.append(fact_cmp("hyperplane subgroups", golden.EXAMPLE_4_4_HYPERPLANES,
                                  [f"<{n}>" for n in names]))
    dm = DifferenceMatrix.from_rows(E.quotient, 1, golden.EXAMPLE_4_4_B)
    S = build_linking_system(G, E, dm, golden.EXAMPLE_4_4_E)
    r.comparisons.append(fact_cmp("difference sets", golden.EXAMPLE_4_4_SETS, render_cosets(S)))
    rep = verify_linking(S)
    r.comparisons.append(fact_cmp("reduced linking system verifies", True, rep.ok))
    r.comparisons.append(fact_cmp("parameters", (16, 6, 2, 4), S.params))


def _linking(r: Report, group: str, cofactors, dm: DifferenceMatrix, params):
    S = build_linking_system(_g(group), cofactors, dm)
    rep = verify_linking(S)
    r.comparisons.append(fact_cmp("size", 7, len(S)))
    r.comparisons.append(fact_cmp("parameters", params, S.params))
    r.comparisons.append(fact_cmp("reduced linking system verifies", True, rep.ok))


def _linking_z2_6(r: Report):
    _linking(r, "Z2^6", (1, 1, 1, 0, 0, 0), drake_dm(2, 3), (64, 28, 12, 16))


def _linking_order_256(r: Report):
    D = p_expand(searched_cdm(_g("Z4xZ2xZ2")))
    r.comparisons.append(fact_cmp("(Z4xZ2xZ2,8,1) expansion verifies", True, bool(verify_dm(D))))
    _linking(r, "Z8xZ2^5", (2, 1, 1, 0, 0, 0), D, (256, 120, 56, 64))


TARGETS: dict[str, Callable[[Report], None]] = {
    "example_1_1": _example_1_1,
    "example_3_2": _example_3_2,
    "example_3_3": _example_3_3,
    "hom_image": _hom_image,
    "kronecker": _kronecker,
    "example_3_7": _example_3_7,
    "pan_chang_e3": _pan_chang_e3,
    "example_5_3": _example_5_3,
    "expansion_z3z3": _expansion_z3z3,
    "field_image": _field_image,
    "concat_z9z3z3": _concat_z9z3z3,
    "chain_3x11": _chain_3x11,
    "chain_z16z8z4": _chain_z16z8z4,
    "chain_order_256": _chain_order_256,
    "example_6_1": _example_6_1,
    "appendix_a": _appendix_a,
    "table_2": _table_2,
    "example_4_4": _example_4_4,
    "linking_z2_6": _linking_z2_6,
    "linking_order_256": _linking_order_256,
}

# Targets covering the printed matrices; the rest check facts or are slower.
MATRIX_TARGETS = ("example_1_1", "example_3_2", "example_3_3", "hom_image", "kronecker",
                  "pan_chang_e3", "example_5_3", "expansion_z3z3", "field_image", "concat_z9z3z3",
                  "chain_3x11", "chain_z16z8z4", "example_6_1", "appendix_a")


def reproduce(target: str) -> Report:
    if target not in TARGETS:
        raise KeyError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    report = Report(target)
    try:
        TARGETS[target](report)
    except DiffMatError as exc:
        report.comparisons.append(Comparison("construction", False, f"{type(exc).__name__}: {exc}"))
    return report


def reproduce_all(targets=None) -> list[Report]:
    return [reproduce(t) for t in (targets or TARGETS)]
