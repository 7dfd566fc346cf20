"""Command line interface.

Exit codes: 0 success or verified, 1 verification false (or a search that
found nothing), 2 usage or input error, 3 capacity or budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .catalog import EXTERNAL_RECORDS, NotFoundError, catalog_entries, catalog_get, catalog_verify_all
from .constructions import (ChainPlan, best_known_cdm, chain_cdm, chain_dm,
                            concat_compose_cdm, contracted_field_cdm, drake_dm, hom_image_cdm,
                            hom_image_dm, kronecker_compose_dm, noncyclic2_cdm, pan_chang_cdm,
                            pan_chang_dm, product_compose_dm, searched_cdm, sum_compose_dm)
from .designs import (ContractedDifferenceMatrix, DifferenceMatrix, p_expand, trivial_cdm, trivial_dm,
                      verify_cdm_fast, verify_cdm_full, verify_dm)
from .errors import CapacityError, DiffMatError
from .groups import DiagonalSubgroup, GroupSpec, Homomorphism, parse_coords
from .linking import (DifferenceSet, LinkingSystem, build_linking_system, render_cosets,
                      verify_difference_set, verify_linking)
from .reproduce import TARGETS, reproduce
from .search import Mode, Outcome, SearchConfig, Symmetry, search_cdm
from .serialize import parse_design, render_design

OK, FALSE, USAGE, CAPACITY = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _group(text: str) -> GroupSpec:
    try:
        return GroupSpec.parse(text)
    except DiffMatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _emit_design(args, design):
    fmt = "json" if args.format == "json" else "paper-text"
    sys.stdout.write(render_design(design, fmt))


def _load(path: str, kind=None):
    design = parse_design(path)
    if kind is not None and not isinstance(design, kind):
        want = "cdm" if kind is ContractedDifferenceMatrix else "dm"
        raise _Usage(f"{path}: expected a {want}")
    return design


def _verified_input(path: str, kind=None):
    d = _load(path, kind)
    ok = verify_dm(d) if isinstance(d, DifferenceMatrix) else verify_cdm_fast(d)
    if not ok:
        raise _Usage(f"{path} does not verify: {ok}")
    return d


# -- construct ----------------------------------------------------------------


def cmd_construct(args) -> int:
    kind = args.kind
    if kind == "drake":
        d = drake_dm(args.p, args.n)
    elif kind == "cfield":
        d = contracted_field_cdm(args.p, args.n)
    elif kind == "pan-chang":
        d = pan_chang_dm(args.e)
    elif kind == "pan-chang-cdm":
        d = pan_chang_cdm(args.e)
    else:
        if args.group is None:
            raise _Usage(f"construct {kind} needs --group")
        G = args.group
        plan = ChainPlan(G, [args.levels]) if args.levels else None
        if kind == "trivial":
            d = trivial_cdm(G) if args.contracted else trivial_dm(G)
        elif kind == "chain":
            d = chain_dm(G, plan)
        elif kind == "chain-cdm":
            d = chain_cdm(G, plan)
        elif kind == "noncyclic2":
            d = noncyclic2_cdm(G)
        elif kind == "best-known":
            if args.k is None:
                raise _Usage("construct best-known needs --k")
            d = best_known_cdm(G, args.k, plan)
            if d is None:
                sys.stderr.write(f"no chain of library quotients gives ({G},{args.k},0)\n")
                return FALSE
        elif kind == "searched":
            d = searched_cdm(G)
        else:
            raise _Usage(f"unknown construction {kind}")
    _emit_design(args, d)
    return OK


def cmd_compose(args) -> int:
    need = 1 if args.op == "image" else 2
    if len(args.inputs) != need:
        raise _Usage(f"compose {args.op} takes {need} input file(s)")
    if args.op in ("kronecker", "concat"):
        if args.group is None or args.cofactors is None:
            raise _Usage(f"compose {args.op} needs --group and --cofactors")
        sub = DiagonalSubgroup(args.group, args.cofactors)
        kind = DifferenceMatrix if args.op == "kronecker" else ContractedDifferenceMatrix
        A, B = (_verified_input(p, kind) for p in args.inputs[:2])
        # inputs are read in the canonical coordinates of H and G/H
        A = type(A)(sub.subgroup, A.lam if kind is DifferenceMatrix else A.s, A.entries)
        B = type(B)(sub.quotient, B.lam if kind is DifferenceMatrix else B.s, B.entries)
        (verify_dm if kind is DifferenceMatrix else verify_cdm_fast)(A)
        (verify_dm if kind is DifferenceMatrix else verify_cdm_fast)(B)
        out = kronecker_compose_dm(A, B, sub) if kind is DifferenceMatrix else concat_compose_cdm(A, B, sub)
    elif args.op in ("sum", "product"):
        A, B = (_verified_input(p, DifferenceMatrix) for p in args.inputs[:2])
        out = sum_compose_dm(A, B) if args.op == "sum" else product_compose_dm(A, B)
    elif args.op == "image":
        A = _verified_input(args.inputs[0])
        phi = Homomorphism.drop_last(A.group, args.drop)
        out = hom_image_dm(A, phi) if isinstance(A, DifferenceMatrix) else hom_image_cdm(A, phi)
    else:
        raise _Usage(f"unknown composition {args.op}")
    _emit_design(args, out)
    return OK


def cmd_expand(args) -> int:
    M = _verified_input(args.input, ContractedDifferenceMatrix)
    _emit_design(args, p_expand(M))
    return OK


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.what in ("dm", "cdm"):
        kind = DifferenceMatrix if args.what == "dm" else ContractedDifferenceMatrix
        d = _load(args.input, kind)
        if kind is DifferenceMatrix:
            v = verify_dm(d)
        else:
            v = verify_cdm_full(d) if args.full else verify_cdm_fast(d)
        _emit(args, {"verified": v.ok, "witness": str(v.witness) if v.witness else None}, str(v))
        return OK if v else FALSE
    if args.what == "ds":
        data = json.loads(open(args.input).read())
        G = GroupSpec.parse(data["group"])
        pts = [parse_coords(x, G.rank) if isinstance(x, str) else tuple(x) for x in data["elements"]]
        D = DifferenceSet.from_indices(G, G.encode(np.array(pts, dtype=np.int64).reshape(-1, G.rank)),
                                       tuple(data["params"]) if "params" in data else None)
        v = verify_difference_set(D)
        detail = "true" if v else f"false ({v.witness or v.reason})"
        _emit(args, {"verified": v.ok, "params": list(D.params),
                      "detail": None if v else str(v.witness or v.reason)}, f"{detail} params={D.params}")
        return OK if v else FALSE
    return _verify_linking_file(args)


def _verify_linking_file(args) -> int:
    S = LinkingSystem.from_json(json.loads(open(args.input).read()))
    rep = verify_linking(S)
    text = f"true mu={rep.mu} nu={rep.nu} size={len(S)}" if rep else f"false ({rep.failure.value}: {rep.detail})"
    _emit(args, {"verified": rep.ok, "mu": rep.mu, "nu": rep.nu, "size": len(S),
                 "failure": rep.failure.value if rep.failure else None, "detail": rep.detail}, text)
    return OK if rep else FALSE


# -- search -------------------------------------------------------------------


def cmd_search(args) -> int:
    sym = Symmetry.none() if args.no_symmetry else None
    if args.first_row_canonical:
        sym = Symmetry(first_row_canonical=True)
    cfg = SearchConfig(args.group, args.k, s=args.s, mode=Mode(args.mode), symmetry=sym,
                       budget=args.budget, time_limit=args.time_limit, seed=args.seed,
                       partitions=args.parts, count_all=args.count_all,
                       max_solutions=args.max_solutions)
    res = search_cdm(cfg, workers=args.workers)
    lines = [f"outcome: {res.outcome.value} ({res.label})", f"nodes: {res.nodes_visited}",
             f"restrictions: {', '.join(res.restrictions_applied) or 'none'}"]
    if args.count_all:
        lines.append(f"solutions: {res.solutions}")
    if res.matrix is not None:
        lines.append(render_design(res.matrix, "paper-text").rstrip("\n"))
    _emit(args, res.to_json(), "\n".join(lines))
    return {Outcome.FOUND: OK, Outcome.EXHAUSTED_NONE: FALSE, Outcome.BUDGET_EXCEEDED: CAPACITY}[res.outcome]


# -- linking ------------------------------------------------------------------


def cmd_linking(args) -> int:
    if args.action == "verify":
        return _verify_linking_file(args)
    dm = _verified_input(args.dm, DifferenceMatrix)
    E = DiagonalSubgroup(args.group, args.e_cofactors)
    dm = DifferenceMatrix(E.quotient, dm.lam, dm.entries)
    verify_dm(dm)
    e = None
    if args.e_matrix:
        with open(args.e_matrix) as fh:
            e = json.load(fh)
        if not isinstance(e, list):
            raise _Usage(f"{args.e_matrix}: expected a list of rows")
    S = build_linking_system(args.group, E, dm, e, seed=args.seed)
    rep = verify_linking(S)
    if args.format == "json":
        sys.stdout.write(json.dumps(S.to_json(), indent=2) + "\n")
    else:
        head = f"linking {S.group} params={S.params} size={len(S)} mu={S.mu} nu={S.nu}"
        sys.stdout.write("\n".join([head] + render_cosets(S)) + "\n")
    return OK if rep else FALSE


# -- catalog and reproduce ----------------------------------------------------


def cmd_catalog(args) -> int:
    if args.action == "list":
        entries = catalog_entries()
        text = "\n".join(f"{str(e.group):20} k={e.best_known_k} source={e.source.value} "
                         f"maximality={e.maximality.value}" + (" +" if e.may_increase else "")
                         for e in entries)
        payload = {"entries": [e.to_json() for e in entries],
                   "external_records": [r.to_json() for r in EXTERNAL_RECORDS]}
        _emit(args, payload, text)
        return OK
    if args.action == "get":
        try:
            e = catalog_get(args.group)
        except NotFoundError as exc:
            sys.stderr.write(f"{exc.args[0]}\n")
            return USAGE
        text = (f"{e.group} k={e.best_known_k} source={e.source.value} maximality={e.maximality.value}\n"
                + render_design(e.matrix, "paper-text"))
        _emit(args, e.to_json(), text)
        return OK
    lines = catalog_verify_all()
    ok = all(x.ok for x in lines)
    text = "\n".join(f"{'ok  ' if x.ok else 'FAIL'} {x.group}" for x in lines)
    text += f"\n{sum(x.ok for x in lines)}/{len(lines)} verified"
    _emit(args, {"ok": ok, "lines": [vars(x) | {"ok": x.ok} for x in lines]}, text)
    return OK if ok else FALSE


def cmd_reproduce(args) -> int:
    targets = list(TARGETS) if args.target == "all" else [args.target]
    reports = [reproduce(t) for t in targets]
    _emit(args, {"ok": all(r.ok for r in reports), "reports": [r.to_json() for r in reports]},
          "\n".join(str(r) for r in reports))
    return OK if all(r.ok for r in reports) else FALSE


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    ap = argparse.ArgumentParser(prog="diffmat", description="Difference matrices over abelian groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a design from a construction")
    c.add_argument("kind", choices=("drake", "cfield", "pan-chang", "pan-chang-cdm", "chain", "chain-cdm",
                                    "noncyclic2", "best-known", "trivial", "searched"))
    c.add_argument("--group", type=_group)
    c.add_argument("--p", type=int, default=2)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--e", type=int, default=2)
    c.add_argument("--k", type=int)
    c.add_argument("--levels", type=_ints, help="cofactors of the first chain subgroup")
    c.add_argument("--contracted", action="store_true", help="trivial: emit the one-row contracted form")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("compose", parents=[common], help="combine designs")
    c.add_argument("op", choices=("kronecker", "concat", "sum", "product", "image"))
    c.add_argument("inputs", nargs="+")
    c.add_argument("--group", type=_group, help="host group for kronecker and concat")
    c.add_argument("--cofactors", type=_ints, help="cofactors of the subgroup H")
    c.add_argument("--drop", type=int, default=1, help="factors dropped by image")
    c.set_defaults(func=cmd_compose)

    c = sub.add_parser("expand", parents=[common], help="p-expansion of a contracted matrix")
    c.add_argument("input")
    c.set_defaults(func=cmd_expand)

    c = sub.add_parser("verify", parents=[common], help="verify a design")
    c.add_argument("what", choices=("dm", "cdm", "ds", "linking"))
    c.add_argument("input")
    c.add_argument("--full", action="store_true", help="check a cdm by full expansion")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("search", parents=[common], help="search for contracted matrices")
    c.add_argument("what", choices=("cdm",))
    c.add_argument("--group", type=_group, required=True)
    c.add_argument("--rows", "--k", dest="k", type=int, required=True)
    c.add_argument("--s", type=int, default=0)
    c.add_argument("--mode", choices=[m.value for m in Mode], default="exhaustive")
    c.add_argument("--budget", type=int, default=10**7)
    c.add_argument("--time-limit", type=float)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--parts", type=int, default=1)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--no-symmetry", action="store_true")
    c.add_argument("--canonical-first-row", "--first-row-canonical", dest="first_row_canonical",
                   action="store_true")
    c.add_argument("--count-all", action="store_true")
    c.add_argument("--max-solutions", type=int, default=1)
    c.set_defaults(func=cmd_search)

    c = sub.add_parser("linking", help="reduced linking systems")
    lsub = c.add_subparsers(dest="action", required=True)
    b = lsub.add_parser("build", parents=[common])
    b.add_argument("--group", type=_group, required=True)
    b.add_argument("--E", "--e-cofactors", dest="e_cofactors", type=_ints, required=True,
                   help="cofactors of the subgroup E")
    b.add_argument("--dm", required=True, help="(G/E, m, 1) difference matrix file")
    b.add_argument("--e-matrix", help="JSON file: (m-1) x s array of elements of E")
    b.add_argument("--seed", type=int)
    v = lsub.add_parser("verify", parents=[common])
    v.add_argument("input")
    c.set_defaults(func=cmd_linking)

    c = sub.add_parser("catalog", help="best known matrices for small 2-groups")
    csub = c.add_subparsers(dest="action", required=True)
    csub.add_parser("list", parents=[common])
    g = csub.add_parser("get", parents=[common])
    g.add_argument("group", type=_group)
    csub.add_parser("verify-all", parents=[common])
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("reproduce", parents=[common], help="rebuild a printed example and diff it")
    c.add_argument("target", choices=list(TARGETS) + ["all"])
    c.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapacityError as exc:
        sys.stderr.write(f"capacity: {exc}\n")
        return CAPACITY
    except (_Usage, DiffMatError, OSError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
