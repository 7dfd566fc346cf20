import json

import pytest

from diffmat import golden
from diffmat.catalog import catalog_get
from diffmat.cli import CAPACITY, FALSE, OK, USAGE, main
from diffmat.constructions import drake_dm, pan_chang_dm
from diffmat.designs import ContractedDifferenceMatrix, DifferenceMatrix, verify_cdm_fast, verify_dm
from diffmat.groups import GroupSpec
from diffmat.linking import LinkingSystem, verify_linking
from diffmat.serialize import parse_design, render_design


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def body(text):
    """Matrix rows of a paper-text rendering."""
    return "\n".join(text.strip().splitlines()[1:])


@pytest.fixture
def files(tmp_path):
    def write(name, design_or_text):
        f = tmp_path / name
        f.write_text(design_or_text if isinstance(design_or_text, str) else render_design(design_or_text))
        return str(f)
    return write


def test_construct_text_and_json(capsys):
    rc, out, _ = run(capsys, "construct", "drake", "--p", "2", "--n", "2")
    assert rc == OK
    assert out.splitlines()[0] == "dm Z2xZ2 lambda=1"
    assert body(out) == golden.EXAMPLE_3_2
    rc, out, _ = run(capsys, "construct", "pan-chang", "--e", "3", "--format", "json")
    assert rc == OK
    D = parse_design(out)
    assert D == pan_chang_dm(3) and verify_dm(D)


@pytest.mark.parametrize("argv", [
    ["construct", "cfield", "--p", "3", "--n", "2"],
    ["construct", "pan-chang-cdm", "--e", "4"],
    ["construct", "chain-cdm", "--group", "Z8xZ8xZ4xZ4xZ2"],
    ["construct", "chain", "--group", "Z4xZ4"],
    ["construct", "noncyclic2", "--group", "Z8xZ4"],
    ["construct", "best-known", "--group", "Z16xZ8xZ4", "--k", "3"],
    ["construct", "searched", "--group", "Z4xZ4xZ2"],
    ["construct", "trivial", "--group", "Z9"],
    ["construct", "trivial", "--group", "Z9", "--contracted"],
])
def test_constructions_emit_verified_designs(capsys, argv):
    rc, out, _ = run(capsys, *argv)
    assert rc == OK
    d = parse_design(out)
    assert verify_dm(d) if isinstance(d, DifferenceMatrix) else verify_cdm_fast(d)


def test_chain_cdm_output_matches_printed(capsys):
    rc, out, _ = run(capsys, "construct", "chain-cdm", "--group", "Z8xZ8xZ4xZ4xZ2")
    assert body(out) == golden.CHAIN_3X11


def test_construct_usage_errors(capsys):
    assert run(capsys, "construct", "chain")[0] == USAGE
    assert run(capsys, "construct", "best-known", "--group", "Z4xZ2")[0] == USAGE
    assert run(capsys, "construct", "bogus")[0] == USAGE
    assert run(capsys, "construct", "chain", "--group", "Z6")[0] == USAGE
    rc, _, err = run(capsys, "construct", "best-known", "--group", "Z4xZ2", "--k", "3")
    assert rc == FALSE and "no chain" in err


def test_compose_kronecker(capsys, files):
    a = files("a.json", drake_dm(2, 2))
    rc, out, _ = run(capsys, "compose", "kronecker", a, a, "--group", "Z4xZ2xZ2", "--cofactors", "1,0,1")
    assert rc == OK
    assert body(out) == golden.KRONECKER


def test_compose_concat(capsys, files):
    M = ContractedDifferenceMatrix.from_rows(GroupSpec.parse("Z3xZ3"), 0, [["01", "10"], ["10", "21"]])
    m = files("m.json", M)
    rc, out, _ = run(capsys, "compose", "concat", m, m, "--group", "Z9xZ3xZ3", "--cofactors", "1 0 1")
    assert rc == OK
    assert body(out) == golden.CONCAT_Z9Z3Z3


def test_compose_sum_product_image(capsys, files):
    a = files("a.json", drake_dm(2, 2))
    rc, out, _ = run(capsys, "compose", "sum", a, a)
    assert rc == OK and parse_design(out).lam == 2
    rc, out, _ = run(capsys, "compose", "product", a, a)
    P = parse_design(out)
    assert rc == OK and P.shape == (16, 16) and P.lam == 4 and verify_dm(P)
    b = files("b.json", drake_dm(2, 3))
    rc, out, _ = run(capsys, "compose", "image", b)
    assert rc == OK and body(out) == golden.HOM_IMAGE


def test_compose_usage_errors(capsys, files):
    a = files("a.json", drake_dm(2, 2))
    assert run(capsys, "compose", "sum", a)[0] == USAGE
    assert run(capsys, "compose", "kronecker", a, a)[0] == USAGE
    bad = files("bad.txt", "dm Z2xZ2 lambda=1\n00 00 00 00\n00 00 00 00\n")
    rc, _, err = run(capsys, "compose", "sum", a, bad)
    assert rc == USAGE and "does not verify" in err
    assert run(capsys, "compose", "sum", a, "/nonexistent/file.json")[0] == USAGE


def test_expand(capsys, files):
    m = files("m.txt", "cdm Z4xZ2 s=0\n" + golden.EXPANSION_Z4Z2_M + "\n")
    rc, out, _ = run(capsys, "expand", m)
    assert rc == OK and body(out) == golden.EXPANSION_Z4Z2


def test_verify_designs(capsys, files):
    good = files("good.json", catalog_get("Z4xZ4xZ2").matrix)
    assert run(capsys, "verify", "cdm", good)[0] == OK
    assert run(capsys, "verify", "cdm", good, "--full")[0] == OK
    bad = files("bad.txt", "cdm Z4xZ2 s=0\n01 10 20\n01 10 20\n")
    rc, out, _ = run(capsys, "verify", "cdm", bad, "--format", "json")
    assert rc == FALSE
    data = json.loads(out)
    assert data["verified"] is False and data["witness"]
    dm = files("dm.json", drake_dm(3, 2))
    assert run(capsys, "verify", "dm", dm)[0] == OK
    assert run(capsys, "verify", "cdm", dm)[0] == USAGE


def test_verify_difference_set(capsys, tmp_path):
    f = tmp_path / "ds.json"
    f.write_text(json.dumps({"group": "Z4xZ2xZ2", "elements": ["100", "101", "010", "011", "110", "111"]}))
    rc, out, _ = run(capsys, "verify", "ds", str(f))
    assert rc == FALSE
    rc, out, _ = run(capsys, "verify", "ds", str(f), "--format", "json")
    assert json.loads(out)["params"] == [16, 6, 2, 4]


def test_search_exit_codes(capsys):
    rc, out, _ = run(capsys, "search", "cdm", "--group", "Z4xZ2", "--rows", "2")
    assert rc == OK and "found" in out
    rc, out, _ = run(capsys, "search", "cdm", "--group", "Z4xZ2", "--k", "3")
    assert rc == FALSE and "exhausted_none (exhaustive)" in out
    rc, out, _ = run(capsys, "search", "cdm", "--group", "Z4xZ2", "--k", "3", "--canonical-first-row")
    assert rc == FALSE and "restricted_exhaustive" in out
    rc, _, _ = run(capsys, "search", "cdm", "--group", "Z4xZ4", "--k", "3", "--budget", "100")
    assert rc == CAPACITY
    rc, out, _ = run(capsys, "search", "cdm", "--group", "Z4xZ2xZ2", "--k", "3", "--mode", "random",
                     "--seed", "3", "--budget", "1000000", "--format", "json")
    data = json.loads(out)
    assert data["seed"] == 3 and data["outcome"] in ("found", "budget_exceeded")
    rc, out, _ = run(capsys, "search", "cdm", "--group", "Z4xZ2", "--k", "2", "--no-symmetry", "--count-all",
                     "--parts", "3")
    assert rc == OK and "solutions: 384" in out


def test_linking_build_and_verify(capsys, files, tmp_path):
    b = files("b.json", DifferenceMatrix.from_rows(GroupSpec.parse("Z2xZ2"), 1, golden.EXAMPLE_4_4_B))
    e = tmp_path / "e.json"
    e.write_text(json.dumps(golden.EXAMPLE_4_4_E))
    rc, out, _ = run(capsys, "linking", "build", "--group", "Z4xZ2xZ2", "--E", "1,1,0", "--dm", b,
                     "--e-matrix", str(e))
    assert rc == OK
    assert out.splitlines()[1:] == golden.EXAMPLE_4_4_SETS
    rc, out, _ = run(capsys, "linking", "build", "--group", "Z4xZ2xZ2", "--E", "1,1,0", "--dm", b,
                     "--format", "json")
    assert rc == OK
    sysfile = tmp_path / "sys.json"
    sysfile.write_text(out)
    assert verify_linking(LinkingSystem.from_json(json.loads(out))).ok
    rc, out, _ = run(capsys, "linking", "verify", str(sysfile))
    assert rc == OK and out.startswith("true")
    assert run(capsys, "verify", "linking", str(sysfile))[0] == OK
    data = json.loads(sysfile.read_text())
    data["sets"] = data["sets"][:1]
    sysfile.write_text(json.dumps(data))
    rc, out, _ = run(capsys, "linking", "verify", str(sysfile))
    assert rc == FALSE and "too_few_sets" in out


def test_linking_drake_order_64(capsys, files):
    d = files("d.json", drake_dm(2, 3))
    rc, out, _ = run(capsys, "linking", "build", "--group", "Z2^6", "--E", "1,1,1,0,0,0", "--dm", d)
    assert rc == OK
    assert "params=(64, 28, 12, 16) size=7" in out.splitlines()[0]


def test_catalog(capsys):
    rc, out, _ = run(capsys, "catalog", "list")
    assert rc == OK and len(out.strip().splitlines()) == 29
    rc, out, _ = run(capsys, "catalog", "list", "--format", "json")
    assert len(json.loads(out)["external_records"]) == 3
    rc, out, _ = run(capsys, "catalog", "get", "Z64")
    assert rc == OK and "1 2 4 8 (16) (32)" in out
    assert run(capsys, "catalog", "get", "Z128")[0] == USAGE
    rc, out, _ = run(capsys, "catalog", "verify-all")
    assert rc == OK and out.strip().endswith("29/29 verified")


def test_reproduce(capsys):
    rc, out, _ = run(capsys, "reproduce", "example_3_3")
    assert rc == OK
    rc, out, _ = run(capsys, "reproduce", "table_2", "--format", "json")
    assert rc == OK and json.loads(out)["ok"] is True
    assert run(capsys, "reproduce", "nope")[0] == USAGE


def test_no_command_is_usage(capsys):
    assert run(capsys)[0] == USAGE
    assert run(capsys, "--help")[0] == OK


def test_output_is_deterministic(capsys):
    a = run(capsys, "construct", "best-known", "--group", "Z16xZ8xZ4", "--k", "3", "--format", "json")
    b = run(capsys, "construct", "best-known", "--group", "Z16xZ8xZ4", "--k", "3", "--format", "json")
    assert a == b
