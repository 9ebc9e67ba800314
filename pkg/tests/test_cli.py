import json

import pytest

from succmso import cli, sgr
from succmso.graph import Digraph, graph_equal, parse_graph

LOOP_GRAPH = "graph 2\ne 0 0\n"
EDGE_GADGET = "graph 2\ne 0 1\np1 0\np2 1\n"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def loop_file(tmp_path):
    p = tmp_path / "loop.txt"
    p.write_text(LOOP_GRAPH)
    return str(p)


@pytest.fixture
def cnf_file(tmp_path):
    p = tmp_path / "f.cnf"
    p.write_text("p cnf 1 1\n1 0\n")
    return str(p)


def test_mso_check_true(capsys, loop_file):
    code, out, _ = run(capsys, "mso", "check", "--graph", loop_file, "--formula", "ex x. E(x,x)")
    assert code == 0
    assert out.strip() == "true"


def test_mso_check_false_verdict_exit_1(capsys, loop_file):
    code, out, _ = run(capsys, "mso", "check", "--graph", loop_file, "--formula", "all x. E(x,x)")
    assert code == 1
    assert out.strip() == "false"


def test_mso_rank_and_parse(capsys):
    code, out, _ = run(capsys, "mso", "rank", "--formula", "ex x. ex y. E(x,y)")
    assert code == 0 and out.strip() == "2"
    code, out, _ = run(capsys, "--json", "mso", "parse", "--formula", "ex x. E(x,x)")
    assert code == 0
    obj = json.loads(out)
    assert obj == {"formula": "ex x. E(x,x)", "rank": 1}


def test_usage_error_exit_2(capsys):
    code, _, _ = run(capsys, "mso", "check", "--no-such-flag")
    assert code == 2
    code, _, _ = run(capsys, "nonsense")
    assert code == 2


def test_operation_error_exit_1(capsys, loop_file):
    code, _, err = run(capsys, "mso", "check", "--graph", loop_file, "--formula", "ex x. (")
    assert code == 1
    assert "ParseError" in err


def test_reduce_sat2sgr_and_sgr_commands(capsys, tmp_path, cnf_file):
    out_file = tmp_path / "c.sgr.json"
    code, out, _ = run(
        capsys, "reduce", "sat2sgr", "--cnf", cnf_file, "--gadgets", "toy",
        "--out", str(out_file),
    )
    assert code == 0
    assert out.strip() == "5"  # N printed
    bundle = sgr.parse(out_file.read_text())
    assert bundle.n_vertices == 5

    code, out, _ = run(capsys, "sgr", "edge", "--sgr", str(out_file), "--x", "2", "--y", "2")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "sgr", "check-size", "--sgr", str(out_file))
    assert code == 0
    code, out, _ = run(capsys, "sgr", "materialize", "--sgr", str(out_file))
    assert code == 0
    g = parse_graph(out)
    assert graph_equal(g, Digraph(5, [(0, 1), (1, 2), (2, 2), (2, 3), (3, 4)]))


def test_reduce_loop_and_clique(capsys, tmp_path, cnf_file):
    for sub in ("loop", "clique"):
        out_file = tmp_path / f"{sub}.json"
        code, _, _ = run(capsys, "reduce", sub, "--cnf", cnf_file, "--out", str(out_file))
        assert code == 0
        assert sgr.parse(out_file.read_text()).n_vertices == 2


def test_reduce_succ_ref(capsys, cnf_file):
    code, out, _ = run(capsys, "reduce", "succ-ref", "--gadgets", "toy", "--cnf", cnf_file, "--x", "2")
    assert code == 0
    assert out.strip() == "2 3"


def test_reduce_validate_and_build_quad(capsys, tmp_path, cnf_file):
    omega = tmp_path / "omega.txt"
    omega.write_text("graph 1\ne 0 0\n")
    quad_file = tmp_path / "quad.json"
    code, _, _ = run(
        capsys, "reduce", "build-quad", "--triple", "path", "--omega", str(omega),
        "--out", str(quad_file),
    )
    assert code == 0
    code, out, _ = run(capsys, "reduce", "validate-quad", "--gadgets", str(quad_file))
    assert code == 0 and out.strip() == "true"
    # satisfied assignment -> one copy is the loop gadget (no 0->1 edge there)
    code, out, _ = run(capsys, "verify", "delta-layout", "--gadgets", str(quad_file), "--cnf", cnf_file)
    assert code == 0
    assert graph_equal(parse_graph(out), Digraph(5, [(0, 1), (1, 2), (2, 2), (3, 4)]))


def test_reduce_validate_quad_rejects(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([
        {"n": 3, "edges": [], "p1": [0], "p2": [1]},
        {"n": 2, "edges": [[0, 1]], "p1": [0], "p2": [1]},
        {"n": 2, "edges": [[0, 1]], "p1": [0], "p2": [1]},
        {"n": 2, "edges": [[0, 1]], "p1": [0], "p2": [1]},
    ]))
    code, out, _ = run(capsys, "reduce", "validate-quad", "--gadgets", str(bad))
    assert code == 1
    assert "invalid" in out


def test_reduce_pump_check(capsys):
    code, out, _ = run(
        capsys, "reduce", "pump-check", "--triple", "path",
        "--formula", "ex x. E(x,x)", "--expected", "false", "--nmax", "4",
    )
    assert code == 0 and out.strip() == "true"


def test_verify_sat(capsys, tmp_path, cnf_file):
    code, out, _ = run(capsys, "verify", "sat", "--cnf", cnf_file)
    assert code == 0 and out.strip() == "sat"
    unsat = tmp_path / "u.cnf"
    unsat.write_text("p cnf 1 2\n1 0\n-1 0\n")
    code, out, _ = run(capsys, "verify", "sat", "--cnf", str(unsat))
    assert code == 1 and out.strip() == "unsat"


def test_verify_end2end_builtin(capsys):
    code, out, _ = run(capsys, "verify", "end2end", "--gadgets", "toy")
    assert code == 0
    assert "overall: pass" in out


def test_verify_end2end_json_parses_back(capsys):
    code, out, _ = run(capsys, "--json", "verify", "end2end", "--gadgets", "toy")
    assert code == 0
    obj = json.loads(out)
    assert obj["ok"] is True and len(obj["records"]) > 40


def test_graph_commands(capsys, tmp_path):
    a = tmp_path / "a.txt"
    a.write_text(EDGE_GADGET)
    code, out, _ = run(capsys, "graph", "glue", "--a", str(a), "--b", str(a))
    assert code == 0
    g = parse_graph(out)
    assert g.graph.edges == frozenset({(0, 1), (1, 2)})

    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"1": {"n": 2, "edges": [[0, 1]], "p1": [0], "p2": [1]}}))
    code, out, _ = run(capsys, "graph", "delta", "--gadgets", str(fam), "--word", "111")
    assert code == 0
    assert parse_graph(out).n == 4

    code, out, _ = run(capsys, "graph", "union", "--a", str(a), "--b", str(a))
    assert code == 0 and parse_graph(out).n == 4

    code, out, _ = run(capsys, "graph", "iso", "--a", str(a), "--b", str(a))
    assert code == 0 and out.strip() == "true"


def test_td_commands(capsys, tmp_path):
    g = tmp_path / "p3.txt"
    g.write_text("graph 3\ne 0 1\ne 1 2\n")
    dec = tmp_path / "dec.json"
    dec.write_text(json.dumps({"root": 0, "parents": [-1, 0], "bags": [[0, 1], [1, 2]], "pointed_leaf": 1}))
    code, out, _ = run(capsys, "td", "validate", "--graph", str(g), "--dec", str(dec))
    assert code == 0 and out.strip() == "valid"
    code, out, _ = run(capsys, "td", "width", "--dec", str(dec))
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "td", "treewidth", "--graph", str(g))
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "td", "normalize3", "--dec", str(dec))
    assert code == 0
    json.loads(out)  # well-formed decomposition JSON


def test_td_of_delta(capsys, tmp_path):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"1": {"n": 2, "edges": [[0, 1]], "p1": [0], "p2": [1]}}))
    decs = tmp_path / "decs.json"
    decs.write_text(json.dumps({"1": {
        "root": 0, "parents": [-1, 0, 1], "bags": [[0], [0, 1], [1]], "pointed_leaf": 2,
    }}))
    code, out, _ = run(capsys, "td", "of-delta", "--gadgets", str(fam), "--decs", str(decs), "--word", "11")
    assert code == 0
    obj = json.loads(out)
    assert len(obj["bags"]) == 5


def test_ef_commands(capsys, tmp_path):
    one = tmp_path / "one.txt"
    one.write_text("graph 1\n")
    two = tmp_path / "two.txt"
    two.write_text("graph 2\n")
    code, out, _ = run(capsys, "ef", "equiv", "--g", str(one), "--h", str(two), "--m", "1")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "ef", "equiv", "--g", str(one), "--h", str(two), "--m", "2")
    assert code == 1 and out.strip() == "false"

    code, out, _ = run(capsys, "ef", "qsearch", "--graph", str(one), "--m", "1")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "ef", "qbound", "--size", "1", "--m", "1")
    assert code == 0 and out.strip() == "2"

    loop = tmp_path / "loop1.txt"
    loop.write_text("graph 1\ne 0 0\n")
    code, out, _ = run(capsys, "ef", "saturate", "--omega", str(loop), "--formula", "ex x. E(x,x)")
    assert code == 0 and out.strip() == "Sufficient"


def test_json_round_trip_materialize(capsys, tmp_path, cnf_file):
    out_file = tmp_path / "c.json"
    run(capsys, "reduce", "loop", "--cnf", cnf_file, "--out", str(out_file))
    code, out, _ = run(capsys, "--json", "sgr", "materialize", "--sgr", str(out_file))
    assert code == 0
    obj = json.loads(out)
    assert Digraph(obj["n"], obj["edges"]).n == 2
