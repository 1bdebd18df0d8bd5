import json

import jsonschema
import pytest

from qinv.cli import main
from qinv.problem import OUTPUT_SCHEMA

COUNTEREXAMPLE_TEXT = """\
qi: true (generator-polarization)
adjugate-invariance: false (adjugate-symbolic)
  [fails] every coefficient matrix lies in S
  [unknown] residue_floor >= min(m,n)+1 = 4
  K: [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
  K_adj: [[1, 1, 1], [1, 1, 0], [1, 0, 0]]
  monomial: [0, 0, 3]
h-invariance: unknown (theorem-chain)
  [fails] invariance theorem available for ZZ
  [holds] QI decided
  note: claim: h(S∩M) = S∩M
warnings:
  - S is QI but not invariant under K -> K adj(I-GK) over ZZ; quadratic invariance alone does not give convexity of the closed-loop set here
  - h-invariance could not be established: no invariance theorem applies
"""

VANDERMONDE_TEXT = """\
points: 0, 1, 2, b
V = [[1, 0, 0], [1, 1, 1], [1, 2, 4], [1, b, -3+b]]
L = [[1, 0, 0, 0], [-2-b, 5+b, -2, -1], [1+b, -4-b, 2, 1]]
L V = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    obj = json.loads(out)
    jsonschema.validate(obj, OUTPUT_SCHEMA)
    assert obj["exit_code"] == code
    return code, obj


def test_counterexample_golden(capsys):
    code, out, _ = run(capsys, "check-qi", "corpus:counterexample")
    assert code == 0
    assert out == COUNTEREXAMPLE_TEXT


def test_vandermonde_golden(capsys):
    code, out, _ = run(capsys, "vandermonde", "--ring", "zbeta", "--points", "0,1,2,b", "--n", "3", "--n-max", "4")
    assert code == 0
    assert out == VANDERMONDE_TEXT


@pytest.mark.parametrize("name,code", [
    ("counterexample", 0),
    ("network", 0),
    ("network_nodelay", 0),
    ("multidim", 0),
    ("sparsity_chain", 0),
    ("sparsity_decentralized", 3),
])
def test_check_qi_exit_codes(capsys, name, code):
    got, obj = run_json(capsys, "check-qi", f"corpus:{name}")
    assert got == code
    assert obj["command"] == "check-qi"


@pytest.mark.parametrize("name,code", [("network", 0), ("network_nodelay", 4), ("sparsity_decentralized", 3)])
def test_closed_loop_exit_codes(capsys, name, code):
    got, obj = run_json(capsys, "closed-loop", f"corpus:{name}")
    assert got == code
    if code == 0:
        assert len(obj["affine_set"]["images"]) == 4
    else:
        assert obj["affine_set"] is None


def test_closed_loop_needs_blocks(capsys):
    code, _, err = run(capsys, "closed-loop", "corpus:counterexample")
    assert code == 2 and "p11" in err


def test_json_output_is_byte_identical(capsys):
    a = run(capsys, "check-qi", "corpus:network", "--json")
    b = run(capsys, "check-qi", "corpus:network", "--json")
    assert a == b
    c = run(capsys, "oracle", "--p", "5", "--trials", "10", "--json")
    d = run(capsys, "oracle", "--p", "5", "--trials", "10", "--json")
    assert c == d


def test_h_map(capsys, tmp_path):
    k = tmp_path / "k.json"
    k.write_text('{"K": [["1"]]}')
    code, obj = run_json(capsys, "h-map", "corpus:scalar", "--k", str(k))
    assert code == 0
    assert obj["h_of_k"] == [["-s/(s-1)"]] and obj["in_s"] is True


def test_h_map_not_in_m(capsys, tmp_path):
    # G = 1/s and K = s give I - GK = 0
    k = tmp_path / "k.json"
    k.write_text('[["s"]]')
    code, obj = run_json(capsys, "h-map", "corpus:scalar", "--k", str(k))
    assert code == 3
    assert obj["h_of_k"] is None and obj["det"] == "0"


def test_h_map_wrong_shape(capsys, tmp_path):
    k = tmp_path / "k.json"
    k.write_text('[["1", "1"]]')
    code, _, err = run(capsys, "h-map", "corpus:scalar", "--k", str(k))
    assert code == 2 and "K must be 1x1" in err


def test_oracle(capsys):
    code, obj = run_json(capsys, "oracle", "--p", "7", "--trials", "20", "--seed", "1")
    assert code == 0
    assert obj["report"]["discrepancies"] == []
    assert "runtime_ms" not in obj["report"]
    _, obj = run_json(capsys, "oracle", "--p", "7", "--trials", "2", "--timing")
    assert "runtime_ms" in obj["report"]


def test_oracle_exploratory_warns(capsys):
    code, obj = run_json(capsys, "oracle", "--p", "3", "--trials", "10")
    assert code == 0 and obj["report"]["exploratory"] and obj["warnings"]


def test_vandermonde_no_solution(capsys):
    code, obj = run_json(capsys, "vandermonde", "--ring", "zz", "--points", "0,1,2", "--n", "3")
    assert code == 3 and obj["left_inverse"] is None


def test_vandermonde_mod_p(capsys):
    code, obj = run_json(capsys, "vandermonde", "--ring", "mod7", "--points", "0,1,2", "--n", "3")
    assert code == 0 and obj["points"] == ["0", "1", "2"]


@pytest.mark.parametrize("argv", [
    ["vandermonde", "--ring", "octonions", "--points", "0", "--n", "1"],
    ["vandermonde", "--ring", "zz", "--points", "0,1", "--n", "3"],
    ["oracle", "--p", "6"],
    ["oracle", "--p", "101"],
    ["check-qi", "corpus:counterexample", "--method", "sparsity"],
    ["check-qi", "corpus:no_such_problem"],
    ["check-qi"],
    ["frobnicate"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


@pytest.mark.parametrize("doc,needle", [
    ("{", "JSON"),
    ('{"format": 1}', "ring"),
    ('{"format": 2, "ring": {"kind": "integers"}, "plant": [["1"]],'
     ' "controller_set": {"kind": "sparsity", "pattern": [[1]]}}', "format"),
    ('{"format": 1, "ring": {"kind": "integers"}, "plant": [["1/2"]],'
     ' "controller_set": {"kind": "sparsity", "pattern": [[1]]}}', "plant"),
    ('{"format": 1, "ring": {"kind": "integers"}, "plant": [["1", "0"]],'
     ' "controller_set": {"kind": "sparsity", "pattern": [[1]]}}', "1x2"),
    ('{"format": 1, "ring": {"kind": "integers"}, "plant": [["1"], ["1", "2"]],'
     ' "controller_set": {"kind": "sparsity", "pattern": [[1]]}}', "row"),
])
def test_malformed_problem_files(capsys, tmp_path, doc, needle):
    f = tmp_path / "p.json"
    f.write_text(doc)
    code, out, err = run(capsys, "check-qi", str(f), "--json")
    assert code == 2
    assert needle.lower() in err.lower()
    obj = json.loads(out)
    jsonschema.validate(obj, OUTPUT_SCHEMA)
    assert obj["error"]
