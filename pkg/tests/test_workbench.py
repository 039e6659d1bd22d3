import io
import json
import os

import pytest
from fractions import Fraction

from hopfcross.cli import main
from hopfcross.workbench import (ClassificationReport, InputError,
                                 NotJordanForm, WorkbenchSpec,
                                 build_and_verify_presentation,
                                 classify_Q, classify_crossed_products)

HERE = os.path.dirname(__file__)
FIXTURES = os.path.join(HERE, "..", "fixtures")
GOLDENS = os.path.join(HERE, "goldens")


def fixture(name):
    return os.path.join(FIXTURES, name)


def run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_classify_Q_cases():
    assert classify_Q([[1, 0], [0, 1]])["case"] == "2"
    info = classify_Q([[1, 0], [0, -1]])
    assert info["case"] == "3b" and info["m"] == 2
    assert classify_Q([[2, 0], [0, "1/2"]])["case"] == "1b"
    assert classify_Q([[2, 1], [0, 2]])["case"] == "1a"
    assert classify_Q([[-1, 0], [0, -1]])["case"] == "3a"


def test_classify_Q_rejects_non_jordan():
    with pytest.raises(NotJordanForm):
        classify_Q([[1, 2], [3, 4]])
    with pytest.raises(InputError):
        classify_Q([[1, 1], [1, 1]])       # singular


def test_spec_parsing_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        WorkbenchSpec.load(str(bad))
    with pytest.raises(InputError):
        WorkbenchSpec.parse({"payload": {}})
    with pytest.raises(InputError):
        WorkbenchSpec.parse({"kind": "poly3"})
    with pytest.raises(InputError):
        WorkbenchSpec.parse({"kind": "poly2", "budget": 0})


@pytest.mark.parametrize("name", [
    "case2_beta1_Y", "case2_beta1_Y2", "case1a_q2", "case1a_qm1",
    "case1b_q1q2_1", "case1b_q1q2_ne1", "case3a", "case3b"])
def test_classification_matches_golden(name):
    spec = WorkbenchSpec.load(fixture(name + ".json"))
    rep = classify_crossed_products(spec)
    with open(os.path.join(GOLDENS, name + ".txt")) as fh:
        assert rep.as_text() + "\n" == fh.read()
    with open(os.path.join(GOLDENS, name + ".json")) as fh:
        assert json.loads(rep.as_json()) == json.load(fh)


def test_json_and_text_numeric_content_agree():
    spec = WorkbenchSpec.load(fixture("case2_beta1_Y.json"))
    rep = classify_crossed_products(spec)
    doc = json.loads(rep.as_json())
    text = rep.as_text()
    assert "H2_dim: %s" % doc["H2_dim"] in text
    assert "d1_rank: %s" % doc["d1_rank"] in text
    assert "d2_rank: %s" % doc["d2_rank"] in text
    for n in (0, 1, 2):
        assert "Xi_D%d_dim: %d" % (n, doc["xi_dims"][n]) in text
    for rel in doc["relations"]:
        assert rel in text


def test_case2_both_betas_zero_presentation():
    # the degenerate classical subcase: the commutator parameter is an
    # arbitrary polynomial
    spec = WorkbenchSpec.parse({
        "kind": "poly2", "budget": 4,
        "payload": {"Q": [["1", "0"], ["0", "1"]], "beta1": [], "beta2": []}})
    rep = classify_crossed_products(spec)
    assert rep.data["relations"][2] == \
        "W1*W2 - W2*W1 = R(Y), an arbitrary polynomial"
    assert rep.data["H2_exact"].startswith("k[Y]")


def test_case_tags_consistent_with_Q():
    for name, tag in [("case2_beta1_Y", "2"), ("case1a_q2", "1a"),
                      ("case1b_q1q2_1", "1b"), ("case3a", "3a"),
                      ("case3b", "3b")]:
        spec = WorkbenchSpec.load(fixture(name + ".json"))
        rep = classify_crossed_products(spec)
        assert rep.data["case"] == tag
        assert rep.data["case"] == classify_Q(
            [[Fraction(x) for x in row] for row in spec.payload["Q"]])["case"]


@pytest.mark.parametrize("name,b", [
    ("case2_beta1_Y", ["1"]),          # Weyl-like: commutator = 1
    ("case2_beta1_Y", ["0"]),          # trivial parameter
    ("case1a_qm1", ["1"]),             # q = -1, lambda = 1
    ("case1b_q1q2_1", ["2"]),          # lambda = 2
    ("case3a", ["0", "0", "1"]),       # P(Y^2) = Y^2
])
def test_presentation_roundtrip(name, b):
    # every emitted presentation, rebuilt through the cocycle construction,
    # satisfies its own relations inside the constructed algebra
    spec = WorkbenchSpec.load(fixture(name + ".json"))
    cp, rep = build_and_verify_presentation(spec, b, assoc_budget=3)
    assert rep.ok, rep.summary()


def test_presentation_rejects_class_outside_xi2():
    spec = WorkbenchSpec.load(fixture("case1a_q2.json"))   # Xi(D_2) = 0
    with pytest.raises(InputError):
        build_and_verify_presentation(spec, ["1"], assoc_budget=3)


# ---------------------------------------------------------------------------
# the command-line surface


def test_cli_verify_group_ok():
    code, out = run_cli("verify", fixture("z2_sign.json"))
    assert code == 0
    assert "OVERALL: PASS" in out


def test_cli_verify_lie():
    code, out = run_cli("verify", fixture("heisenberg.json"), "--budget", "3")
    assert code == 0
    assert "ce.d_squared_zero" in out


def test_cli_classify_text_and_json():
    code, out = run_cli("classify", fixture("case2_beta1_Y.json"))
    assert code == 0 and "H2_dim: 1" in out
    code, outj = run_cli("classify", fixture("case2_beta1_Y.json"),
                         "--format", "json")
    assert code == 0
    assert json.loads(outj)["H2_dim"] == 1


def test_cli_crossed_product_trivial():
    code, out = run_cli("crossed-product", fixture("case2_beta1_Y.json"),
                        "--cocycle", fixture("cocycle_trivial.json"),
                        "--budget", "3")
    assert code == 0
    assert "presentation:" in out


def test_cli_crossed_product_corrupt_cocycle(tmp_path):
    # a corrupted explicit table (non-normal value on a unit slot) fails the
    # flags: exit 1
    bad = tmp_path / "bad_cocycle.json"
    bad.write_text(json.dumps({
        "kind": "table",
        "values": {"1,0|0,0": {"0": "2"}}}))
    code, out = run_cli("crossed-product", fixture("case2_beta1_Y.json"),
                        "--cocycle", str(bad), "--budget", "3")
    assert code == 1
    assert "flags" in out


def test_cli_cohomology_poly():
    code, out = run_cli("cohomology", fixture("case2_beta1_Y.json"),
                        "--degree", "2")
    assert code == 0
    assert "H^2 dimension at window 4: 1" in out


def test_cli_cohomology_group():
    code, out = run_cli("cohomology", fixture("z2_sign.json"), "--degree", "0")
    assert code == 0
    assert "H0 carrier dimension: 1" in out


def test_cli_compare_poly():
    code, out = run_cli("compare", fixture("case2_beta1_Y.json"),
                        "--samples", "4", "--seed", "1")
    assert code == 0
    assert "exp/log roundtrip" in out


def test_cli_compare_group():
    code, out = run_cli("compare", fixture("z3_inversion_graded.json"))
    assert code == 0
    assert "homogenized differential agrees" in out


def test_cli_input_error_exit_code():
    code, out = run_cli("classify", "no_such_file.json")
    assert code == 2
    code, out = run_cli("verify", fixture("cocycle_trivial.json"))
    assert code == 2           # not a spec document
