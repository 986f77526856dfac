import io
import json

import pytest

from main import build_parser, main
from tests.conftest import TAU


def run(*argv):
    stream = io.StringIO()
    code = main(list(argv), stream=stream)
    return code, stream.getvalue()


def test_parabolic_expansion():
    code, text = run("expand", "par", "--mmax", "5")
    assert code == 0
    document = json.loads(text)
    assert [row["index"] for row in document["rows"]] == [1, 2, 3, 4, 5]
    assert [row["re"] for row in document["rows"]] == pytest.approx(TAU[:5], rel=1e-9)
    assert document["meta"]["form"] == "delta"


def test_elliptic_expansion_at_i():
    code, text = run("expand", "ell", "--point", "i", "--mmax", "8")
    assert code == 0
    rows = json.loads(text)["rows"]
    assert rows[2]["re"] == pytest.approx(1.094, abs=5e-4)


def test_csv_output():
    code, text = run("expand", "par", "--mmax", "3", "--format", "csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("# meta: ")
    assert lines[1] == "tag,index,re,im"
    assert len(lines) == 5


def test_out_file(tmp_path):
    path = tmp_path / "par.json"
    code, text = run("expand", "par", "--mmax", "2", "--out", str(path))
    assert code == 0
    assert text == ""
    assert len(json.loads(path.read_text(encoding="utf-8"))["rows"]) == 2


def test_qform_class_number():
    code, text = run("qform", "--disc", "5", "--lattice-bound", "60", "--coset-bound", "8")
    assert code == 0
    values = {row["quantity"]: row["re"] for row in json.loads(text)["rows"]}
    assert values["class_number"] == 1
    assert values["automorph_trace"] == 3
    assert "theta(0+1i)" in values


def test_verify_single_check():
    code, text = run("verify", "identities", "--only", "I_ab_closed_form")
    assert code == 0
    meta = json.loads(text)["meta"]
    assert meta["passed"] is True
    assert meta["total"] == 1


@pytest.mark.parametrize("argv", [
    ("qform",),
    ("expand", "par", "--group", "foo"),
    ("expand", "par", "--weight", "3"),
    ("expand", "ell", "--point", "2i"),
    ("expand", "ell"),
    ("qform", "--disc", "7"),
    ("inner", "par", "--group", "gamma0:11", "--form", "newform11"),
])
def test_bad_input_exits_2(argv):
    code, text = run(*argv)
    assert code == 2
    assert text == ""


def test_bad_choice_is_argparse_error():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["expand", "cusp"])


def test_poincare_series():
    code, text = run("poincare", "par", "--coset-bound", "4")
    assert code == 0
    document = json.loads(text)
    assert [row["point"] for row in document["rows"]] == ["0+1i"]
    assert document["meta"]["terms"] > 0


def test_poincare_zero_homomorphism():
    code, text = run("poincare", "par", "--group", "gamma0:11", "--zero-hom",
                     "--coset-bound", "11", "--at", "0.2+1.5i")
    assert code == 0
    row = json.loads(text)["rows"][0]
    assert row["re"] == 0 and row["im"] == 0


def test_second_order_needs_genus():
    code, _ = run("poincare", "par", "--order", "2")
    assert code == 2
