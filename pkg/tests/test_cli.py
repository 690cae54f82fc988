import io
import json
import subprocess
import sys

import pytest

from tdgroups.cli import run

from .helpers import singer_15_sp4, split_15_sp4


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text.strip() else None)


def test_classify_example():
    code, out = call("classify", "--family", "sp4", "--p", "2", "--f", "2", "--graph-field",
                     "--s-order", "15", "--u-order", "1", "--x-order", "15")
    assert code == 0
    assert out["value"] == "true"
    assert set(out["conditions"]) >= {"a", "b", "c", "d"}


def test_classify_false_trace():
    code, out = call("classify", "--family", "sp4", "--p", "2", "--f", "2", "--graph-field",
                     "--s-order", "5", "--x-order", "5")
    assert code == 0 and out["value"] == "false" and out["conditions"]["b"] is False


def test_enumerate_example():
    code, out = call("enumerate", "--family", "omega-plus", "--m", "4", "--p", "2", "--f", "1", "--e", "1")
    assert code == 0
    # numbers are decimal strings
    assert out == [["15", "1", "15"]]


def test_shintani_example():
    code, out = call("shintani", "--n", "2", "--p", "2", "--f", "2", "--j", "1", "--check", "bijection")
    assert code == 0
    assert out["matched"] is True and out["counts"] == ["3", "3"]
    assert out["order_identity_ok"] is True and out["e"] == "2"


@pytest.mark.parametrize("theorem,expect", [("1", "true"), ("3", "true"), ("4", "true")])
def test_classify_other_theorems(theorem, expect):
    code, out = call("classify", "--family", "sp4", "--p", "2", "--f", "2", "--graph-field", "--theorem", theorem,
                     "--s-order", "15")
    assert code == 0 and out["value"] == expect


def test_classify_matrix_modes(tmp_path):
    path = tmp_path / "x.txt"
    path.write_text(split_15_sp4().to_text())
    base = ["classify", "--family", "sp4", "--p", "2", "--f", "2", "--graph-field", "--matrix", str(path)]
    assert call(*base)[1]["value"] == "true"
    assert call(*base, "--strictness", "singer")[1]["value"] == "false"
    path.write_text(singer_15_sp4().to_text())
    assert call(*base, "--strictness", "singer")[1]["value"] == "true"


def test_oracle_ops():
    code, out = call("oracle", "--group", "PSL2(7)", "--op", "catalog")
    assert code == 0 and len(out["entries"]) == 3
    code, out = call("oracle", "--group", "Sp4(4).rho", "--op", "td", "--order", "17")
    assert code == 0 and out["value"] == "false"
    code, out = call("oracle", "--group", "Sp4(4).rho", "--op", "unique", "--element", singer_15_sp4().to_text())
    assert code == 0 and out["count"] == "1" and out["labels"] == ["<T,phi>"]


@pytest.mark.parametrize("argv", [
    ["oracle", "--group", "PSL2(11)", "--op", "catalog"],
    ["classify", "--family", "sp4", "--p", "4", "--f", "1", "--s-order", "3"],
    ["classify", "--family", "sp4", "--p", "2", "--f", "2", "--e", "2", "--s-order", "3"],
    ["classify", "--family", "sp4", "--p", "2", "--f", "2", "--s-order", "15", "--x-order", "7"],
    ["shintani", "--n", "2", "--p", "2", "--f", "2", "--j", "3"],
    ["shintani", "--n", "2", "--p", "2", "--f", "2", "--j", "1", "--cap", str(2**40)],
    ["bogus"],
    ["classify"],
])
def test_invalid_input_exit_2(argv, capsys):
    code, _ = call(*argv)
    assert code == 2


def test_cap_exit_3():
    code, out = call("shintani", "--n", "2", "--p", "2", "--f", "2", "--j", "1", "--cap", "10")
    assert code == 3 and out["value"] == "undecided"
    # the lowered cap applies to that run only
    assert call("shintani", "--n", "2", "--p", "2", "--f", "2", "--j", "1")[0] == 0


def test_selftest_single_criterion():
    code, out = call("selftest", "--criteria", "4")
    assert code == 0 and out[0]["status"] == "PASS"


def test_byte_identical_subprocess():
    argv = [sys.executable, "-m", "tdgroups", "enumerate", "--family", "sp4", "--p", "2", "--f", "2"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a) == [["15", "1", "15"]]
    bad = subprocess.run([sys.executable, "-m", "tdgroups", "oracle", "--group", "nope", "--op", "catalog"],
                         capture_output=True)
    assert bad.returncode == 2 and b"error" in bad.stderr
