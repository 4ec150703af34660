from __future__ import annotations

import io
import json

import pytest

from spectra_def.cli import emit_report, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_pages_cell():
    code, out, _ = call("pages", "--manifold", "nakamura", "--r", "1", "--p", "2", "--q", "2")
    assert code == 0
    assert "dim 5" in out
    assert "phi1^phi2^phit1^phit2" in out


def test_pages_json_grid():
    code, out, _ = call("pages", "--manifold", "iwasawa", "--r", "1", "--format", "json")
    assert code == 0
    (page,) = json.loads(out)
    cells = page["cells"]
    rows = [sum(cells[f"{p},{q}"] for p in range(4)) for q in range(4)]
    assert rows == [8, 16, 16, 8]
    assert cells["1,0"] == 3 and cells["0,1"] == 2


def test_empty_model():
    code, out, _ = call("pages", "--manifold", "abelian", "--n", "0", "--format", "json")
    assert code == 0
    pages = json.loads(out)
    assert all(p["cells"] == {"0,0": 1} for p in pages)


def test_cy_check_nakamura():
    code, out, _ = call("cy-check", "--manifold", "nakamura", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "INCONCLUSIVE"
    assert "d_1^{1,2} = 0" in data["failing"]


def test_parallelisable_iwasawa():
    code, out, _ = call("parallelisable", "--manifold", "iwasawa", "--order", "4")
    assert code == 0
    assert out.startswith("UNOBSTRUCTED")


def test_hypothesis_failure_exit_code():
    code, _, err = call("parallelisable", "--manifold", "nakamura", "--order", "2")
    assert code == 2
    assert "HypothesisFailed" in err


def test_input_errors():
    assert call("pages")[0] == 1
    assert call("pages", "--manifold", "foo")[0] == 1
    assert call("pages", "--manifold", "nakamura", "--k", "0")[0] == 1
    assert call("pages", "--manifold", "iwasawa", "--input", "x.json")[0] == 1
    assert call("pages", "--input", "/nonexistent/model.json")[0] == 1
    assert call("frobnicate", "--manifold", "iwasawa")[0] == 1


def test_bad_spec_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"holo_generators": ["a"], "antiholo_generators": ["b"],
                                "d": {"a": [{"coeff": "sqrt2", "monomial": ["a", "b"]}]}}))
    code, _, err = call("validate", "--input", str(path))
    assert code == 1
    assert "UnsupportedScalar" in err
    path.write_text("{not json")
    assert call("validate", "--input", str(path))[0] == 1


@pytest.mark.parametrize("manifold", ["iwasawa", "nakamura"])
def test_validate_dump_round_trip(manifold, tmp_path):
    code, dump, _ = call("validate", "--manifold", manifold, "--dump", "--format", "json")
    assert code == 0
    path = tmp_path / "model.json"
    path.write_text(dump)
    for cmd in (["pages"], ["degeneration"], ["bott-chern"], ["popovici"], ["cy-check"],
                ["kodaira", "--p", "3", "--q", "1"], ["kuranishi", "--order", "2"]):
        a = call(*cmd, "--manifold", manifold, "--format", "json")
        b = call(*cmd, "--input", str(path), "--format", "json")
        assert a == b


def test_report_deterministic(monkeypatch):
    first = call("report", "--manifold", "iwasawa", "--format", "json")
    monkeypatch.setenv("SPECTRA_DEF_THREADS", "3")
    second = call("report", "--manifold", "iwasawa", "--format", "json")
    assert first == second
    data = json.loads(first[1])
    assert data["de_rham"] == [1, 4, 8, 10, 8, 4, 1]


def test_emit_report():
    payload = {"b": 1, "a": [1, 2]}
    assert emit_report((payload, ["x"]), "json") == emit_report((payload, ["x"]), "json")
    assert emit_report((payload, ["x"]), "json").decode().startswith('{\n  "a"')
    assert emit_report((payload, ["x", "y"]), "text") == b"x\ny\n"


def test_obstruction_and_extend():
    code, out, _ = call("obstruction", "--manifold", "nakamura", "--order", "1", "--p", "3", "--q", "1",
                        "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["in_ker_mu"] is True
    assert data["obstruction"]["vanishes"] is False
    code, _, _ = call("extend", "--manifold", "iwasawa", "--p", "3", "--q", "0", "--order", "3")
    assert code == 0
    assert call("extend", "--manifold", "iwasawa", "--p", "3", "--q", "0", "--order", "3",
                "--class", "7")[0] == 1


def test_other_subcommands():
    for argv in (["degeneration", "--p", "1", "--q", "1"], ["kodaira", "--p", "3", "--q", "1"],
                 ["bott-chern", "--p", "1", "--q", "1"], ["popovici"], ["kuranishi", "--order", "3"],
                 ["pages", "--verify"]):
        code, out, _ = call(*argv, "--manifold", "iwasawa")
        assert code == 0 and out
