import json

import pytest

from realenum.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_degree(capsys):
    code, out, _ = run(capsys, "degree", "--rows", "3", "--cols", "3")
    assert code == EXIT_OK
    assert json.loads(out) == {"degree": 42}


def test_degree_2x2(capsys):
    code, out, _ = run(capsys, "degree", "--rows", "2", "--cols", "2")
    assert json.loads(out) == {"degree": 2}


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--power", "4", "--class", "1", "--rows", "3", "--cols", "3")
    assert code == EXIT_OK
    assert json.loads(out) == {"(3,1)": 3, "(2,2)": 2, "(2,1,1)": 3}


def test_chasles(capsys):
    code, out, _ = run(capsys, "chasles")
    assert code == EXIT_OK
    assert json.loads(out) == {"degrees": [1, 2, 4, 4, 2, 1], "total": 3264}


def test_witness(capsys):
    code, out, _ = run(capsys, "witness")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["match"]
    assert len(rep["components"]) == 8
    assert rep["sum"] == {"(3,1)": 3, "(2,2)": 2, "(2,1,1)": 3}


def test_veronese(capsys):
    code, out, _ = run(capsys, "veronese", "count")
    assert code == EXIT_OK and json.loads(out)["count"] == 11010048
    code, out, _ = run(capsys, "veronese", "check")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["ok"] and rep["parametrization"] and rep["count"] == 4


def test_solve_fixture(capsys):
    code, out, _ = run(capsys, "solve", "lines4", "lines4_real")
    res = json.loads(out)["result"]
    assert code == EXIT_OK
    assert res["regular"] == 2 and res["real"] == 2 and res["pairing_ok"]


def test_solve_random_and_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "solve", "lines4", "--random", "--seed", "5", "--output", str(target))
    assert code == EXIT_OK and out == ""
    res = json.loads(target.read_text())["result"]
    assert res["regular"] == 2
    assert res["real"] + 2 * res["conjugate_pairs"] == 2


def test_solve_file_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "lines4", "--random", "--seed", "2")
    inst = json.loads(out)["instance"]
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(inst))
    code2, out2, _ = run(capsys, "solve", "lines4", str(path), "--seed", "2")
    assert code2 == EXIT_OK
    assert json.loads(out2)["result"] == json.loads(out)["result"]


def test_solve_conics_mixed(capsys):
    code, out, _ = run(capsys, "solve", "conics", "--random", "--points", "3", "--lines", "2")
    res = json.loads(out)["result"]
    assert code == EXIT_OK
    assert res["regular"] == 4 and res["expected_count"] == 4


def test_malformed_json_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "kind": "lines4",\n  "subspaces": [1, 2\n}\n')
    code, out, err = run(capsys, "solve", "lines4", str(path))
    assert code == EXIT_INPUT and out == ""
    assert "bad.json:4:1" in err


def test_missing_field_reported(capsys, tmp_path):
    path = tmp_path / "inst.json"
    path.write_text('{"kind": "planes9"}')
    code, _, err = run(capsys, "solve", "planes9", str(path))
    assert code == EXIT_INPUT
    assert "subspaces" in err


def test_kind_mismatch(capsys):
    code, _, err = run(capsys, "solve", "planes9", "lines4_real")
    assert code == EXIT_INPUT and "lines4" in err


def test_unknown_input(capsys):
    code, _, err = run(capsys, "solve", "lines4", "no-such-thing")
    assert code == EXIT_INPUT and "no such file or fixture" in err


def test_bad_subcommand(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT


def test_bad_workers(capsys):
    assert run(capsys, "chasles", "--workers", "0")[0] == EXIT_INPUT


def test_env_workers(capsys, monkeypatch):
    monkeypatch.setenv("REALENUM_WORKERS", "abc")
    assert run(capsys, "chasles")[0] == EXIT_INPUT
    monkeypatch.setenv("REALENUM_WORKERS", "2")
    assert run(capsys, "chasles")[0] == EXIT_OK


def test_count_mismatch_exit(capsys, tmp_path):
    # a wrong expected count is a numerical acceptance failure, not an input error
    code, out, _ = run(capsys, "solve", "lines4", "--random", "--seed", "1")
    inst = json.loads(out)["instance"]
    inst["expected_count"] = 3
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(inst))
    code, out, _ = run(capsys, "solve", "lines4", str(path))
    assert code == EXIT_MISMATCH
    assert json.loads(out)["result"]["count_ok"] is False


def test_non_generic_configuration(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    # three collinear points
    cfg = {"points": [[0, 0, 1], [1, 1, 1], [2, 2, 1], [5, 1, 1], [1, 7, 1]],
           "lines": [[1, 2, 0], [1, 0, -1], [0, 1, -2], [0, 1, -1], [1, 0, -1]]}
    path.write_text(json.dumps(cfg))
    code, _, err = run(capsys, "maximal-verify", str(path))
    assert code == EXIT_INPUT


@pytest.mark.parametrize("workers", ["1", "2", "8"])
def test_byte_identical_across_workers(capsys, workers):
    ref = run(capsys, "solve", "lines4", "--random", "--seed", "11", "--solutions", "--workers", "1")[1]
    out = run(capsys, "solve", "lines4", "--random", "--seed", "11", "--solutions", "--workers", workers)[1]
    assert out == ref
