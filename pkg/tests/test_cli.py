import json
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from luequiv.cli import EXIT_INPUT, EXIT_OK, main


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if isinstance(doc, dict) else doc, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sc_file(tmp_path):
    return _write(tmp_path, "sc.json", {"kind": "sc2q", "c1": 0.3, "c2": [0.1, 0.2], "c4": 0.7})


def test_canon_two_qubit(capsys, sc_file):
    code, out, _ = run(capsys, "canon", sc_file)
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["swapped"] is True
    assert_allclose(list(doc["standard_form"].values()), [0.7, np.hypot(0.1, 0.2), 0.3], atol=1e-12)
    assert doc["residual"] < 1e-12


def test_canon_general_and_table(capsys, tmp_path):
    code, out, _ = run(capsys, "random", "sc", "--levels", "3", "--seed", "3", "--out", str(tmp_path / "g.json"))
    assert code == EXIT_OK and out == ""
    code, out, _ = run(capsys, "canon", str(tmp_path / "g.json"), "--format", "table")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("kind")
    assert "residual_phases" in out


def test_canon_rejects_density(capsys, tmp_path):
    path = _write(tmp_path, "d.json", {"kind": "density", "dims": [1, 1], "matrix": [[1]]})
    code, _, err = run(capsys, "canon", path)
    assert code == EXIT_INPUT and "sc2q" in err


def test_equiv_sc_pair(capsys, tmp_path, sc_file):
    other = _write(tmp_path, "o.json", {"kind": "sc2q", "c1": 0.7, "c2": [-0.2, 0.1], "c4": 0.3})
    code, out, _ = run(capsys, "equiv", sc_file, other)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["equivalent"] is True and doc["residual"] < 1e-12
    far = _write(tmp_path, "f.json", {"kind": "sc2q", "c1": 0.7, "c2": [0.1, 0.0], "c4": 0.3})
    assert json.loads(run(capsys, "equiv", sc_file, far)[1])["equivalent"] is False


def test_equiv_density_and_pure(capsys, tmp_path):
    for name in ("a", "b"):
        run(capsys, "random", "density", "--seed", "5" if name == "a" else "6", "--out", str(tmp_path / f"{name}.json"))
    code, out, _ = run(capsys, "equiv", str(tmp_path / "a.json"), str(tmp_path / "b.json"))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["status"] == "NotEquivalent" and doc["certificate"]
    run(capsys, "random", "pure", "--dims", "2x3", "--seed", "1", "--out", str(tmp_path / "p.json"))
    code, out, _ = run(capsys, "equiv", str(tmp_path / "p.json"), str(tmp_path / "p.json"))
    doc = json.loads(out)
    assert doc["method"] == "schmidt" and doc["equivalent"] is True and doc["residual"] < 1e-10


def test_invariants(capsys, tmp_path, sc_file):
    path = _write(tmp_path, "p.json", {"kind": "pure", "dims": [2, 2], "coeffs": [[0.6, 0], [0, 0.8]]})
    doc = json.loads(run(capsys, "invariants", path)[1])
    assert_allclose(doc["schmidt_coefficients"], [0.8, 0.6], atol=1e-12)
    assert doc["schmidt_rank"] == 2
    doc = json.loads(run(capsys, "invariants", sc_file)[1])
    assert doc["purities"][0] == pytest.approx(1.0)


def test_correlations_and_log_base(capsys, tmp_path):
    path = _write(tmp_path, "s.json", {"kind": "sc2q", "c1": 0.7, "c2": [0.2, 0], "c4": 0.3})
    doc = json.loads(run(capsys, "correlations", path)[1])
    assert doc["D_R"] == pytest.approx(0.126348181288, abs=1e-11)
    assert "E_R_bound" not in doc
    nat = json.loads(run(capsys, "correlations", path, "--log-base", "2.718281828459045")[1])
    assert nat["mutual_information"] == pytest.approx(doc["mutual_information"] * np.log(2), rel=1e-10)
    doc = json.loads(run(capsys, "correlations", path, "--er-samples", "500")[1])
    assert doc["E_R_bound"] >= doc["D_R"] - 1e-6


def test_separable(capsys, tmp_path, sc_file):
    doc = json.loads(run(capsys, "separable", sc_file)[1])
    assert doc["separable"] is False
    assert doc["min_pt_eigenvalue"] == pytest.approx(-np.hypot(0.1, 0.2))
    bell = {"kind": "pure", "dims": [2, 2], "coeffs": [[0.7071067811865476, 0], [0, 0.7071067811865476]]}
    doc = json.loads(run(capsys, "separable", _write(tmp_path, "b.json", bell))[1])
    assert doc["ppt"] is False and doc["separable"] is False
    run(capsys, "random", "density", "--dims", "3,3", "--seed", "2", "--out", str(tmp_path / "d.json"))
    doc = json.loads(run(capsys, "separable", str(tmp_path / "d.json"))[1])
    assert "conclusive" in doc


def test_random_is_seeded(capsys):
    a = run(capsys, "random", "sc2q", "--seed", "9", "--label", "fx")[1]
    b = run(capsys, "random", "sc2q", "--seed", "9", "--label", "fx")[1]
    assert a == b and json.loads(a)["label"] == "fx"


def test_stdin(capsys, monkeypatch):
    import io

    buf = io.BytesIO(b'{"kind":"sc2q","c1":0.7,"c2":[0.2,0.0],"c4":0.3}')
    monkeypatch.setattr(sys, "stdin", type("S", (), {"buffer": buf})())
    code, out, _ = run(capsys, "separable", "-")
    assert code == EXIT_OK and json.loads(out)["separable"] is False


@pytest.mark.parametrize(
    "content, fragment",
    [
        ('{"kind": "sc2q", "c1": 0.7, ', "MalformedSyntax"),
        ('{"kind": "qubit"}', "UnknownKind"),
        ('{"kind":"sc2q","c1":0.5,"c2":[0.6,0],"c4":0.5}', "ValidationFailed [psd]"),
    ],
)
def test_bad_files_exit_input(capsys, tmp_path, content, fragment):
    code, out, err = run(capsys, "canon", _write(tmp_path, "bad.json", content))
    assert code == EXIT_INPUT and out == ""
    assert fragment in err


def test_missing_file_and_bad_usage(capsys, tmp_path):
    assert run(capsys, "canon", str(tmp_path / "nope.json"))[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT
    assert run(capsys, "random", "pure", "--dims", "2x")[0] == EXIT_INPUT
    assert run(capsys, "--version")[0] == EXIT_OK


def test_corrupted_file_subprocess(tmp_path):
    path = _write(tmp_path, "corrupt.json", '{"kind": "density", "dims": [2, 2], "matrix": [[[0.5')
    proc = subprocess.run([sys.executable, "-m", "luequiv.cli", "equiv", path, path], capture_output=True, text=True)
    assert proc.returncode != 0
    assert proc.returncode == EXIT_INPUT
    assert "MalformedSyntax" in proc.stderr
