import io
import json

import numpy as np
import pytest

from singpencil.cli import main
from singpencil.fixtures import control_system, pencil_5x5, pencil_7x7
from singpencil.matio import data_path, read_json, write_json, write_matrix, write_pencil
from singpencil.pencil import Pencil


def run(argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def p7(tmp_path):
    return write_pencil(tmp_path / "p7", pencil_7x7())


@pytest.fixture
def kcf18(tmp_path):
    code, _ = run(["gen-kcf", data_path("kcf_18x18.json"), "-o", tmp_path / "k18", "--seed", 7])
    assert code == 0
    return tmp_path / "k18"


def test_solve_json(p7):
    code, text = run(["solve", *p7, "--seed", 0])
    assert code == 0
    d = json.loads(text)
    assert d["nrank_source"] == "estimated" and d["k"] == 1
    assert sorted(z["re"] for z in d["finite"]) == pytest.approx([1 / 3, 1 / 2], abs=1e-10)
    assert d["config"]["nrank"] == 6 and d["timings_ms"] == {}


@pytest.mark.parametrize("method", ["project", "project-perm", "augment", "augment-simple",
                                    "perturb"])
def test_solve_every_method(p7, method):
    code, text = run(["solve", *p7, "--nrank", 6, "--method", method])
    assert code == 0
    d = json.loads(text)
    # seed 0 selects a singular submatrix here, so project-perm falls back
    assert d["method"] == ("project" if method == "project-perm" else method)
    assert d["config"]["fallback"] == (method == "project-perm")
    assert d["nrank_source"] == "override"
    assert sorted(z["re"] for z in d["finite"]) == pytest.approx([1 / 3, 1 / 2], abs=1e-8)


def test_project_perm_good_selection(p7):
    d = json.loads(run(["solve", *p7, "--method", "project-perm", "--seed", 4])[1])
    assert d["method"] == "project-perm" and not d["config"]["fallback"]
    assert sorted(z["re"] for z in d["finite"]) == pytest.approx([1 / 3, 1 / 2], abs=1e-8)


def test_solve_is_deterministic(p7):
    a = run(["solve", *p7, "--seed", 5, "--format", "table"])
    b = run(["solve", *p7, "--seed", 5, "--format", "table"])
    assert a == b
    assert run(["solve", *p7])[1] == run(["solve", *p7])[1]


def test_seed_from_environment(p7, monkeypatch):
    monkeypatch.setenv("SINGPENCIL_SEED", "11")
    env = run(["solve", *p7])[1]
    assert json.loads(env)["config"]["seed"] == 11
    assert env == run(["solve", *p7, "--seed", 11])[1]
    monkeypatch.setenv("SINGPENCIL_SEED", "abc")
    assert run(["solve", *p7])[0] == 1


def test_solve_options(p7):
    d = json.loads(run(["solve", *p7, "--timings", "--keep-vectors"])[1])
    assert set(d["timings_ms"]) == {"load", "nrank", "solve", "classify"}
    assert "right" in d["eigenvalues"][0] and "left" in d["eigenvalues"][0]
    code, text = run(["solve", *p7, "--format", "csv"])
    assert code == 0 and text.startswith("j,re,im,")


def test_rank_diagnosis_exit_codes(kcf18):
    truth = read_json(kcf18 / "truth.json")
    assert truth["nrank"] == 16 and truth["shape"] == [18, 18]
    A, B = kcf18 / "A.mtx", kcf18 / "B.mtx"
    assert run(["solve", A, B])[0] == 0
    assert run(["solve", A, B, "--nrank", 16])[0] == 0
    assert run(["solve", A, B, "--nrank", 15])[0] == 2
    assert run(["solve", A, B, "--nrank", 17])[0] == 3


def test_gen_kcf_truth_matches_nrank(kcf18):
    truth = read_json(kcf18 / "truth.json")
    code, text = run(["nrank", kcf18 / "A.mtx", kcf18 / "B.mtx"])
    assert code == 0 and int(text) == truth["nrank"]
    mult = sum(e["multiplicity"] for e in truth["true_eigenvalues"])
    assert mult == 7 + 3
    code, text = run(["nrank", kcf18 / "A.mtx", kcf18 / "B.mtx", "--format", "json"])
    assert json.loads(text)["nrank"] == 16


def test_gen_kcf_complex_and_errors(tmp_path):
    spec = tmp_path / "spec.json"
    write_json(spec, {"right": [1], "left": [], "jordan": [[2.0, 1.0, 1]], "infinite": []})
    assert run(["gen-kcf", spec, "-o", tmp_path / "c", "--complex"])[0] == 0
    write_json(spec, {"right": [], "left": [], "jordan": [], "infinite": []})
    assert run(["gen-kcf", spec, "-o", tmp_path / "e"])[0] == 1
    write_json(spec, {"bogus": 1})
    assert run(["gen-kcf", spec, "-o", tmp_path / "e"])[0] == 1


def test_wide_pencil(tmp_path):
    p = pencil_5x5()
    wide = Pencil(p.A[:4], p.B[:4])
    a, b = write_pencil(tmp_path / "w", wide)
    code, text = run(["solve", a, b])
    d = json.loads(text)
    assert code == 0 and (d["n"], d["m"]) == (4, 5)
    assert sorted(z["re"] for z in d["finite"]) == pytest.approx([1.0, 2.0], abs=1e-8)


def test_errors_exit_one(tmp_path, p7):
    assert run(["solve", tmp_path / "missing.mtx", p7[1]])[0] == 1
    assert run(["solve", *p7, "--nrank", 8])[0] == 1
    write_matrix(tmp_path / "small.mtx", np.eye(3))
    assert run(["solve", p7[0], tmp_path / "small.mtx"])[0] == 1
    with pytest.raises(SystemExit) as exc:
        run(["solve", *p7, "--method", "qz"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["solve", *p7, "--nrank", "many"])
    assert exc.value.code == 1


def test_poly2_from_bundled_rep():
    code, text = run(["poly2", data_path("cubic_pair_rep.json"), "--format", "json"])
    assert code == 0
    d = json.loads(text)
    assert d["count"] == 9
    lams = [complex(r["lambda"]["re"], r["lambda"]["im"]) for r in d["roots"]]
    assert min(abs(z - (-1.133090 + 0.3011559j)) for z in lams) < 1e-5


def test_poly2_from_coefficients(tmp_path):
    code, text = run(["poly2", data_path("cubic_pair_coeffs.json"), "--format", "table"])
    assert code == 0 and len(text.splitlines()) == 9
    rep = tmp_path / "lin.json"
    write_json(rep, {"p1": [[1, 1, 1], [1, 0, -2], [0, 1, -1], [0, 0, 2]],
                     "p2": [[2, 0, 1], [0, 2, -1], [1, 0, -0.8], [0, 1, 0.2], [0, 0, 0.15]]})
    code, text = run(["poly2", rep, "--format", "csv"])
    rows = text.splitlines()
    assert rows[0] == "lambda_re,lambda_im,mu_re,mu_im" and len(rows) == 5


def test_double_eig(tmp_path):
    rng = np.random.default_rng(8)
    write_matrix(tmp_path / "A.mtx", rng.standard_normal((3, 3)))
    write_matrix(tmp_path / "B.mtx", rng.standard_normal((3, 3)))
    code, text = run(["double-eig", tmp_path / "A.mtx", tmp_path / "B.mtx",
                      "--format", "json"])
    assert code == 0 and json.loads(text)["count"] == 6


def test_tzeros(tmp_path):
    code, text = run(["tzeros", data_path("control_system.json"), "--format", "table"])
    assert code == 0
    assert text.startswith("-3") and "4" in text.split(",")[1]
    cs = control_system()
    sysfile = tmp_path / "sys.json"
    write_json(sysfile, {k: (-cs[k] if k == "A" else cs[k]).tolist() for k in "ABC"})
    code, text = run(["tzeros", sysfile, "--format", "json"])
    zs = sorted(z["re"] for z in json.loads(text)["zeros"])
    assert zs == pytest.approx([-4.0, 3.0], abs=1e-8)
    write_json(sysfile, {"A": [[1]]})
    assert run(["tzeros", sysfile])[0] == 1
