import json
import math
import subprocess
import sys

import pytest

from inscribed_bounds import cli
from inscribed_bounds import polyhedra as P


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def value(out):
    return json.loads(out)


def test_bound_icosahedron(capsys):
    code, out, _ = run(capsys, "bound", "icosahedron", "--n", "12")
    assert code == 0
    d = value(out)
    assert d["formula"] == "icosahedron"
    assert d["inputs"]["n"] == 12
    assert d["value"] == pytest.approx(2.536151, abs=1e-6)


def test_bound_uniform_cube(capsys):
    code, out, _ = run(capsys, "bound", "uniform", "--f", "12", "--c", "1.910633")
    assert code == 0
    assert value(out)["value"] == pytest.approx(1.539601, abs=1e-6)


def test_bound_u_triangle(capsys):
    code, out, _ = run(capsys, "bound", "u-triangle", "--tau", "1.5707963")
    assert value(out)["value"] == pytest.approx(0.166667, abs=1e-6)


def test_bound_degrees(capsys):
    code, out, _ = run(capsys, "bound", "u-triangle", "--tau", "90", "--deg")
    d = value(out)
    assert d["value"] == pytest.approx(1 / 6, abs=1e-14)
    assert d["inputs"]["tau"] == pytest.approx(math.pi / 2, abs=1e-14)


def test_bound_theorem1_and_2(capsys):
    code, out, _ = run(capsys, "bound", "theorem1", *sum((["--face", "0.5235987755982988", "1.5707963267948966"] for _ in range(24)), []))
    assert code == 0 and value(out)["value"] == pytest.approx(4 / math.sqrt(3), abs=1e-12)
    t = repr(math.pi / 5)
    code, out, _ = run(capsys, "bound", "theorem2", "--taus", t, t, t, t, t)
    assert code == 0 and value(out)["value"] < 8 / (3 * math.sqrt(3))


def test_bound_pgon(capsys):
    code, out, _ = run(capsys, "bound", "pgon", "--tau", repr(2 * math.pi / 3), "--alpha", repr(3 * math.pi / 4), "--p", "4")
    assert code == 0 and value(out)["value"] == pytest.approx(0.2566, abs=1e-4)


def test_numbers_have_15_digits(capsys):
    _, out, _ = run(capsys, "bound", "icosahedron", "--n", "12")
    assert '"value": 2.53615071012041' in out


@pytest.mark.parametrize("argv", [
    ["bound", "icosahedron", "--n", "3"],
    ["bound", "u-triangle", "--tau", "4"],
    ["bound", "v-tau-c", "--tau", "1"],
    ["bound", "polyhedron", "--f", "6", "--v", "6", "--e", "12"],
    ["bound", "theorem2", "--taus", "1", "1", "1", "1", "1"],
    ["domain", "--query", "1.0", "0.5"],
    ["domain", "--grid", "4"],
    ["bound", "nonsense"],
    ["bound", "icosahedron", "--n", "12", "--bogus"],
    ["verify", "prop2", "--samples", "10"],
    ["optimize", "n-points", "--n", "5"],
    ["optimize", "n-points", "--seed", "1"],
    ["verify", "prop9", "--seed", "1"],
    ["report", "/nonexistent/mesh.json"],
    [],
])
def test_exit_code_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_domain_query(capsys):
    code, out, _ = run(capsys, "domain", "--query", "0.6283185", "1.9")
    d = value(out)
    assert code == 0
    assert d["class"] == "Dprime"
    assert d["f_tau"] == pytest.approx(1.83487, abs=1e-4)


def test_domain_constants(capsys):
    code, out, _ = run(capsys, "domain", "--omega")
    assert value(out)["omega"] == pytest.approx(0.697715, abs=1e-6)
    code, out, _ = run(capsys, "domain", "--threshold")
    assert value(out)["rhombic_threshold"] == pytest.approx(0.427922, abs=1e-6)
    code, out, _ = run(capsys, "domain", "--quartic")
    assert len(value(out)["roots"]) == 4


def test_domain_grid_file(tmp_path, capsys):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "domain", "--grid", "20", "--out", str(p1))[0] == 0
    assert run(capsys, "domain", "--grid", "20", "--out", str(p2))[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    assert len(p1.read_text().splitlines()) == 401


def test_mesh_report_pipeline(capsys, monkeypatch):
    code, mesh_json, _ = run(capsys, "mesh", "rhombic-star-p")
    assert code == 0
    code, out, _ = run(capsys, "report", "-", stdin=mesh_json, monkeypatch=monkeypatch)
    d = value(out)
    assert code == 0
    assert d["volume"] == pytest.approx(2.309401, abs=1e-6)
    assert d["bound"] == pytest.approx(2.309401, abs=1e-6)
    assert abs(d["slack"]) <= 1e-9
    code, mesh_json, _ = run(capsys, "mesh", "hull-q")
    code, out, _ = run(capsys, "report", "-", stdin=mesh_json, monkeypatch=monkeypatch)
    assert value(out)["volume"] == pytest.approx(2.666667, abs=1e-6)


def test_report_non_star(tmp_path, capsys):
    m = P.generate("octahedron")
    faces = [list(f) for f in m.faces]
    faces[2] = faces[2][::-1]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"vertices": m.vertices.tolist(), "faces": faces}))
    code, out, err = run(capsys, "report", str(path))
    assert code == 2
    assert "face 2" in err


def test_report_invalid_mesh(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"vertices": [[2, 0, 0], [0, 1, 0], [0, 0, 1]], "faces": [[0, 1, 2]]}))
    code, _, err = run(capsys, "report", str(path))
    assert code == 2
    assert "unit sphere" in err


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "prop3-dominance", "--samples", "500", "--seed", "42")
    assert code == 0
    assert value(out)["violations"] == 0


def test_verify_failure_exit_1(capsys, monkeypatch):
    from inscribed_bounds import verify
    orig = verify.run_suite

    def broken(suite, samples, seed):
        rep = orig(suite, samples, seed)
        rep.record(-1.0)
        return rep
    monkeypatch.setattr(verify, "run_suite", broken)
    code, out, _ = run(capsys, "verify", "tau-le-c", "--samples", "10", "--seed", "1")
    assert code == 1
    assert value(out)["violations"] == 1


def test_optimize_outputs(capsys):
    code, out, _ = run(capsys, "optimize", "constrained-sum", "--seed", "1")
    assert code == 0
    assert value(out)["best_value"] == pytest.approx(1.978366, abs=1e-4)
    code, out, _ = run(capsys, "optimize", "n-points", "--n", "6", "--seed", "2", "--restarts", "4")
    assert code == 0
    assert value(out)["best_value"] == pytest.approx(4 / 3, abs=1e-6)


@pytest.mark.parametrize("argv", [
    ["bound", "v-tau-c", "--tau", "0.6", "--c", "1.1"],
    ["domain", "--grid", "16"],
    ["mesh", "two-tetrahedra", "--axis", "1", "1", "0", "--angle", "0.4"],
    ["verify", "prop2", "--samples", "200", "--seed", "3"],
    ["optimize", "n-points", "--n", "7", "--seed", "5", "--restarts", "3"],
    ["optimize", "two-tetrahedra", "--seed", "7", "--restarts", "1"],
])
def test_byte_identical(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and a


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "inscribed_bounds", "bound", "u-general", "--tau", "1.5707963267948966", "--p", "3"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["value"] == pytest.approx(1 / 6, abs=1e-14)
    r = subprocess.run([sys.executable, "-m", "inscribed_bounds", "bound", "icosahedron", "--n", "2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 2
    assert r.stderr.startswith("error:")
