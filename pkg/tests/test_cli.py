"""
End-to-end tests for the polycover.py command line
"""

# Standard
import importlib.util
import json
import os

# Third Party
import pytest

# Local
from polycover.cli.formats import CertificateFile, PolytopeFile

## Helpers #####################################################################

_SCRIPT = os.path.realpath(os.path.join(os.path.dirname(__file__), "..", "polycover.py"))
_spec = importlib.util.spec_from_file_location("polycover_script", _SCRIPT)
polycover_script = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(polycover_script)


def run(*argv):
    return polycover_script.main([str(a) for a in argv])


def usage_exit(*argv):
    """argparse rejects the arguments before any verb runs."""
    with pytest.raises(SystemExit) as e:
        run(*argv)
    return e.value.code


## check #######################################################################

def test_check_cube(capsys):
    assert run("check", "cube1", "--nmax", 3) == 0
    out = capsys.readouterr().out
    assert "smooth: PASS" in out
    assert "centrally symmetric: PASS" in out
    assert "IDP up to n=3: PASS" in out


def test_check_counterexample_idp(capsys):
    assert run("check", "counterexample", "--idp", "--nmax", 2) == 1
    out = capsys.readouterr().out
    assert "FAIL at n=2, witness (1,1,1)" in out
    assert "smooth" not in out


def test_check_translated_cube(tmp_path, capsys):
    path = tmp_path / "shifted.json"
    path.write_text(json.dumps({"dim": 3, "vertices": [[x + 1, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]}))
    assert run("check", path, "--centrally-symmetric") == 1
    assert "symmetric about (1,0,0), not origin-centered" in capsys.readouterr().out


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        '{"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}',
        '{"dim": 3, "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]}',
        '{"dim": 3, "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 0.5]]}',
    ],
)
def test_check_malformed_file(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    assert run("check", path) == 2


def test_unknown_polytope():
    assert run("check", "no-such-polytope") == 2


def test_bad_nmax():
    assert run("check", "cube1", "--idp", "--nmax", 1) == 2


## cover #######################################################################

def test_cover_is_byte_identical(tmp_path, capsys):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run("cover", "chiseled-cube2", "--out", first) == 0
    assert run("cover", "chiseled-cube2", "--out", second) == 0
    assert first.read_bytes() == second.read_bytes()
    assert "cover verified" in capsys.readouterr().err

    cert = CertificateFile.read(first).certificate
    assert {p.kind for p in cert.pieces} == {"box", "simplex"}


def test_cover_to_stdout(capsys):
    assert run("cover", "cube1", "--verify-grid", 2) == 0
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert doc["format"] == "polycover-certificate"
    assert all(piece["type"] == "box" for piece in doc["pieces"])
    assert "1/2 grid" in captured.err


@pytest.mark.parametrize("argv", [["cover", "cube1"], ["gen", "chiseled", "--n", 2, "--pairs", "2,2,2"]])
def test_out_file_matches_stdout(argv, tmp_path, capsys):
    out = tmp_path / "written.json"
    assert run(*argv) == 0
    printed = capsys.readouterr().out
    assert run(*argv, "--out", out) == 0
    assert out.read_text() == printed


def test_cover_refuses_counterexample(capsys):
    assert run("cover", "counterexample") == 1
    assert "NotCoverable" in capsys.readouterr().err


## decompose ###################################################################

def test_decompose_vertex(capsys):
    assert run("decompose", "cube1", "--point", "2,2,2", "--n", 2) == 0
    assert capsys.readouterr().out.strip() == "(1,1,1) + (1,1,1) = (2,2,2)"


def test_decompose_with_certificate_file(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert run("cover", "chiseled-cube2", "--out", cert) == 0
    assert run("decompose", "chiseled-cube2", "--point", "3,-1,2", "--n", 2, "--cert", cert) == 0
    assert capsys.readouterr().out.strip().endswith("= (3,-1,2)")


def test_decompose_counterexample(capsys):
    assert run("decompose", "counterexample", "--point", "1,1,1", "--n", 2) == 1
    assert "no decomposition" in capsys.readouterr().out


def test_decompose_counterexample_other_point(capsys):
    assert run("decompose", "counterexample", "--point", "1,0,1", "--n", 2) == 0
    assert capsys.readouterr().out.strip().endswith("= (1,0,1)")


def test_decompose_outside_dilate(capsys):
    assert run("decompose", "cube1", "--point", "3,0,0", "--n", 2) == 1
    assert "OutsideDilate" in capsys.readouterr().err


def test_decompose_bad_point():
    assert run("decompose", "cube1", "--point", "1,2") == 2


## gen #########################################################################

def test_gen_cube(tmp_path):
    out = tmp_path / "cube2.json"
    assert run("gen", "cube", "--n", 2, "--out", out) == 0
    loaded = PolytopeFile.read(out)
    assert len(loaded.polytope.vertices) == 8


def test_gen_chiseled(tmp_path):
    out = tmp_path / "chiseled.json"
    assert run("gen", "chiseled", "--n", 2, "--pairs", "2,2,2", "--name", "chiseled", "--out", out) == 0
    loaded = PolytopeFile.read(out)
    assert loaded.name == "chiseled"
    assert len(loaded.polytope.vertices) == 12


def test_gen_counterexample(capsys):
    assert run("gen", "counterexample") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["vertices"] == [[0, 0, 0], [0, 0, 1], [1, 0, 0], [1, 2, 1]]


def test_gen_random_round_trips_through_check(tmp_path):
    out = tmp_path / "random.json"
    assert run("gen", "random", "--seed", 3, "--n", 3, "--chisels", 2, "--out", out) == 0
    assert run("check", out, "--smooth", "--centrally-symmetric") == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "cube", "--n", 0],
        ["gen", "chiseled", "--n", 2],
        ["gen", "chiseled", "--n", 2, "--pairs", "2,2"],
        ["gen", "random", "--chisels", -1],
    ],
)
def test_gen_invalid_parameters(argv):
    assert run(*argv) == 2


def test_gen_unknown_kind():
    assert usage_exit("gen", "octahedron") == 2


## export ######################################################################

def test_export_polytope(tmp_path):
    out = tmp_path / "cube.off"
    assert run("export", "cube1", "--out", out) == 0
    lines = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    assert lines[0] == "OFF"
    assert lines[1] == "8 6 0"
    assert all(line.startswith("4 ") for line in lines[10:])


def test_export_certificate(tmp_path):
    cert = tmp_path / "cert.json"
    assert run("cover", "chiseled-cube2", "--out", cert) == 0
    out = tmp_path / "mesh.off"
    assert run("export", "--cert", cert, "--out", out) == 0
    pieces = len(CertificateFile.read(cert).certificate.pieces)
    assert len(list(tmp_path.glob("mesh_piece_*.off"))) == pieces
    assert (tmp_path / "mesh_piece_0.off").read_text().startswith("OFF\n# piece 0: ")


def test_export_empty_certificate(tmp_path, capsys):
    cert = tmp_path / "empty.json"
    cert.write_text(
        '{"format": "polycover-certificate", "version": 1, '
        '"host": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]], "pieces": []}'
    )
    out = tmp_path / "host.off"
    assert run("export", "--cert", cert, "--out", out) == 0
    assert out.exists()
    assert list(tmp_path.glob("host_piece_*.off")) == []
    assert "wrote 1 OFF files (0 pieces)" in capsys.readouterr().out


def test_export_needs_one_input(tmp_path):
    assert usage_exit("export", "--out", tmp_path / "x.off") == 2
    assert usage_exit("export", "cube1", "--cert", "c.json", "--out", tmp_path / "x.off") == 2


## list ########################################################################

def test_list(capsys):
    assert run("list") == 0
    out = capsys.readouterr().out
    assert "chiseled-cube2" in out
    assert "non-idp-simplex" in out


## config ######################################################################

def test_config_override(tmp_path, capsys):
    config = tmp_path / "settings.toml"
    config.write_text("[idp]\nn_max = 2\n")
    assert run("check", "cube1", "--idp", "--config", config) == 0
    assert "IDP up to n=2: PASS" in capsys.readouterr().out


def test_bad_config(tmp_path):
    config = tmp_path / "settings.toml"
    config.write_text("[cover]\ngrid_denominator = 0\n")
    assert run("list", "--config", config) == 2
    assert run("list", "--config", tmp_path / "missing.toml") == 2


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("POLYCOVER_THREADS", "many")
    assert run("list") == 2
