import io as stdio
import json
import sys

from legendrian import catalog, io
from legendrian.cli import run


def call(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", stdio.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_unknot(capsys):
    code, out, _ = call(["invariants", "--input", "unknot-r3"], capsys)
    assert code == 0 and out.strip() == "tb=-1 rot=0 bennequin: slack=0"


def test_invariants_json(capsys):
    code, out, _ = call(["invariants", "--input", "trefoil-r3", "--json", "--method", "crossings"], capsys)
    report = json.loads(out)
    assert code == 0 and (report["tb"], report["rot"], report["slack"]) == (1, 0, 0)


def test_invariants_from_file(tmp_path, capsys):
    path = tmp_path / "gc.json"
    path.write_text(io.dumps(io.curve_to_json(catalog.get("greatcircle-j-s3").loop)))
    code, out, _ = call(["invariants", "--input", str(path)], capsys)
    assert code == 0 and out.strip() == "tb=-1 rot=0"


def test_orbit_pipes_into_loop(capsys, monkeypatch):
    code, out, err = call(["orbit", "--base", "greatcircle-j-s3", "--m", "2"], capsys)
    assert code == 0 and "m=2" in err
    code, out, _ = call(["loop", "--rot-pi1"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and out.strip() == "rot_pi1=2"


def test_orbit_with_framing(tmp_path, capsys, monkeypatch):
    loop_path, frame_path = tmp_path / "loop.json", tmp_path / "frame.json"
    code, _, _ = call(
        ["orbit", "--m", "1", "--M", "128", "--out", str(loop_path), "--framing-out", str(frame_path)], capsys
    )
    assert code == 0
    code, out, _ = call(
        ["loop", "--input", str(loop_path), "--rot-pi1", "--tb-pi1", "--framing", str(frame_path), "--k", "1"],
        capsys,
    )
    # Rot(gamma_j) = 0 and tb(gamma_j) = -1, so k = 1 moves tb_pi1 from 0 to 1
    assert code == 0 and out.strip() == "rot_pi1=1 tb_pi1=1"


def test_sphere_d(capsys):
    code, out, _ = call(["sphere-d"], capsys)
    assert code == 0 and out.strip() == "d=0"


def test_lift_front_pipes(capsys, monkeypatch):
    code, out, err = call(["lift-front", "--input", "unknot-r3", "--stabilize", "1"], capsys)
    assert code == 0 and "cusps=[0, 117, 139, 256]" in err
    code, out, _ = call(["invariants", "--chi", "1"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert out.strip() == "tb=-2 rot=1 bennequin: slack=0"


def test_lift_lagrangian(capsys, monkeypatch):
    code, out, err = call(["lift-lagrangian", "--input", "trefoil-r3"], capsys)
    assert code == 0 and "closure_defect" in err
    code, out, _ = call(["invariants"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert out.strip() == "tb=1 rot=0"


def test_lift_lagrangian_open(capsys, monkeypatch):
    import numpy as np

    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    circle = io.dumps({"samples": np.column_stack([np.cos(t), np.sin(t)]).tolist()})
    code, _, err = call(["lift-lagrangian"], capsys, stdin=circle, monkeypatch=monkeypatch)
    assert code == 1 and "does not close" in err


def test_usage_errors_exit_1(capsys):
    code, _, err = call(["invariants", "--bogus"], capsys)
    assert code == 1 and "unrecognized arguments" in err
    code, _, err = call(["frobnicate"], capsys)
    assert code == 1


def test_malformed_json_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"space": "r3",\n "samples": [1, 2,}')
    code, _, err = call(["invariants", "--input", str(path)], capsys)
    assert code == 1 and f"{path}:2:" in err and "malformed JSON" in err


def test_render_cusp_glyphs(tmp_path, capsys):
    code, out, _ = call(["render", "--input", "unknot-r3"], capsys)
    assert code == 0 and out.count('class="cusp"') == 2
    assert out.startswith("<?xml") and 'version="1.1"' in out
    front = tmp_path / "stab.json"
    code, out, _ = call(["lift-front", "--input", "unknot-r3", "--stabilize", "-1", "--out", str(front)], capsys)
    code, out, _ = call(["render", "--input", str(front)], capsys)
    assert code == 0 and out.count('class="cusp"') == 4


def test_render_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (a, b):
        assert call(["render", "--input", "trefoil-r3", "--out", str(path)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().count('class="cusp"') == 4


def test_render_s3_needs_pole(capsys):
    code, _, err = call(["render", "--input", "greatcircle-j-s3", "--mode", "lagrangian"], capsys)
    assert code == 1 and "--pole" in err
    code, out, _ = call(
        ["render", "--input", "greatcircle-j-s3", "--mode", "lagrangian", "--pole", "0.5,-0.5,0.5,0.5"], capsys
    )
    assert code == 0 and "<polygon" in out


def test_verify_only(capsys):
    code, out, _ = call(["verify", "--only", "1,7"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].startswith("PASS 1 ") and lines[1].startswith("PASS 7 ") and lines[-1] == "overall: PASS"


def test_verify_failure_exit_2(capsys):
    code, out, _ = call(["verify", "--only", "6", "--json"], capsys)
    report = json.loads(out)
    assert code == 2 and report["passed"] is False and report["checks"][0]["name"].startswith("6 ")
