import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from cuspforge import errors, io
from cuspforge.cli import build_parser, exit_code, main, resolve_settings

DATA = Path(__file__).parent / "data"
F = str(DATA / "example_f.json")
G = str(DATA / "example_g.json")
CUSP = str(DATA / "standard_cusp.json")
PLANE = str(DATA / "plane.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_of_example(capsys):
    code, out, _ = run(capsys, "invariants", F)
    doc = json.loads(out)
    assert code == 0
    assert doc["at_origin"]["kappa"] == pytest.approx(1.0)
    assert doc["at_origin"]["tau"] == pytest.approx(-1.0)
    assert doc["generic"] is True and doc["conditions_agree"] is True


def test_invariants_of_standard_cusp(capsys):
    code, out, _ = run(capsys, "invariants", CUSP)
    doc = json.loads(out)
    assert code == 0 and doc["generic"] is False
    assert max(abs(c) for c in doc["series"]["kappa_nu"]) == 0


def test_plane_is_not_a_cuspidal_edge(capsys):
    code, _, err = run(capsys, "invariants", PLANE)
    assert code == 3 and "singular set" in err


def test_adapt_writes_an_adapted_germ(capsys, tmp_path):
    out = tmp_path / "ad.json"
    code, text, _ = run(capsys, "adapt", F, "--out", out)
    assert code == 0 and json.loads(text)["report"]["ok"]
    assert io.read_germ(out).status == "adapted"


def test_isomer_passes_verification(capsys, tmp_path):
    out = tmp_path / "iso.json"
    code, text, _ = run(capsys, "deform", F, "--isomer", "--order", 10, "--out", out)
    doc = json.loads(text)
    assert code == 0 and doc["ok"]
    assert doc["results"][0]["branch"] == "minus"
    # results live in adapted coordinates, so compare against the adapted input
    ad = tmp_path / "ad.json"
    run(capsys, "adapt", F, "--order", 10, "--out", ad)
    code, text, _ = run(capsys, "verify", ad, out)
    assert code == 0 and json.loads(text)["g_adapted"]
    code, _, _ = run(capsys, "verify", F, out)
    assert code == 1


def test_planar_deformation(capsys, tmp_path):
    code, text, _ = run(capsys, "deform", F, "--planar", "--order", 12, "--branch", "+", "--out", tmp_path / "p.json")
    doc = json.loads(text)
    assert code == 0
    last = doc["results"][-1]
    assert last["parameter"] == 1.0 and last["boundary_torsion_max"] <= 1e-7
    assert doc["reflection_deviation"] <= 1e-7
    assert len(list(tmp_path.glob("p_*.json"))) == 11


def test_family_writes_six_germs(capsys, tmp_path):
    code, text, _ = run(capsys, "deform", F, "--family", "0:0.5:6", "--order", 10, "--out", tmp_path / "fam.json")
    doc = json.loads(text)
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == [f"fam_{k:03d}.json" for k in range(6)]
    products = [r["abs_product"] for r in doc["results"]]
    assert np.ptp(products) <= 1e-6


def test_deform_to_curve_file(capsys, tmp_path):
    curve = tmp_path / "c.json"
    curve.write_text(json.dumps({"kind": "intrinsic", "kappa": [1.5, 0.1], "tau": [-1.0]}))
    code, text, _ = run(capsys, "deform", F, "--curve", curve, "--branch", "-")
    assert code == 0 and json.loads(text)["ok"]


def test_verify_printed_pair_fails_at_degree_six(capsys):
    code, text, _ = run(capsys, "verify", F, G)
    doc = json.loads(text)
    assert code == 1
    assert doc["iform_by_degree"]["6"] > 1e-7
    code, _, _ = run(capsys, "verify", F, G, "--degree", 5)
    assert code == 0


def test_mesh_outputs(capsys, tmp_path):
    code, text, _ = run(capsys, "mesh", PLANE, "--u", "0:1:2", "--v", "0:1:2")
    assert code == 0
    assert sum(ln.startswith("v ") for ln in text.splitlines()) == 4
    assert sum(ln.startswith("f ") for ln in text.splitlines()) == 1
    out = tmp_path / "m.csv"
    code, _, _ = run(capsys, "mesh", F, "--u=-0.125:0.125:8", "--v=-0.25:0.25:8", "--format", "csv", "--out", out)
    assert code == 0 and out.read_text().startswith("u,v,x,y,z\n")


def test_output_is_byte_identical(capsys, tmp_path):
    texts = []
    for k in range(2):
        out = tmp_path / f"iso{k}.json"
        _, text, _ = run(capsys, "deform", F, "--isomer", "--out", out)
        texts.append((text, out.read_bytes()))
    assert texts[0] == texts[1]


def test_report_and_quiet(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, text, _ = run(capsys, "invariants", F, "--quiet", "--report", rep)
    assert code == 0 and text == ""
    assert json.loads(rep.read_text())["generic"] is True


@pytest.mark.parametrize(
    "argv, code",
    [
        (["invariants", F], 0),
        (["verify", F, G], 1),
        (["invariants", str(DATA / "missing.json")], 2),
        (["mesh", PLANE, "--u", "0:1:1", "--v", "0:1:2"], 2),
        (["invariants", PLANE], 3),
        (["deform", CUSP, "--isomer"], 4),
        (["deform", F, "--family=-1.5:-1:3"], 5),
        (["deform", F, "--isomer", "--order", "2"], 2),
        (["deform", F, "--isomer", "--order", "3"], 6),
        (["deform", F, "--isomer", "--order", "4"], 6),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert main(argv + ["--quiet"]) == code


def test_straight_target_curve_exits_5(capsys, tmp_path):
    curve = tmp_path / "line.json"
    curve.write_text(json.dumps({"kind": "explicit", "coeffs": [[0, 0, 0], [1, 0, 0]]}))
    assert main(["deform", F, "--curve", str(curve), "--quiet"]) == 5


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["deform", F])
    assert exc.value.code == 2


def test_exit_code_mapping():
    assert exit_code(errors.CurvatureTooSmall("x")) == 5
    assert exit_code(errors.NonGeneric("x")) == 4
    assert exit_code(errors.MatrixSingular("x")) == 5
    assert exit_code(errors.BudgetExhausted("x")) == 6
    assert exit_code(errors.ZeroBudget("x")) == 6
    assert exit_code(errors.DegenerateFrame("x")) == 3
    assert exit_code(io.FileFormatError("x")) == 2
    assert exit_code(OSError("x")) == 2


def test_settings_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"order": 9, "tol": 1e-6, "branch": "-", "workers": 3}))
    parser = build_parser()
    args = parser.parse_args(["deform", F, "--isomer", "--config", str(cfg)])
    assert resolve_settings(args, {}) == {"order": 9, "tol": 1e-6, "branch": "minus", "workers": 3}
    env = {"CFORGE_ORDER": "11", "CFORGE_BRANCH": "+"}
    st = resolve_settings(args, env)
    assert st["order"] == 11 and st["branch"] == "plus" and st["workers"] == 3
    args = parser.parse_args(["deform", F, "--isomer", "--config", str(cfg), "--order", "12"])
    assert resolve_settings(args, env)["order"] == 12
    args = parser.parse_args(["deform", F, "--isomer"])
    assert resolve_settings(args, {"CFORGE_CONFIG": str(cfg)})["order"] == 9
    assert resolve_settings(args, {}) == {"order": 8, "tol": 1e-8, "branch": "plus", "workers": 1}


def test_bad_settings(tmp_path):
    parser = build_parser()
    args = parser.parse_args(["invariants", F])
    with pytest.raises(io.FileFormatError):
        resolve_settings(args, {"CFORGE_ORDER": "eight"})
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1, 2]")
    with pytest.raises(io.FileFormatError):
        resolve_settings(args, {"CFORGE_CONFIG": str(cfg)})


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cuspforge", "invariants", PLANE], capture_output=True, text=True)
    assert proc.returncode == 3
    proc = subprocess.run([sys.executable, "-m", "cuspforge", "invariants", F], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["generic"]
