import json
import subprocess
import sys
from pathlib import Path

import pytest

from dform.cli import main

DATA = Path(__file__).parent / "data"
QP = '{"kind":"padic","p":7}'
LAURENT = '{"kind":"laurent","residue":{"kind":"fq","p":7},"var":"t"}'
FQT = '{"kind":"rational_function","base":{"kind":"fq","p":7}}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def test_decide_padic_anisotropic(capsys):
    code, rep, _ = run_json(capsys, "decide", "--field", QP, "--form", "[1,2,7,14,49,98]", "--degree", "3")
    assert code == 0
    assert rep["certificate"]["verdict"] == "anisotropic"
    assert rep["form_text"] == "⟨1,2,7,14,49,98⟩"


def test_decide_text_tree(capsys):
    code, out, _ = run(capsys, "decide", "--field", QP, "--form", "[1,2,7,14]", "--degree", "3",
                       "--format", "text")
    assert code == 0
    assert out.count("⟨1,2⟩ over F_7: exhausted") == 2


def test_witness_command(capsys):
    code, rep, _ = run_json(capsys, "witness", "--field", LAURENT, "--form", '[1,2,4,{"1":1}]',
                            "--degree", "3", "--prec", "12")
    assert code == 0
    assert rep["certificate"]["verdict"] == "isotropic"
    assert rep["certificate"]["precision"] == 12


def test_uinv_row(capsys):
    code, rep, _ = run_json(capsys, "uinv", "--d", "3", "--q", "5")
    assert code == 0
    assert rep["rows"][0]["u_diag"] == 1


def test_uinv_table_text(capsys, monkeypatch):
    monkeypatch.setenv("DFORM_THREADS", "3")
    code, out, _ = run(capsys, "uinv", "--d", "3,4", "--q", "7,13", "--format", "text")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split()[:4] == ["d", "q", "d*", "u_diag"]
    assert len(lines) == 2 + 4


def test_uinv_tower(capsys):
    code, rep, _ = run_json(capsys, "uinv", "--d", "3", "--field", LAURENT)
    assert code == 0
    assert rep["rows"][0]["u_diag"] == 6


def test_uinv_strong(capsys):
    code, rep, _ = run_json(capsys, "uinv", "--d", "3", "--r", "1", "--m", "2", "--k-point")
    assert code == 0
    assert rep["strong"]["u_diag_F_lower_bound"] == 81


def test_bounds_none_applicable(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "3", "--q", "7", "--format", "text")
    assert code == 0
    assert "(d*-1)^4 rule" in out
    code, rep, _ = run_json(capsys, "bounds", "--d", "3", "--q", "5")
    assert rep["u_diag"] == 1


def test_patch_check_demo(capsys):
    code, rep, _ = run_json(capsys, "patch-check", "--input", str(DATA / "demo_model.json"))
    assert code == 0
    assert {n["verdict"] for n in rep["nodes"]} == {"isotropic"}
    assert [n["node"] for n in rep["nodes"]][:2] == ["U", "P=(t,7)"]


def test_patch_check_text(capsys):
    code, out, _ = run(capsys, "patch-check", "--input", str(DATA / "negative_control.json"),
                       "--format", "text")
    assert code == 0
    assert "hypothesis violated at the Gauss valuation; no assertion made" in out


def test_thresholds(capsys):
    code, rep, _ = run_json(capsys, "thresholds", "--d", "3", "--n", "29")
    assert code == 0 and rep["guaranteed"]
    code, rep, _ = run_json(capsys, "thresholds", "--d", "3", "--n", "28")
    assert not rep["guaranteed"]


def test_unknown_exit_code(capsys):
    form = '[{"num":[2,4,2]},{"num":[1,0,2]},{"num":[4]}]'
    code, rep, _ = run_json(capsys, "decide", "--field", FQT, "--form", form, "--degree", "3")
    assert code == 2
    assert rep["certificate"]["verdict"] == "unknown"


@pytest.mark.parametrize("argv", [
    ["decide", "--field", "{bad", "--form", "[1]", "--degree", "3"],
    ["decide", "--field", '{"kind":"padic"}', "--form", "[1]", "--degree", "3"],
    ["decide", "--field", QP, "--form", "[1,0]", "--degree", "3"],
    ["decide", "--field", '{"kind":"fq","p":3}', "--form", "[1,1]", "--degree", "3"],
    ["uinv", "--d", "3"],
    ["patch-check", "--input", "/nonexistent/file.json"],
])
def test_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error:")
    assert out == ""


def test_malformed_json_points_at_flag(capsys):
    _, _, err = run(capsys, "decide", "--field", QP, "--form", "[1, 2", "--degree", "3")
    assert "--form" in err and "line 1" in err


def test_characteristic_error_verbatim(capsys):
    _, _, err = run(capsys, "decide", "--field", '{"kind":"fq","p":3}', "--form", "[1,1]", "--degree", "3")
    assert "residue characteristic 3" in err


def test_bad_precision_and_budget():
    with pytest.raises(SystemExit):
        main(["decide", "--prec", "3"])
    with pytest.raises(SystemExit):
        main(["decide", "--budget", "0"])


@pytest.mark.parametrize("field,form", [
    (QP, "[1,2,3,7]"),
    (QP, "[1,2,7,14,49,98]"),
    (LAURENT, '[1,2,{"1":1},{"1":2},{"2":1},{"2":2}]'),
    (LAURENT, '[1,{"1":3},{"2":5},6]'),
    ('{"kind":"fq","p":13}', "[1,2,3]"),
    (FQT, '[{"num":[1]},{"num":[2]},{"num":[4]}]'),
    (FQT, '[{"num":[1]},{"num":[2]},{"num":[0,1]},{"num":[0,2]}]'),
])
def test_verify_round_trip(capsys, tmp_path, field, form):
    path = tmp_path / "report.json"
    code = main(["decide", "--field", field, "--form", form, "--degree", "3", "--output", str(path)])
    capsys.readouterr()
    assert code == 0
    code, rep, _ = run_json(capsys, "verify", "--input", str(path))
    assert code == 0 and rep["verified"]


def test_verify_rejects_tampered_witness(capsys, tmp_path):
    path = tmp_path / "report.json"
    main(["decide", "--field", QP, "--form", "[1,2,3,7]", "--degree", "3", "--output", str(path)])
    rep = json.loads(path.read_text())
    rep["certificate"]["witness"][0] = "5"
    path.write_text(json.dumps(rep))
    capsys.readouterr()
    code, out, _ = run_json(capsys, "verify", "--input", str(path))
    assert code == 3 and not out["verified"]


def test_verify_rejects_tampered_tree(capsys, tmp_path):
    path = tmp_path / "report.json"
    main(["decide", "--field", QP, "--form", "[1,2,7,14]", "--degree", "3", "--output", str(path)])
    rep = json.loads(path.read_text())
    rep["form"] = [1, 6, 7, 14]
    path.write_text(json.dumps(rep))
    capsys.readouterr()
    code, _, _ = run_json(capsys, "verify", "--input", str(path))
    assert code == 3


def test_output_is_byte_identical(capsys):
    argv = ["decide", "--field", LAURENT, "--form", '[1,{"1":3},{"2":5},6,{"1":2}]', "--degree", "3"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    argv = ["patch-check", "--input", str(DATA / "demo_model.json"), "--format", "text"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_json_and_text_agree_on_verdicts(capsys):
    path = str(DATA / "demo_model.json")
    _, rep, _ = run_json(capsys, "patch-check", "--input", path)
    _, text, _ = run(capsys, "patch-check", "--input", path, "--format", "text")
    for node in rep["nodes"]:
        row = next(line for line in text.splitlines() if line.startswith(node["node"] + " "))
        assert node["verdict"] in row


def test_stdin_input(capsys, monkeypatch):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO((DATA / "demo_model.json").read_text()))
    code, rep, _ = run_json(capsys, "patch-check", "--input", "-")
    assert code == 0


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "dform.cli", "uinv", "--d", "3", "--q", "5", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[2].split()[:4] == ["3", "5", "1", "1"]
