import json

import pytest

from mosva.cli import main
from mosva.document import load, save
from mosva.factory import with_scaled_entry


@pytest.fixture()
def heis_file(tmp_path):
    path = tmp_path / "h.mosva"
    assert main(["example", "heisenberg", "--cutoff", "4", "-o", str(path)]) == 0
    return str(path)


def test_example_then_check_all(heis_file, capsys):
    assert main(["check", heis_file, "--suite", "all", "--max-weight", "3"]) == 0
    out = capsys.readouterr().out
    assert "result: PASS" in out


def test_example_matrix_check(tmp_path):
    path = str(tmp_path / "m.mosva")
    assert main(["example", "matrix", "-o", path]) == 0
    assert main(["check", path, "--suite", "all"]) == 0


def test_check_fault_file_exits_one(heis_file, tmp_path, capsys):
    inst = load(heis_file)
    bad = with_scaled_entry(inst, ("a1", -1, "a1"), 2)
    bad_path = str(tmp_path / "bad.mosva")
    save(bad, bad_path)
    assert main(["check", bad_path, "--suite", "assoc", "--max-weight", "3"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "witness" in out


def test_correlate_text_output(heis_file, capsys):
    assert main(["correlate", heis_file, "--bra", "vac",
                 "--ops", "a1@z1,a1@z2", "--ket", "vac"]) == 0
    out = capsys.readouterr().out
    assert "z1^-2 z2^0" in out and "certified window" in out


def test_correlate_order_window_exit(heis_file, capsys):
    code = main(["correlate", heis_file, "--bra", "vac",
                 "--ops", "a1@z1,a1@z2", "--ket", "vac", "--order", "9"])
    assert code == 2
    err = capsys.readouterr().err
    assert "cutoff" in err


def test_machine_report_is_byte_stable(heis_file, capsys):
    assert main(["check", heis_file, "--suite", "vacuum",
                 "--report", "machine"]) == 0
    first = capsys.readouterr().out
    assert main(["check", heis_file, "--suite", "vacuum",
                 "--report", "machine"]) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["passed"] is True and doc["records"]


def test_report_dir_redirect(heis_file, tmp_path, monkeypatch, capsys):
    outdir = tmp_path / "reports"
    outdir.mkdir()
    monkeypatch.setenv("MOSVA_REPORT_DIR", str(outdir))
    assert main(["check", heis_file, "--suite", "structural"]) == 0
    stdout = capsys.readouterr().out
    copy = (outdir / "check-report.txt").read_text()
    assert copy == stdout


def test_oppose_transport_contragredient_files(heis_file, tmp_path, capsys):
    opp = str(tmp_path / "op.mosva")
    assert main(["oppose", heis_file, "-o", opp]) == 0
    assert main(["check", opp, "--suite", "grading"]) == 0

    # build a module file by hand: the Fock module of the same algebra
    from mosva.factory import self_module
    fock = self_module(load(heis_file), "left")
    fock_path = str(tmp_path / "fock.mosva")
    save(fock, fock_path)
    moved = str(tmp_path / "fock-right-op.mosva")
    assert main(["transport", fock_path, "--direction", "left_to_right_op",
                 "-o", moved]) == 0
    back = str(tmp_path / "fock-back.mosva")
    assert main(["transport", moved, "--direction", "right_op_to_left",
                 "-o", back]) == 0
    assert load(back).YL == fock.YL

    cg = str(tmp_path / "cg.mosva")
    assert main(["contragredient", fock_path, "-o", cg]) == 0
    assert main(["check", cg, "--suite", "mobius"]) == 0


def test_transport_on_algebra_is_usage_error(heis_file, capsys):
    assert main(["transport", heis_file, "--direction", "left_to_right_op",
                 "-o", "x.mosva"]) == 3


def test_reconstruct_and_regions(heis_file, capsys):
    assert main(["reconstruct", heis_file, "--bra", "vac",
                 "--ops", "a1@z1,a1@z2", "--ket", "vac"]) == 0
    out = capsys.readouterr().out
    assert "(z1-z2)^2" in out
    assert main(["regions", heis_file, "--bra", "vac",
                 "--ops", "a1@z1,a1@z2", "--ket", "vac", "--order", "4"]) == 0


def test_parse_error_exits_three(tmp_path, capsys):
    bad = tmp_path / "bad.mosva"
    bad.write_text("{not json")
    assert main(["check", str(bad), "--suite", "vacuum"]) == 3
    assert "parse error" in capsys.readouterr().err


def test_unknown_label_usage_error(heis_file, capsys):
    assert main(["correlate", heis_file, "--bra", "nope",
                 "--ops", "a1@z1", "--ket", "vac"]) == 3


def test_usage_error_exits_three(capsys):
    assert main(["frobnicate"]) == 3


def test_contragredient_certificate_path(heis_file, tmp_path):
    from mosva.factory import self_module
    fock = self_module(load(heis_file), "left")
    fock_path = str(tmp_path / "fock.mosva")
    save(fock, fock_path)
    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps({"constant_C": "0", "note": "audited"}))
    out = str(tmp_path / "cg.mosva")
    assert main(["contragredient", fock_path, "-o", out,
                 "--allow-unrestricted-with-certificate", str(cert)]) == 0
    assert main(["check", out, "--suite", "vacuum"]) == 0


def test_correlate_mixed_mode_via_cli(heis_file, tmp_path, capsys):
    from mosva.factory import self_module
    bi = self_module(load(heis_file), "bi")
    bi_path = str(tmp_path / "bi.mosva")
    save(bi, bi_path)
    assert main(["correlate", bi_path, "--bra", "vac",
                 "--ops", "a1@z1,a1@z2", "--ket", "vac", "--mode", "mixed",
                 "--module-at", "1"]) == 0
    out = capsys.readouterr().out
    assert "coefficient" in out


def test_example_module_flag(tmp_path, capsys):
    fock = str(tmp_path / "fock.mosva")
    assert main(["example", "heisenberg", "--cutoff", "3", "--module", "left",
                 "-o", fock]) == 0
    assert main(["check", fock, "--suite", "vacuum"]) == 0
    out = str(tmp_path / "fock-r.mosva")
    assert main(["transport", fock, "--direction", "left_to_right_op",
                 "-o", out]) == 0
    assert main(["check", out, "--suite", "D"]) == 0
