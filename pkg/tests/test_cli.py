import json
import math

import numpy as np
import pytest

from waverep import serialize as ser
from waverep.cli import parse_angle, run
from waverep.laurent import CircleGrid, GridFunction
from waverep.fixtures import haar


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_angle():
    assert parse_angle("8pi") == pytest.approx(8 * math.pi)
    assert parse_angle("1.5pi") == pytest.approx(1.5 * math.pi)
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("-pi") == pytest.approx(-math.pi)
    assert parse_angle("2.25") == 2.25
    from waverep.cli import InputError

    with pytest.raises(InputError):
        parse_angle("eightpi")


def test_check_fixture_by_file(tmp_path, capsys):
    path = tmp_path / "haar.json"
    path.write_text(json.dumps(ser.bank_to_dict(haar(2))))
    code, rep = run_json(capsys, ["check", str(path)])
    assert code == 0
    assert rep["verdicts"]["unitary"] is True
    assert rep["residuals"]["unitarity"] < 1e-13
    assert rep["command"] == "check"
    assert set(rep) >= {"command", "inputs", "verdicts", "residuals", "artifacts", "elapsed"}


def test_check_broken_bank_exits_one(tmp_path, capsys):
    d = ser.bank_to_dict(haar(2))
    d["filters"][1]["coeffs"] = [[0.5, 0.0], [-0.5, 0.0]]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(d))
    code, rep = run_json(capsys, ["check", str(path)])
    assert code == 1
    assert rep["verdicts"]["unitary"] is False


def test_check_missing_file_exits_two(capsys):
    assert run(["check", "nope.json"]) == 2


def test_unknown_flag_exits_two():
    assert run(["check", "--frobnicate"]) == 2


def test_unknown_fixture_exits_two(capsys):
    assert run(["fixtures", "wavelettron"]) == 2


def test_fixtures_writes_verified_bank(tmp_path, capsys):
    out = tmp_path / "db4.json"
    code, rep = run_json(capsys, ["fixtures", "db4", "--out-bank", str(out)])
    assert code == 0 and rep["verdicts"]["verified"]
    assert rep["artifacts"] == [str(out)]
    code2, rep2 = run_json(capsys, ["check", str(out)])
    assert code2 == 0


def test_decompose_report(capsys):
    code, rep = run_json(capsys, ["decompose", "--scale", "2", "--digits", "0,1",
                                  "--window", "64"])
    assert code == 0
    assert rep["info"]["n_components"] == 2
    assert sorted(rep["info"]["cycles"]) == [[-1], [0]]


def test_decompose_bad_digits_exits_two(capsys):
    assert run(["decompose", "--scale", "2", "--digits", "0,banana"]) == 2


def test_decompose_invalid_digit_system_exits_one(capsys):
    code, rep = run_json(capsys, ["decompose", "--scale", "2", "--digits", "0,2"])
    assert code == 1
    assert "error" in rep["info"]


def test_index_fixture(capsys):
    code, rep = run_json(capsys, ["index", "--fixture", "haar2", "--window", "32"])
    assert code == 0
    assert rep["info"]["index"] == 2
    assert rep["info"]["haar_component"] is True
    assert rep["residuals"]["pairing_constancy"] < 1e-10


def test_wold_fixture(capsys):
    code, rep = run_json(capsys, ["wold", "--fixture", "haar2", "--index", "0"])
    assert code == 0
    assert rep["info"]["unitary_dim"] == 0
    code, rep = run_json(capsys, ["wold", "--fixture", "monomial(0,1)", "--index", "0"])
    assert code == 0
    assert rep["info"]["unitary_dim"] == 1
    assert rep["info"]["eigenvalue"] == [1.0, 0.0]


def test_wold_shift_check(capsys):
    code, rep = run_json(capsys, ["wold", "--fixture", "db4", "--shift-check"])
    assert code == 0 and rep["verdicts"]["all_shifts"] is True
    code, rep = run_json(capsys, ["wold", "--fixture", "monomial(0,1)", "--shift-check"])
    assert code == 1 and rep["verdicts"]["all_shifts"] is False


def test_cascade_with_csv_and_per(tmp_path, capsys):
    csv = tmp_path / "phi.csv"
    code, rep = run_json(capsys, [
        "cascade", "--fixture", "haar2", "--per", "64", "--csv", str(csv),
        "--t-max", "8pi",
    ])
    assert code == 0
    assert rep["verdicts"]["value_at_zero"] and rep["verdicts"]["periodization"]
    assert rep["residuals"]["per_residual"] < 1e-3
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,re,im,abs"
    assert len(lines) == rep["info"]["samples"] + 1
    cols = lines[1].split(",")
    assert len(cols) == 4 and float(cols[0]) == pytest.approx(-8 * math.pi)


def test_cascade_rejects_bad_lowpass_exits_one(capsys):
    code, rep = run_json(capsys, ["cascade", "--fixture", "monomial(0,1)"])
    assert code == 1
    assert "error" in rep["info"]


def test_complete_roundtrip(tmp_path, capsys):
    lp = tmp_path / "m0.json"
    lp.write_text(json.dumps(ser.filter_to_dict(haar(2).filters[0])))
    bank_out = tmp_path / "bank.json"
    code, rep = run_json(capsys, ["complete", "--lowpass", str(lp), "--scale", "2",
                                  "--out-bank", str(bank_out)])
    assert code == 0 and rep["verdicts"]["unitary"]
    d = json.loads(bank_out.read_text())
    assert d["kind"] == "poly" and len(d["filters"]) == 2


def test_equiv_command(tmp_path, capsys):
    g = CircleGrid.dynamics_grid(2)
    u1 = tmp_path / "u1.json"
    u2 = tmp_path / "u2.json"
    u3 = tmp_path / "u3.json"
    u1.write_text(json.dumps(ser.gridfunction_to_dict(GridFunction(g, np.ones(g.M)))))
    u2.write_text(json.dumps(ser.gridfunction_to_dict(GridFunction(g, g.points()))))
    rng = np.random.default_rng(17)
    u3.write_text(json.dumps(ser.gridfunction_to_dict(
        GridFunction(g, np.exp(2j * np.pi * rng.random(g.M))))))
    code, rep = run_json(capsys, ["equiv", "--u1", str(u1), "--u2", str(u2), "--scale", "2"])
    assert code == 0 and rep["verdicts"]["equivalent"]
    assert rep["residuals"]["intertwining"] < 1e-9
    code, rep = run_json(capsys, ["equiv", "--u1", str(u1), "--u2", str(u3), "--scale", "2"])
    assert code == 1 and not rep["verdicts"]["equivalent"]


def test_dilate_random_family(capsys):
    code, rep = run_json(capsys, ["dilate", "--lam", "0.5", "--fock-depth", "6",
                                  "--gram-depth", "3"])
    assert code == 0
    assert all(rep["verdicts"].values())
    assert rep["residuals"]["fock_defect"] == pytest.approx(0.5 ** 14, abs=1e-12)


def test_dilate_family_file(tmp_path, capsys):
    from waverep.dilation import random_coisometry

    fam = random_coisometry(3, 2, np.random.default_rng(3))
    path = tmp_path / "fam.json"
    path.write_text(json.dumps(ser.family_to_dict(fam)))
    code, rep = run_json(capsys, ["dilate", "--family", str(path), "--lam", "0.3"])
    assert code == 0
    assert rep["info"]["ops"] == 3 and rep["info"]["dim"] == 2


def test_report_goes_to_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run(["--out", str(out), "index", "--fixture", "haar2", "--window", "32"])
    assert code == 0
    assert capsys.readouterr().out == ""
    rep = json.loads(out.read_text())
    assert rep["info"]["index"] == 2


def test_reports_are_deterministic(capsys):
    _, rep1 = run_json(capsys, ["index", "--fixture", "haar2", "--window", "32"])
    _, rep2 = run_json(capsys, ["index", "--fixture", "haar2", "--window", "32"])
    rep1.pop("elapsed")
    rep2.pop("elapsed")
    assert rep1 == rep2


def test_seed_echoed_in_report(capsys):
    code, rep = run_json(capsys, ["--seed", "5", "dilate", "--lam", "0.4"])
    assert code == 0
    assert rep["inputs"]["seed"] == 5
