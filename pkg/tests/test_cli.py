"""Command-line interface: scenario parsing, outputs, exit codes."""

import json
import os

import numpy as np
import pytest

import gkheat.cli as cli
from gkheat.cli import main
from gkheat.fd import FdInstabilityError

SCENARIOS = os.path.join(os.path.dirname(__file__), "..", "scenarios")
FLASH = os.path.join(SCENARIOS, "flash_insulated.ini")
DECAY = os.path.join(SCENARIOS, "decay_insulated.ini")


def write_flash(tmp_path, extra=""):
    path = tmp_path / "scn.ini"
    path.write_text(
        "[params]\nalpha = 1.0\ntau = 0.02\nmu2 = 0.02\nl = 1.0\n"
        "[boundary]\ng = laser_flash\ng_tau_delta = 0.04\n"
        "[output]\nt_end = 0.2\nt_step = 0.1\n" + extra)
    return str(path)


def test_solve_writes_csv_and_manifest(tmp_path):
    out = str(tmp_path / "sol.csv")
    rc = main(["solve", write_flash(tmp_path), "--method", "series",
               "-o", out])
    assert rc == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "x,t,e,q"
    assert len(lines) == 1 + 3            # t in {0, 0.1, 0.2} at x = l
    man = json.load(open(out + ".manifest.json"))
    assert man["command"] == "solve" and man["method"] == "series"


def test_solve_is_deterministic(tmp_path):
    scn = write_flash(tmp_path)
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert main(["solve", scn, "--method", "series", "-o", out1]) == 0
    assert main(["solve", scn, "--method", "series", "-o", out2]) == 0
    assert open(out1).read() == open(out2).read()


def test_solve_utm_matches_series_cli(tmp_path):
    scn = write_flash(tmp_path)
    outs = {}
    for method in ("utm", "series"):
        out = str(tmp_path / (method + ".csv"))
        assert main(["solve", scn, "--method", method, "-o", out]) == 0
        outs[method] = np.loadtxt(out, delimiter=",", skiprows=1, ndmin=2)
    assert np.max(np.abs(outs["utm"][:, 2] - outs["series"][:, 2])) < 1e-6


def test_compare_reports_and_writes_json(tmp_path, capsys):
    scn = write_flash(tmp_path)
    out = str(tmp_path / "cmp.json")
    rc = main(["compare", scn, "--method", "utm", "--method-b", "series",
               "-o", out])
    assert rc == 0
    assert "rel Linf" in capsys.readouterr().out
    rep = json.load(open(out))
    assert rep["rel_linf_de"] < 1e-6


def test_contour_dump(tmp_path):
    out = str(tmp_path / "contour.csv")
    rc = main(["contour", write_flash(tmp_path), "--n-nodes", "500",
               "-o", out])
    assert rc == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "k_re,k_im,w_re,w_im,half"
    assert any(line.endswith(",upper") for line in lines[1:])
    assert any(line.endswith(",lower") for line in lines[1:])


def test_missing_scenario_is_config_error(tmp_path):
    rc = main(["solve", str(tmp_path / "nope.ini"),
               "-o", str(tmp_path / "x.csv")])
    assert rc == 2


def test_bad_signal_kind_is_config_error(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[params]\nalpha = 1.0\ntau = 0.02\nmu2 = 0.02\n"
                    "[boundary]\ng = squarewave\n")
    assert main(["solve", str(path), "-o", str(tmp_path / "x.csv")]) == 2


def test_fastpath_precondition_violation_is_exit_3(tmp_path):
    # initial-data scenario cannot use the flux-only fast path
    rc = main(["solve", DECAY, "--method", "fastpath",
               "-o", str(tmp_path / "x.csv")])
    assert rc == 3


def test_fd_blowup_is_exit_4(tmp_path):
    # a non-finite boundary sample drives the march non-finite
    sig = tmp_path / "sig.csv"
    sig.write_text("0.0,0.0\n0.5,nan\n1.0,0.0\n")
    path = tmp_path / "scn.ini"
    path.write_text(
        "[params]\nalpha = 1.0\ntau = 0.02\nmu2 = 0.02\n"
        "[boundary]\ng = tabulated\ng_csv = sig.csv\n")
    rc = main(["solve", str(path), "--method", "fd",
               "-o", str(tmp_path / "x.csv")])
    assert rc == 4


def test_bundled_scenarios_parse():
    for name in ("flash_insulated.ini", "flash_newton.ini",
                 "decay_insulated.ini"):
        scn, out = cli.load_scenario(os.path.join(SCENARIOS, name))
        assert scn.params.l == 1.0


def test_x_list_override(tmp_path):
    out = str(tmp_path / "sol.csv")
    rc = main(["solve", write_flash(tmp_path), "--method", "series",
               "--x", "0.25,0.75", "-o", out])
    assert rc == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1, ndmin=2)
    assert set(np.round(data[:, 0], 12)) == {0.25, 0.75}
