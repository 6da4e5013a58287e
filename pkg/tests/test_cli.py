"""Command-line interface: subcommands, CSV contracts, and exit codes."""

from __future__ import annotations

import re
import subprocess
import sys

import pytest

from ncho.cli import main

from conftest import SCENARIO_DIR

IB = str(SCENARIO_DIR / "set_ib.scenario")
IA = str(SCENARIO_DIR / "set_ia.scenario")
III = str(SCENARIO_DIR / "set_iii.scenario")
MILD_II = str(SCENARIO_DIR / "mild_ii_k2.scenario")

_SCI = r"-?\d\.\d{12}e[+-]\d{2,3}"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(out):
    lines = out.strip("\n").split("\n")
    return lines[0], [line.split(",") for line in lines[1:]]


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passes_on_shipped_scenarios(capsys):
    for path in (IB, MILD_II, III):
        code, out, _ = run_cli(capsys, "verify", "--scenario", path)
        assert code == 0
        assert "7 checks: 7 passed, 0 failed" in out
        assert out.count("PASS") == 7
        assert "FAIL" not in out
        assert out.startswith("scenario:")


def test_verify_fails_on_broken_width_parameter(capsys, tmp_path):
    text = (SCENARIO_DIR / "set_iii.scenario").read_text()
    broken = tmp_path / "broken.scenario"
    broken.write_text(text.replace("mu = 1", "mu = 1.05"))
    code, out, _ = run_cli(capsys, "verify", "--scenario", str(broken))
    assert code == 1
    assert "FAIL" in out
    assert re.search(r"7 checks: \d+ passed, [1-9]\d* failed", out)


def test_verify_tolerance_override_forces_failure(capsys):
    code, out, _ = run_cli(capsys, "verify", "--scenario", IB, "--tol", "1e-300")
    assert code == 1
    assert "FAIL" in out


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------

def test_energy_csv_contract(capsys):
    code, out, err = run_cli(
        capsys, "energy", "--scenario", IB, "--t0", "0", "--t1", "2", "--points", "5"
    )
    assert code == 0
    assert err == ""
    header, rows = csv_rows(out)
    assert header == "t,Gamma_t,E_re_scaled,E_im_scaled,in_window"
    assert len(rows) == 5
    for row in rows:
        assert len(row) == 5
        for cell in row[:4]:
            assert re.fullmatch(_SCI, cell), cell
        assert row[4] == "1"
    # Constant-coefficient family: the scaled value column is constant.
    assert len({row[2] for row in rows}) == 1
    assert {row[3] for row in rows} == {"0.000000000000e+00"}


def test_energy_window_flag_flips_beyond_horizon(capsys):
    code, out, _ = run_cli(
        capsys, "energy", "--scenario", III, "--n", "1", "--m", "0",
        "--t0", "0", "--t1", "4", "--points", "9",
    )
    assert code == 0
    _, rows = csv_rows(out)
    flags = [row[4] for row in rows]
    assert flags[0] == "1" and flags[-1] == "0"
    assert flags == sorted(flags, reverse=True)  # single flip
    beyond = [row for row in rows if row[4] == "0"]
    assert any(float(row[3]) != 0.0 for row in beyond)


def test_energy_gnuplot_script_on_stderr(capsys):
    code, out, err = run_cli(
        capsys, "energy", "--scenario", IB, "--points", "3", "--gnuplot"
    )
    assert code == 0
    assert "plot" in err and "energy.csv" in err
    assert "using 2:3" in err and "using 2:4" in err
    assert "plot" not in out


def test_energy_deterministic_output(capsys):
    args = ("energy", "--scenario", MILD_II, "--t1", "3", "--points", "40")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


# ---------------------------------------------------------------------------
# phase
# ---------------------------------------------------------------------------

def test_phase_csv_methods(capsys):
    code, out, _ = run_cli(
        capsys, "phase", "--scenario", IB, "--m", "1", "--t1", "2", "--points", "4"
    )
    assert code == 0
    header, rows = csv_rows(out)
    assert header == "t,theta_re,theta_im,method"
    assert [row[3] for row in rows] == ["ClosedForm"] * 4
    assert {row[2] for row in rows} == {"0.000000000000e+00"}
    assert float(rows[0][1]) == 0.0  # phase vanishes at t = 0


def test_phase_quadrature_fallback_method_column(capsys):
    # Figure-Ia parameters sit outside the series domain of the closed form.
    code, out, _ = run_cli(
        capsys, "phase", "--scenario", IA, "--m", "1", "--t1", "1", "--points", "3"
    )
    assert code == 0
    _, rows = csv_rows(out)
    assert {row[3] for row in rows} == {"Quadrature"}


# ---------------------------------------------------------------------------
# matelem
# ---------------------------------------------------------------------------

def test_matelem_diagonal_certifies_against_oracle(capsys):
    code, out, _ = run_cli(
        capsys, "matelem", "--scenario", IB, "--n", "1", "--m", "1",
        "--t0", "0.2", "--t1", "1.0", "--points", "3",
    )
    assert code == 0
    header, rows = csv_rows(out)
    assert header == "t,closed_re,closed_im,oracle_re,oracle_im,abs_err"
    assert len(rows) == 3
    for row in rows:
        assert float(row[5]) <= 1e-8
        assert float(row[1]) > 0.0


def test_matelem_off_diagonal_and_coordinate_flags(capsys):
    code, out, _ = run_cli(
        capsys, "matelem", "--scenario", MILD_II, "--m", "0", "--mprime", "2",
        "--k", "2", "--coord", "y", "--t0", "0.3", "--t1", "0.9", "--points", "2",
    )
    assert code == 0
    _, rows = csv_rows(out)
    for row in rows:
        assert float(row[5]) <= 1e-8
        assert (float(row[1]), float(row[2])) != (0.0, 0.0)


def test_matelem_certification_floor(capsys):
    # The two-resolution certification floors the tolerance at numerical
    # precision, so roundoff-level disagreement can never fail an
    # arbitrarily tight request; genuine failures surface through verify.
    code, out, _ = run_cli(
        capsys, "matelem", "--scenario", MILD_II, "--m", "0", "--mprime", "2",
        "--k", "2", "--t0", "0.3", "--t1", "0.9", "--points", "2", "--tol", "1e-300",
    )
    assert code == 0
    _, rows = csv_rows(out)
    assert all(float(row[5]) <= 1e-12 for row in rows)


# ---------------------------------------------------------------------------
# ncparams
# ---------------------------------------------------------------------------

def test_ncparams_reality_flags_flip_at_horizon(capsys):
    code, out, _ = run_cli(
        capsys, "ncparams", "--scenario", IA, "--t0", "15.8", "--t1", "16.4",
        "--points", "7",
    )
    assert code == 0
    header, rows = csv_rows(out)
    assert header == "t,theta_nc,omega_nc,theta_real,omega_real"
    flags = [row[3] for row in rows]
    assert flags[0] == "1" and flags[-1] == "0"
    for row in rows:
        assert float(row[1]) > 0.0 and float(row[2]) > 0.0


# ---------------------------------------------------------------------------
# wavefield
# ---------------------------------------------------------------------------

def test_wavefield_grid_shape(capsys):
    code, out, _ = run_cli(
        capsys, "wavefield", "--scenario", IB, "--n", "0", "--m", "1",
        "--t0", "0.5", "--points", "8",
    )
    assert code == 0
    header, rows = csv_rows(out)
    assert header == "r,angle,psi_abs_sq"
    assert len(rows) == 64
    assert all(float(row[2]) >= 0.0 for row in rows)
    assert max(float(row[2]) for row in rows) > 0.0


# ---------------------------------------------------------------------------
# Exit codes and plumbing
# ---------------------------------------------------------------------------

def test_usage_errors_exit_two(capsys):
    assert run_cli(capsys, "energy")[0] == 2  # missing --scenario
    assert run_cli(capsys, "nosuch", "--scenario", IB)[0] == 2
    assert run_cli(capsys, "energy", "--scenario", IB, "--points", "0")[0] == 2
    assert run_cli(capsys, "energy", "--scenario", "/nonexistent.scenario")[0] == 2


def test_malformed_scenario_reports_line_number(capsys, tmp_path):
    bad = tmp_path / "bad.scenario"
    bad.write_text("kind = SetIb\nM = 1.0\nM 2.0\n")
    code, _, err = run_cli(capsys, "verify", "--scenario", str(bad))
    assert code == 2
    assert ":3:" in err and "key = value" in err


def test_help_exits_zero(capsys):
    assert run_cli(capsys, "--help")[0] == 0
    assert run_cli(capsys, "energy", "--help")[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ncho.cli", "verify", "--scenario", III],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "7 passed" in proc.stdout
