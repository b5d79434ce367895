"""
Tests for the command-line interface and the suite registry.

This module runs the commands end to end through main() and checks the
report lines, the written files and the exit codes.
"""

import logging
import os
import runpy
import sys

import pytest

from hidaquat.cli import main
from hidaquat.suites import get_available_suites, run_suite


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_registered_suites():
    """Every command module is discovered."""
    assert set(get_available_suites()) == {"algebra", "brandt", "classset", "control", "eigen", "interp", "lift"}


def test_run_suite(config):
    """Suites run directly from a configuration."""
    result = run_suite("algebra", config)
    assert result.passed
    assert "algebra.ab = (-1,-11)" in result.lines
    with pytest.raises(KeyError):
        run_suite("nope", config)


def test_algebra_command(clean_env, capsys, tmp_path):
    """D=11 gives the algebra (-1,-11) with its certificates."""
    code, out = _run(capsys, "algebra", "--D", "11", "--out", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert "algebra.ab = (-1,-11)" in lines
    assert "algebra.ramified = {11,inf}" in lines
    assert "algebra.order_certificate = pass" in lines
    assert lines[-1] == "algebra.result = pass"
    with open(os.path.join(tmp_path, "algebra.report")) as f:
        assert f.read() == out


@pytest.mark.parametrize("argv", [
    ["algebra", "--D", "6", "--probes", "5"],
    ["control", "--weights", "2,9"],
    ["eigen", "--probes", ""],
    ["brandt", "--p", "11"],
])
def test_configuration_errors_exit_2(clean_env, capsys, tmp_path, argv):
    """Invalid configurations exit with status 2 before any computation."""
    code, _ = _run(capsys, *argv, "--out", str(tmp_path))
    assert code == 2


def test_unknown_command(clean_env):
    """argparse rejects unknown commands with status 2."""
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2


def test_brandt_command(clean_env, capsys, tmp_path):
    """T_2 at weight 2, level U_0 has characteristic polynomial x^2 - x - 6 and row sums 3."""
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    code, out = _run(capsys, "brandt", "--D", "11", "--n", "2", "--k", "2", "--r", "0", "--out", str(out_a))
    assert code == 0
    lines = out.splitlines()
    assert "brandt.dim = 2" in lines
    assert "brandt.charpoly = -6,-1,1  [mod 7^4]" in lines
    assert "brandt.row_sums = pass  [mod 7^4]" in lines
    assert "brandt.matrix_file = brandt_D11_M1_p7_n2_k2_r0.mat" in lines
    assert (out_a / "brandt_D11_M1_p7_n2_k2_r0.mat").exists()
    assert (out_a / "packets_D11_M1_p7_n2_k2_r0.txt").exists()

    code, again = _run(capsys, "brandt", "--D", "11", "--n", "2", "--k", "2", "--r", "0", "--out", str(out_b))
    assert code == 0
    assert again == out


def test_brandt_identity(clean_env, capsys, tmp_path):
    """T_1 is the identity."""
    code, _ = _run(capsys, "brandt", "--n", "1", "--k", "2", "--r", "0", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "brandt_D11_M1_p7_n1_k2_r0.mat").read_text() == "7 4 2 1\n1 0\n0 1\n"


def test_classset_file_round_trip(clean_env, capsys, tmp_path):
    """The class set of D=2 is written and then loaded by the algebra command."""
    code, out = _run(capsys, "classset", "--D", "2", "--probes", "3,5", "--out", str(tmp_path))
    assert code == 0
    assert "classset.mass = 1/24" in out.splitlines()
    path = tmp_path / "classset_D2_M1.txt"
    assert path.exists()

    code, out = _run(capsys, "algebra", "--D", "2", "--probes", "3,5", "--classset-file", str(path),
                     "--out", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert "algebra.classes = 1" in lines
    assert "algebra.mass = 1/24" in lines
    assert "algebra.mass_certificate = pass" in lines


def test_classset_file_must_match_job(clean_env, capsys, tmp_path):
    """A class-set file for another discriminant is a configuration error."""
    _run(capsys, "classset", "--D", "2", "--probes", "3,5", "--out", str(tmp_path))
    code, _ = _run(capsys, "algebra", "--D", "11", "--classset-file", str(tmp_path / "classset_D2_M1.txt"),
                   "--out", str(tmp_path))
    assert code == 2


def test_eigen_command(clean_env, capsys, tmp_path):
    """The weight-2 ordinary eigensystems at level U_1."""
    code, out = _run(capsys, "eigen", "--out", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert "eigen.dim = 20" in lines
    assert "eigen.char_exp = 0" in lines
    assert any(line.endswith(".a_2 = -2  [mod 7^4]") for line in lines)
    assert (tmp_path / "packets_D11_M1_p7_k2_r1.txt").exists()


def test_eigen_command_level_0(clean_env, capsys, tmp_path):
    """--r 0 selects the Brandt module rather than falling back to level U_1."""
    code, out = _run(capsys, "eigen", "--k", "2", "--r", "0", "--out", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert "eigen.level_r = 0" in lines
    assert "eigen.dim = 2" in lines
    assert "eigen.packets = 2" in lines
    assert "eigen.cuspidal = 1" in lines
    assert (tmp_path / "packets_D11_M1_p7_k2_r0.txt").exists()
    assert not (tmp_path / "packets_D11_M1_p7_k2_r1.txt").exists()


def test_lift_command(clean_env, capsys, tmp_path):
    """The lift of the 11a packet specializes back to it at level m = 1."""
    code, out = _run(capsys, "lift", "--level-m", "1", "--up-residue", "5", "--out", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert "lift.specialization = pass  [mod 7^1]" in lines
    assert "lift.level_m = 1" in lines
    assert "lift.file = lift_D11_M1_p7_m1.mform" in lines
    assert (tmp_path / "lift_D11_M1_p7_m1.mform").exists()


def test_interp_command(clean_env, capsys, tmp_path):
    """The 11a packet has a congruent partner at weight 8."""
    code, out = _run(capsys, "interp", "--weights", "2,8", "--up-residue", "5", "--out", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert "interp.k2_k8.multiplicity = pass" in lines
    assert "interp.k2_k8.result = pass" in lines
    assert "interp.k2.a_2 = -2  [mod 7^4]" in lines


@pytest.mark.slow
def test_control_command_is_deterministic(clean_env, capsys, tmp_path):
    """The full pipeline passes and its report does not depend on the worker count."""
    argv = ["control", "--D", "11", "--p", "7", "--weights", "2,8", "--level-m", "2", "--prec", "4",
            "--up-residue", "5"]
    code, serial = _run(capsys, *argv, "--workers", "1", "--out", str(tmp_path / "serial"))
    assert code == 0
    code, parallel = _run(capsys, *argv, "--workers", "8", "--out", str(tmp_path / "parallel"))
    assert code == 0
    assert serial == parallel
    lines = serial.splitlines()
    assert "control.specialization = pass  [mod 7^2]" in lines
    assert "control.k8.result = pass" in lines
    assert "interp.k2_k8.result = pass" in lines
    assert lines[-1] == "control.result = pass"


def test_run_script_logs_start(clean_env, monkeypatch, caplog, tmp_path):
    """run.py logs the command line it starts with and exits with the command status."""
    script = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "run.py")
    monkeypatch.setattr(sys, "argv", ["run.py", "algebra", "--D", "11", "--out", str(tmp_path)])
    with caplog.at_level(logging.INFO), pytest.raises(SystemExit) as e:
        runpy.run_path(script, run_name="__main__")
    assert e.value.code == 0
    assert f"Starting hidaquat: algebra --D 11 --out {tmp_path}" in caplog.text
