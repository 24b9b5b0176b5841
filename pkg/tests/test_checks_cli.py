import numpy as np
import pytest

from suslov.checks import assembly_step, run_check_suite
from suslov.cli import (CSV_HEADER, PRESETS, main, read_config_file,
                        write_trajectory_csv)
from suslov.integrators import StepperConfig, simulate, step_lps
from suslov.retraction import RetractionKind, dtau_left_dual_matrix
from suslov.system import SuslovState, SuslovSystem


# ---------- check suite ----------

def test_check_suite_passes_and_is_deterministic():
    a = run_check_suite(seed=0, samples=60)
    b = run_check_suite(seed=0, samples=60)
    assert [r.name for r in a] == ["retraction-round-trip", "log-derivative",
                                   "single-step-oracle"]
    assert all(r.passed for r in a)
    assert [(r.worst, r.samples) for r in a] == [(r.worst, r.samples) for r in b]


def test_check_suite_catches_perturbed_dual_matrix():
    def skewed(kind, w):
        return 1.000001 * dtau_left_dual_matrix(kind, w)

    results = run_check_suite(seed=0, samples=40, dual_matrix_fn=skewed)
    by_name = {r.name: r for r in results}
    assert not by_name["log-derivative"].passed
    assert by_name["retraction-round-trip"].passed


def test_assembly_step_matches_stepper_directly():
    sys = SuslovSystem(np.array([1.0, 10.0, 100.0]))
    st = SuslovState(np.eye(3), np.array([1.0, 1.0]))
    for kind, tag in [(RetractionKind.EXPONENTIAL, "lps-exp"),
                      (RetractionKind.CAYLEY, "lps-cay")]:
        ref = step_lps(sys, kind, st, StepperConfig(tag, 0.01))
        R1, mu1, _ = assembly_step(kind, st.R, st.Pi, 0.01, sys.inertia)
        assert np.abs(R1 - ref.R).max() < 1e-12
        assert np.abs(mu1 - ref.Pi).max() < 1e-12


# ---------- CSV layer ----------

def test_csv_header_and_roundtrip(tmp_path):
    sys = SuslovSystem(np.array([1.0, 10.0, 100.0]))
    traj = simulate(sys, "lps-exp", (np.eye(3), np.array([1.0, 1.0])), 0.01, 0.5)
    out = tmp_path / "t.csv"
    write_trajectory_csv(str(out), traj)
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == len(traj) + 1
    # 17 significant digits round-trip doubles exactly
    row5 = lines[6].split(",")
    assert int(row5[0]) == 5
    assert float(row5[2]) == traj.R[5, 0, 0]
    assert float(row5[11]) == traj.Pi[5, 0]
    assert float(row5[18]) == traj.energy_err[5]


def test_csv_bytes_identical_across_runs(tmp_path):
    args = ["simulate", "--method", "lps-cay", "--duration", "2",
            "--out", str(tmp_path / "a.csv")]
    assert main(args) == 0
    assert main(["simulate", "--method", "lps-cay", "--duration", "2",
                 "--out", str(tmp_path / "b.csv")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


# ---------- simulate subcommand ----------

def test_simulate_duration_zero_single_row(tmp_path):
    out = tmp_path / "z.csv"
    rc = main(["simulate", "--method", "lps-exp", "--duration", "0",
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    assert float(lines[1].split(",")[18]) == 0.0  # energy_err


def test_simulate_fig2_preset(tmp_path):
    out = tmp_path / "fig2.csv"
    assert main(["simulate", "--preset", "fig2", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 1802  # header + 1801 records
    first = float(rows[2].split(",")[19])
    assert first > 0.0  # constraint column moves after one step


def test_simulate_usage_errors(tmp_path, capsys):
    assert main(["simulate", "--duration", "1"]) == 1  # no method
    assert main(["simulate", "--method", "lps-exp"]) == 1  # no duration
    assert main(["simulate", "--method", "rk4", "--duration", "1"]) == 1
    assert main(["simulate", "--preset", "nope"]) == 1
    assert main(["simulate", "--method", "lps-exp", "--duration", "1",
                 "--dt", "-0.5"]) == 1
    assert main(["simulate", "--method", "lps-exp", "--duration", "1",
                 "--inertia", "1,0,1"]) == 1
    assert main(["simulate", "--method", "lps-exp", "--duration", "1",
                 "--pi0", "1,1,0.5"]) == 1  # off the constraint surface
    assert main(["simulate", "--method", "lps-exp", "--duration", "1",
                 "--r0", "1,2,3"]) == 1
    assert main(["simulate", "--method", "lps-exp", "--duration", "1",
                 "--out", str(tmp_path / "no" / "dir.csv")]) == 1
    assert main([]) == 1  # missing subcommand
    capsys.readouterr()


def test_simulate_numerical_failure_exit_code(tmp_path, capsys):
    rc = main(["simulate", "--method", "lps-exp", "--duration", "1",
               "--dt", "0.05", "--newton-tol", "1e-15",
               "--newton-max-iter", "1", "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "step 0" in capsys.readouterr().err


def test_simulate_unadapted_accepts_third_component(tmp_path):
    rc = main(["simulate", "--method", "lp-exp", "--duration", "1",
               "--pi0", "1,1,0.3", "--out", str(tmp_path / "u.csv")])
    assert rc == 0


# ---------- config file and precedence ----------

def test_config_file_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# a comment\n"
        "method = lps-cay\n"
        "inertia = 1,10,100\n"
        "pi0 = 1,1\n"
        "dt = 0.01  # trailing comment\n"
        "duration = 1.0\n")
    parsed = read_config_file(str(cfg))
    assert parsed["method"] == "lps-cay"
    assert parsed["dt"] == 0.01
    assert parsed["inertia"] == (1.0, 10.0, 100.0)


def test_config_file_unknown_key_fails(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("stepsize = 0.01\n")
    assert main(["simulate", "--config", str(cfg)]) == 1
    assert "stepsize" in capsys.readouterr().err


def test_config_file_missing_fails(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "absent.cfg")]) == 1


def test_flags_override_config_and_preset(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("method = lps-exp\nduration = 5\n")
    out = tmp_path / "o.csv"
    # flag duration beats both the config file and the fig2 preset
    rc = main(["simulate", "--config", str(cfg), "--preset", "fig2",
               "--duration", "1", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 102  # preset dt 0.01, flag duration 1
    # preset method (lp-exp) beat the config file: Pi3 drifts
    assert float(lines[-1].split(",")[13]) != 0.0


def test_config_equivalent_to_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("method = lps-exp\nduration = 2\ndt = 0.02\npi0 = 0.5,2\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["simulate", "--method", "lps-exp", "--duration", "2",
                 "--dt", "0.02", "--pi0", "0.5,2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_presets_encode_caption_parameters():
    for name in ("fig1", "fig1-exp", "fig1-cay", "fig2"):
        p = PRESETS[name]
        assert p["inertia"] == (1.0, 10.0, 100.0)
        assert p["pi0"] == (1.0, 1.0, 0.0)
        assert p["dt"] == 0.01
    assert PRESETS["fig1"]["duration"] == 1800.0
    assert "method" not in PRESETS["fig1"]
    assert PRESETS["fig1-exp"]["method"] == "lps-exp"
    assert PRESETS["fig1-cay"]["method"] == "lps-cay"
    assert PRESETS["fig2"]["method"] == "lp-exp"
    assert PRESETS["fig2"]["duration"] == 18.0


# ---------- convergence subcommand ----------

def test_convergence_output_shape(capsys):
    rc = main(["convergence", "--method", "lps-exp", "--duration", "0.5",
               "--dts", "0.04,0.02,0.01"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "dt,global_error"
    assert len(lines) == 5
    assert lines[-1].startswith("# fitted_order = ")
    p = float(lines[-1].split("=")[1])
    assert 0.9 <= p <= 1.3
    errs = [float(l.split(",")[1]) for l in lines[1:4]]
    assert errs[0] > errs[1] > errs[2]


def test_convergence_usage_errors(capsys):
    assert main(["convergence", "--method", "lps-exp", "--dts", "0.01"]) == 1
    assert main(["convergence", "--method", "lps-exp",
                 "--dts", "0.01,0.02,0.04"]) == 1
    assert main(["convergence", "--method", "lps-exp"]) == 1  # no dts
    capsys.readouterr()


def test_convergence_degenerate_fit_exits_two(capsys):
    # zero momentum: the stepper is exact, errors sit at the floor
    rc = main(["convergence", "--method", "lps-exp", "--pi0", "0,0",
               "--dts", "0.04,0.02,0.01"])
    assert rc == 2
    assert "fit floor" in capsys.readouterr().err


# ---------- check subcommand ----------

def test_check_subcommand(capsys):
    rc = main(["check", "--samples", "40"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("PASS") == 3
    assert "all checks passed" in out


def test_check_rejects_bad_samples(capsys):
    assert main(["check", "--samples", "0"]) == 1
    capsys.readouterr()
