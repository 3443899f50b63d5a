import json

import numpy as np
import pytest

from ngpair import cli


def run_cli(args):
    try:
        return cli.main(list(args))
    except SystemExit as exc:  # argparse usage failures
        return exc.code


class TestUsageErrors:
    def test_zero_runs(self, tmp_path):
        code = run_cli(["sim", "--runs", "0", "--out", str(tmp_path / "x")])
        assert code == 2

    def test_zero_ptol(self, tmp_path):
        code = run_cli(["tip", "--k-list", "10", "--ptol", "0",
                        "--out", str(tmp_path / "x")])
        assert code == 2

    def test_empty_k_list(self, tmp_path):
        code = run_cli(["tip", "--k-list", ",", "--out", str(tmp_path / "x")])
        assert code == 2

    def test_six_dim_init_with_committed_fraction(self, tmp_path):
        init = tmp_path / "init.txt"
        init.write_text("0.25 0.5 0 0.25 0 0\n")
        code = run_cli(["ode", "--p", "0.1", "--init", str(init),
                        "--t-max", "1", "--out", str(tmp_path / "x")])
        assert code == 2

    def test_unknown_command(self):
        assert run_cli(["frobnicate"]) == 2


class TestNumericFailure:
    def test_tipping_not_found_exits_3(self, tmp_path):
        code = run_cli(["tip", "--k-list", "10", "--p-max", "0.001",
                        "--dt", "0.1", "--t-max", "2000",
                        "--out", str(tmp_path / "t")])
        assert code == 3


class TestSimCommand:
    def test_outputs_and_determinism(self, tmp_path):
        args = ["sim", "--n", "80", "--k", "4", "--runs", "3", "--seed", "11",
                "--t-cap", "500", "--out", str(tmp_path / "a")]
        assert run_cli(args) == 0
        runs1 = (tmp_path / "a_runs.csv").read_bytes()
        traj1 = (tmp_path / "a_traj.csv").read_bytes()
        args2 = args[:-1] + [str(tmp_path / "b")]
        assert run_cli(args2) == 0
        assert (tmp_path / "b_runs.csv").read_bytes() == runs1
        assert (tmp_path / "b_traj.csv").read_bytes() == traj1
        header = runs1.decode().splitlines()[0]
        assert header == "run,seed,reached,t_eta"
        assert traj1.decode().splitlines()[0].startswith(
            "t,p_A,p_B,p_AB,std_p_A")

    def test_manifest_replay_reproduces_bitwise(self, tmp_path):
        out = tmp_path / "m"
        args = ["sim", "--n", "60", "--k", "4", "--runs", "2", "--seed", "3",
                "--t-cap", "300", "--out", str(out)]
        assert run_cli(args) == 0
        manifest = json.loads((tmp_path / "m_runs.csv.manifest.json").read_text())
        before = (tmp_path / "m_runs.csv").read_bytes()
        assert run_cli(manifest["argv"]) == 0
        assert (tmp_path / "m_runs.csv").read_bytes() == before
        assert manifest["command"] == "sim"
        assert manifest["base_seed"] == 3
        assert str(tmp_path / "m_runs.csv") in manifest["outputs"]


class TestOdeCommand:
    def test_six_dim_header_and_rows(self, tmp_path):
        assert run_cli(["ode", "--k", "5", "--t-max", "2",
                        "--out", str(tmp_path / "o")]) == 0
        lines = (tmp_path / "o_traj.csv").read_text().splitlines()
        assert lines[0] == ("t,l_A-A,l_A-B,l_A-AB,l_B-B,l_B-AB,l_AB-AB,"
                            "p_A,p_B,p_AB")
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[1]) == pytest.approx(0.25)

    def test_nine_dim_committed(self, tmp_path):
        assert run_cli(["ode", "--k", "10", "--p", "0.1", "--t-max", "2",
                        "--out", str(tmp_path / "o9")]) == 0
        header = (tmp_path / "o9_traj.csv").read_text().splitlines()[0]
        assert header.startswith("t,l_A-C,l_B-C,l_AB-C,l_A-A")

    def test_meanfield_switch(self, tmp_path):
        assert run_cli(["ode", "--meanfield", "--t-max", "2",
                        "--out", str(tmp_path / "mf")]) == 0
        header = (tmp_path / "mf_traj.csv").read_text().splitlines()[0]
        assert header == "t,p_A,p_B,p_AB"

    def test_custom_init_file(self, tmp_path):
        init = tmp_path / "init.txt"
        init.write_text("0.4,0.2,0.1,0.2,0.05,0.05\n")
        assert run_cli(["ode", "--k", "5", "--init", str(init), "--t-max", "1",
                        "--out", str(tmp_path / "ci")]) == 0
        first = (tmp_path / "ci_traj.csv").read_text().splitlines()[1]
        assert float(first.split(",")[1]) == pytest.approx(0.4)


class TestTipCommand:
    def test_coarse_tipping_run(self, tmp_path):
        assert run_cli(["tip", "--k-list", "10", "--ptol", "5e-3",
                        "--dt", "0.1", "--t-max", "4000",
                        "--out", str(tmp_path / "t")]) == 0
        lines = (tmp_path / "t_tipping.csv").read_text().splitlines()
        assert lines[0] == "k,p_c,p_low,p_high"
        k, p_c, lo, hi = (float(x) for x in lines[1].split(","))
        assert 0.06 < p_c < 0.10
        probes = (tmp_path / "t_probes.csv").read_text().splitlines()
        assert probes[0] == "k,p,p_B_star,converged,t_end"
        assert len(probes) > 8


class TestConfigFile:
    def test_defaults_and_override(self, tmp_path):
        cfg = tmp_path / "defaults.cfg"
        cfg.write_text("n = 60\nruns = 3\nk = 4\nt_cap = 200\n")
        out = tmp_path / "c"
        assert run_cli(["sim", "--config", str(cfg), "--seed", "1",
                        "--out", str(out)]) == 0
        rows = (tmp_path / "c_runs.csv").read_text().splitlines()
        assert len(rows) == 1 + 3  # header + one row per configured run
        out2 = tmp_path / "d"
        assert run_cli(["sim", "--config", str(cfg), "--seed", "1",
                        "--runs", "2", "--out", str(out2)]) == 0
        rows2 = (tmp_path / "d_runs.csv").read_text().splitlines()
        assert len(rows2) == 1 + 2  # flag overrides config


class TestCompareCommand:
    def test_fig1_overlay(self, tmp_path):
        assert run_cli(["compare", "--fig", "1", "--k", "5", "--n", "100",
                        "--runs", "4", "--seed", "2",
                        "--out", str(tmp_path / "f1")]) == 0
        lines = (tmp_path / "f1_overlay.csv").read_text().splitlines()
        assert lines[0] == ("t,mc_p_A,mc_p_B,mc_p_AB,ode_p_A,ode_p_B,"
                            "ode_p_AB,mf_p_A,mf_p_B,mf_p_AB")
        assert len(lines) > 2

    def test_fig3_sizes(self, tmp_path):
        assert run_cli(["compare", "--fig", "3", "--k", "4",
                        "--n-list", "80,120", "--runs", "3", "--seed", "5",
                        "--out", str(tmp_path / "f3")]) == 0
        lines = (tmp_path / "f3_sizes.csv").read_text().splitlines()
        assert lines[0] == "n,k,T_mc_mean,T_mc_relstd,T_ode"
        assert len(lines) == 3

    def test_fig5_curve_with_explicit_grid(self, tmp_path):
        assert run_cli(["compare", "--fig", "5", "--k", "10", "--n", "120",
                        "--runs", "2", "--p-grid", "0.15", "--t-cap", "200",
                        "--out", str(tmp_path / "f5")]) == 0
        lines = (tmp_path / "f5_curve.csv").read_text().splitlines()
        assert lines[0] == "p,T_mc_mean,T_mc_relstd,censored_fraction,T_ode"
        assert len(lines) == 2
