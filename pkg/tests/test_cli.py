import numpy as np

from admira.cli import main
from admira import fileio


def read_lines(path):
    return path.read_text().splitlines()


class TestGenComplete:
    def test_entry_roundtrip(self, tmp_path):
        obs = tmp_path / "obs.txt"
        truth = tmp_path / "truth.csv"
        sol = tmp_path / "sol.csv"
        assert main(["gen", "--kind", "entry", "--n", "12", "--m", "12", "--r", "1",
                     "--p", "144", "--seed", "4", "--out", str(obs),
                     "--truth-out", str(truth)]) == 0
        assert main(["complete", "--obs", str(obs), "--r", "1",
                     "--out", str(sol)]) == 0
        X = fileio.load_dense_matrix(truth)
        Xh = fileio.load_dense_matrix(sol)
        err = np.linalg.norm(X - Xh, "fro") / np.linalg.norm(X, "fro")
        assert err <= 1e-7

    def test_p_over_dr_flag(self, tmp_path):
        obs = tmp_path / "obs.txt"
        assert main(["gen", "--kind", "entry", "--n", "10", "--m", "10", "--r", "1",
                     "--p-over-dr", "2.0", "--seed", "1", "--out", str(obs)]) == 0
        rows, cols, values = fileio.load_observed_entries(obs)
        assert len(values) == 38  # 2.0 * d_1 = 2 * 19

    def test_complete_with_svt(self, tmp_path):
        obs = tmp_path / "obs.txt"
        sol = tmp_path / "sol.csv"
        main(["gen", "--kind", "entry", "--n", "20", "--m", "20", "--r", "1",
              "--p", "400", "--seed", "6", "--out", str(obs)])
        assert main(["complete", "--obs", str(obs), "--r", "1", "--alg", "svt",
                     "--max-iter", "200", "--out", str(sol)]) == 0


class TestSolve:
    def test_gaussian_problem_roundtrip(self, tmp_path):
        prob = tmp_path / "prob.txt"
        sol = tmp_path / "sol.csv"
        trace = tmp_path / "trace.csv"
        assert main(["gen", "--kind", "gaussian", "--n", "10", "--m", "10", "--r", "1",
                     "--p", "400", "--seed", "8", "--out", str(prob)]) == 0
        assert main(["solve", "--problem", str(prob), "--r", "1", "--max-iter", "40",
                     "--out", str(sol), "--trace-out", str(trace)]) == 0
        lines = read_lines(trace)
        assert lines[0] == "iter,residual_l2,rel_residual"
        assert float(lines[-1].split(",")[2]) <= 1e-7


class TestDeterminism:
    def test_sweep_identical_across_runs_and_threads(self, tmp_path):
        args = ["sweep", "--n", "16", "--m", "16", "--r", "1",
                "--p-over-dr", "3,6", "--trials", "3", "--seed", "17"]
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(args + ["--threads", "1", "--out", str(out1)]) == 0
        assert main(args + ["--threads", "3", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_phase_identical_across_runs(self, tmp_path):
        args = ["phase", "--n", "10", "--m", "10", "--p-grid", "40,100",
                "--r-grid", "1,2", "--trials", "2", "--seed", "19"]
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--threads", "2", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestConfigFile:
    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n=16\nm=16\nr=1\np-over-dr=3,6\ntrials=3\nseed=17\n")
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["sweep", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["sweep", "--n", "16", "--m", "16", "--r", "1",
                     "--p-over-dr", "3,6", "--trials", "3", "--seed", "17",
                     "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        # now override one key from the command line
        out3 = tmp_path / "c.csv"
        assert main(["sweep", "--config", str(cfg), "--trials", "2",
                     "--out", str(out3)]) == 0
        assert out3.read_bytes() != out1.read_bytes()


class TestCompareRip:
    def test_compare_schema(self, tmp_path):
        out = tmp_path / "cmp.csv"
        assert main(["compare", "--n", "12", "--m", "12", "--r-list", "1",
                     "--p", "144", "--trials", "2", "--seed", "23",
                     "--out", str(out)]) == 0
        lines = read_lines(out)
        assert lines[0] == "r,p_over_n2,p_over_dr,alg,snr_db,iters"
        assert len(lines) == 3

    def test_rip_outputs(self, tmp_path):
        out = tmp_path / "rip.csv"
        pairs = tmp_path / "pairs.csv"
        assert main(["rip", "--kind", "gaussian", "--m", "8", "--n", "8",
                     "--p", "300", "--r", "2", "--samples", "50", "--pairs", "20",
                     "--seed", "29", "--out", str(out), "--pairs-out", str(pairs)]) == 0
        assert read_lines(out)[0] == "r,delta_hat,samples,seed"
        assert read_lines(pairs)[0] == "pair_id,lhs,rhs_sqrt2,rhs_1"
        assert len(read_lines(pairs)) == 21
