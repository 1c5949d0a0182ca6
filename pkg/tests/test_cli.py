import shutil
import subprocess

from filtered_ie23 import read_csv
from filtered_ie23.cli import main


class TestProblemsCommand:
    def test_lists_every_problem(self, capsys):
        assert main(["problems"]) == 0
        out = capsys.readouterr().out
        for name in ("model", "quasi-periodic", "model-analog", "van-der-pol"):
            assert name in out
        assert "dim 4" in out
        assert "reference only" in out   # van der Pol has no closed form


class TestSolveCommand:
    def test_adaptive_summary(self, capsys):
        code = main(["solve", "--problem", "model",
                     "--tol", "0.005", "--dt0", "0.01"])
        assert code == 0
        out = capsys.readouterr().out
        assert "197 accepted" in out
        assert "final error" in out

    def test_constant_method_with_csv_output(self, capsys, tmp_path):
        path = tmp_path / "run.csv"
        code = main(["solve", "--problem", "model", "--method", "ie-pre-post-3",
                     "--dt0", "0.05", "--out", str(path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "40 steps" in out
        assert "wrote 41 rows" in out
        traj = read_csv(path)
        assert len(traj) == 41
        assert traj.final_time() == 2.0

    def test_rk4_reference_method(self, capsys):
        assert main(["solve", "--problem", "model", "--method", "rk4-ref",
                     "--dt0", "0.01"]) == 0
        assert "200 steps" in capsys.readouterr().out

    def test_problem_without_exact_solution(self, capsys):
        code = main(["solve", "--problem", "van-der-pol", "--t1", "5.0",
                     "--dt0", "0.01"])
        assert code == 0
        out = capsys.readouterr().out
        assert "van-der-pol:" in out
        assert "final error" not in out

    def test_problem_parameters(self, capsys):
        assert main(["solve", "--problem", "van-der-pol", "--param", "mu=10",
                     "--t1", "2.0", "--dt0", "0.01"]) == 0

    def test_unsolvable_tolerance_is_a_solver_failure(self, capsys):
        code = main(["solve", "--problem", "model", "--tol", "1e-300",
                     "--dt0", "0.01"])
        assert code == 1
        assert "solver failure" in capsys.readouterr().err


class TestUsageErrors:
    def test_unknown_problem(self, capsys):
        assert main(["solve", "--problem", "lorenz"]) == 2
        assert "usage error" in capsys.readouterr().err

    def test_missing_subcommand(self, capsys):
        assert main([]) == 2

    def test_unknown_method_choice(self, capsys):
        assert main(["solve", "--problem", "model", "--method", "bogus"]) == 2

    def test_malformed_parameter(self, capsys):
        assert main(["solve", "--problem", "model", "--param", "lam"]) == 2
        assert main(["solve", "--problem", "model", "--param", "lam=abc"]) == 2

    def test_inverted_time_range(self, capsys):
        assert main(["solve", "--problem", "model",
                     "--t0", "2.0", "--t1", "1.0"]) == 2


class TestConvergenceCommand:
    def test_table_output(self, capsys):
        code = main(["convergence", "--problem", "model", "--steps", "40,80"])
        assert code == 0
        out = capsys.readouterr().out
        assert "Steps" in out and "Order" in out
        assert out.count("\n") == 4   # banner, header, two rows

    def test_rejects_unordered_steps(self, capsys):
        assert main(["convergence", "--problem", "model",
                     "--steps", "80,40"]) == 2


class TestCompareCommand:
    def test_equal_work_rows(self, capsys):
        code = main(["compare", "--problem", "model",
                     "--tol", "0.005", "--dt0", "0.01"])
        assert code == 0
        out = capsys.readouterr().out
        assert "filtered-ie23" in out
        assert "ie-pre-post-3" in out


def test_installed_console_script():
    exe = shutil.which("filtered-ie23")
    assert exe is not None, "console script should be on PATH after install"
    proc = subprocess.run([exe, "problems"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "model" in proc.stdout
