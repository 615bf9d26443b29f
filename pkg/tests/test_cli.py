import json

from conftest import cycle
from tourcert.cli import main
from tourcert.graph import format_edge_list, parse_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenerate:
    def test_emits_parseable_instance(self, capsys):
        code, out, _ = run(capsys, "generate", "--n", "12", "--seed", "3")
        assert code == 0
        g = parse_edge_list(out)
        assert g.n == 12

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, "generate", "--n", "10", "--seed", "7")
        _, b, _ = run(capsys, "generate", "--n", "10", "--seed", "7")
        assert a == b

    def test_writes_out_file(self, capsys, tmp_path):
        path = tmp_path / "g.txt"
        code, out, _ = run(
            capsys, "generate", "--n", "10", "--seed", "1", "--out", str(path)
        )
        assert code == 0 and out == ""
        parse_edge_list(path.read_text())

    def test_bad_n_is_usage_error(self, capsys):
        code, _, err = run(capsys, "generate", "--n", "4", "--seed", "0")
        assert code == 2
        assert "--n 4" in err


class TestPipelineCommands:
    def _instance(self, tmp_path, text=None):
        path = tmp_path / "g.txt"
        path.write_text(text or format_edge_list(cycle(6)))
        return str(path)

    def test_solve_schema(self, capsys, tmp_path):
        code, out, _ = run(capsys, "solve", "--input", self._instance(tmp_path))
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] == 6
        assert doc["value"] == "6"
        assert doc["eps"] == "0"
        assert all(len(entry) == 3 for entry in doc["x"])

    def test_tree_flags(self, capsys, tmp_path):
        code, out, _ = run(capsys, "tree", "--input", self._instance(tmp_path))
        assert code == 0
        doc = json.loads(out)
        assert doc["root"] == 0
        assert len(doc["parent"]) == 6
        assert set(doc["flags"]) == {
            "internal", "branch", "expensive", "heavy", "lp_satisfied"
        }

    def test_circulate_all_methods(self, capsys, tmp_path):
        path = self._instance(tmp_path)
        for method in ("x", "f", "best", "oracle", "half"):
            code, out, _ = run(
                capsys, "circulate", "--input", path, "--method", method
            )
            assert code == 0
            doc = json.loads(out)
            assert doc["total_cost"] == "0"

    def test_certify_exit_zero_and_ratio(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "certify", "--input", self._instance(tmp_path),
            "--root-term", "0",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["ratio"] == "4/3"
        assert doc["all_checks_pass"] is True

    def test_certify_bridge_exits_one(self, capsys, tmp_path):
        text = "6 7\n0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n"
        code, out, _ = run(
            capsys, "certify", "--input", self._instance(tmp_path, text)
        )
        assert code == 1
        assert json.loads(out)["all_checks_pass"] is False

    def test_missing_file_usage_error(self, capsys):
        code, _, err = run(capsys, "certify", "--input", "/no/such/file")
        assert code == 2
        assert "--input" in err

    def test_malformed_edge_list(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 1\nx y\n")
        code, _, err = run(capsys, "solve", "--input", str(path))
        assert code == 2

    def test_bad_c2(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "circulate", "--input", self._instance(tmp_path),
            "--method", "f", "--c2", "nope",
        )
        assert code == 2
        assert "--c2" in err


class TestSweepCommand:
    def test_csv_output(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--n", "12", "--count", "4", "--seed", "5"
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("instance,seed,n,m,eps")
        assert len(lines) == 5

    def test_json_output(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--n", "12", "--count", "2", "--seed", "5",
            "--format", "json",
        )
        assert code == 0
        docs = json.loads(out)
        assert len(docs) == 2
        assert all(d["all_checks_pass"] for d in docs)

    def test_plots_rendered(self, capsys, tmp_path):
        plot_dir = tmp_path / "figs"
        code, _, _ = run(
            capsys, "sweep", "--n", "12", "--count", "3", "--seed", "1",
            "--out", str(tmp_path / "s.csv"), "--plots", str(plot_dir),
        )
        assert code == 0
        assert (plot_dir / "ratio_hist.png").exists()
        assert (plot_dir / "ratio_vs_eps.png").exists()

    def test_bad_count(self, capsys):
        code, _, err = run(
            capsys, "sweep", "--n", "12", "--count", "0", "--seed", "1"
        )
        assert code == 2

    def test_unknown_subcommand_exits_two(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2
