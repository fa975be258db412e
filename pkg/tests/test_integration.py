"""Integration tests for the lingwalk CLI."""
import json
import pytest
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import main
from src.experiments import read_csv


def run_output(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, dict(line.split(": ", 1) for line in out.splitlines() if ": " in line)


class TestBuildAndRun:
    """build --emit followed by run --graph."""

    def test_emit_then_run(self, tmp_path, capsys):
        path = tmp_path / "eq4.json"
        assert main(["build", "--language", "eq", "--length", "4", "--emit", str(path)]) == 0
        assert json.loads(path.read_text())["steps"] == 3
        capsys.readouterr()

        code, fields = run_output(capsys, ["run", "--graph", str(path), "--word", "abbb"])
        assert code == 0
        assert float(fields["acceptance"]) == pytest.approx(9 / 16, abs=1e-9)
        assert fields["in_language"] == "false"

    def test_build_to_stdout(self, capsys):
        assert main(["build", "--language", "ab", "--mode", "sequential", "--length", "4"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["mode"] == "sequential"
        assert doc["language"] == "ab"

    def test_run_builds_walk(self, capsys):
        code, fields = run_output(capsys, ["run", "--language", "ab", "--mode", "sequential", "--word", "abab"])
        assert code == 0
        assert float(fields["acceptance"]) == pytest.approx(1.0, abs=1e-9)
        assert float(fields["fidelity"]) == pytest.approx(1.0, abs=1e-9)
        assert fields["in_language"] == "true"

    def test_run_complemented(self, capsys):
        code, fields = run_output(capsys, ["run", "--word", "aabb", "--complement"])
        assert code == 0
        assert float(fields["acceptance"]) == pytest.approx(0.0, abs=1e-9)

    def test_run_empty_word(self, capsys):
        code, fields = run_output(capsys, ["run", "--word", ""])
        assert code == 0
        assert float(fields["acceptance"]) == 1.0

    def test_word_language(self, capsys):
        code, fields = run_output(capsys, ["run", "--language", "word:abb", "--mode", "sequential", "--word", "abb"])
        assert code == 0
        assert float(fields["acceptance"]) == pytest.approx(1.0, abs=1e-9)


class TestExperiments:
    """Experiment subcommands write CSV and SVG."""

    def test_fig2_with_svg(self, tmp_path):
        out, svg = tmp_path / "fig2.csv", tmp_path / "fig2.svg"
        assert main(["fig2", "--count", "30", "--out", str(out), "--svg", str(svg)]) == 0
        experiment, header, rows = read_csv(out)
        assert experiment == "fig2"
        assert len(rows) == 30
        assert rows[17]["string"] == "aabb"
        assert svg.exists()

    def test_fig4_defaults_to_ab(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert main(["fig4", "--count", "20", "--out", str(out)]) == 0
        _, _, rows = read_csv(out)
        assert rows[19]["string"] == "abab"
        assert rows[19]["in_language"] == "true"
        assert float(rows[0]["acceptance"]) == pytest.approx(0.5, abs=1e-9)
        assert float(rows[19]["acceptance"]) == pytest.approx(1.0, abs=1e-9)

    def test_fig4_spatial_on_request(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert main(["fig4", "--count", "2", "--mode", "spatial", "--out", str(out)]) == 0
        _, _, rows = read_csv(out)
        assert float(rows[0]["acceptance"]) == pytest.approx(0.0, abs=1e-9)

    def test_compare(self, tmp_path):
        out, svg = tmp_path / "compare.csv", tmp_path / "compare.svg"
        assert main(["compare", "--out", str(out), "--svg", str(svg)]) == 0
        experiment, _, rows = read_csv(out)
        assert experiment == "compare"
        by_string = {row["string"]: row for row in rows}
        assert by_string["abab"]["same"] == "true"
        assert by_string["abba"]["same"] == "false"
        assert svg.exists()

    def test_byte_identical_reruns(self, tmp_path):
        paths = []
        for name in ("a", "b"):
            out, svg = tmp_path / f"{name}.csv", tmp_path / f"{name}.svg"
            assert main(["fig5", "--grid", "9", "--out", str(out), "--svg", str(svg)]) == 0
            paths.append((out.read_bytes(), svg.read_bytes()))
        assert paths[0] == paths[1]

    def test_bounds_resources_discriminate(self, tmp_path):
        assert main(["bounds", "--length", "6", "--out", str(tmp_path / "b.csv")]) == 0
        assert main(["resources", "--length", "6", "--out", str(tmp_path / "r.csv")]) == 0
        assert main(["discriminate", "--w1", "aabb", "--w2", "abbb", "--grid", "3",
                     "--out", str(tmp_path / "d.csv")]) == 0
        _, _, rows = read_csv(tmp_path / "d.csv")
        assert float(rows[0]["success"]) == pytest.approx(0.71875, abs=1e-9)

    def test_plot_subcommand(self, tmp_path):
        out = tmp_path / "r.csv"
        assert main(["resources", "--length", "4", "--out", str(out)]) == 0
        assert main(["plot", "--csv", str(out)]) == 0
        assert (tmp_path / "r.svg").exists()

    def test_default_output_dir(self, tmp_path, monkeypatch):
        from src.config import Config
        monkeypatch.setattr(Config, "OUTPUT_DIR", str(tmp_path / "results"))
        assert main(["resources", "--length", "2"]) == 0
        assert (tmp_path / "results" / "resources.csv").exists()


class TestExitCodes:
    """Validation errors exit with 2."""

    @pytest.mark.parametrize("argv", [
        ["bounds", "--length", "20"],
        ["fig5", "--base", "aab"],
        ["discriminate", "--w1", "ab", "--w2", "abb"],
        ["run", "--word", "abc"],
        ["build", "--language", "eq", "--length", "3"],
        ["build", "--language", "palindromes", "--length", "4"],
        ["build", "--language", "word:ab", "--length", "0"],
        ["fig2", "--count", "0"],
        ["fig2", "--mode", "diagonal"],
        ["compare", "--word", "aabb"],
        ["run", "--language", "eq", "--mode", "sequential", "--length", "8", "--word", "aabb"],
        ["nonsense"],
        [],
    ])
    def test_invalid_input(self, argv, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(argv) == 2

    def test_missing_graph_file(self, tmp_path):
        assert main(["run", "--graph", str(tmp_path / "absent.json"), "--word", "ab"]) == 2

    def test_help(self, capsys):
        assert main(["--help"]) == 0
        assert "discriminate" in capsys.readouterr().out

    def test_mode_choices_in_help(self, capsys):
        assert main(["fig4", "--help"]) == 0
        out = capsys.readouterr().out
        assert "{spatial,sequential}" in out
        assert "Mode." not in out
