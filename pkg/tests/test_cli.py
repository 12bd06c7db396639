import json

import pytest

from monvar.cli import main


@pytest.fixture
def power_system(tmp_path):
    path = tmp_path / "power.ids"
    path.write_text("x = x^3\n")
    return str(path)


@pytest.fixture
def class_system(tmp_path):
    path = tmp_path / "classes.ids"
    path.write_text("# two-element classes\nxyxyx = yxyxx\nxyyxx = yxxyx\n")
    return str(path)


@pytest.fixture
def pentagon_file(tmp_path):
    path = tmp_path / "n5.json"
    path.write_text(
        json.dumps(
            {
                "elements": ["0", "a", "b", "c", "1"],
                "covers": [["0", "a"], ["a", "c"], ["c", "1"], ["0", "b"], ["b", "1"]],
            }
        )
    )
    return str(path)


class TestDeriveCommand:
    def test_proved(self, power_system, capsys):
        code = main(
            ["derive", "--system", power_system, "--lhs", "x^9yx^3", "--rhs", "x^7yx^5", "--max-len", "13"]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert out.startswith("Proved (2 steps)")
        assert "start: x^9yx^3" in out
        assert "-> x^7yx^5" in out

    def test_not_found(self, power_system, capsys):
        code = main(["derive", "--system", power_system, "--lhs", "x", "--rhs", "x^2", "--max-len", "9"])
        assert code == 1
        assert "NotFoundWithinBounds" in capsys.readouterr().out

    def test_bad_word_is_an_error(self, power_system, capsys):
        code = main(["derive", "--system", power_system, "--lhs", "x^0", "--rhs", "x"])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_file_is_an_error(self, capsys):
        code = main(["derive", "--system", "/nonexistent.ids", "--lhs", "x", "--rhs", "x"])
        assert code == 2


class TestClassCommand:
    def test_complete_class(self, class_system, capsys):
        code = main(["class", "--system", class_system, "--word", "xyxyx"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.startswith("Complete: 2 words")
        assert "xyxyx" in out and "yxyx^2" in out

    def test_cap_exceeded(self, power_system, capsys):
        code = main(["class", "--system", power_system, "--word", "x", "--max-len", "7"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.startswith("CapExceeded")


class TestVerdictCommands:
    def test_satisfies_builtin(self, capsys):
        assert main(["satisfies", "--variety", "LRB", "--lhs", "xyxy", "--rhs", "xyyx"]) == 0
        assert capsys.readouterr().out.strip() == "Yes"

    def test_satisfies_join_no(self, capsys):
        assert main(["satisfies", "--variety", "join(C, LRB)", "--lhs", "x^2y^2", "--rhs", "y^2x^2"]) == 0
        assert capsys.readouterr().out.strip() == "No"

    def test_satisfies_unknown(self, capsys):
        assert main(["satisfies", "--variety", "MON", "--lhs", "xy", "--rhs", "yx"]) == 0
        assert capsys.readouterr().out.strip() == "Unknown (bounds)"

    def test_isoterm_with_file_reference(self, class_system, capsys):
        code = main(["isoterm", "--variety", f"join(LRB, @{class_system})", "--word", "yxyxx"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "Yes"

    def test_bounds_flags_reach_the_query(self, class_system, capsys):
        # a depth cap of 1 leaves the class exploration unsaturated, so the
        # join cannot be decided
        code = main(
            ["isoterm", "--variety", f"join(LRB, @{class_system})", "--word", "yxyxx", "--max-depth", "1"]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "Unknown (composition)"
        code = main(
            ["satisfies", "--variety", f"@{class_system}", "--lhs", "xyxyx", "--rhs", "yxxyx", "--max-depth", "1"]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "Unknown (bounds)"

    def test_bad_variety_expression(self, capsys):
        assert main(["isoterm", "--variety", "nope", "--word", "x"]) == 2


class TestLatticeCommand:
    def test_single_query(self, pentagon_file, capsys):
        code = main(["lattice", "--file", pentagon_file, "--element", "b", "--property", "modular"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "false"

    def test_table(self, pentagon_file, capsys):
        code = main(["lattice", "--file", pentagon_file, "--table"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines()[0].startswith("element")
        assert len(out.splitlines()) == 6

    def test_csv_rows(self, pentagon_file, capsys):
        code = main(["lattice", "--file", pentagon_file, "--csv"])
        out = capsys.readouterr().out
        assert code == 0
        assert "b,modular,false" in out.splitlines()
        assert "0,neutral,true" in out.splitlines()

    def test_implications(self, pentagon_file, capsys):
        code = main(["lattice", "--file", pentagon_file, "--implications"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "no violations"


class TestVerifyCommand:
    def test_single_scenario(self, tmp_path, capsys):
        report_path = tmp_path / "report.txt"
        code = main(["verify", "S1", "--report", str(report_path)])
        out = capsys.readouterr().out
        assert code == 0
        assert "SCENARIO S1" in out and "STATUS: PASS" in out
        written = report_path.read_text()
        assert "SCENARIO S1" in written and "STATUS: PASS" in written
        assert "CONCLUSION" in written

    def test_s3_passes_with_assumptions(self, capsys):
        code = main(["verify", "S3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "STATUS: PASS_WITH_ASSUMPTIONS" in out
        assert sum(1 for line in out.splitlines() if line.endswith("ASSUMED")) == 1
