import json

import numpy as np
import pytest
from click.testing import CliRunner

from fpbound.cli import main
from conftest import DATA, GOLDEN


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def pvalue_file(tmp_path):
    f = tmp_path / "p.csv"
    f.write_text("id,p\ng1,0.01\ng2,0.05\ng3,0.2\ng4,0.35\n")
    return str(f)


DEMO = [
    "--data", str(DATA / "demo_expression.csv"),
    "--labels", str(DATA / "demo_labels.csv"),
    "--chrom-col", "chrom",
]


class TestBoundCommand:
    def test_simes_worked_example(self, runner, pvalue_file):
        result = runner.invoke(main, ["bound", "--pvalues", pvalue_file,
                                      "--method", "simes", "--alpha", "0.4"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["method"] == "simes"
        assert report["selections"][0]["V"] == 2
        assert report["selections"][0]["size"] == 4

    def test_selection_by_ids(self, runner, pvalue_file):
        result = runner.invoke(main, ["bound", "--pvalues", pvalue_file,
                                      "--select-ids", "g1,g2", "--alpha", "0.4"])
        report = json.loads(result.output)
        assert report["selections"][0]["size"] == 2
        assert report["selections"][0]["indices"] == [1, 2]

    def test_unknown_id_is_usage_error(self, runner, pvalue_file):
        result = runner.invoke(main, ["bound", "--pvalues", pvalue_file,
                                      "--select-ids", "nope"])
        assert result.exit_code == 2
        assert "nope" in result.output

    def test_calibrated_requires_two_sample(self, runner, pvalue_file):
        result = runner.invoke(main, ["bound", "--pvalues", pvalue_file,
                                      "--method", "calibrated"])
        assert result.exit_code == 2
        assert "two-sample" in result.output

    def test_calibrated_on_demo_data(self, runner):
        result = runner.invoke(main, ["bound", *DEMO, "--method", "calibrated",
                                      "--template", "linear", "--B", "50",
                                      "--alpha", "0.1", "--seed", "5",
                                      "--bh-level", "0.05"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert "lambda" in report
        assert report["selections"][0]["size"] == 26
        assert report["provenance"]["B"] == 50

    def test_volcano_style_selection(self, runner):
        result = runner.invoke(main, ["bound", *DEMO, "--alpha", "0.1",
                                      "--bh-level", "0.05",
                                      "--fc-above", "0.2", "--fc-below", "-0.2"])
        report = json.loads(result.output)
        sel = report["selections"][0]
        assert sel["size"] == 21
        assert "bh:0.05" in sel["name"] and "logfc>0.2" in sel["name"]

    def test_malformed_pvalue_file(self, runner, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("id,p\n" + "".join(f"g{i},0.5\n" for i in range(5)) + "gX,1.2\n")
        result = runner.invoke(main, ["bound", "--pvalues", str(f)])
        assert result.exit_code != 0
        assert "line 7" in str(result.output) + str(result.exception)

    def test_no_input_is_usage_error(self, runner):
        result = runner.invoke(main, ["bound"])
        assert result.exit_code == 2


class TestEnvelopeCommand:
    def test_rows_match_module(self, runner, pvalue_file):
        result = runner.invoke(main, ["envelope", "--pvalues", pvalue_file,
                                      "--method", "simes", "--alpha", "0.4"])
        report = json.loads(result.output)
        env = report["envelope"]
        assert env["k"] == [1, 2, 3, 4]
        assert env["tp_lower"][3] == 2
        assert env["fdp_upper"][3] == 0.5

    def test_csv_output(self, runner, pvalue_file, tmp_path):
        csv_path = tmp_path / "env.csv"
        result = runner.invoke(main, ["envelope", "--pvalues", pvalue_file,
                                      "--alpha", "0.4", "--csv", str(csv_path)])
        assert result.exit_code == 0
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "k,V,tp_lower,fdp_upper"
        assert len(lines) == 5


class TestCalibrateCommand:
    def test_reports_lambda_and_pivots(self, runner):
        result = runner.invoke(main, ["calibrate", *DEMO, "--template", "beta",
                                      "--B", "40", "--alpha", "0.1", "--seed", "2"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert 0 <= report["lambda"] <= 1
        assert len(report["calibration"]["pivots"]) == 40
        assert report["calibration"]["order_index"] == 5


class TestSpatialCommand:
    def test_flat_family(self, runner):
        result = runner.invoke(main, ["spatial", *DEMO, "--chrom-col", "chrom",
                                      "--segment-size", "10", "--alpha", "0.1",
                                      "--select-indices",
                                      ",".join(str(i) for i in range(1, 21))])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["spatial"]["tree"] is False
        assert len(report["spatial"]["nodes"]) == 12
        assert [c["m"] for c in report["spatial"]["chromosomes"]] == [60, 60]
        assert 0 <= report["selections"][0]["V"] <= 20

    def test_tree_family(self, runner):
        result = runner.invoke(main, ["spatial", *DEMO, "--chrom-col", "chrom",
                                      "--segment-size", "10", "--tree",
                                      "--alpha", "0.1",
                                      "--select-indices",
                                      ",".join(str(i) for i in range(1, 41))])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["spatial"]["tree"] is True
        leaves = [n for n in report["spatial"]["nodes"] if n["leaf"]]
        assert len(leaves) == 12
        assert len(report["spatial"]["nodes"]) == 22  # 11 per chromosome
        assert report["method"].startswith("spatial-tree")

    def test_markov_budget_flag(self, runner):
        result = runner.invoke(main, ["spatial", *DEMO, "--budget", "markov:0.01",
                                      "--segment-size", "20", "--alpha", "0.1"])
        assert result.exit_code == 0, result.output

    def test_bad_budget(self, runner):
        result = runner.invoke(main, ["spatial", *DEMO, "--budget", "bogus"])
        assert result.exit_code == 2


class TestSimulateCommand:
    def test_bonferroni_coverage(self, runner):
        result = runner.invoke(main, ["simulate", "--scenario", "full_null_iid",
                                      "--method", "bonf", "--k0", "1", "--m", "500",
                                      "--reps", "2000", "--alpha", "0.05", "--seed", "1"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        coverage = report["simulation"]["coverage"]
        assert abs(coverage - (1 - 0.05 / 500) ** 500) < 0.02

    def test_naive_demo(self, runner):
        result = runner.invoke(main, ["simulate", "--method", "naive", "--k0", "5",
                                      "--s0", "10", "--m", "500", "--reps", "2000",
                                      "--alpha", "0.05", "--seed", "1"])
        report = json.loads(result.output)
        assert report["simulation"]["coverage"] < 0.02
        assert report["simulation"]["analytic_coverage"] == pytest.approx(0.00495, abs=2e-4)

    def test_calibrated_needs_two_sample_scenario(self, runner):
        result = runner.invoke(main, ["simulate", "--method", "calibrated",
                                      "--scenario", "full_null_iid"])
        assert result.exit_code == 2


class TestDeterminism:
    def test_byte_identical_reports(self, runner, tmp_path):
        args = ["bound", *DEMO, "--method", "calibrated", "--template", "beta",
                "--B", "30", "--alpha", "0.1", "--seed", "42", "--select-top", "25"]
        out1 = tmp_path / "r1.json"
        out2 = tmp_path / "r2.json"
        assert runner.invoke(main, args + ["--out", str(out1)]).exit_code == 0
        assert runner.invoke(main, args + ["--out", str(out2)]).exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_golden_report(self, runner, tmp_path):
        out = tmp_path / "report.json"
        args = ["bound", *DEMO, "--method", "calibrated", "--template", "linear",
                "--B", "100", "--alpha", "0.1", "--seed", "2024",
                "--bh-level", "0.05", "--fc-above", "0.2", "--fc-below", "-0.2",
                "--out", str(out)]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        golden = GOLDEN / "demo_volcano_calibrated_linear.json"
        assert out.read_bytes() == golden.read_bytes()


class TestReportSchema:
    def test_all_report_types_validate(self, runner, pvalue_file, tmp_path):
        import jsonschema

        from fpbound.report import REPORT_SCHEMA

        commands = [
            ["bound", "--pvalues", pvalue_file, "--alpha", "0.4"],
            ["envelope", "--pvalues", pvalue_file, "--alpha", "0.4"],
            ["bound", *DEMO, "--method", "calibrated", "--B", "30", "--alpha", "0.1"],
            ["calibrate", *DEMO, "--B", "30", "--alpha", "0.1"],
            ["spatial", *DEMO, "--segment-size", "20", "--alpha", "0.1"],
            ["simulate", "--method", "simes", "--m", "50", "--reps", "50"],
        ]
        for args in commands:
            result = runner.invoke(main, args)
            assert result.exit_code == 0, (args, result.output)
            jsonschema.validate(json.loads(result.output), REPORT_SCHEMA)
