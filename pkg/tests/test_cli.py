from __future__ import annotations

import contextlib
import io
import math
from pathlib import Path
import tempfile
import unittest
from unittest import mock

from diracdecay.adapters.cli import main
from diracdecay.adapters.csv_output import read_csv_header, read_csv_rows
from diracdecay.application.scenarios import SCENARIOS, Scenario, Table
from diracdecay.domain.model import ModelParams


class CliTests(unittest.TestCase):
    def setUp(self) -> None:
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.out_dir = Path(directory.name)

    def run_cli(self, *argv: str, env: dict[str, str] | None = None) -> tuple[int, str]:
        buffer = io.StringIO()
        with mock.patch.dict("os.environ", env or {}, clear=True), contextlib.redirect_stdout(buffer):
            code = main([*argv, "--out", str(self.out_dir)])
        return code, buffer.getvalue()

    def test_survival_closed_form(self) -> None:
        code, output = self.run_cli("survival", "--method", "closed-form", "--t-max", "2", "--points", "21")
        self.assertEqual(code, 0)
        self.assertIn("[RUN START] command=survival", output)
        self.assertIn("[RESULT] status=ok exit_code=0", output)
        path = self.out_dir / "survival_closed-form.csv"
        header = read_csv_header(path)
        self.assertEqual(header["method"], "closed-form")
        self.assertEqual(header["regime"], "MASSLESS_NOCUT")
        columns, rows = read_csv_rows(path)
        self.assertEqual(columns, ["t", "re_phi", "im_phi", "p"])
        self.assertEqual(len(rows), 21)
        self.assertAlmostEqual(float(rows[-1][3]), math.exp(-4.0 * math.pi * 2.0), places=12)

    def test_spectral_survival_writes_components(self) -> None:
        code, _ = self.run_cli("survival", "--method", "spectral", "--lambda", "5", "--t-max", "5", "--points", "11")
        self.assertEqual(code, 0)
        columns, rows = read_csv_rows(self.out_dir / "survival_spectral.csv")
        self.assertEqual(
            columns, ["t", "re_phi", "im_phi", "p", "re_pole", "im_pole", "re_branch_cut", "im_branch_cut"]
        )
        self.assertEqual(len(rows), 11)
        for row in rows:
            re_phi, im_phi, _, re_pole, im_pole, re_cut, im_cut = (float(item) for item in row[1:])
            self.assertAlmostEqual(re_pole + re_cut, re_phi, places=12)
            self.assertAlmostEqual(im_pole + im_cut, im_phi, places=12)

    def test_survival_header_reruns_the_same_file(self) -> None:
        code, _ = self.run_cli("survival", "--lambda", "5", "--scheme", "trapezoid", "--t-max", "2", "--points", "11")
        self.assertEqual(code, 0)
        path = self.out_dir / "survival_volterra.csv"
        header = read_csv_header(path)
        self.assertEqual(header["scheme"], "trapezoid")
        self.assertEqual(header["points"], "11")
        self.assertGreater(float(header["dt"]), 0.0)
        _, first = read_csv_rows(path)

        code, _ = self.run_cli(
            "survival",
            "--omega0", header["omega0"],
            "--g", header["g"],
            "--m", header["m"],
            "--lambda", header["lambda"],
            "--hbar", header["hbar"],
            "--t-max", header["t_max"],
            "--points", header["points"],
            "--dt", header["dt"],
            "--scheme", header["scheme"],
        )
        self.assertEqual(code, 0)
        self.assertEqual(read_csv_rows(path)[1], first)

    def test_bromwich_header_echoes_contour_and_tolerance(self) -> None:
        code, _ = self.run_cli("survival", "--method", "bromwich", "--lambda", "5", "--t-max", "4", "--points", "5")
        self.assertEqual(code, 0)
        header = read_csv_header(self.out_dir / "survival_bromwich.csv")
        self.assertAlmostEqual(float(header["sigma"]), 0.25)
        self.assertEqual(float(header["tail_tolerance"]), 1e-6)
        self.assertLessEqual(float(header["error_estimate"]), 1e-6)

    def test_compare_header_echoes_each_method(self) -> None:
        code, _ = self.run_cli(
            "compare", "--methods", "volterra,discretized,series", "--lambda", "5",
            "--t-max", "1", "--points", "11", "--n-modes", "300",
        )
        self.assertEqual(code, 0)
        header = read_csv_header(self.out_dir / "compare.csv")
        self.assertEqual(header["discretized_n_modes"], "300")
        self.assertEqual(header["series_order"], "6")
        self.assertEqual(header["volterra_scheme"], "simpson")
        self.assertIn("volterra_dt", header)
        self.assertEqual(header["tolerance"], "0.001")
        self.assertEqual(header["t_max"], "1")

    def test_flags_override_config_file(self) -> None:
        config = self.out_dir / "run.conf"
        config.write_text("omega0=2.0\ng=0.5\n", encoding="utf-8")
        code, _ = self.run_cli(
            "survival", "--method", "closed-form", "--config", str(config), "--omega0", "1.0", "--points", "5"
        )
        self.assertEqual(code, 0)
        header = read_csv_header(self.out_dir / "survival_closed-form.csv")
        self.assertEqual(header["omega0"], "1.0")
        self.assertEqual(header["g"], "0.5")

    def test_invalid_params_exit_code(self) -> None:
        code, output = self.run_cli("survival", "--omega0", "-1")
        self.assertEqual(code, 3)
        self.assertIn("[ERROR] code=INVALID_PARAMS exit_code=3", output)

    def test_usage_error_exit_code(self) -> None:
        code, output = self.run_cli("teleport")
        self.assertEqual(code, 3)
        self.assertIn("[ERROR] code=INVALID_ARGUMENT exit_code=3", output)

    def test_regime_mismatch_exit_code(self) -> None:
        code, output = self.run_cli("survival", "--method", "closed-form", "--lambda", "5")
        self.assertEqual(code, 3)
        self.assertIn("code=REGIME_MISMATCH", output)

    def test_compare_needs_two_methods(self) -> None:
        code, output = self.run_cli("compare", "--methods", "volterra")
        self.assertEqual(code, 3)
        self.assertIn("code=METHOD_COUNT", output)

    def test_compare_writes_series_and_pairs(self) -> None:
        code, _ = self.run_cli(
            "compare", "--methods", "closed-form,bromwich", "--t-max", "2", "--points", "21"
        )
        self.assertEqual(code, 0)
        columns, rows = read_csv_rows(self.out_dir / "compare.csv")
        self.assertEqual(columns[0], "t")
        self.assertIn("p_bromwich", columns)
        self.assertEqual(len(rows), 21)
        _, pairs = read_csv_rows(self.out_dir / "compare_pairs.csv")
        self.assertEqual(len(pairs), 1)
        self.assertEqual(pairs[0][:2], ["closed-form", "bromwich"])
        self.assertEqual(pairs[0][3], "false")

    def test_flagged_comparison_fails_only_when_strict(self) -> None:
        argv = ("compare", "--methods", "series,closed-form", "--order", "2", "--t-max", "1", "--points", "11")
        code, output = self.run_cli(*argv)
        self.assertEqual(code, 0)
        self.assertIn("[FLAG] method_a=series method_b=closed-form", output)

        code, output = self.run_cli(*argv, env={"DIRACDECAY_FAIL_ON_FLAG": "1"})
        self.assertEqual(code, 2)
        self.assertIn("[RESULT] status=failed exit_code=2", output)

    def test_cutoff_poles(self) -> None:
        code, _ = self.run_cli("poles", "--lambda", "5")
        self.assertEqual(code, 0)
        header = read_csv_header(self.out_dir / "poles.csv")
        self.assertAlmostEqual(float(header["x1"]), 5.420441, places=5)
        self.assertAlmostEqual(float(header["x2"]), 5.929381, places=5)
        self.assertEqual(header["rabi"], "false")
        _, rows = read_csv_rows(self.out_dir / "poles.csv")
        self.assertEqual({row[0] for row in rows}, {"UPPER_IX1", "LOWER_IX2"})

    def test_markovian_bath_has_no_pole_search(self) -> None:
        code, output = self.run_cli("poles")
        self.assertEqual(code, 3)
        self.assertIn("code=REGIME_MISMATCH", output)

    def test_gksl_reference(self) -> None:
        code, _ = self.run_cli("markov", "--check", "gksl", "--gamma", "0.5", "--points", "41")
        self.assertEqual(code, 0)
        columns, rows = read_csv_rows(self.out_dir / "markov_gksl.csv")
        self.assertEqual(columns, ["t", "p_modes", "p_expm"])
        for t, modes, direct in ((float(a), float(b), float(c)) for a, b, c in rows):
            self.assertAlmostEqual(modes, math.exp(-0.5 * t), places=9)
            self.assertAlmostEqual(direct, math.exp(-0.5 * t), places=9)

    def test_run_scenario(self) -> None:
        scenario = Scenario(
            "tiny",
            "one row",
            ModelParams(omega0=1.0, g=1.0),
            ("closed-form",),
            lambda _: [Table("", ("x",), [[1.5]])],
        )
        with mock.patch.dict(SCENARIOS, {"tiny": scenario}):
            code, output = self.run_cli("run", "tiny")
        self.assertEqual(code, 0)
        self.assertIn("[WROTE] path=", output)
        header = read_csv_header(self.out_dir / "tiny.csv")
        self.assertEqual(header["scenario"], "tiny")
        self.assertEqual(read_csv_rows(self.out_dir / "tiny.csv"), (["x"], [["1.5"]]))


if __name__ == "__main__":
    unittest.main()
