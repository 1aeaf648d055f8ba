"""CLI end-to-end tests and figure-data checks (small grids)."""

import csv
import json
import math

import numpy as np
import pytest

from semrd.cli import main
from semrd.closed_form import rate_classification, semantic_binary_rd
from semrd.figures import generate_figure
from semrd.prob import binary_entropy


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestFigureGeneration:
    def test_fig4_values(self, tmp_path):
        manifest = generate_figure("fig4", str(tmp_path), grid_n=51)
        rows = read_csv(tmp_path / "fig4_rate_curves.csv")
        assert len(rows) == 51
        by_d = {r["d"]: r for r in rows}
        assert float(by_d["0.1"]["rate_source_bits"]) == pytest.approx(
            1 - binary_entropy(0.1), abs=1e-8
        )
        assert float(by_d["0.2"]["rate_semantic_bits"]) == pytest.approx(
            semantic_binary_rd(0.1, 0.2), abs=1e-8
        )
        assert by_d["0.05"]["rate_semantic_bits"] == ""  # below the semantic floor
        assert manifest["figure"] == "fig4"

    def test_fig5_routing_and_convergence(self, tmp_path):
        manifest = generate_figure("fig5", str(tmp_path), grid_n=6)
        rows = read_csv(tmp_path / "fig5_surface.csv")
        assert len(rows) == 36
        assert all(r["method"] == "ba" for r in rows)  # background target out of region
        assert all(r["converged"] == "true" for r in rows)
        assert manifest["stats"]["failed_cells"] == 0
        # solver value separates from the naive formula extension
        assert manifest["stats"]["max_divergence_from_formula_extension_bits"] > 0.1

    def test_fig6_slice(self, tmp_path):
        generate_figure("fig6a", str(tmp_path), grid_n=7)
        rows = read_csv(tmp_path / "fig6a_curve.csv")
        assert len(rows) == 7
        assert all(float(r["d1"]) == 0.03 for r in rows)
        rates = [float(r["rate_bits"]) for r in rows]
        for lo, hi in zip(rates, rates[1:]):
            assert hi <= lo + 1e-6  # non-increasing in the semantic target

    def test_fig7_closed_form_cells(self, tmp_path):
        generate_figure("fig7", str(tmp_path), grid_n=6)
        rows = read_csv(tmp_path / "fig7_surface.csv")
        assert len(rows) == 36
        for r in rows:
            assert r["method"] == "closed_form"
            expect = rate_classification(
                0.25, 0.25, 8, float(r["d1"]), 0.5, float(r["ds"])
            )
            assert float(r["rate_bits"]) == pytest.approx(expect, abs=1e-8)

    def test_fig8_manifest_minimum(self, tmp_path):
        manifest = generate_figure("fig8", str(tmp_path), grid_n=8)
        assert manifest["stats"]["min_rate_nats"] == pytest.approx(0.2027, abs=0.005)
        rows = read_csv(tmp_path / "fig8_surface.csv")
        for r in rows[:5]:
            assert float(r["rate_bits"]) == pytest.approx(
                float(r["rate_nats"]) / math.log(2), abs=1e-8
            )

    def test_fig9_locus(self, tmp_path):
        generate_figure("fig9", str(tmp_path), grid_n=8)
        locus = read_csv(tmp_path / "fig9_equal_rate_locus.csv")
        for r in locus:
            assert float(r["ds"]) == pytest.approx(1.5 + 0.25 * float(r["d1"]), abs=1e-9)

    def test_unknown_figure(self, tmp_path):
        from semrd.errors import ConfigError

        with pytest.raises(ConfigError):
            generate_figure("fig99", str(tmp_path))

    def test_base_nats_column(self, tmp_path):
        generate_figure("fig4", str(tmp_path), grid_n=11, base="nats")
        rows = read_csv(tmp_path / "fig4_rate_curves.csv")
        assert "rate_source_nats" in rows[0]
        by_d = {r["d"]: r for r in rows}
        assert float(by_d["0.2"]["rate_source_nats"]) == pytest.approx(
            (1 - binary_entropy(0.2)) * math.log(2), abs=1e-8
        )


class TestCli:
    def test_figure_command(self, tmp_path):
        rc = main(["figure", "fig4", "--out", str(tmp_path), "--grid", "11"])
        assert rc == 0
        assert (tmp_path / "fig4_manifest.json").exists()

    def test_sweep_closed_form(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "kind": "binary_correlated",
                    "params": {"p": 0.25, "p1": 0.25, "p2": 0.25},
                    "grid": {"d1": [0.05], "d2": [0.1], "ds": [0.3]},
                }
            )
        )
        out = tmp_path / "out.csv"
        rc = main(["sweep", "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        assert len(rows) == 1
        assert rows[0]["method"] == "closed_form"
        assert float(rows[0]["rate"]) == pytest.approx(0.867163698, abs=1e-8)

    def test_sweep_auto_routes_out_of_region_to_solver(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "kind": "binary_correlated",
                    "params": {"p": 0.25, "p1": 0.25, "p2": 0.25},
                    "grid": {"d1": [0.03], "d2": [0.5], "ds": [0.4]},
                }
            )
        )
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        row = read_csv(out)[0]
        assert row["method"] == "ba"
        assert row["converged"] == "true"
        expect = binary_entropy(0.25) - binary_entropy(0.03)
        assert float(row["rate"]) == pytest.approx(expect, abs=1e-3)

    def test_sweep_gaussian_infeasible_flagged(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "kind": "gaussian",
                    "params": {
                        "var_s": 2, "var_x1": 2, "var_x2": 2, "var_y": 2,
                        "cov_sx1": 1, "cov_x1y": 1, "cov_x2y": 1,
                    },
                    "grid": {"d1": [0.5], "d2": [1.0], "ds": [1.0, 1.7]},
                }
            )
        )
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_csv(out)
        assert rows[0]["error"].startswith("infeasible")
        assert rows[0]["rate"] == ""
        assert float(rows[1]["rate"]) == pytest.approx(0.752038698, abs=1e-8)

    def test_usage_error_exit_code(self, capsys):
        assert main(["figure", "nope", "--out", "x"]) == 1
        assert main(["sweep", "--config", "/does/not/exist.json", "--out", "/tmp/x.csv"]) == 1

    def test_empty_grid_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "kind": "binary_correlated",
                    "params": {"p": 0.25, "p1": 0.25, "p2": 0.25},
                    "grid": {"d1": [], "d2": [0.1], "ds": [0.3]},
                }
            )
        )
        rc = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o.csv")])
        assert rc == 1
        assert "grid.d1" in capsys.readouterr().err

    def test_verify_channels_json(self, capsys):
        rc = main(["verify", "channels", "--json"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["suite"] == "channels"
        assert report["passed"] is True
        names = {c["name"] for c in report["checks"]}
        assert "correlated_rate_match" in names
        assert "q_nonnegativity_scan" in names

    def test_verify_failure_exit_code(self, monkeypatch, capsys):
        import semrd.verify as verify_mod

        def failing_suite():
            return verify_mod.SuiteReport(
                "channels", [verify_mod.Check("forced", passed=False, residual=1.0, tolerance=0.0)]
            )

        monkeypatch.setitem(verify_mod.SUITES, "channels", failing_suite)
        assert main(["verify", "channels"]) == 2


class TestReproducibility:
    def test_csv_bit_identical_across_runs(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        generate_figure("fig5", str(a), grid_n=5)
        generate_figure("fig5", str(b), grid_n=5)
        assert (a / "fig5_surface.csv").read_bytes() == (b / "fig5_surface.csv").read_bytes()
        assert (a / "fig5_manifest.json").read_bytes() == (b / "fig5_manifest.json").read_bytes()
