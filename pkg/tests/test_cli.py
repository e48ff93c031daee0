"""Tests for the command line front end."""

import csv
import json

import pytest

from ergmlab.cli import CommandRegistry, get_command_registry, run
from ergmlab.cli.commands import SolveCommand
from ergmlab.cli.registry import int_list

EDGE_TRIANGLE = {"n": 5, "betas": [-0.2, 0.1], "templates": ["edge", "triangle"]}
SUPERCRITICAL = {"n": 20, "betas": [-1.5, 1.5], "templates": ["edge", "triangle"]}


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestRegistry:
    def test_builtin_commands(self):
        registry = get_command_registry()
        for name in ("solve", "classify", "sample", "exact", "stein", "cw", "decomp", "clt", "identities"):
            assert name in registry

    def test_duplicate_registration(self):
        registry = CommandRegistry()
        registry.register(SolveCommand())
        with pytest.raises(ValueError):
            registry.register(SolveCommand())
        assert len(registry) == 1

    def test_missing_command(self):
        registry = CommandRegistry()
        assert registry.get("solve") is None
        with pytest.raises(KeyError):
            registry.unregister("solve")

    def test_parser_follows_registration_order(self):
        registry = CommandRegistry()
        registry.register(SolveCommand())
        assert [c.name for c in registry.list_commands()] == ["solve"]
        args = registry.build_parser().parse_args(["solve", "--spec", "m.json"])
        assert args.command == "solve"

    def test_int_list(self):
        assert int_list("20,40, 80") == [20, 40, 80]


class TestExitCodes:
    def test_unknown_command(self):
        assert run(["frobnicate"]) == 2

    def test_missing_spec_file(self, tmp_path):
        assert run(["solve", "--spec", str(tmp_path / "absent.json")]) == 2

    def test_oversized_identity_templates(self):
        assert run(["identities", "--max-v", "20", "--trials", "1", "--seed", "1"]) == 2

    def test_supercritical_clt_fails_precondition(self, write_spec):
        path = write_spec("super.json", SUPERCRITICAL)
        assert run(["clt", "--spec", str(path), "--samples", "50", "--seed", "1"]) == 3

    def test_identities_pass(self, tmp_path):
        report = tmp_path / "ids.json"
        assert run(["identities", "--n", "7", "--trials", "20", "--seed", "1",
                    "--report", str(report)]) == 0
        assert json.loads(report.read_text())["result"]["violation_count"] == 0


class TestReports:
    def test_solve_to_stdout(self, write_spec, capsys):
        path = write_spec("fair.json", {"n": 10, "betas": [0.0], "templates": ["edge"]})
        assert run(["solve", "--spec", str(path), "--no-timestamp"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["subcommand"] == "solve"
        assert report["result"]["p"] == pytest.approx(0.5, abs=1e-10)
        assert "generated_at" not in report

    def test_classify(self, write_spec, tmp_path):
        path = write_spec("super.json", SUPERCRITICAL)
        report = tmp_path / "classify.json"
        assert run(["classify", "--spec", str(path), "--report", str(report)]) == 0
        body = json.loads(report.read_text())
        assert body["result"]["classification"] == "NotSubcritical"
        assert "host" in body

    def test_exact(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        report = tmp_path / "exact.json"
        assert run(["exact", "--spec", str(path), "--n", "4", "--report", str(report)]) == 0
        result = json.loads(report.read_text())["result"]
        assert result["Z"] > 0
        assert result["log_Z_pairwise"] == pytest.approx(result["log_Z"], abs=1e-12)
        assert result["dK"] is not None and result["mu"] > 0

    def test_seeded_reports_are_reproducible(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        texts = []
        for k in range(2):
            report = tmp_path / f"clt{k}.json"
            assert run(["clt", "--spec", str(path), "--samples", "200", "--seed", "13",
                        "--no-timestamp", "--report", str(report)]) == 0
            texts.append(report.read_bytes())
        assert texts[0] == texts[1]
        assert json.loads(texts[0])["seed"] == 13

    def test_generated_seed_is_recorded(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        report = tmp_path / "sample.json"
        assert run(["sample", "--spec", str(path), "--count", "5", "--report", str(report)]) == 0
        assert isinstance(json.loads(report.read_text())["seed"], int)


class TestTables:
    def test_sample_csv_and_graphs(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        out, graphs = tmp_path / "s.csv", tmp_path / "g.txt"
        code = run(["sample", "--spec", str(path), "--count", "12", "--burn", "2", "--homs",
                    "--seed", "3", "--out", str(out), "--graphs", str(graphs),
                    "--report", str(tmp_path / "r.json")])
        assert code == 0
        rows = read_csv(out)
        assert list(rows[0]) == ["sample_id", "edge_count", "hom_1", "hom_2"]
        assert len(rows) == 12
        assert all(int(r["hom_1"]) == 2 * int(r["edge_count"]) for r in rows)
        assert len(graphs.read_text().splitlines()) == 12

    def test_cftp_sampler(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        out = tmp_path / "c.csv"
        assert run(["sample", "--spec", str(path), "--n", "4", "--sampler", "cftp", "--count", "20",
                    "--seed", "3", "--out", str(out), "--report", str(tmp_path / "r.json")]) == 0
        assert len(read_csv(out)) == 20

    def test_clt_tables(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        out, hist = tmp_path / "clt.csv", tmp_path / "hist.csv"
        code = run(["clt", "--spec", str(path), "--ns", "5,6", "--samples", "300", "--seed", "2",
                    "--out", str(out), "--emit-hist", str(hist), "--bins", "10",
                    "--report", str(tmp_path / "r.json")])
        assert code == 0
        assert [r["n"] for r in read_csv(out)] == ["5", "6"]
        assert len(read_csv(hist)) == 20


class TestOtherCommands:
    def test_curie_weiss(self, tmp_path):
        report = tmp_path / "cw.json"
        assert run(["cw", "--N", "16,32,64", "--beta", "0.3", "--report", str(report)]) == 0
        body = json.loads(report.read_text())
        assert body["seed"] is None
        assert "dK_slope" in body["result"]

    def test_curie_weiss_stein(self, tmp_path):
        report = tmp_path / "cw.json"
        assert run(["cw", "--N", "20", "--beta", "0.4", "--stein", "--outer", "200",
                    "--seed", "5", "--report", str(report)]) == 0
        stein = json.loads(report.read_text())["result"]["stein"]
        assert stein["b"]["value"] == pytest.approx(stein["expected_b"], abs=1e-12)

    def test_decomp_exact(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        report = tmp_path / "d.json"
        assert run(["decomp", "--spec", str(path), "--exact-n", "4", "--report", str(report)]) == 0
        result = json.loads(report.read_text())["result"]
        assert result["max_abs_mean"] < 1e-9
        assert result["n"] == 4

    def test_stein(self, write_spec, tmp_path):
        path = write_spec("et.json", EDGE_TRIANGLE)
        report = tmp_path / "st.json"
        assert run(["stein", "--spec", str(path), "--n", "4", "--outer", "400", "--seed", "8",
                    "--report", str(report)]) == 0
        result = json.loads(report.read_text())["result"]
        assert result["exact"] is not None
        assert result["family"]["mu_source"] == "exact"
