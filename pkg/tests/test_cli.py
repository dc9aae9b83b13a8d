"""
Tests de l'interface en ligne de commande et des balayages
"""

import numpy as np
import pandas as pd
import pytest

from cli.cli_main import build_parser, main
from cli.scans import ScanSpec, gamma_grid, parse_reference, resolve_functional, run_scan
from data.storage import save_behavior
from scenario.behaviors import uniform_behavior
from utils.errors import DomainError


def _outputs(text):
    """Lignes `CLÉ=valeur` de la sortie standard"""
    values = {}
    for line in text.splitlines():
        key, sep, value = line.partition("=")
        if sep:
            values[key] = value
    return values


@pytest.fixture
def pr_file(tmp_path, pr_box):
    return save_behavior(pr_box, tmp_path / "pr.txt")


class TestReferences:

    def test_parse_reference(self):
        assert parse_reference("cglmp:d=4") == ("cglmp", {"d": "4"})
        assert parse_reference("chsh") == ("chsh", {})
        with pytest.raises(DomainError):
            parse_reference("cglmp:d")

    def test_resolve_functional(self):
        assert resolve_functional("cglmp:d=4").scenario.outputs == (4, 4)
        assert resolve_functional("mermin:N=4").scenario.parties == 4
        with pytest.raises(DomainError):
            resolve_functional("inconnue")
        with pytest.raises(DomainError):
            resolve_functional("cglmp:d=99")

    def test_scan_spec_validation(self):
        with pytest.raises(ValueError):
            ScanSpec(grid_min=1.0, grid_max=0.0)
        with pytest.raises(ValueError):
            ScanSpec(steps=1)

    def test_gamma_grid_contains_maximally_entangled(self):
        grid = gamma_grid(ScanSpec(steps=3))
        assert grid.size == 4
        assert np.any(np.isclose(grid, 3 ** -0.5))


class TestScans:

    def test_chsh_scan(self):
        table = run_scan(ScanSpec(functional="chsh", grid_min=0.0, grid_max=0.5, steps=6))
        assert list(table.columns) == ["value", "nl", "status"]
        np.testing.assert_allclose(table["nl"], table["value"] / 2, atol=1e-7)

    def test_infeasible_rows_are_marked(self):
        table = run_scan(ScanSpec(functional="chsh", grid_min=0.4, grid_max=0.7, steps=4))
        assert list(table["status"]) == ["optimal", "optimal", "infeasible", "infeasible"]
        assert table["nl"].isna().sum() == 2

    def test_parallel_rows_keep_order(self):
        spec = ScanSpec(functional="cglmp:d=3", grid_min=0.0, grid_max=0.5, steps=5)
        serial = run_scan(spec)
        parallel = run_scan(spec.model_copy(update={"jobs": 2}))
        pd.testing.assert_frame_equal(serial, parallel)


class TestCommands:

    def test_nl_pr_box(self, pr_file, tmp_path, capsys):
        code = main(["nl", str(pr_file), "--out", str(tmp_path / "closest.txt")])
        values = _outputs(capsys.readouterr().out)
        assert code == 0
        assert float(values["NL"]) == pytest.approx(0.25, abs=1e-7)
        assert float(values["CERTIFICATE"]) == pytest.approx(0.25, abs=1e-7)
        assert (tmp_path / "closest.txt").exists()

    def test_nl_local(self, tmp_path, chsh_scenario, capsys):
        path = save_behavior(uniform_behavior(chsh_scenario), tmp_path / "u.txt")
        assert main(["nl", str(path), "--out", str(tmp_path / "c.txt")]) == 0
        assert float(_outputs(capsys.readouterr().out)["NL"]) == pytest.approx(0.0, abs=1e-9)

    def test_quantum_then_nl(self, tmp_path, capsys):
        path = tmp_path / "tsirelson.txt"
        assert main(["quantum", "chsh-tsirelson", "--out", str(path)]) == 0
        values = _outputs(capsys.readouterr().out)
        assert float(values["VALUE"]) == pytest.approx((np.sqrt(2) - 1) / 2, abs=1e-9)

        assert main(["nl", str(path), "--out", str(tmp_path / "c.txt")]) == 0
        assert float(_outputs(capsys.readouterr().out)["NL"]) == pytest.approx(0.1035, abs=5e-4)

    def test_quantum_families(self, tmp_path, capsys):
        assert main(["quantum", "ghz-mermin", "N=3", "--out", str(tmp_path / "ghz.txt")]) == 0
        assert float(_outputs(capsys.readouterr().out)["VALUE"]) == pytest.approx(2.0, abs=1e-9)
        assert main(["quantum", "cglmp-gamma", "gamma=0.617", "--out", str(tmp_path / "g.txt")]) == 0
        assert float(_outputs(capsys.readouterr().out)["VALUE"]) == pytest.approx(0.2287, abs=1e-3)

    def test_unknown_family(self, capsys):
        assert main(["quantum", "inconnue"]) == 1
        assert "Famille quantique inconnue" in capsys.readouterr().err

    def test_parse_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("scenario 2; 2 2\n", encoding="utf-8")
        assert main(["nl", str(path)]) == 2
        assert "bad.txt:1" in capsys.readouterr().err

    def test_invalid_behavior_exit_code(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("scenario 1; 2; 2\n0 0 0.7\n1 1 1\n", encoding="utf-8")
        assert main(["nl", str(path)]) == 1

    def test_nl_at_value(self, tmp_path, capsys):
        out = tmp_path / "q.txt"
        assert main(["nl-at-value", "chsh", "0.2", "--out", str(out)]) == 0
        values = _outputs(capsys.readouterr().out)
        assert float(values["NL"]) == pytest.approx(0.1, abs=1e-7)
        assert out.exists()
        assert (tmp_path / "q_closest.txt").exists()

    def test_nl_at_value_infeasible(self, capsys):
        assert main(["nl-at-value", "chsh", "0.7"]) == 4
        assert "INFEASIBLE" in capsys.readouterr().err

    def test_content(self, pr_file, capsys):
        assert main(["content", str(pr_file), "--functional", "chsh"]) == 0
        values = _outputs(capsys.readouterr().out)
        assert float(values["CONTENT"]) == pytest.approx(1.0, abs=1e-9)
        assert float(values["BELL_LOWER_BOUND"]) == pytest.approx(1.0, abs=1e-9)

    def test_kl(self, tmp_path, chsh_scenario, capsys):
        path = save_behavior(uniform_behavior(chsh_scenario), tmp_path / "u.txt")
        assert main(["kl", str(path)]) == 0
        values = _outputs(capsys.readouterr().out)
        assert float(values["KL"]) == pytest.approx(0.0, abs=1e-9)
        assert float(values["PINSKER"]) == pytest.approx(0.0, abs=1e-9)

    def test_certificate(self, pr_file, tmp_path, capsys):
        out = tmp_path / "cert.txt"
        assert main(["certificate", str(pr_file), "--out", str(out)]) == 0
        assert out.read_text(encoding="utf-8").startswith("# value ")

    def test_scan_with_gnuplot(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        assert main(["scan", "chsh", "--max", "0.5", "--steps", "6", "--out", str(out), "--gnuplot"]) == 0
        table = pd.read_csv(out)
        assert len(table) == 6
        np.testing.assert_allclose(table["nl"], table["value"] / 2, atol=1e-7)
        script = (tmp_path / "scan.csv.gp").read_text(encoding="utf-8")
        assert "set datafile separator ','" in script
        assert "'scan.csv' using 1:2" in script

    def test_scan_is_reproducible(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scan", "cglmp:d=3", "--max", "0.5", "--steps", "4"]
        assert main(args + ["--out", str(first)]) == 0
        assert main(args + ["--out", str(second), "--jobs", "2"]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_gamma_scan(self, tmp_path, capsys):
        out = tmp_path / "gamma.csv"
        assert main(["gamma-scan", "--steps", "3", "--skip-kl", "--out", str(out)]) == 0
        table = pd.read_csv(out)
        assert list(table.columns) == [
            "gamma", "i_cglmp", "nl", "kl_min", "kl_min_raw", "kl_upper", "pinsker", "status"
        ]
        assert len(table) == 4
        assert table["nl"].iloc[0] == pytest.approx(0.0, abs=1e-9)
        assert (table["status"] == "optimal").all()

    def test_check_monotones(self, tmp_path, capsys):
        out = tmp_path / "trials.csv"
        assert main(["check-monotones", "--trials", "2", "--out", str(out)]) == 0
        assert len(pd.read_csv(out)) == 12
        assert "relabel: 2/2" in capsys.readouterr().out

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])
