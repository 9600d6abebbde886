import json

import numpy as np
import pytest

from markovdual.cli import main
from markovdual.models import rw_reflected_absorbed
from markovdual.scenarios import cyclic_generator
from markovdual.serialize import matrix_to_json, save_json


@pytest.fixture
def cyclic_file(tmp_path):
    return save_json(matrix_to_json(cyclic_generator()), tmp_path / "cyclic.json")


@pytest.fixture
def blocked_file(tmp_path):
    n = 5
    m = np.zeros((n, n))
    for x in range(1, n - 1):
        m[x, x - 1] = m[x, x + 1] = 1.0
        m[x, x] = -2.0
    m[0, 0], m[0, 1] = -1.0, 1.0
    m[n - 1, n - 2], m[n - 1, n - 1] = 1.0, -1.0
    return save_json({"n": n, "entries": m.tolist()}, tmp_path / "blocked.json")


class TestInspect:
    def test_cyclic_summary(self, cyclic_file, capsys):
        assert main(["inspect", str(cyclic_file)]) == 0
        out = capsys.readouterr().out
        assert "generator" in out
        assert "irreducible" in out
        assert "non-reversible" in out
        assert "-1.5" in out and "0.866" in out

    def test_json_output(self, cyclic_file, capsys):
        assert main(["inspect", str(cyclic_file), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["kind"] == "generator"
        assert doc["irreducible"] is True
        assert doc["reversible"] is False

    def test_zero_matrix_reducible(self, tmp_path, capsys):
        path = save_json({"n": 3, "entries": np.zeros((3, 3)).tolist()}, tmp_path / "zero.json")
        assert main(["inspect", str(path)]) == 0
        out = capsys.readouterr().out
        assert "generator" in out
        assert "reducible" in out

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"n": 2, "entries": [[0.0, 0.0]]}))
        assert main(["inspect", str(bad)]) == 2

    def test_missing_subcommand_prints_help(self, capsys):
        assert main([]) == 2


class TestSiegmundCommand:
    def test_blocked_walk(self, blocked_file, capsys):
        assert main(["siegmund", str(blocked_file)]) == 0
        out = capsys.readouterr().out
        assert "sub-generator" in out
        assert "monotone input: True" in out

    def test_json(self, blocked_file, capsys):
        assert main(["siegmund", str(blocked_file), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["monotone"] is True
        assert doc["residual"] <= 1e-12


class TestDualityCommands:
    def test_basis_on_rw54_pair(self, tmp_path, capsys):
        rw = rw_reflected_absorbed(4)
        lhat = save_json(matrix_to_json(rw.lhat), tmp_path / "lhat.json")
        l = save_json(matrix_to_json(rw.l), tmp_path / "l.json")
        assert main(["duality", "basis", str(lhat), str(l), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["dimension"] == 4
        assert doc["max_rank"] == 4
        assert doc["full_rank_duality_exists"] is True

    def test_sep_table_csv(self, tmp_path, capsys):
        csv = tmp_path / "table.csv"
        code = main(
            [
                "duality", "sep",
                "--alpha", "0", "--beta", "1", "--eps", "0", "--delta", "1",
                "--gamma", "2", "--csv", str(csv),
            ]
        )
        assert code == 0
        assert "classical" in capsys.readouterr().out
        table = np.loadtxt(csv, delimiter=",")
        assert table[1, 2] == pytest.approx(1.0)


class TestModelCommands:
    def test_rw54_artifacts(self, tmp_path, capsys):
        assert main(["model", "rw54", "--n", "5", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "rw54_L.json").exists()
        assert (tmp_path / "rw54_Lhat.json").exists()

    def test_rw6_json(self, capsys):
        assert main(["model", "rw6", "--n", "6", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["monotone"] is True

    def test_sep_vertex_count(self, capsys):
        assert main(["model", "sep", "--V", "2", "--gamma", "1", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["states"] == 4

    def test_sep_vertex_file(self, tmp_path, capsys):
        vf = tmp_path / "v.json"
        vf.write_text(json.dumps({"vertices": ["a", "b"], "p": [[0.0, 1.0], [1.0, 0.0]]}))
        assert main(["model", "sep", "--V", str(vf), "--gamma", "2", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["states"] == 9

    def test_bad_vertex_arg(self, capsys):
        assert main(["model", "sep", "--V", "nope.json", "--gamma", "1"]) == 2


class TestScenarioCommand:
    @pytest.mark.parametrize("name", ["cyclic3", "jordan4"])
    def test_single_scenario_passes(self, name, capsys):
        assert main(["scenario", name]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_all_scenarios_json(self, capsys):
        assert main(["scenario", "all", "--json"]) == 0
        docs = json.loads(capsys.readouterr().out)
        assert len(docs) == 6
        assert all(doc["pass"] for doc in docs)

    def test_unknown_scenario(self, capsys):
        assert main(["scenario", "does-not-exist"]) == 2

    def test_artifacts_written(self, tmp_path, capsys):
        assert main(["scenario", "cyclic3", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "cyclic3_duality.json").exists()
