from __future__ import annotations

import json

import numpy as np
import pytest

from bozd.cli import EXIT_CONFIG, EXIT_OK, RunConfig, main
from bozd.errors import ConfigError
from bozd.rational import LaxOleinikPoint, lorentzian
from bozd.zd import u_zd


def _read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    config = json.loads(lines[0][len("# config: "):])
    columns = lines[1].lstrip("# ").split(",")
    return config, columns, np.loadtxt(path, delimiter=",", ndmin=2)


class TestRunConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown"):
            RunConfig.from_dict({"subcommand": "zd", "colour": "red"})

    def test_canonical_round_trip(self):
        cfg = RunConfig("zd", t=[1.0], x=[0.5], epsilons=[0.1])
        back = RunConfig.from_dict(json.loads(cfg.canonical()))
        assert back.canonical() == cfg.canonical()


class TestCommands:
    def test_zd_csv_and_header(self, tmp_path):
        code = main(["zd", "--fixture", "lorentzian", "--t", "1.0", "--x", "3.0", "3.2",
                     "--epsilon", "0.125", "-o", str(tmp_path)])
        assert code == EXIT_OK
        csv = next(tmp_path.glob("*.csv"))
        config, columns, rows = _read_csv(csv)
        assert config["subcommand"] == "zd"
        assert RunConfig.from_dict(config).epsilons == [0.125]
        col = columns.index("u_zd")
        assert rows[0, col] == pytest.approx(u_zd(lorentzian(), LaxOleinikPoint(1.0, 3.0), 0.125), abs=1e-15)

    def test_profile_only_ubar(self, tmp_path):
        code = main(["profile", "--fixture", "two-pole", "--t", "4.5", "--x-grid", "4", "5", "5",
                     "--only-ubar", "-o", str(tmp_path)])
        assert code == EXIT_OK
        _, columns, rows = _read_csv(tmp_path / "profile.csv")
        assert columns == ["t", "x", "ubar", "J"]
        assert rows.shape == (5, 4)

    def test_matsuno(self, tmp_path):
        assert main(["matsuno", "-N", "2", "--t", "0.5", "--x", "0.0", "-o", str(tmp_path)]) == EXIT_OK

    def test_bad_pole_is_config_error(self, tmp_path, capsys):
        data = tmp_path / "bad.json"
        data.write_text(json.dumps({"poles": [[2.0, -0.5]], "residues": [[1.0, 0.0]]}))
        code = main(["zd", "--data", str(data), "--t", "1", "--x", "0", "--epsilon", "0.1",
                     "-o", str(tmp_path)])
        assert code == EXIT_CONFIG
        assert "positive imaginary part" in capsys.readouterr().err

    def test_missing_data_file(self, tmp_path):
        code = main(["zd", "--data", str(tmp_path / "none.toml"), "--t", "1", "--x", "0",
                     "--epsilon", "0.1", "-o", str(tmp_path)])
        assert code == EXIT_CONFIG

    def test_toml_data(self, tmp_path):
        data = tmp_path / "data.toml"
        data.write_text("poles = [[0.0, 1.0]]\nresidues = [[0.0, -1.0]]\n")
        code = main(["zd", "--data", str(data), "--t", "1", "--x", "3.0", "--epsilon", "0.125",
                     "-o", str(tmp_path)])
        assert code == EXIT_OK

    def test_caustics_outputs(self, tmp_path):
        code = main(["caustics", "--fixture", "lorentzian", "--t-range", "0.2", "2",
                     "--x-range", "-2", "8", "--resolution", "30", "30", "--zeros-at", "1.0",
                     "-o", str(tmp_path)])
        assert code == EXIT_OK
        assert list(tmp_path.glob("*.svg"))

    def test_verify_suite_report(self, tmp_path):
        code = main(["verify", "--suite", "caustics", "-o", str(tmp_path)])
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["passed"] == (code == EXIT_OK)
        assert report["cases"][0]["suite"] == "caustics"
