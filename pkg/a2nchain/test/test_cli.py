from pathlib import Path
from typing import Any, List

import orjson
import pytest
import yaml
from typer.testing import CliRunner

from a2nchain.cli.cli import app
from a2nchain.cli.utils import (
    load_run_config,
    parse_eta,
    parse_ints,
    parse_range,
    set_log_file_path,
)
from a2nchain.errors import InvalidConfigurationError
from a2nchain.types import BoundarySet

runner = CliRunner()


def _invoke(tmp_path: Path, args: List[str]) -> Any:
    out = tmp_path / "report.json"
    result = runner.invoke(
        app, args + ["--out", str(out), "--log-path", str(tmp_path / "test.log")]
    )
    doc = orjson.loads(out.read_bytes()) if out.exists() else None
    return result, doc


def test_verify(tmp_path: Path) -> None:
    result, doc = _invoke(
        tmp_path, ["verify", "--n", "1", "--sites", "2", "--samples", "2"]
    )
    assert result.exit_code == 0, result.output
    assert doc["passed"]
    assert set(doc["suites"]) == {"r_matrix", "k_matrix", "chain", "qgroup"}
    assert doc["params"] == {"n": 1, "sites": 2, "eta": [0.0, -0.1], "set": "I"}
    names = [r["name"] for r in doc["suites"]["r_matrix"]["residuals"]]
    assert "yang_baxter" in names


def test_verify_second_boundary_set(tmp_path: Path) -> None:
    result, doc = _invoke(
        tmp_path, ["verify", "--sites", "2", "--set", "II", "--samples", "2"]
    )
    assert result.exit_code == 0, result.output
    assert doc["params"]["set"] == "II"
    names = [r["name"] for r in doc["suites"]["k_matrix"]["residuals"]]
    assert "bybe" in names


def test_spectrum(tmp_path: Path) -> None:
    result, doc = _invoke(tmp_path, ["spectrum", "--n", "1", "--sites", "2"])
    assert result.exit_code == 0, result.output
    assert doc["passed"]
    assert doc["total_degeneracy"] == 9
    assert doc["decomposition_observed"] == doc["decomposition_predicted"]
    assert sorted(c["degeneracy"] for c in doc["clusters"]) == [1, 3, 5]


def test_spectrum_cap(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.setenv("A2NCHAIN_MAX_EIG_DIM", "8")
    result, doc = _invoke(tmp_path, ["spectrum", "--n", "1", "--sites", "2"])
    assert result.exit_code == 3
    assert doc is None


def test_bethe_single_sector_with_tables(tmp_path: Path) -> None:
    result, doc = _invoke(
        tmp_path,
        ["bethe", "--sites", "2", "--m", "1", "--starts", "4", "--check-tables"],
    )
    assert result.exit_code == 0, result.output
    [sector] = doc["sectors"]
    assert sector["m"] == [1]
    assert sector["dynkin"] == [2]
    assert sector["found"] == sector["expected"] == 1
    root = sector["solutions"][0]["roots"][0][0]
    assert abs(root[0] - 0.201347) < 1e-5
    assert len(doc["table_checks"]) == 3
    assert all(c["passed"] for c in doc["table_checks"])


def test_bethe_all_sectors(tmp_path: Path) -> None:
    csv = tmp_path / "roots.csv"
    result, doc = _invoke(
        tmp_path,
        ["bethe", "--sites", "2", "--set", "II", "--all", "--starts", "4"]
        + ["--csv", str(csv)],
    )
    assert result.exit_code == 0, result.output
    assert [s["m"] for s in doc["sectors"]] == [[0], [1], [2]]
    assert [s["found"] for s in doc["sectors"]] == [1, 2, 2]
    assert not doc["incomplete"]
    rows = csv.read_text().splitlines()
    assert rows[0] == "m1,a1,deg,mult,roots"
    assert len(rows) == 1 + 5


def test_bethe_from_config_file(tmp_path: Path) -> None:
    config = tmp_path / "run.yml"
    config.write_text(yaml.safe_dump({"sites": 2, "set": "II", "m": "1", "starts": 4}))
    result, doc = _invoke(tmp_path, ["bethe", "--config", str(config)])
    assert result.exit_code == 0, result.output
    assert doc["params"]["set"] == "II"
    assert doc["sectors"][0]["expected"] == 2


@pytest.mark.parametrize(
    "args",
    [
        ["bethe", "--sites", "2"],
        ["bethe", "--sites", "2", "--m", "3"],
        ["bethe", "--sites", "2", "--m", "1,1"],
        ["bethe", "--sites", "4", "--m", "1", "--check-tables"],
        ["spectrum", "--eta", "abc"],
        ["verify", "--tol", "-1"],
        ["completeness", "--n-range", "2..1"],
    ],
)
def test_bad_input_exits_with_configuration_code(tmp_path: Path, args) -> None:
    result, doc = _invoke(tmp_path, args)
    assert result.exit_code == 2
    assert doc is None


def test_completeness(tmp_path: Path) -> None:
    result, doc = _invoke(
        tmp_path,
        ["completeness", "--n-range", "1..1", "--sites-range", "2..2"]
        + ["--sets", "I,II", "--starts", "8"],
    )
    assert result.exit_code == 0, result.output
    assert doc["passed"]
    assert not doc["incomplete"]
    assert [c["params"]["set"] for c in doc["cells"]] == ["I", "II"]
    for cell in doc["cells"]:
        assert cell["status"] == "complete"
        assert cell["dimension_sum"] == {"value": 9, "expected": 9, "passed": True}
        assert all(c["passed"] for c in cell["cartan_checks"])
        assert cell["spectrum"]["reconciled"]


def test_utils_set_log_file_path() -> None:
    log_config = set_log_file_path("a2nchain/log_config.yml", "test.log")
    assert log_config["handlers"]["file"]["filename"] == "test.log"


def test_parse_eta() -> None:
    assert parse_eta("0,-0.1") == -0.1j
    assert parse_eta(" 0.3 , 0.2 ") == 0.3 + 0.2j
    for text in ["0.1", "a,b", "1,2,3", "inf,0"]:
        with pytest.raises(InvalidConfigurationError):
            parse_eta(text)


def test_parse_range_and_ints() -> None:
    assert parse_range("1..3") == (1, 3)
    assert parse_range("2") == (2, 2)
    assert parse_ints("2,1,0") == [2, 1, 0]
    for text in ["3..1", "1-3", ""]:
        with pytest.raises(InvalidConfigurationError):
            parse_range(text)
    with pytest.raises(InvalidConfigurationError):
        parse_ints("1,x")


def test_load_run_config(tmp_path: Path) -> None:
    path = tmp_path / "run.yml"
    path.write_text("n: 2\nsites: 3\nset: II\nn-range: 1..2\neta: '0.0,-0.2'\n")
    cfg = load_run_config(str(path), {"sites": 2, "seed": None})
    assert (cfg.n, cfg.sites) == (2, 2)
    assert cfg.boundary == BoundarySet.II
    assert cfg.n_range == (1, 2)
    assert cfg.params().eta == -0.2j
    assert cfg.settings().identity_tol == cfg.tol

    with pytest.raises(InvalidConfigurationError):
        load_run_config(str(tmp_path / "missing.yml"), {})
    path.write_text("- 1\n- 2\n")
    with pytest.raises(InvalidConfigurationError):
        load_run_config(str(path), {})
    with pytest.raises(InvalidConfigurationError):
        load_run_config(None, {"n": 0})
