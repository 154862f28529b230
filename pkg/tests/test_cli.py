import json

import pytest

from plugins.documents import PLAN_FORMAT
from plugins.plugin_manager import PluginManager
from src.hybridplan.main import (EXIT_CONFIGURATION, EXIT_IO, EXIT_OK, EXIT_VALIDATION, exit_code_for,
                                 main)
from src.hybridplan.engine.errors import (ConfigurationError, DocumentIOError, NoValidPlanError,
                                          PlanPairError, RequirementsNotMetError)


@pytest.fixture
def config_path(tmp_path, virgin_config):
    def write(config=None):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config or virgin_config), encoding="utf-8")
        return str(path)
    return write


def read(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def test_exit_codes():
    assert exit_code_for(NoValidPlanError("x")) == EXIT_VALIDATION
    assert exit_code_for(RequirementsNotMetError("x")) == EXIT_VALIDATION
    assert exit_code_for(PlanPairError("x")) == EXIT_VALIDATION
    assert exit_code_for(ConfigurationError("x")) == EXIT_CONFIGURATION
    assert exit_code_for(DocumentIOError("x")) == EXIT_IO
    assert exit_code_for(FileNotFoundError("x")) == EXIT_IO


def test_design_writes_plan_and_bounds_table(config_path, tmp_path, capsys):
    assert main(["design", "--config", config_path()]) == EXIT_OK
    document = read(tmp_path / "out" / "plan.json")
    assert document["plan"]["n_subscribers"] == 3
    assert document["plan"]["base_price_gbp"] == "26.500000"
    assert document["bounds"]["n_low"] == 2
    assert document["design"]["n_policy"] == "max"
    table = (tmp_path / "out" / "plan_bounds.txt").read_text(encoding="utf-8")
    assert table in capsys.readouterr().out


def test_design_with_empty_range_fails_validation(config_path, virgin_config, tmp_path):
    virgin_config["lower"].update({"price_gbp": "10", "rate_mbps": 100})
    virgin_config["higher"].update({"price_gbp": "50", "rate_mbps": 200})
    assert main(["design", "--config", config_path(virgin_config)]) == EXIT_VALIDATION
    assert not (tmp_path / "out" / "plan.json").exists()


def test_missing_config_is_io_error(tmp_path):
    assert main(["design", "--config", str(tmp_path / "nope.json")]) == EXIT_IO


def test_invalid_config_is_configuration_error(config_path, virgin_config, capsys):
    virgin_config["simulation"]["mode"] = "fast"
    assert main(["design", "--config", config_path(virgin_config)]) == EXIT_CONFIGURATION
    assert "simulation.mode" in capsys.readouterr().err


def test_simulate_single_builtin_case(config_path, tmp_path, capsys):
    path = config_path()
    assert main(["design", "--config", path]) == EXIT_OK
    assert main(["simulate", "--config", path, "--builtin-case", "1"]) == EXIT_OK
    document = read(tmp_path / "out" / "results.json")
    assert [run["scenario"] for run in document["runs"]] == ["case1"]
    assert document["runs"][0]["usage"][0]["excess_mbit"] == pytest.approx(2.64384e8)
    assert (tmp_path / "out" / "results_case1_hybrid.csv").exists()
    assert "case1 (hybrid)" in capsys.readouterr().out


def write_minimal_plan(tmp_path):
    path = tmp_path / "hand_plan.json"
    path.write_text(json.dumps({
        "format": PLAN_FORMAT,
        "plan": {"n_subscribers": 3, "base_price_gbp": "26.50",
                 "slope_gbp_per_mbit": 12.5 / 2.64384e8, "rate_mbps": 50, "group_rate_mbps": 152},
        "lower": {"price_gbp": "26.50", "rate_mbps": 50},
        "higher": {"price_gbp": "39.00", "rate_mbps": 152},
    }), encoding="utf-8")
    return str(path)


def test_simulate_hand_written_plan(config_path, tmp_path):
    plan = write_minimal_plan(tmp_path)
    assert main(["simulate", "--config", config_path(), "--plan", plan, "--builtin-case", "2"]) == EXIT_OK
    document = read(tmp_path / "out" / "results.json")
    assert [run["scenario"] for run in document["runs"]] == ["case2"]


@pytest.mark.parametrize("step", ["0", "-1"])
def test_simulate_rejects_non_positive_step(config_path, tmp_path, step):
    plan = write_minimal_plan(tmp_path)
    args = ["simulate", "--config", config_path(), "--plan", plan, "--builtin-case", "1", "--step", step]
    assert main(args) == EXIT_CONFIGURATION
    assert not (tmp_path / "out" / "results.json").exists()


def test_simulate_without_plan_is_io_error(config_path):
    assert main(["simulate", "--config", config_path()]) == EXIT_IO


def test_bill_rejects_results_of_other_group(config_path, tmp_path):
    path = config_path()
    assert main(["design", "--config", path]) == EXIT_OK
    assert main(["simulate", "--config", path, "--builtin-case", "2"]) == EXIT_OK
    results_path = tmp_path / "out" / "results.json"
    document = read(results_path)
    document["plan"]["n_subscribers"] = 2
    results_path.write_text(json.dumps(document), encoding="utf-8")
    assert main(["bill", "--config", path]) == EXIT_CONFIGURATION


def test_bill_extreme_cases(config_path, tmp_path):
    path = config_path()
    assert main(["design", "--config", path]) == EXIT_OK
    assert main(["simulate", "--config", path]) == EXIT_OK
    assert main(["bill", "--config", path]) == EXIT_OK
    bills = read(tmp_path / "out" / "bills.json")
    assert [run["revenue_gbp"] for run in bills["runs"]] == ["92.000000", "79.745097"]
    assert bills["runs"][0]["bills"][0]["total_gbp"] == "39.000000"
    assert all(run["passed"] for run in bills["runs"])
    assert (tmp_path / "out" / "bills.csv").exists()


@pytest.mark.parametrize("name", ["report.txt", "report.html", "report.json", "report.pdf"])
def test_report(config_path, tmp_path, name):
    out = tmp_path / "reports" / name
    assert main(["report", "--config", config_path(), "--out", str(out)]) == EXIT_OK
    bills = read(tmp_path / "out" / "bills.json")
    assert [run["revenue_gbp"] for run in bills["runs"]] == ["92.000000", "79.745097"]
    results = read(tmp_path / "out" / "results.json")
    assert [(run["scenario"], run["mode"]) for run in results["runs"]] == [
        ("case1", "hybrid"), ("case1", "legacy"), ("case2", "hybrid"), ("case2", "legacy")]

    if name.endswith(".pdf"):
        assert out.read_bytes().startswith(b"%PDF")
    elif name.endswith(".json"):
        summary = read(out)
        assert summary["passed"] is True
        assert summary["comparison"][0]["surplus_mbit"] == pytest.approx(2.64384e8)
    else:
        text = out.read_text(encoding="utf-8")
        assert "79.745097" in text
        assert "92.000000" in text


def test_plugin_manager_order():
    manager = PluginManager()
    manager.load_plugins()
    assert [plugin.name() for plugin in manager.plugins] == ["design", "simulate", "bill", "report"]
    assert manager.get_plugin("BillPlugin") is manager.get_plugin("bill")
    assert manager.get_plugin("missing") is None
    manager.unload_plugins()
    assert manager.plugins == []
