import csv
import json
import os

import pytest

from plugins.documents import (PLAN_FORMAT, dumps, load_plan, load_results,
                               parse_plan_document, parse_results_document, plan_document,
                               read_json, results_document, time_series_path, write_json,
                               write_time_series_csv)
from plugins.plan_config import PlanToolConfig, load_config, scenario_from_dict
from src.hybridplan.engine.errors import ConfigurationError, DocumentIOError
from src.hybridplan.engine.planner import (FlatRatePlan, HybridPlan, SelectionPolicy, UMaxMode,
                                           design_hybrid_plan, plan_bounds)
from src.hybridplan.engine.simulator import extreme_case_scenarios, run_hybrid
from src.hybridplan.engine.units import DEFAULT_MONTH, DataVolume, Rate, TimeSpan, money_from_pounds

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DESIGN = {"n_policy": "max", "alpha_policy": "max", "u_max_mode": "approximate"}


@pytest.fixture
def plan_doc(virgin_plan, lower, higher):
    bounds = plan_bounds(lower, higher, virgin_plan.n_subscribers)
    return plan_document(virgin_plan, lower, higher, bounds, DESIGN)


@pytest.fixture
def short_results(virgin_plan):
    return [run_hybrid(virgin_plan, case) for case in extreme_case_scenarios(virgin_plan, TimeSpan(50))]


def test_plan_document_rewrites_identically(plan_doc, virgin_plan, tmp_path):
    path = write_json(str(tmp_path / "nested" / "plan.json"), plan_doc)
    plan, lower, higher, bounds = load_plan(path)
    assert plan == virgin_plan
    assert lower.token_bucket_size is None
    assert (bounds.n_low, bounds.n_high, bounds.n) == (2, 3, 3)
    assert dumps(plan_document(plan, lower, higher, bounds, DESIGN)) == dumps(plan_doc)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    assert '"base_price_gbp": "26.500000"' in text
    assert text.endswith("}\n")


def minimal_plan_document() -> dict:
    return {
        "format": PLAN_FORMAT,
        "plan": {"n_subscribers": 3, "base_price_gbp": "26.50",
                 "slope_gbp_per_mbit": 12.5 / 2.64384e8, "rate_mbps": 50},
        "lower": {"price_gbp": "26.50", "rate_mbps": 50},
        "higher": {"price_gbp": "39.00", "rate_mbps": 152},
    }


def test_hand_written_plan_without_bounds(tmp_path, virgin_plan):
    path = write_json(str(tmp_path / "plan.json"), minimal_plan_document())
    plan, lower, higher, bounds = load_plan(path)
    assert plan.month_length == DEFAULT_MONTH
    assert plan.u_max_mode is UMaxMode.APPROXIMATE
    assert plan.slope.value == pytest.approx(virgin_plan.slope.value, rel=1e-12)
    assert (bounds.n_low, bounds.n_high, bounds.n) == (2, 3, 3)
    assert bounds.u_max.value == pytest.approx(2.64384e8)
    assert bounds.alpha_max.value == pytest.approx(12.5 / 2.64384e8)


def test_plan_document_keeps_u_max_mode():
    lower = FlatRatePlan(money_from_pounds("26.50"), Rate(50), DataVolume(5e6))
    higher = FlatRatePlan(money_from_pounds("39.00"), Rate(152), DataVolume(1e6))
    plan = design_hybrid_plan(lower, higher, DEFAULT_MONTH, SelectionPolicy.maximum(),
                              SelectionPolicy.maximum(), UMaxMode.EXACT)
    bounds = plan_bounds(lower, higher, plan.n_subscribers, DEFAULT_MONTH, UMaxMode.EXACT)
    document = json.loads(dumps(plan_document(plan, lower, higher, bounds)))
    assert document["plan"]["u_max_mode"] == "exact"
    parsed, _, _, parsed_bounds = parse_plan_document(document)
    assert parsed == plan
    del document["bounds"]
    assert parse_plan_document(document)[3].u_max == parsed_bounds.u_max


def test_results_document_rewrites_identically(virgin_plan, short_results):
    document = json.loads(dumps(results_document(virgin_plan, short_results)))
    runs = parse_results_document(document, virgin_plan)
    assert [r.scenario_name for r in runs] == ["case1", "case2"]
    assert runs[0].usage_records[0].excess_volume == short_results[0].usage_records[0].excess_volume
    assert dumps(results_document(virgin_plan, runs)) == dumps(document)


def test_results_for_other_group_size_are_rejected(virgin_plan, short_results, lower):
    document = json.loads(dumps(results_document(virgin_plan, short_results)))
    smaller = HybridPlan(2, virgin_plan.base_price, virgin_plan.slope,
                         lower.token_generation_rate, group_rate=virgin_plan.group_rate)
    with pytest.raises(ConfigurationError):
        parse_results_document(document, smaller)
    document["runs"][0]["usage"] = document["runs"][0]["usage"][:2]
    document["plan"]["n_subscribers"] = None
    with pytest.raises(ConfigurationError):
        parse_results_document(document, virgin_plan)


def test_read_json_errors(tmp_path, plan_doc):
    with pytest.raises(DocumentIOError):
        read_json(str(tmp_path / "missing.json"), PLAN_FORMAT)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        read_json(str(broken), PLAN_FORMAT)
    path = write_json(str(tmp_path / "plan.json"), plan_doc)
    with pytest.raises(ConfigurationError):
        load_results(path)


def test_invalid_plan_document_is_configuration_error(plan_doc):
    plan_doc["plan"]["n_subscribers"] = 0
    with pytest.raises(ConfigurationError):
        parse_plan_document(plan_doc)
    plan_doc["plan"]["n_subscribers"] = 3
    del plan_doc["lower"]
    with pytest.raises(ConfigurationError):
        parse_plan_document(plan_doc)
    plan_doc["lower"] = {"price_gbp": "26.50", "rate_mbps": 50}
    plan_doc["plan"]["u_max_mode"] = "precise"
    with pytest.raises(ConfigurationError):
        parse_plan_document(plan_doc)


def test_time_series_csv(tmp_path, short_results):
    result = short_results[0]
    path = time_series_path(str(tmp_path / "results.json"), result)
    assert path.endswith("results_case1_hybrid.csv")
    write_time_series_csv(path, result)
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["start_s", "end_s", "sub-1_granted_mbps", "sub-2_granted_mbps", "sub-3_granted_mbps"]
    assert float(rows[1][1]) == 50.0
    assert float(rows[1][2]) == pytest.approx(152)


def test_config_from_dict(virgin_config):
    config = PlanToolConfig.from_dict(virgin_config).check()
    assert str(config.lower_plan().monthly_price) == "26.500000"
    assert config.t_month().value == 2_592_000
    assert config.output.path("plan").endswith(os.path.join("out", "plan.json"))
    assert PlanToolConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()


def test_config_validation_collects_field_errors(virgin_config):
    virgin_config["month_days"] = 27
    virgin_config["design"]["alpha_policy"] = "largest"
    virgin_config["simulation"].update({"step_s": 0, "mode": "fast", "builtin_cases": [3],
                                        "workers": 0})
    errors = PlanToolConfig.from_dict(virgin_config).validate()
    assert set(errors) == {"month_days", "design.alpha_policy", "simulation.step_s",
                           "simulation.mode", "simulation.builtin_cases", "simulation.workers"}
    with pytest.raises(ConfigurationError) as info:
        PlanToolConfig.from_dict(virgin_config).check()
    assert "simulation.mode" in info.value.errors
    with pytest.raises(ConfigurationError):
        PlanToolConfig.from_dict(["not", "a", "dict"])


def test_plan_pair_errors_surface_at_design_time(virgin_config):
    virgin_config["lower"]["price_gbp"] = "26.5000001"
    errors = PlanToolConfig.from_dict(virgin_config).validate()
    assert "lower" in errors


def test_duplicate_scenario_names(virgin_config):
    virgin_config["simulation"]["scenarios"] = [{"name": "idle"}, {"name": "idle"}]
    errors = PlanToolConfig.from_dict(virgin_config).validate()
    assert "simulation.scenarios[1]" in errors


def test_scenario_from_dict():
    idle = scenario_from_dict({"name": "quiet"}, ["a", "b"], TimeSpan(100))
    assert idle.subscriber_ids == ["a", "b"]
    assert idle.horizon.value == 100
    peak = scenario_from_dict({
        "name": "peak", "horizon_s": 60,
        "subscribers": [{"id": 7, "trace": [{"start_s": 0, "rate_mbps": 5},
                                            {"start_s": 30, "rate_mbps": 80}]}],
    })
    assert peak.subscriber_ids == ["7"]
    assert [bp.rate.value for bp in peak.traces[0].breakpoints] == [5, 80]


def test_bundled_config_loads():
    config = load_config(os.path.join(ROOT, "data", "virgin_media.json"))
    assert config.higher_plan().token_generation_rate.value == 152
    scenarios = config.user_scenarios(["sub-1", "sub-2", "sub-3"])
    assert [s.name for s in scenarios] == ["idle", "evening_peak"]
    assert scenarios[0].horizon.value == 2_592_000


def test_load_config_errors(tmp_path):
    with pytest.raises(DocumentIOError):
        load_config(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("[", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_config(str(broken))
