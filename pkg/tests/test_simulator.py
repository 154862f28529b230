import logging

import pytest
from hypothesis import given, settings, strategies as st

from conftest import VIRGIN_U_MAX
from src.hybridplan.engine.billing import group_revenue
from src.hybridplan.engine.errors import InfeasibleConfigurationError, ScenarioError
from src.hybridplan.engine.planner import FlatRatePlan, HybridPlan, design_hybrid_plan
from src.hybridplan.engine.simulator import (MODE_HYBRID, MODE_LEGACY, Breakpoint, DemandScenario,
                                             SubscriberTrace, compare_modes, default_subscriber_ids,
                                             extreme_case_scenarios, run_hybrid, run_legacy,
                                             run_legacy_for_plan)
from src.hybridplan.engine.tbf import BucketSpec
from src.hybridplan.engine.units import DataVolume, Rate, TimeSpan, money_from_pounds

LOWER = FlatRatePlan(money_from_pounds("26.50"), Rate(50))
HIGHER = FlatRatePlan(money_from_pounds("39.00"), Rate(152))
PLAN = design_hybrid_plan(LOWER, HIGHER)
IDS = default_subscriber_ids(3)
MONTH = PLAN.month_length.value


def trace(sid, *points) -> SubscriberTrace:
    """Body zátěže jako dvojice (čas, rychlost)."""
    return SubscriberTrace(sid, tuple(Breakpoint(TimeSpan(t), Rate(r)) for t, r in points))


def scenario(rates, horizon=100.0, name="test") -> DemandScenario:
    return DemandScenario.constant(dict(zip(IDS, rates)), TimeSpan(horizon), name)


def granted(result):
    return [q.granted_volume.value for q in result.qos]


def excess(result):
    return [u.excess_volume.value for u in result.usage_records]


def test_extreme_case1_full_month():
    case1, _ = extreme_case_scenarios(PLAN)
    result = run_hybrid(PLAN, case1)
    assert result.mode == MODE_HYBRID
    assert result.horizon.value == MONTH
    assert excess(result) == pytest.approx([VIRGIN_U_MAX, 0, 0], rel=1e-9)
    assert result.qos[0].mean_granted_rate.value == pytest.approx(152)
    assert result.time_series[0].rates == pytest.approx((152, 0, 0))
    assert str(group_revenue(PLAN, result.usage_records)) == "92.000000"


def test_extreme_case2_full_month():
    _, case2 = extreme_case_scenarios(PLAN)
    result = run_hybrid(PLAN, case2)
    assert excess(result) == pytest.approx([1.728e6] * 3, rel=1e-6)
    assert sum(q.mean_granted_rate.value for q in result.qos) == pytest.approx(152)
    assert str(group_revenue(PLAN, result.usage_records)) == "79.745097"


def test_idle_scenario():
    result = run_hybrid(PLAN, DemandScenario.idle(IDS, TimeSpan(MONTH)))
    assert excess(result) == [0, 0, 0]
    assert granted(result) == [0, 0, 0]
    assert [q.satisfaction for q in result.qos] == [1.0, 1.0, 1.0]
    assert result.group.wasted_capacity_volume.value == 0
    assert str(group_revenue(PLAN, result.usage_records)) == "79.500000"


def test_legacy_wastes_what_hybrid_grants():
    demand = scenario([200, 0, 0], horizon=MONTH)
    legacy = run_legacy_for_plan(PLAN, demand)
    hybrid = run_hybrid(PLAN, demand)
    assert legacy.mode == MODE_LEGACY
    assert granted(legacy)[0] == pytest.approx(1.296e8)
    assert excess(legacy) == [0, 0, 0]
    assert legacy.qos[0].dropped_volume.value == pytest.approx(150 * MONTH)
    assert legacy.group.wasted_capacity_volume.value == pytest.approx(VIRGIN_U_MAX)
    assert compare_modes(hybrid, legacy)["sub-1"] == pytest.approx(VIRGIN_U_MAX)
    assert hybrid.group.wasted_capacity_volume.value == pytest.approx(0, abs=1e-3)


def test_modes_agree_when_demand_equals_guaranteed_rate():
    demand = scenario([50, 50, 50])
    hybrid = run_hybrid(PLAN, demand)
    legacy = run_legacy([LOWER] * 3, demand, link_rate=Rate(152))
    assert granted(hybrid) == pytest.approx(granted(legacy))
    assert excess(hybrid) == pytest.approx([0, 0, 0], abs=1e-9)


@st.composite
def random_scenarios(draw):
    traces = []
    for sid in IDS:
        starts = sorted(draw(st.sets(st.integers(1, 99), max_size=5)))
        rates = draw(st.lists(st.floats(0, 200), min_size=len(starts) + 1, max_size=len(starts) + 1))
        traces.append(trace(sid, *zip([0] + starts, rates)))
    return DemandScenario(tuple(traces), TimeSpan(100), "random")


@settings(max_examples=100, deadline=None)
@given(random_scenarios())
def test_hybrid_dominates_legacy(demand):
    hybrid = run_hybrid(PLAN, demand)
    legacy = run_legacy_for_plan(PLAN, demand)
    for sid, surplus in compare_modes(hybrid, legacy).items():
        assert surplus >= -1e-6, sid
    for q in hybrid.qos:
        # Garantovaná rychlost je zajištěna vždy
        legacy_q = legacy.qos_by_id()[q.subscriber_id]
        assert q.granted_volume.value >= legacy_q.granted_volume.value - 1e-6
        assert q.conformant_volume.value + q.excess_volume.value == pytest.approx(
            q.granted_volume.value, rel=1e-9, abs=1e-9)
        assert q.granted_volume.value <= q.offered_volume.value + 1e-6
    assert hybrid.group.granted_volume.value <= 152 * 100 * (1 + 1e-9)


def test_group_contract_holds_in_every_window():
    demand = scenario([304, 304, 304], horizon=10)
    result = run_hybrid(PLAN, demand, group_bucket=BucketSpec(Rate(152), DataVolume(500)))
    assert result.group.granted_volume.value == pytest.approx(500 + 152 * 10)
    assert sum(result.time_series[0].rates) == pytest.approx(652)

    boundaries = [0.0] + [segment.end for segment in result.time_series]
    cumulative = [0.0]
    for segment in result.time_series:
        cumulative.append(cumulative[-1] + sum(segment.rates) * (segment.end - segment.start))
    for i, start in enumerate(boundaries):
        for j in range(i + 1, len(boundaries)):
            volume = cumulative[j] - cumulative[i]
            assert volume <= 152 * (boundaries[j] - start) + 500 + 1e-6


def test_guaranteed_floor_and_decomposition():
    demand = DemandScenario((
        trace("sub-1", (0, 20), (30, 300)),
        trace("sub-2", (0, 120), (60, 10)),
        trace("sub-3", (0, 0), (10, 80)),
    ), TimeSpan(100), "mixed")
    result = run_hybrid(PLAN, demand)
    floors = [20 * 30 + 50 * 70, 50 * 60 + 10 * 40, 50 * 90]
    for q, floor in zip(result.qos, floors):
        assert q.granted_volume.value >= floor - 1e-6
        assert q.conformant_volume.value + q.excess_volume.value == pytest.approx(q.granted_volume.value)
    assert [segment.start for segment in result.time_series][:2] == [0, 10]


def test_breakpoint_schedule_changes_grants():
    demand = DemandScenario((
        trace("sub-1", (0, 0), (5, 304)),
        trace("sub-2", (0, 0)),
        trace("sub-3", (0, 0)),
    ), TimeSpan(10), "late")
    result = run_hybrid(PLAN, demand)
    assert [(s.start, s.end) for s in result.time_series] == [(0, 5), (5, 10)]
    assert result.time_series[0].rates == (0, 0, 0)
    assert result.time_series[1].rates == pytest.approx((152, 0, 0))
    assert excess(result) == pytest.approx([102 * 5, 0, 0])


def test_step_size_does_not_change_totals():
    demand = DemandScenario((
        trace("sub-1", (0, 100), (20, 10)),
        trace("sub-2", (0, 70), (40, 200)),
        trace("sub-3", (0, 5)),
    ), TimeSpan(60), "steps")
    coarse = run_hybrid(PLAN, demand, TimeSpan(1.0))
    fine = run_hybrid(PLAN, demand, TimeSpan(0.25))
    assert granted(coarse) == pytest.approx(granted(fine), rel=1e-9)
    assert excess(coarse) == pytest.approx(excess(fine), rel=1e-9, abs=1e-9)


def test_single_subscriber_cases_coincide():
    plan = design_hybrid_plan(LOWER, LOWER)
    case1, case2 = extreme_case_scenarios(plan, t_month=TimeSpan(100))
    first, second = run_hybrid(plan, case1), run_hybrid(plan, case2)
    assert granted(first) == granted(second)
    assert excess(first) == excess(second) == [0]


def test_off_grid_horizon_is_snapped_with_warning(caplog):
    demand = scenario([10, 10, 10], horizon=10.4)
    with caplog.at_level(logging.WARNING, logger="hybridplan.simulator"):
        result = run_hybrid(PLAN, demand)
    assert result.horizon.value == 10
    assert any("mřížce" in record.getMessage() for record in caplog.records)


@pytest.mark.parametrize("start, boundary", [(2.5, 3), (3.5, 4), (0.5, 1)])
def test_half_step_breakpoint_snaps_up(start, boundary):
    demand = DemandScenario((
        trace("sub-1", (0, 0), (start, 100)),
        trace("sub-2", (0, 0)),
        trace("sub-3", (0, 0)),
    ), TimeSpan(10), "half")
    result = run_hybrid(PLAN, demand)
    assert [(s.start, s.end) for s in result.time_series] == [(0, boundary), (boundary, 10)]


def test_legacy_burst_beats_hybrid_with_lower_bucket():
    # Plný TBS_L dovolí klasickému režimu v prvním kroku víc, než propustí skupinový bucket
    plan = HybridPlan(3, PLAN.base_price, PLAN.slope, Rate(50), DataVolume(100), group_rate=Rate(152))
    demand = scenario([200, 200, 200], horizon=1)
    hybrid, legacy = run_hybrid(plan, demand), run_legacy_for_plan(plan, demand)
    assert granted(legacy) == pytest.approx([150, 150, 150])
    assert granted(hybrid) == pytest.approx([152 / 3] * 3)
    surplus = compare_modes(hybrid, legacy)
    assert all(value == pytest.approx(152 / 3 - 150) for value in surplus.values())
    assert all(value < 0 for value in surplus.values())


def test_group_too_small_is_infeasible():
    plan = HybridPlan(4, PLAN.base_price, PLAN.slope, Rate(50), group_rate=Rate(152))
    demand = DemandScenario.idle(default_subscriber_ids(4), TimeSpan(10))
    with pytest.raises(InfeasibleConfigurationError) as info:
        run_hybrid(plan, demand)
    assert info.value.requirement == "group_rate"
    with pytest.raises(InfeasibleConfigurationError):
        run_legacy([LOWER] * 4, demand, link_rate=Rate(152))


def test_scenario_errors():
    with pytest.raises(ScenarioError):
        run_hybrid(PLAN, DemandScenario.idle(IDS[:2], TimeSpan(10)))
    with pytest.raises(ScenarioError):
        trace("a", (1, 10))
    with pytest.raises(ScenarioError):
        trace("a", (0, 10), (5, 20), (5, 30))
    with pytest.raises(ScenarioError):
        SubscriberTrace("a", ())
    with pytest.raises(ScenarioError):
        DemandScenario.idle(["a", "a", "b"], TimeSpan(10))
    with pytest.raises(ScenarioError):
        DemandScenario.idle(IDS, TimeSpan(0))
    with pytest.raises(ScenarioError):
        run_hybrid(PLAN, DemandScenario.idle(IDS, TimeSpan(10)), TimeSpan(0))
    with pytest.raises(ScenarioError):
        extreme_case_scenarios(PLAN, subscriber_ids=["a"])
