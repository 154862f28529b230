"""
Příkaz simulate: spustí vestavěné krajní případy a uživatelské scénáře
v hybridním a/nebo klasickém režimu a zapíše výsledkový dokument.
"""

import argparse
import logging
from typing import List

from plugins.documents import (results_document, time_series_path, write_json,
                               write_time_series_csv)
from plugins.global_context import get_config, global_context, resolve_plan
from plugins.plan_config import MODE_BOTH, VALID_CASES, VALID_MODES
from plugins.plugin_base import PluginBase
from src.hybridplan.engine.errors import ConfigurationError
from src.hybridplan.engine.planner import HybridPlan
from src.hybridplan.engine.simulator import (MODE_HYBRID, MODE_LEGACY, DemandScenario,
                                             SimulationResult, default_subscriber_ids,
                                             extreme_case_scenarios, run_hybrid,
                                             run_legacy_for_plan)
from src.hybridplan.engine.units import TimeSpan
from src.hybridplan.utils.thread_worker import ThreadPool

logger = logging.getLogger("hybridplan.simulate")


def build_scenarios(plan: HybridPlan, cases: List[int], user_scenarios: bool) -> List[DemandScenario]:
    """Scénáře v pořadí: vestavěné případy, pak scénáře z konfigurace."""
    config = get_config()
    ids = default_subscriber_ids(plan.n_subscribers)
    extreme = extreme_case_scenarios(plan, subscriber_ids=ids)
    scenarios = [extreme[case - 1] for case in cases]
    if user_scenarios:
        scenarios += config.user_scenarios(ids)
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ConfigurationError(f"Názvy scénářů se opakují: {names}")
    return scenarios


def simulate(plan: HybridPlan, scenarios: List[DemandScenario], mode: str, step: TimeSpan,
             workers: int) -> List[SimulationResult]:
    """
    Spustí běhy na thread poolu.

    Returns:
        Výsledky v pořadí scénářů; u režimu both hybridní běh před klasickým
    """
    pool = ThreadPool(max_threads=workers)
    for scenario in scenarios:
        if mode in (MODE_HYBRID, MODE_BOTH):
            pool.add_task(run_hybrid, plan, scenario, step, name=f"{scenario.name}/{MODE_HYBRID}")
        if mode in (MODE_LEGACY, MODE_BOTH):
            pool.add_task(run_legacy_for_plan, plan, scenario, step,
                          name=f"{scenario.name}/{MODE_LEGACY}")
    return pool.wait_for_all()


class SimulatePlugin(PluginBase):
    def name(self) -> str:
        return "simulate"

    def description(self) -> str:
        return "Simuluje skupinu odběratelů po dobu účetního měsíce"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--plan", help="Plánový dokument (výchozí z konfigurace)")
        parser.add_argument("--out", help="Cesta k výsledkovému dokumentu (JSON)")
        parser.add_argument("--step", type=float, help="Krok simulace v sekundách")
        parser.add_argument("--mode", choices=VALID_MODES, help="Režim simulace")
        parser.add_argument("--builtin-case", type=int, choices=VALID_CASES,
                            help="Spustí pouze vybraný vestavěný krajní případ")

    def execute(self, data):
        config = get_config()
        plan, _, _, _ = resolve_plan(getattr(data, "plan", None))

        step_s = getattr(data, "step", None)
        if step_s is None:
            step_s = config.simulation.step_s
        if step_s <= 0:
            raise ConfigurationError("Krok simulace musí být kladný")
        mode = getattr(data, "mode", None) or config.simulation.mode
        case = getattr(data, "builtin_case", None)
        if case is not None:
            scenarios = build_scenarios(plan, [case], user_scenarios=False)
        else:
            scenarios = build_scenarios(plan, list(config.simulation.builtin_cases), user_scenarios=True)
        if not scenarios:
            raise ConfigurationError("Není co simulovat: žádný vestavěný případ ani scénář")

        logger.info(f"Simuluji {len(scenarios)} scénářů v režimu {mode}, krok {step_s:g} s")
        results = simulate(plan, scenarios, mode, TimeSpan(step_s), config.simulation.workers)
        global_context["results"] = results

        path = getattr(data, "out", None) or config.output.path("results")
        write_json(path, results_document(plan, results))
        for result in results:
            write_time_series_csv(time_series_path(path, result), result)

        for result in results:
            usage = ", ".join(f"{u.subscriber_id}: {u.excess_volume.value:.6g}"
                              for u in result.usage_records)
            print(f"{result.scenario_name} ({result.mode}): u = [{usage}] Mbit")
        return path
