"""
Příkaz report: design → simulate → bill jedním spuštěním a souhrnný report
včetně srovnání hybridního a klasického režimu.
"""

import argparse
import logging
from typing import Any, Dict, List

from plugins.bill_plugin import BillPlugin
from plugins.design_plugin import DesignPlugin
from plugins.global_context import get_config, global_context
from plugins.plan_config import MODE_BOTH, VALID_CASES, VALID_MODES
from plugins.plugin_base import PluginBase
from plugins.report_export import ReportExporter, build_summary
from plugins.simulate_plugin import SimulatePlugin
from src.hybridplan.engine.errors import RequirementsNotMetError
from src.hybridplan.engine.simulator import MODE_HYBRID, MODE_LEGACY, SimulationResult, compare_modes

logger = logging.getLogger("hybridplan.report")


def comparison_rows(results: List[SimulationResult]) -> List[Dict[str, Any]]:
    """Přidělený objem po odběratelích v obou režimech pro každý scénář."""
    by_key = {(r.scenario_name, r.mode): r for r in results}
    rows = []
    for result in results:
        if result.mode != MODE_HYBRID:
            continue
        legacy = by_key.get((result.scenario_name, MODE_LEGACY))
        if legacy is None:
            continue
        surplus = compare_modes(result, legacy)
        legacy_qos = legacy.qos_by_id()
        for qos in result.qos:
            rows.append({
                "scenario": result.scenario_name,
                "id": str(qos.subscriber_id),
                "hybrid_mbit": qos.granted_volume.value,
                "legacy_mbit": legacy_qos[qos.subscriber_id].granted_volume.value,
                "surplus_mbit": surplus[qos.subscriber_id],
            })
    return rows


class ReportPlugin(PluginBase):
    def name(self) -> str:
        return "report"

    def description(self) -> str:
        return "Navrhne, nasimuluje a vyúčtuje tarif a vytvoří souhrnný report"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--out", help="Cesta k reportu (.txt, .html, .json, .csv, .pdf)")
        parser.add_argument("--step", type=float, help="Krok simulace v sekundách")
        parser.add_argument("--mode", choices=VALID_MODES,
                            help="Režim simulace (výchozí both kvůli srovnání režimů)")
        parser.add_argument("--builtin-case", type=int, choices=VALID_CASES,
                            help="Spustí pouze vybraný vestavěný krajní případ")

    def execute(self, data):
        config = get_config()
        pipeline = argparse.Namespace(
            plan=None, results=None, out=None,
            step=getattr(data, "step", None),
            mode=getattr(data, "mode", None) or MODE_BOTH,
            builtin_case=getattr(data, "builtin_case", None),
        )
        DesignPlugin({"print_table": False}).execute(pipeline)
        SimulatePlugin().execute(pipeline)
        BillPlugin({"raise_on_failure": False}).execute(pipeline)

        log_manager = global_context["log_manager"]
        warnings = [str(entry) for entry in log_manager.get_filtered_logs("WARNING")] \
            if log_manager is not None else []
        summary = build_summary(
            global_context["plan"], global_context["lower"], global_context["higher"],
            global_context["bounds"], global_context["validation"], global_context["bill_runs"],
            comparison_rows(global_context["results"]), warnings)

        path = getattr(data, "out", None) or config.output.path("report")
        ReportExporter.export(summary, path)
        for run in summary["runs"]:
            print(f"{run['scenario']}: příjem £{run['revenue_gbp']} "
                  f"(P_H £{summary['higher']['price_gbp']}, N × P_L rozdíl £{run['revenue_minus_lower_gbp']})")
        print(f"Report uložen do {path}")

        if not summary["passed"]:
            raise RequirementsNotMetError("Report obsahuje nesplněné požadavky")
        return path
