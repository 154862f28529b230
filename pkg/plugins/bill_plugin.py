"""
Příkaz bill: vyúčtuje hybridní běhy ze simulace a vyhodnotí požadavky
na příjem a cenu.
"""

import argparse
import logging
import os
from typing import Any, Dict, List

from plugins.documents import bills_document, bills_run_to_dict, load_results, write_bills_csv, write_json
from plugins.global_context import get_config, global_context, resolve_plan
from plugins.plugin_base import PluginBase
from src.hybridplan.engine.billing import check_requirements
from src.hybridplan.engine.errors import ConfigurationError, RequirementsNotMetError
from src.hybridplan.engine.simulator import MODE_HYBRID

logger = logging.getLogger("hybridplan.bill")


def bill_runs(results, plan, lower, higher) -> List[Dict[str, Any]]:
    """Účty a tabulka požadavků pro každý hybridní běh."""
    runs = []
    for result in results:
        if result.mode != MODE_HYBRID:
            continue
        report = check_requirements(plan, lower, higher, result.usage_records)
        runs.append(bills_run_to_dict(result, report))
        logger.info(f"{result.scenario_name}: příjem £{report.revenue} "
                    f"({'splněno' if report.passed else 'nesplněno'})")
    return runs


class BillPlugin(PluginBase):
    def name(self) -> str:
        return "bill"

    def description(self) -> str:
        return "Vyúčtuje odběratele a zkontroluje požadavky ISP a odběratelů"

    def get_default_config(self) -> dict:
        return {"raise_on_failure": True}

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--plan", help="Plánový dokument (výchozí z konfigurace)")
        parser.add_argument("--results", help="Výsledkový dokument (výchozí z konfigurace)")
        parser.add_argument("--out", help="Cesta k účetnímu dokumentu (JSON)")

    def execute(self, data):
        config = get_config()
        plan, lower, higher, _ = resolve_plan(getattr(data, "plan", None))

        results_path = getattr(data, "results", None)
        if results_path is None and global_context["results"] is not None:
            results = global_context["results"]
        else:
            results = load_results(results_path or config.output.path("results"), plan)
        for result in results:
            if len(result.usage_records) != plan.n_subscribers:
                raise ConfigurationError(
                    f"Běh {result.scenario_name} má {len(result.usage_records)} odběratelů, "
                    f"plán jich má {plan.n_subscribers}")

        runs = bill_runs(results, plan, lower, higher)
        if not runs:
            raise ConfigurationError("Výsledky neobsahují žádný hybridní běh k vyúčtování")
        global_context["bill_runs"] = runs

        path = getattr(data, "out", None) or config.output.path("bills")
        write_json(path, bills_document(plan, runs))
        write_bills_csv(os.path.splitext(path)[0] + ".csv", runs)

        for run in runs:
            print(f"{run['scenario']}: příjem £{run['revenue_gbp']}")
            for entry in run["requirements"]:
                print(f"  [{'OK ' if entry['passed'] else 'CHYBA'}] {entry['formula']}: "
                      f"{entry['lhs']} vs. {entry['rhs']}")

        failed = [entry for run in runs for entry in run["requirements"] if not entry["passed"]]
        if failed and self.config.get("raise_on_failure"):
            raise RequirementsNotMetError(
                f"Nesplněno {len(failed)} požadavků: " +
                ", ".join(sorted({entry['requirement'] for entry in failed})))
        return path
