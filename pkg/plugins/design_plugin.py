"""
Příkaz design: z dvojice paušálů navrhne hybridní tarif a vypíše meze návrhu.
"""

import argparse
import logging
import os

from plugins.documents import plan_document, write_json
from plugins.global_context import get_config, global_context
from plugins.plugin_base import PluginBase
from plugins.report_export import render_bounds_table
from src.hybridplan.engine.errors import RequirementsNotMetError
from src.hybridplan.engine.planner import (SelectionPolicy, design_hybrid_plan, plan_bounds,
                                           validate_hybrid_plan)

logger = logging.getLogger("hybridplan.design")


def bounds_table_path(plan_path: str) -> str:
    stem, _ = os.path.splitext(plan_path)
    return f"{stem}_bounds.txt"


class DesignPlugin(PluginBase):
    def name(self) -> str:
        return "design"

    def description(self) -> str:
        return "Navrhne hybridní tarif (N, P, α) a zapíše plánový dokument s tabulkou mezí"

    def get_default_config(self) -> dict:
        return {"print_table": True}

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--out", help="Cesta k plánovému dokumentu (JSON)")

    def execute(self, data):
        config = get_config()
        lower, higher = config.lower_plan(), config.higher_plan()
        t_month = config.t_month()
        mode = config.u_max_mode()
        n_policy = SelectionPolicy.parse(config.design.n_policy)
        alpha_policy = SelectionPolicy.parse(config.design.alpha_policy)

        plan = design_hybrid_plan(lower, higher, t_month, n_policy, alpha_policy, mode)
        bounds = plan_bounds(lower, higher, plan.n_subscribers, t_month, mode)
        validation = validate_hybrid_plan(plan, lower, higher)
        global_context.update({"lower": lower, "higher": higher, "plan": plan,
                               "bounds": bounds, "validation": validation})

        path = getattr(data, "out", None) or config.output.path("plan")
        design = {"n_policy": n_policy.describe(), "alpha_policy": alpha_policy.describe(),
                  "u_max_mode": mode.value}
        write_json(path, plan_document(plan, lower, higher, bounds, design))

        table = render_bounds_table(plan, lower, higher, bounds, validation)
        table_path = bounds_table_path(path)
        with open(table_path, "w", encoding="utf-8") as f:
            f.write(table)
        if self.config.get("print_table"):
            print(table)

        if not validation.passed:
            raise RequirementsNotMetError(
                f"Navržený tarif nesplňuje {len(validation.failed())} požadavků", validation.failed())
        return path
