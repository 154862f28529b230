# global_context.py
"""
Globální kontext aplikace sloužící ke sdílení dat mezi pluginy.
Příkaz report z něj skládá souhrn, když postupně volá design, simulate a bill.
"""

from plugins.documents import load_plan
from plugins.plan_config import PlanToolConfig

global_context = {
    "config": None,            # Načtená konfigurace (PlanToolConfig)
    "log_manager": None,       # Správce logů s bufferem varování
    "lower": None,             # Nižší paušální tarif
    "higher": None,            # Vyšší paušální tarif
    "plan": None,              # Navržený nebo načtený hybridní tarif
    "bounds": None,            # Meze návrhu (PlanBounds)
    "validation": None,        # Statická kontrola tarifu
    "results": None,           # Výsledky simulace v pořadí scénářů
    "bill_runs": None,         # Účty a požadavky po bězích
}


def reset_context() -> None:
    """Vyčistí sdílená data mezi dvěma spuštěními."""
    for key in global_context:
        global_context[key] = None


def get_config():
    """Aktuální konfigurace; bez --config se použijí výchozí hodnoty."""
    if global_context["config"] is None:
        global_context["config"] = PlanToolConfig()
    return global_context["config"]


def resolve_plan(plan_path=None):
    """
    Vrátí (plan, lower, higher, bounds).

    Přednost má explicitně zadaný plánový dokument, pak tarif navržený
    v tomto běhu, nakonec výchozí cesta z konfigurace.
    """
    if plan_path is None and global_context["plan"] is not None:
        return (global_context["plan"], global_context["lower"], global_context["higher"],
                global_context["bounds"])
    path = plan_path or get_config().output.path("plan")
    plan, lower, higher, bounds = load_plan(path)
    global_context.update({"plan": plan, "lower": lower, "higher": higher, "bounds": bounds})
    return plan, lower, higher, bounds
