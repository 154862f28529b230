"""
Výjimky používané výpočetním jádrem.

Všechny chyby dědí z HybridPlanError, aby je příkazová řádka mohla
převést na návratové kódy. Chyby plánovače a simulátoru nesou identifikátor
porušeného požadavku (viz Requirement v planner.py) a hodnoty obou stran nerovnosti.
"""

from typing import Optional


class HybridPlanError(Exception):
    """Základní výjimka balíku."""


class UnitError(HybridPlanError, ValueError):
    """Neplatná hodnota fyzikální nebo peněžní veličiny."""


class TimeRegressionError(HybridPlanError):
    """Čas se vrátil zpět – chyba v plánování kroků simulace."""

    def __init__(self, now: float, last_update: float):
        super().__init__(f"Čas {now} s je menší než poslední aktualizace {last_update} s")
        self.now = now
        self.last_update = last_update


class RequirementError(HybridPlanError):
    """
    Chyba vázaná na konkrétní požadavek plánu.

    Args:
        message: Text chyby
        requirement: Identifikátor porušené nerovnosti (např. "group_rate")
        lhs: Hodnota levé strany
        rhs: Hodnota pravé strany
    """

    def __init__(self, message: str, requirement: Optional[str] = None,
                 lhs: object = None, rhs: object = None):
        super().__init__(message)
        self.requirement = requirement
        self.lhs = lhs
        self.rhs = rhs


class AllocationInfeasibleError(RequirementError):
    """Součet garantovaných rychlostí převyšuje kapacitu skupiny."""

    def __init__(self, shortfall: float, guaranteed: float, capacity: float):
        super().__init__(
            f"Garantované rychlosti {guaranteed:.6f} Mbit/s převyšují kapacitu "
            f"{capacity:.6f} Mbit/s o {shortfall:.6f} Mbit/s (N × TGR_L ≤ TGR_H)",
            requirement="group_rate", lhs=guaranteed, rhs=capacity)
        self.shortfall = shortfall


class InfeasibleConfigurationError(RequirementError):
    """Skupina N odběratelů se nevejde do skupinového kontraktu."""


class PlanPairError(HybridPlanError, ValueError):
    """Dvojice tarifů nesplňuje předpoklady návrhu (nižší ≤ vyšší)."""


class NoValidPlanError(RequirementError):
    """Celočíselný interval pro N je prázdný."""


class PlanBoundsError(RequirementError):
    """Zadané N nebo α leží mimo povolené meze."""


class RequirementsNotMetError(RequirementError):
    """Vyúčtování nebo tarif nesplňuje některý z požadavků."""

    def __init__(self, message: str, failed: Optional[list] = None):
        failed = failed or []
        super().__init__(message, requirement=failed[0].requirement.value if failed else None)
        self.failed = failed


class MissingParameterError(HybridPlanError):
    """Chybí parametr nutný pro zvolený režim výpočtu."""


class BillingConfigurationError(HybridPlanError):
    """Počet záznamů o využití neodpovídá plánu."""


class ScenarioError(HybridPlanError, ValueError):
    """Chybně zadaný scénář poptávky."""


class ConfigurationError(HybridPlanError):
    """
    Chybná konfigurace nebo nesoulad dokumentů.

    Args:
        message: Text chyby
        errors: Slovník chyb podle jednotlivých polí
    """

    def __init__(self, message: str, errors: Optional[dict] = None):
        super().__init__(message)
        self.errors = errors or {}


class DocumentIOError(HybridPlanError):
    """Dokument nelze načíst nebo zapsat."""
