"""
Konfigurace nástroje pro návrh hybridních tarifů.

Konfigurační dokument je JSON; jednotky jsou vždy součástí názvu pole
(price_gbp, rate_mbps, bucket_mbit, step_s, ...).
"""

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.hybridplan.engine.errors import ConfigurationError, DocumentIOError, HybridPlanError
from src.hybridplan.engine.planner import FlatRatePlan, SelectionPolicy, UMaxMode
from src.hybridplan.engine.simulator import (MODE_HYBRID, MODE_LEGACY, Breakpoint, DemandScenario,
                                             SubscriberTrace)
from src.hybridplan.engine.units import DataVolume, Rate, TimeSpan, money_from_pounds, month_length

MODE_BOTH = "both"
VALID_MODES = (MODE_HYBRID, MODE_LEGACY, MODE_BOTH)
VALID_CASES = (1, 2)


@dataclass
class PlanPairEntry:
    """Jeden paušální tarif v konfiguraci."""
    name: str = ""
    price_gbp: Any = None
    rate_mbps: Optional[float] = None
    bucket_mbit: Optional[float] = None

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "PlanPairEntry":
        return cls(
            name=config_dict.get("name", ""),
            price_gbp=config_dict.get("price_gbp"),
            rate_mbps=config_dict.get("rate_mbps"),
            bucket_mbit=config_dict.get("bucket_mbit"),
        )

    def to_dict(self) -> Dict[str, Any]:
        result = {"name": self.name, "price_gbp": self.price_gbp, "rate_mbps": self.rate_mbps}
        if self.bucket_mbit is not None:
            result["bucket_mbit"] = self.bucket_mbit
        return result

    def validate(self, prefix: str) -> Dict[str, str]:
        errors = {}
        try:
            self.to_plan()
        except (HybridPlanError, TypeError, ValueError) as e:
            errors[prefix] = str(e)
        return errors

    def to_plan(self) -> FlatRatePlan:
        """Převede položku na FlatRatePlan."""
        if self.price_gbp is None or self.rate_mbps is None:
            raise ConfigurationError(f"Tarif '{self.name}' musí mít price_gbp a rate_mbps")
        bucket = DataVolume(self.bucket_mbit) if self.bucket_mbit is not None else None
        return FlatRatePlan(money_from_pounds(self.price_gbp), Rate(self.rate_mbps), bucket, self.name)


@dataclass
class DesignConfig:
    n_policy: Any = "max"
    alpha_policy: Any = "max"
    u_max_mode: str = UMaxMode.APPROXIMATE.value

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "DesignConfig":
        config = cls()
        for key, value in config_dict.items():
            if hasattr(config, key):
                setattr(config, key, value)
        return config

    def to_dict(self) -> Dict[str, Any]:
        return {"n_policy": self.n_policy, "alpha_policy": self.alpha_policy,
                "u_max_mode": self.u_max_mode}

    def validate(self) -> Dict[str, str]:
        errors = {}
        for key in ("n_policy", "alpha_policy"):
            try:
                SelectionPolicy.parse(getattr(self, key))
            except ValueError as e:
                errors[f"design.{key}"] = str(e)
        if self.u_max_mode not in [m.value for m in UMaxMode]:
            errors["design.u_max_mode"] = "Neplatný režim u_max. Povolené hodnoty: exact, approximate"
        return errors


@dataclass
class SimulationConfig:
    step_s: float = 1.0
    mode: str = MODE_HYBRID
    builtin_cases: List[int] = field(default_factory=lambda: [1, 2])
    workers: int = field(default_factory=lambda: min(4, os.cpu_count() or 1))
    scenarios: List[Dict[str, Any]] = field(default_factory=list)

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "SimulationConfig":
        config = cls()
        for key, value in config_dict.items():
            if hasattr(config, key):
                setattr(config, key, value)
        return config

    def to_dict(self) -> Dict[str, Any]:
        return {
            "step_s": self.step_s,
            "mode": self.mode,
            "builtin_cases": list(self.builtin_cases),
            "workers": self.workers,
            "scenarios": self.scenarios,
        }

    def validate(self) -> Dict[str, str]:
        errors = {}
        if not isinstance(self.step_s, (int, float)) or self.step_s <= 0:
            errors["simulation.step_s"] = "Krok simulace musí být kladné číslo"
        if self.mode not in VALID_MODES:
            errors["simulation.mode"] = f"Neplatný režim. Povolené hodnoty: {', '.join(VALID_MODES)}"
        if any(case not in VALID_CASES for case in self.builtin_cases):
            errors["simulation.builtin_cases"] = "Vestavěné případy jsou pouze 1 a 2"
        if not isinstance(self.workers, int) or self.workers <= 0:
            errors["simulation.workers"] = "Počet vláken musí být větší než 0"
        names = set()
        for index, raw in enumerate(self.scenarios):
            key = f"simulation.scenarios[{index}]"
            try:
                scenario = scenario_from_dict(raw)
            except (HybridPlanError, KeyError, TypeError, ValueError) as e:
                errors[key] = str(e)
                continue
            if scenario.name in names:
                errors[key] = f"Duplicitní název scénáře '{scenario.name}'"
            names.add(scenario.name)
        return errors


@dataclass
class OutputConfig:
    directory: str = "output"
    plan: str = "plan.json"
    results: str = "results.json"
    bills: str = "bills.json"
    report: str = "report.txt"

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "OutputConfig":
        config = cls()
        for key, value in config_dict.items():
            if hasattr(config, key):
                setattr(config, key, value)
        return config

    def to_dict(self) -> Dict[str, Any]:
        return {"directory": self.directory, "plan": self.plan, "results": self.results,
                "bills": self.bills, "report": self.report}

    def path(self, name: str) -> str:
        """Cesta k výstupu; relativní názvy se berou vůči výstupnímu adresáři."""
        value = getattr(self, name)
        return value if os.path.isabs(value) else os.path.join(self.directory, value)


@dataclass
class PlanToolConfig:
    """Celý konfigurační dokument"""

    lower: PlanPairEntry = field(default_factory=PlanPairEntry)
    higher: PlanPairEntry = field(default_factory=PlanPairEntry)
    month_days: int = 30
    design: DesignConfig = field(default_factory=DesignConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Převede konfiguraci na slovník"""
        return {
            "lower": self.lower.to_dict(),
            "higher": self.higher.to_dict(),
            "month_days": self.month_days,
            "design": self.design.to_dict(),
            "simulation": self.simulation.to_dict(),
            "output": self.output.to_dict(),
            "logging": dict(self.logging),
        }

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "PlanToolConfig":
        """Vytvoří konfiguraci ze slovníku"""
        if not isinstance(config_dict, dict):
            raise ConfigurationError("Konfigurace musí být JSON objekt")
        try:
            return cls(
                lower=PlanPairEntry.from_dict(config_dict.get("lower", {})),
                higher=PlanPairEntry.from_dict(config_dict.get("higher", {})),
                month_days=config_dict.get("month_days", 30),
                design=DesignConfig.from_dict(config_dict.get("design", {})),
                simulation=SimulationConfig.from_dict(config_dict.get("simulation", {})),
                output=OutputConfig.from_dict(config_dict.get("output", {})),
                logging=dict(config_dict.get("logging", {})),
            )
        except (AttributeError, TypeError) as e:
            raise ConfigurationError(f"Chybná struktura konfigurace: {e}") from e

    def validate(self) -> Dict[str, str]:
        """Validuje konfiguraci a vrací slovník chyb"""
        errors = {}
        errors.update(self.lower.validate("lower"))
        errors.update(self.higher.validate("higher"))
        if self.month_days not in (28, 29, 30, 31):
            errors["month_days"] = "Měsíc musí mít 28 až 31 dní"
        errors.update(self.design.validate())
        errors.update(self.simulation.validate())
        return errors

    def check(self) -> "PlanToolConfig":
        """
        Validuje konfiguraci.

        Raises:
            ConfigurationError: pokud validace našla chyby
        """
        errors = self.validate()
        if errors:
            details = "; ".join(f"{key}: {message}" for key, message in sorted(errors.items()))
            raise ConfigurationError(f"Neplatná konfigurace: {details}", errors)
        return self

    # Převody na typy výpočetního jádra

    def lower_plan(self) -> FlatRatePlan:
        return self.lower.to_plan()

    def higher_plan(self) -> FlatRatePlan:
        return self.higher.to_plan()

    def t_month(self) -> TimeSpan:
        return month_length(self.month_days)

    def u_max_mode(self) -> UMaxMode:
        return UMaxMode(self.design.u_max_mode)

    def user_scenarios(self, subscriber_ids: List[str]) -> List[DemandScenario]:
        """Uživatelské scénáře; prázdný seznam odběratelů znamená nečinnou skupinu."""
        return [scenario_from_dict(raw, subscriber_ids, self.t_month())
                for raw in self.simulation.scenarios]


def scenario_from_dict(raw: Dict[str, Any], subscriber_ids: Optional[List[str]] = None,
                       default_horizon: Optional[TimeSpan] = None) -> DemandScenario:
    """
    Sestaví scénář poptávky z konfigurace.

    Args:
        raw: {"name", "horizon_s", "subscribers": [{"id", "trace": [{"start_s", "rate_mbps"}]}]}
        subscriber_ids: Identifikátory pro nečinný scénář (prázdné "subscribers")
        default_horizon: Horizont, pokud scénář žádný neuvádí
    """
    name = raw.get("name", "scenario")
    if "horizon_s" in raw:
        horizon = TimeSpan(raw["horizon_s"])
    else:
        horizon = default_horizon or month_length()
    subscribers = raw.get("subscribers", [])
    if not subscribers:
        return DemandScenario.idle(subscriber_ids or [], horizon, name)
    traces = []
    for entry in subscribers:
        points = tuple(Breakpoint(TimeSpan(p["start_s"]), Rate(p["rate_mbps"]))
                       for p in entry.get("trace", []))
        traces.append(SubscriberTrace(str(entry["id"]), points))
    return DemandScenario(tuple(traces), horizon, name)


def load_config(path: str) -> PlanToolConfig:
    """
    Načte a zvaliduje konfigurační soubor.

    Raises:
        DocumentIOError: soubor nelze přečíst
        ConfigurationError: neplatný JSON nebo neplatné hodnoty
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except OSError as e:
        raise DocumentIOError(f"Konfiguraci {path} nelze načíst: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Konfigurace {path} není platný JSON: {e}") from e
    return PlanToolConfig.from_dict(raw).check()
