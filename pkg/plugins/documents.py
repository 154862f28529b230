"""
Čtení a zápis dokumentů, které si předávají jednotlivé příkazy.

Plánový, výsledkový a účetní dokument jsou JSON se stabilním pořadím polí,
takže dokument zapsaný jedním příkazem a načtený dalším se zapíše znovu
bajtově stejně. Peníze se ukládají jako desetinné řetězce ("26.500000"),
nikdy jako float. Časové řady přidělených rychlostí jdou do CSV.
"""

import csv
import json
import logging
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.hybridplan.engine.billing import RequirementReport, UsageRecord
from src.hybridplan.engine.errors import (ConfigurationError, DocumentIOError, HybridPlanError,
                                          UnitError)
from src.hybridplan.engine.planner import (CheckEntry, FlatRatePlan, HybridPlan, PlanBounds,
                                           UMaxMode, plan_bounds)
from src.hybridplan.engine.simulator import (GroupMetrics, SimulationResult, SubscriberQoS)
from src.hybridplan.engine.units import (DEFAULT_MONTH, DataVolume, PriceSlope, Rate, TimeSpan,
                                         money_from_pounds)

logger = logging.getLogger("hybridplan.documents")

PLAN_FORMAT = "hybridplan/plan"
RESULTS_FORMAT = "hybridplan/results"
BILLS_FORMAT = "hybridplan/bills"
FORMAT_VERSION = 1


def dumps(document: Dict[str, Any]) -> str:
    """Serializace se stabilním pořadím polí (pořadí vkládání do slovníku)."""
    return json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path: str, document: Dict[str, Any]) -> str:
    """
    Zapíše dokument do souboru.

    Raises:
        DocumentIOError: soubor nelze zapsat
    """
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(dumps(document))
    except OSError as e:
        raise DocumentIOError(f"Dokument {path} nelze zapsat: {e}") from e
    logger.info(f"Zapsán dokument {path}")
    return path


def read_json(path: str, expected_format: str) -> Dict[str, Any]:
    """
    Načte dokument a zkontroluje jeho typ.

    Raises:
        DocumentIOError: soubor nelze přečíst
        ConfigurationError: neplatný JSON nebo jiný typ dokumentu
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except OSError as e:
        raise DocumentIOError(f"Dokument {path} nelze načíst: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Dokument {path} není platný JSON: {e}") from e
    if not isinstance(document, dict) or document.get("format") != expected_format:
        raise ConfigurationError(f"Dokument {path} není typu {expected_format}")
    return document


def _field(data: Dict[str, Any], key: str, where: str) -> Any:
    try:
        return data[key]
    except (KeyError, TypeError):
        raise ConfigurationError(f"V dokumentu chybí pole {where}.{key}") from None


# Plánový dokument

def flat_plan_to_dict(plan: FlatRatePlan) -> Dict[str, Any]:
    return {
        "name": plan.name,
        "price_gbp": str(plan.monthly_price),
        "rate_mbps": plan.token_generation_rate.value,
        "bucket_mbit": plan.token_bucket_size.value if plan.token_bucket_size is not None else None,
    }


def flat_plan_from_dict(data: Dict[str, Any], where: str) -> FlatRatePlan:
    bucket = data.get("bucket_mbit")
    return FlatRatePlan(
        monthly_price=money_from_pounds(_field(data, "price_gbp", where)),
        token_generation_rate=Rate(_field(data, "rate_mbps", where)),
        token_bucket_size=DataVolume(bucket) if bucket is not None else None,
        name=data.get("name", ""),
    )


def hybrid_plan_to_dict(plan: HybridPlan) -> Dict[str, Any]:
    return {
        "name": plan.name,
        "n_subscribers": plan.n_subscribers,
        "base_price_gbp": str(plan.base_price),
        "slope_gbp_per_mbit": plan.slope.value,
        "rate_mbps": plan.token_generation_rate.value,
        "bucket_mbit": plan.token_bucket_size.value,
        "month_s": plan.month_length.value,
        "group_rate_mbps": plan.group_rate.value if plan.group_rate is not None else None,
        "group_bucket_mbit": (plan.group_bucket_size.value
                              if plan.group_bucket_size is not None else None),
        "u_max_mode": plan.u_max_mode.value,
    }


def hybrid_plan_from_dict(data: Dict[str, Any]) -> HybridPlan:
    where = "plan"
    group_rate = data.get("group_rate_mbps")
    group_bucket = data.get("group_bucket_mbit")
    return HybridPlan(
        n_subscribers=_field(data, "n_subscribers", where),
        base_price=money_from_pounds(_field(data, "base_price_gbp", where)),
        slope=PriceSlope(_field(data, "slope_gbp_per_mbit", where)),
        token_generation_rate=Rate(_field(data, "rate_mbps", where)),
        token_bucket_size=DataVolume(data.get("bucket_mbit", 0.0)),
        month_length=TimeSpan(data.get("month_s", DEFAULT_MONTH.value)),
        group_rate=Rate(group_rate) if group_rate is not None else None,
        group_bucket_size=DataVolume(group_bucket) if group_bucket is not None else None,
        name=data.get("name", "hybrid"),
        u_max_mode=UMaxMode(data.get("u_max_mode", UMaxMode.APPROXIMATE.value)),
    )


def bounds_to_dict(bounds: PlanBounds) -> Dict[str, Any]:
    return {
        "n": bounds.n,
        "n_min": bounds.n_min,
        "n_max": bounds.n_max,
        "n_low": bounds.n_low,
        "n_high": bounds.n_high,
        "alpha_min_gbp_per_mbit": bounds.alpha_min.value,
        "alpha_max_gbp_per_mbit": bounds.alpha_max.value,
        "u_max_mbit": bounds.u_max.value,
    }


def bounds_from_dict(data: Dict[str, Any]) -> PlanBounds:
    where = "bounds"
    return PlanBounds(
        n_min=float(_field(data, "n_min", where)),
        n_max=float(_field(data, "n_max", where)),
        n_low=int(_field(data, "n_low", where)),
        n_high=int(_field(data, "n_high", where)),
        alpha_min=PriceSlope(_field(data, "alpha_min_gbp_per_mbit", where)),
        alpha_max=PriceSlope(_field(data, "alpha_max_gbp_per_mbit", where)),
        u_max=DataVolume(_field(data, "u_max_mbit", where)),
        n=int(_field(data, "n", where)),
    )


def plan_document(plan: HybridPlan, lower: FlatRatePlan, higher: FlatRatePlan,
                  bounds: PlanBounds, design: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Sestaví plánový dokument: tarif, zdrojová dvojice paušálů a meze návrhu."""
    return {
        "format": PLAN_FORMAT,
        "version": FORMAT_VERSION,
        "plan": hybrid_plan_to_dict(plan),
        "lower": flat_plan_to_dict(lower),
        "higher": flat_plan_to_dict(higher),
        "design": dict(design or {}),
        "bounds": bounds_to_dict(bounds),
    }


def parse_plan_document(document: Dict[str, Any]
                        ) -> Tuple[HybridPlan, FlatRatePlan, FlatRatePlan, PlanBounds]:
    """
    Rozloží plánový dokument na typy výpočetního jádra.

    Raises:
        ConfigurationError: chybějící nebo neplatná pole
    """
    try:
        plan = hybrid_plan_from_dict(_field(document, "plan", "document"))
        lower = flat_plan_from_dict(_field(document, "lower", "document"), "lower")
        higher = flat_plan_from_dict(_field(document, "higher", "document"), "higher")
        if "bounds" in document:
            bounds = bounds_from_dict(document["bounds"])
        else:
            # Ručně psaný plán: meze se dopočítají z dvojice paušálů
            bounds = plan_bounds(lower, higher, plan.n_subscribers, plan.month_length,
                                 plan.u_max_mode)
    except ConfigurationError:
        raise
    except (HybridPlanError, ValueError, TypeError) as e:
        raise ConfigurationError(f"Neplatný plánový dokument: {e}") from e
    return plan, lower, higher, bounds


def load_plan(path: str) -> Tuple[HybridPlan, FlatRatePlan, FlatRatePlan, PlanBounds]:
    return parse_plan_document(read_json(path, PLAN_FORMAT))


# Výsledkový dokument

def _run_to_dict(result: SimulationResult) -> Dict[str, Any]:
    return {
        "mode": result.mode,
        "scenario": result.scenario_name,
        "step_s": result.step.value,
        "horizon_s": result.horizon.value,
        "usage": [
            {
                "id": str(u.subscriber_id),
                "conformant_mbit": u.conformant_volume.value,
                "excess_mbit": u.excess_volume.value,
                "month_s": u.month_length.value,
            }
            for u in result.usage_records
        ],
        "qos": [
            {
                "id": str(q.subscriber_id),
                "offered_mbit": q.offered_volume.value,
                "granted_mbit": q.granted_volume.value,
                "conformant_mbit": q.conformant_volume.value,
                "excess_mbit": q.excess_volume.value,
                "dropped_mbit": q.dropped_volume.value,
                "mean_granted_rate_mbps": q.mean_granted_rate.value,
                "satisfaction": q.satisfaction,
            }
            for q in result.qos
        ],
        "group": {
            "offered_mbit": result.group.offered_volume.value,
            "granted_mbit": result.group.granted_volume.value,
            "conformant_mbit": result.group.conformant_volume.value,
            "wasted_capacity_mbit": result.group.wasted_capacity_volume.value,
        },
    }


def _run_from_dict(data: Dict[str, Any]) -> SimulationResult:
    where = "runs[]"
    usage = tuple(
        UsageRecord(u["id"], DataVolume(u["conformant_mbit"]), DataVolume(u["excess_mbit"]),
                    TimeSpan(u["month_s"]))
        for u in _field(data, "usage", where)
    )
    qos = tuple(
        SubscriberQoS(
            subscriber_id=q["id"],
            offered_volume=DataVolume(q["offered_mbit"]),
            granted_volume=DataVolume(q["granted_mbit"]),
            conformant_volume=DataVolume(q["conformant_mbit"]),
            excess_volume=DataVolume(q["excess_mbit"]),
            dropped_volume=DataVolume(q["dropped_mbit"]),
            mean_granted_rate=Rate(q["mean_granted_rate_mbps"]),
            satisfaction=float(q["satisfaction"]),
        )
        for q in data.get("qos", [])
    )
    group_raw = _field(data, "group", where)
    group = GroupMetrics(
        offered_volume=DataVolume(group_raw["offered_mbit"]),
        granted_volume=DataVolume(group_raw["granted_mbit"]),
        conformant_volume=DataVolume(group_raw["conformant_mbit"]),
        wasted_capacity_volume=DataVolume(group_raw["wasted_capacity_mbit"]),
    )
    return SimulationResult(
        mode=_field(data, "mode", where),
        scenario_name=_field(data, "scenario", where),
        step=TimeSpan(_field(data, "step_s", where)),
        horizon=TimeSpan(_field(data, "horizon_s", where)),
        usage_records=usage, qos=qos, group=group, time_series=(),
    )


def results_document(plan: HybridPlan, results: Sequence[SimulationResult]) -> Dict[str, Any]:
    """Výsledkový dokument: běhy simulace v pořadí scénářů."""
    return {
        "format": RESULTS_FORMAT,
        "version": FORMAT_VERSION,
        "plan": {"name": plan.name, "n_subscribers": plan.n_subscribers},
        "runs": [_run_to_dict(r) for r in results],
    }


def parse_results_document(document: Dict[str, Any], plan: Optional[HybridPlan] = None
                           ) -> List[SimulationResult]:
    """
    Načte běhy z výsledkového dokumentu.

    Raises:
        ConfigurationError: poškozený dokument nebo nesoulad počtu odběratelů s plánem
    """
    try:
        runs = [_run_from_dict(run) for run in _field(document, "runs", "document")]
    except (KeyError, UnitError, ValueError, TypeError) as e:
        raise ConfigurationError(f"Neplatný výsledkový dokument: {e}") from e
    if plan is not None:
        declared = document.get("plan", {}).get("n_subscribers")
        if declared is not None and declared != plan.n_subscribers:
            raise ConfigurationError(
                f"Výsledky patří ke skupině {declared} odběratelů, plán jich má {plan.n_subscribers}")
        for run in runs:
            if len(run.usage_records) != plan.n_subscribers:
                raise ConfigurationError(
                    f"Běh {run.scenario_name} ({run.mode}) má {len(run.usage_records)} záznamů, "
                    f"plán má {plan.n_subscribers} odběratelů")
    return runs


def load_results(path: str, plan: Optional[HybridPlan] = None) -> List[SimulationResult]:
    return parse_results_document(read_json(path, RESULTS_FORMAT), plan)


# Účetní dokument

def entry_to_dict(entry: CheckEntry) -> Dict[str, Any]:
    return {
        "requirement": entry.requirement.value,
        "formula": entry.formula,
        "lhs": entry.lhs,
        "rhs": entry.rhs,
        "passed": entry.passed,
        "note": entry.note,
    }


def bills_run_to_dict(result: SimulationResult, report: RequirementReport) -> Dict[str, Any]:
    return {
        "scenario": result.scenario_name,
        "mode": result.mode,
        "bills": [
            {
                "id": str(b.subscriber_id),
                "usage_mbit": u.excess_volume.value,
                "base_gbp": str(b.base),
                "usage_charge_gbp": str(b.usage_charge),
                "total_gbp": str(b.total),
            }
            for b, u in zip(report.bills, result.usage_records)
        ],
        "revenue_gbp": str(report.revenue),
        "revenue_minus_higher_gbp": str(report.revenue_minus_higher),
        "revenue_minus_lower_gbp": str(report.revenue_minus_lower),
        "requirements": [entry_to_dict(e) for e in report.entries],
        "passed": report.passed,
    }


def bills_document(plan: HybridPlan, runs: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    return {
        "format": BILLS_FORMAT,
        "version": FORMAT_VERSION,
        "plan": {"name": plan.name, "n_subscribers": plan.n_subscribers},
        "runs": list(runs),
    }


# CSV výstupy

def time_series_path(results_path: str, result: SimulationResult) -> str:
    """Cesta k CSV časové řadě vedle výsledkového dokumentu."""
    stem, _ = os.path.splitext(results_path)
    return f"{stem}_{result.scenario_name}_{result.mode}.csv"


def write_time_series_csv(path: str, result: SimulationResult) -> str:
    """
    Zapíše komprimovanou časovou řadu přidělených rychlostí.

    Každý řádek je interval [start_s, end_s), ve kterém byly rychlosti konstantní.
    """
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as csvfile:
            writer = csv.writer(csvfile)
            writer.writerow(["start_s", "end_s"] +
                            [f"{sid}_granted_mbps" for sid in (q.subscriber_id for q in result.qos)])
            for segment in result.time_series:
                writer.writerow([repr(segment.start), repr(segment.end)] +
                                [repr(rate) for rate in segment.rates])
    except OSError as e:
        raise DocumentIOError(f"CSV {path} nelze zapsat: {e}") from e
    return path


def write_bills_csv(path: str, runs: Sequence[Dict[str, Any]]) -> str:
    """Zapíše účty všech běhů do jedné tabulky."""
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as csvfile:
            fieldnames = ["scenario", "mode", "id", "usage_mbit", "base_gbp", "usage_charge_gbp", "total_gbp"]
            writer = csv.DictWriter(csvfile, fieldnames=fieldnames)
            writer.writeheader()
            for run in runs:
                for bill in run["bills"]:
                    writer.writerow({"scenario": run["scenario"], "mode": run["mode"], **bill})
    except OSError as e:
        raise DocumentIOError(f"CSV {path} nelze zapsat: {e}") from e
    return path
