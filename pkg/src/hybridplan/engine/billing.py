"""
Měsíční vyúčtování hybridního tarifu.

Účet = P + round(α·u_i); zaokrouhluje se na mikrolibry při vzniku položky,
součty jsou pak přesné. Modul také vyhodnocuje požadavky ISP a odběratelů
proti skutečnému využití.
"""

import logging
from dataclasses import dataclass, field
from typing import Hashable, List, Optional, Sequence

from .errors import BillingConfigurationError, UnitError
from .planner import (ComplianceReport, CheckEntry, FlatRatePlan, HybridPlan, Requirement,
                      UMaxMode, compute_u_max)
from .units import DataVolume, Money, TimeSpan, slope_times_volume

logger = logging.getLogger("hybridplan.billing")

# Relativní tolerance pro porovnání objemů ze simulace
VOLUME_TOLERANCE = 1e-9


@dataclass(frozen=True)
class UsageRecord:
    """Měsíční konformní a přebytečný (u_i) objem jednoho odběratele."""
    subscriber_id: Hashable
    conformant_volume: DataVolume
    excess_volume: DataVolume
    month_length: TimeSpan


@dataclass(frozen=True)
class Bill:
    subscriber_id: Optional[Hashable]
    base: Money
    usage_charge: Money
    total: Money

    def __post_init__(self):
        if self.usage_charge.micros < 0:
            raise UnitError("Poplatek za využití nesmí být záporný")
        if self.total != self.base + self.usage_charge:
            raise UnitError("Celková částka neodpovídá součtu položek")


@dataclass
class RequirementReport(ComplianceReport):
    """Požadavky vyhodnocené nad skutečným využitím."""
    revenue: Money = Money(0)
    bills: List[Bill] = field(default_factory=list)
    revenue_minus_higher: Money = Money(0)
    revenue_minus_lower: Money = Money(0)


def monthly_price(plan: HybridPlan, usage: DataVolume,
                  subscriber_id: Optional[Hashable] = None) -> Bill:
    """Účet jednoho odběratele: P + α·u (P(0) = 0, takže při u = 0 platí P)."""
    charge = slope_times_volume(plan.slope, usage)
    return Bill(subscriber_id=subscriber_id, base=plan.base_price,
                usage_charge=charge, total=plan.base_price + charge)


def _check_count(plan: HybridPlan, usages: Sequence[UsageRecord]) -> None:
    if len(usages) != plan.n_subscribers:
        raise BillingConfigurationError(
            f"Plán má {plan.n_subscribers} odběratelů, ale záznamů o využití je {len(usages)}")


def bill_group(plan: HybridPlan, usages: Sequence[UsageRecord]) -> List[Bill]:
    """Účty všech odběratelů skupiny v pořadí záznamů."""
    _check_count(plan, usages)
    return [monthly_price(plan, u.excess_volume, u.subscriber_id) for u in usages]


def group_revenue(plan: HybridPlan, usages: Sequence[UsageRecord]) -> Money:
    """
    Příjem ISP ze skupiny: součet všech účtů.

    Raises:
        BillingConfigurationError: pokud počet záznamů neodpovídá N
    """
    return sum((bill.total for bill in bill_group(plan, usages)), Money(0))


def check_requirements(plan: HybridPlan, lower: FlatRatePlan, higher: FlatRatePlan,
                       usages: Sequence[UsageRecord]) -> RequirementReport:
    """
    Vyhodnotí požadavky na příjem a cenu pro dané využití.

    Položky: příjem vs. P_H, příjem vs. N·P_L, nejvyšší účet vs. P_H,
    základní cena vs. P_L a – jsou-li známy velikosti bucketů – u_i ≤ u_max.
    """
    bills = bill_group(plan, usages)
    revenue = sum((b.total for b in bills), Money(0))
    lower_total = lower.monthly_price * plan.n_subscribers
    top_bill = max((b.total for b in bills), default=Money(0))

    report = RequirementReport(
        revenue=revenue, bills=bills,
        revenue_minus_higher=revenue - higher.monthly_price,
        revenue_minus_lower=revenue - lower_total,
    )
    report.entries.append(CheckEntry(
        Requirement.REVENUE_VS_HIGHER, f"£{revenue}", f"£{higher.monthly_price}",
        revenue >= higher.monthly_price))
    report.entries.append(CheckEntry(
        Requirement.REVENUE_VS_LOWER, f"£{revenue}", f"£{lower_total}", revenue >= lower_total))
    report.entries.append(CheckEntry(
        Requirement.PRICE_CAP, f"£{top_bill}", f"£{higher.monthly_price}",
        top_bill <= higher.monthly_price, note="nejvyšší jednotlivý účet"))
    report.entries.append(CheckEntry(
        Requirement.BASE_PRICE, f"£{plan.base_price}", f"£{lower.monthly_price}",
        plan.base_price == lower.monthly_price))

    if lower.token_bucket_size is not None and higher.token_bucket_size is not None:
        u_max = compute_u_max(lower, higher, plan.month_length, UMaxMode.EXACT)
        heaviest = max((u.excess_volume.value for u in usages), default=0.0)
        report.entries.append(CheckEntry(
            Requirement.USAGE_BOUND, f"{heaviest:.6g} Mbit", f"{u_max.value:.6g} Mbit",
            heaviest <= u_max.value * (1 + VOLUME_TOLERANCE)))

    for entry in report.failed():
        logger.warning(f"Požadavek {entry.formula} nesplněn: {entry.lhs} vs. {entry.rhs}")
    return report
