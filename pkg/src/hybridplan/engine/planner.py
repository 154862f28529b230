"""
Návrh a validace parametrů hybridního tarifu.

Z dvojice paušálních tarifů (nižší a vyšší) odvozuje přípustný počet
odběratelů N ve skupině, meze sklonu α lineární ceny za využití a
maximální měsíční přebytečné využití u_max.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Union

from .errors import MissingParameterError, NoValidPlanError, PlanBoundsError, PlanPairError
from .units import (DEFAULT_MONTH, DataVolume, Money, PriceSlope, Rate, TimeSpan,
                    slope_times_volume)

logger = logging.getLogger("hybridplan.planner")


class Requirement(str, Enum):
    """Identifikátory nerovností, které musí hybridní tarif splnit."""
    GROUP_RATE = "group_rate"
    REVENUE_VS_HIGHER = "revenue_vs_higher"
    REVENUE_VS_LOWER = "revenue_vs_lower"
    PRICE_CAP = "price_cap"
    BASE_PRICE = "base_price"
    ALPHA_UPPER = "alpha_upper"
    ALPHA_LOWER = "alpha_lower"
    PRICE_RATIO = "price_ratio"
    USAGE_BOUND = "usage_bound"

    @property
    def formula(self) -> str:
        return REQUIREMENT_FORMULAS[self]


REQUIREMENT_FORMULAS = {
    Requirement.GROUP_RATE: "N × TGR_L ≤ TGR_H",
    Requirement.REVENUE_VS_HIGHER: "Σ (P + P(u_i)) ≥ P_H",
    Requirement.REVENUE_VS_LOWER: "Σ (P + P(u_i)) ≥ N × P_L",
    Requirement.PRICE_CAP: "P + P(u_max) ≤ P_H",
    Requirement.BASE_PRICE: "P + P(0) = P_L",
    Requirement.ALPHA_UPPER: "α ≤ (P_H − P_L) / ((TGR_H − TGR_L) × T_month)",
    Requirement.ALPHA_LOWER: "α ≥ max(0, (P_H − N × P_L) / ((TGR_H − TGR_L) × T_month))",
    Requirement.PRICE_RATIO: "P_H − N × P_L ≤ 0",
    Requirement.USAGE_BOUND: "u_i ≤ u_max",
}


class UMaxMode(str, Enum):
    EXACT = "exact"
    APPROXIMATE = "approximate"


@dataclass(frozen=True)
class FlatRatePlan:
    """Existující paušální tarif; velikost bucketu nemusí být známa."""
    monthly_price: Money
    token_generation_rate: Rate
    token_bucket_size: Optional[DataVolume] = None
    name: str = ""

    def __post_init__(self):
        if self.monthly_price.micros <= 0:
            raise PlanPairError(f"Cena tarifu '{self.name}' musí být kladná")
        if self.token_generation_rate.value <= 0:
            raise PlanPairError(f"Rychlost tarifu '{self.name}' musí být kladná")


@dataclass(frozen=True)
class HybridPlan:
    """
    Hybridní tarif: N odběratelů, základní cena P a sklon α.

    Kromě parametrů tarifu si pamatuje skupinový kontrakt (TGR_H, TBS_H),
    proti kterému byl navržen – simulace z něj bere skupinový bucket.
    Režim u_max, se kterým byl spočten sklon, používá i validace.
    """
    n_subscribers: int
    base_price: Money
    slope: PriceSlope
    token_generation_rate: Rate
    token_bucket_size: DataVolume = DataVolume(0.0)
    month_length: TimeSpan = DEFAULT_MONTH
    group_rate: Optional[Rate] = None
    group_bucket_size: Optional[DataVolume] = None
    name: str = "hybrid"
    u_max_mode: UMaxMode = UMaxMode.APPROXIMATE

    def __post_init__(self):
        if isinstance(self.n_subscribers, bool) or not isinstance(self.n_subscribers, int) \
                or self.n_subscribers < 1:
            raise PlanBoundsError(f"Počet odběratelů musí být kladné celé číslo, zadáno {self.n_subscribers!r}")


@dataclass(frozen=True)
class FeasibleNRange:
    """Reálné meze N a z nich plynoucí celočíselný interval [n_low, n_high]."""
    n_min: float
    n_max: float
    n_low: int
    n_high: int

    @property
    def integers(self) -> range:
        return range(self.n_low, self.n_high + 1)

    @property
    def is_empty(self) -> bool:
        return self.n_low > self.n_high


@dataclass(frozen=True)
class AlphaBounds:
    alpha_min: PriceSlope
    alpha_max: PriceSlope


@dataclass(frozen=True)
class PlanBounds:
    """Všechny meze návrhu v jednom objektu (pro reporty)."""
    n_min: float
    n_max: float
    n_low: int
    n_high: int
    alpha_min: PriceSlope
    alpha_max: PriceSlope
    u_max: DataVolume
    n: int


@dataclass(frozen=True)
class SelectionPolicy:
    """Volba hodnoty v přípustném intervalu: max, min nebo zadaná hodnota."""
    kind: str
    value: Optional[float] = None

    MAX = "max"
    MIN = "min"
    GIVEN = "given"

    @classmethod
    def maximum(cls) -> "SelectionPolicy":
        return cls(cls.MAX)

    @classmethod
    def minimum(cls) -> "SelectionPolicy":
        return cls(cls.MIN)

    @classmethod
    def given(cls, value: float) -> "SelectionPolicy":
        return cls(cls.GIVEN, value)

    @classmethod
    def parse(cls, raw: Union[str, int, float, dict, "SelectionPolicy"]) -> "SelectionPolicy":
        """Přijímá "max", "min", číslo nebo {"given": číslo}."""
        if isinstance(raw, SelectionPolicy):
            return raw
        if isinstance(raw, dict) and set(raw) == {"given"}:
            raw = raw["given"]
        if isinstance(raw, str):
            text = raw.strip().lower()
            if text in (cls.MAX, cls.MIN):
                return cls(text)
            try:
                return cls.given(float(text))
            except ValueError:
                raise ValueError(f"Neznámá politika výběru: {raw!r}") from None
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            return cls.given(raw)
        raise ValueError(f"Neznámá politika výběru: {raw!r}")

    def describe(self) -> str:
        return f"given({self.value:g})" if self.kind == self.GIVEN else self.kind


@dataclass
class CheckEntry:
    """Jeden řádek reportu: nerovnost, hodnoty obou stran a výsledek."""
    requirement: Requirement
    lhs: str
    rhs: str
    passed: bool
    note: str = ""

    @property
    def formula(self) -> str:
        return self.requirement.formula


@dataclass
class ComplianceReport:
    entries: List[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failed(self) -> List[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def get(self, requirement: Requirement) -> CheckEntry:
        for entry in self.entries:
            if entry.requirement == requirement:
                return entry
        raise KeyError(requirement)


class ValidationReport(ComplianceReport):
    """Statická kontrola hybridního tarifu proti dvojici paušálů."""


def _check_pair(lower: FlatRatePlan, higher: FlatRatePlan) -> None:
    if lower.token_generation_rate.value > higher.token_generation_rate.value:
        raise PlanPairError(
            f"Nižší tarif má vyšší rychlost ({lower.token_generation_rate} > {higher.token_generation_rate})")
    if lower.monthly_price > higher.monthly_price:
        raise PlanPairError(f"Nižší tarif je dražší (£{lower.monthly_price} > £{higher.monthly_price})")


def _rate_ratio(lower: FlatRatePlan, higher: FlatRatePlan) -> Fraction:
    return Fraction(higher.token_generation_rate.value) / Fraction(lower.token_generation_rate.value)


def _price_ratio(lower: FlatRatePlan, higher: FlatRatePlan) -> Fraction:
    return Fraction(higher.monthly_price.micros, lower.monthly_price.micros)


def feasible_n_range(lower: FlatRatePlan, higher: FlatRatePlan) -> FeasibleNRange:
    """
    Meze počtu odběratelů: P_H/P_L ≤ N ≤ TGR_H/TGR_L.

    Poměry se počítají v racionální aritmetice, aby celočíselné poměry
    nezaokrouhlily na špatnou stranu.

    Raises:
        PlanPairError: pokud nižší tarif není nižší
        NoValidPlanError: pokud v intervalu neleží žádné celé N
    """
    _check_pair(lower, higher)
    lower_bound = _price_ratio(lower, higher)
    upper_bound = _rate_ratio(lower, higher)
    n_low = max(1, math.ceil(lower_bound))
    n_high = math.floor(upper_bound)
    result = FeasibleNRange(float(lower_bound), float(upper_bound), n_low, n_high)
    logger.debug(f"Meze N: {result.n_min:.4f} ≤ N ≤ {result.n_max:.4f}, celá čísla [{n_low}, {n_high}]")
    if result.is_empty:
        raise NoValidPlanError(
            f"Žádné celé N: N ≥ P_H/P_L = {result.n_min:.4f} ({Requirement.PRICE_RATIO.formula}) "
            f"odporuje N ≤ TGR_H/TGR_L = {result.n_max:.4f} ({Requirement.GROUP_RATE.formula})",
            requirement=Requirement.GROUP_RATE.value, lhs=result.n_min, rhs=result.n_max)
    return result


def compute_u_max(lower: FlatRatePlan, higher: FlatRatePlan, t_month: TimeSpan = DEFAULT_MONTH,
                  mode: UMaxMode = UMaxMode.APPROXIMATE) -> DataVolume:
    """
    Maximální měsíční přebytečné využití jednoho odběratele.

    Přesně (TGR_H − TGR_L)·T_month + (TBS_H − TBS_L), přibližně bez členu
    s velikostmi bucketů.

    Raises:
        MissingParameterError: přesný režim bez známých velikostí bucketů
    """
    mode = UMaxMode(mode)
    rate_diff = higher.token_generation_rate.value - lower.token_generation_rate.value
    if rate_diff < 0:
        raise PlanPairError("TGR_H musí být alespoň TGR_L")
    volume = rate_diff * t_month.value
    if mode is UMaxMode.EXACT:
        if lower.token_bucket_size is None or higher.token_bucket_size is None:
            raise MissingParameterError("Přesné u_max vyžaduje známé velikosti bucketů obou tarifů")
        volume += higher.token_bucket_size.value - lower.token_bucket_size.value
        if volume < 0:
            raise PlanPairError(f"u_max vychází záporné ({volume} Mbit)")
    return DataVolume(volume)


def _check_n(lower: FlatRatePlan, higher: FlatRatePlan, n: int) -> FeasibleNRange:
    n_range = feasible_n_range(lower, higher)
    if n > n_range.n_high:
        raise PlanBoundsError(
            f"N = {n} porušuje {Requirement.GROUP_RATE.formula}: "
            f"{n} × {lower.token_generation_rate.value:g} > {higher.token_generation_rate.value:g} "
            f"(N ≤ {n_range.n_max:.4f})",
            requirement=Requirement.GROUP_RATE.value, lhs=n, rhs=n_range.n_max)
    if n < n_range.n_low:
        raise PlanBoundsError(
            f"N = {n} porušuje {Requirement.PRICE_RATIO.formula}: "
            f"£{higher.monthly_price} − {n} × £{lower.monthly_price} > 0 (N ≥ {n_range.n_min:.4f})",
            requirement=Requirement.PRICE_RATIO.value, lhs=n, rhs=n_range.n_min)
    return n_range


def alpha_bounds(lower: FlatRatePlan, higher: FlatRatePlan, n: int,
                 t_month: TimeSpan = DEFAULT_MONTH,
                 mode: UMaxMode = UMaxMode.APPROXIMATE) -> AlphaBounds:
    """
    Meze sklonu α pro dané N.

    Výchozí režim používá přibližné u_max (bez velikostí bucketů).
    Při nulovém rozdílu rychlostí je u_max = 0 a obě meze jsou 0.
    """
    _check_n(lower, higher, n)
    u_max = compute_u_max(lower, higher, t_month, mode).value
    if u_max <= 0:
        return AlphaBounds(PriceSlope(0.0), PriceSlope(0.0))
    upper = (higher.monthly_price - lower.monthly_price).to_float() / u_max
    lower_raw = (higher.monthly_price - lower.monthly_price * n).to_float() / u_max
    return AlphaBounds(PriceSlope(max(0.0, lower_raw)), PriceSlope(upper))


def plan_bounds(lower: FlatRatePlan, higher: FlatRatePlan, n: int,
                t_month: TimeSpan = DEFAULT_MONTH,
                mode: UMaxMode = UMaxMode.APPROXIMATE) -> PlanBounds:
    """Sestaví meze návrhu pro report."""
    n_range = _check_n(lower, higher, n)
    alphas = alpha_bounds(lower, higher, n, t_month, mode)
    return PlanBounds(
        n_min=n_range.n_min, n_max=n_range.n_max, n_low=n_range.n_low, n_high=n_range.n_high,
        alpha_min=alphas.alpha_min, alpha_max=alphas.alpha_max,
        u_max=compute_u_max(lower, higher, t_month, mode), n=n,
    )


def _pick_n(n_range: FeasibleNRange, policy: SelectionPolicy,
            lower: FlatRatePlan, higher: FlatRatePlan) -> int:
    if policy.kind == SelectionPolicy.MAX:
        return n_range.n_high
    if policy.kind == SelectionPolicy.MIN:
        return n_range.n_low
    value = policy.value
    if value is None or float(value) != int(value):
        raise PlanBoundsError(f"Počet odběratelů musí být celé číslo, zadáno {value!r}")
    _check_n(lower, higher, int(value))
    return int(value)


def _pick_alpha(bounds: AlphaBounds, policy: SelectionPolicy) -> PriceSlope:
    if policy.kind == SelectionPolicy.MAX:
        return bounds.alpha_max
    if policy.kind == SelectionPolicy.MIN:
        return bounds.alpha_min
    alpha = float(policy.value)
    if alpha > bounds.alpha_max.value:
        raise PlanBoundsError(
            f"α = {alpha:.6g} porušuje {Requirement.ALPHA_UPPER.formula} "
            f"(α ≤ {bounds.alpha_max.value:.6g} £/Mbit)",
            requirement=Requirement.ALPHA_UPPER.value, lhs=alpha, rhs=bounds.alpha_max.value)
    if alpha < bounds.alpha_min.value:
        raise PlanBoundsError(
            f"α = {alpha:.6g} porušuje {Requirement.ALPHA_LOWER.formula} "
            f"(α ≥ {bounds.alpha_min.value:.6g} £/Mbit)",
            requirement=Requirement.ALPHA_LOWER.value, lhs=alpha, rhs=bounds.alpha_min.value)
    return PriceSlope(alpha)


def design_hybrid_plan(lower: FlatRatePlan, higher: FlatRatePlan,
                       t_month: TimeSpan = DEFAULT_MONTH,
                       n_policy: SelectionPolicy = SelectionPolicy.maximum(),
                       alpha_policy: SelectionPolicy = SelectionPolicy.maximum(),
                       mode: UMaxMode = UMaxMode.APPROXIMATE) -> HybridPlan:
    """
    Navrhne hybridní tarif z dvojice paušálů.

    Základní cena je cena nižšího tarifu (P(0) = 0), rychlost a bucket se
    přebírají z nižšího tarifu, N a α podle zvolených politik.
    """
    n_policy = SelectionPolicy.parse(n_policy)
    alpha_policy = SelectionPolicy.parse(alpha_policy)
    n_range = feasible_n_range(lower, higher)
    n = _pick_n(n_range, n_policy, lower, higher)
    alpha = _pick_alpha(alpha_bounds(lower, higher, n, t_month, mode), alpha_policy)
    plan = HybridPlan(
        n_subscribers=n,
        base_price=lower.monthly_price,
        slope=alpha,
        token_generation_rate=lower.token_generation_rate,
        token_bucket_size=lower.token_bucket_size or DataVolume(0.0),
        month_length=t_month,
        group_rate=higher.token_generation_rate,
        group_bucket_size=higher.token_bucket_size,
        name=f"{lower.name}×{n}" if lower.name else "hybrid",
        u_max_mode=UMaxMode(mode),
    )
    logger.info(f"Navržen tarif: N = {n}, P = £{plan.base_price}, α = {alpha.value:.6g} £/Mbit "
                f"(politiky {n_policy.describe()}/{alpha_policy.describe()})")
    return plan


def validate_hybrid_plan(plan: HybridPlan, lower: FlatRatePlan,
                         higher: FlatRatePlan) -> ValidationReport:
    """
    Zkontroluje tarif proti všem statickým požadavkům.

    Selhání jsou položky reportu, ne výjimky.
    """
    report = ValidationReport()
    n = plan.n_subscribers
    tgr_l = plan.token_generation_rate.value
    tgr_h = higher.token_generation_rate.value
    group_lhs = n * tgr_l
    report.entries.append(CheckEntry(
        Requirement.GROUP_RATE, f"{group_lhs:g} Mbit/s", f"{tgr_h:g} Mbit/s", group_lhs <= tgr_h))

    u_max = compute_u_max(lower, higher, plan.month_length, plan.u_max_mode)
    top_price = plan.base_price + slope_times_volume(plan.slope, u_max)
    report.entries.append(CheckEntry(
        Requirement.PRICE_CAP, f"£{top_price}", f"£{higher.monthly_price}",
        top_price <= higher.monthly_price,
        note=f"u_max = {u_max.value:.6g} Mbit; rozdíl £{top_price - higher.monthly_price}"))

    report.entries.append(CheckEntry(
        Requirement.BASE_PRICE, f"£{plan.base_price}", f"£{lower.monthly_price}",
        plan.base_price == lower.monthly_price))

    ratio_lhs = higher.monthly_price - lower.monthly_price * n
    report.entries.append(CheckEntry(
        Requirement.PRICE_RATIO, f"£{ratio_lhs}", "£0.000000", ratio_lhs.micros <= 0))

    if u_max.value > 0:
        alpha_floor = max(0.0, ratio_lhs.to_float() / u_max.value)
    else:
        alpha_floor = 0.0
    report.entries.append(CheckEntry(
        Requirement.ALPHA_LOWER, f"{plan.slope.value:.6g} £/Mbit", f"{alpha_floor:.6g} £/Mbit",
        plan.slope.value >= alpha_floor))

    for entry in report.failed():
        logger.warning(f"Tarif nesplňuje {entry.formula}: {entry.lhs} vs. {entry.rhs}")
    return report
