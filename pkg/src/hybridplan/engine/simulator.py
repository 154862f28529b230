"""
Fluidní simulace skupiny odběratelů po dobu účetního měsíce.

Hybridní režim: skupinový (virtuální) TBF s parametry vyššího tarifu omezuje
součet provozu, alokátor rozdělí konformní objem mezi aktivní odběratele a
individuální TBF s parametry nižšího tarifu jen klasifikují přidělený objem
na konformní a přebytečný (u_i).

Klasický režim: každý odběratel má vlastní TBF a nekonformní provoz se zahazuje.
"""

import bisect
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from .allocator import SubscriberState, allocate
from .billing import UsageRecord
from .errors import InfeasibleConfigurationError, ScenarioError
from .planner import FlatRatePlan, HybridPlan, Requirement
from .tbf import BucketSpec, TokenBucket, conform
from .units import DataVolume, Rate, TimeSpan

logger = logging.getLogger("hybridplan.simulator")

MODE_HYBRID = "hybrid"
MODE_LEGACY = "legacy"

DEFAULT_STEP = TimeSpan(1.0)

# Tolerance pro přichycení časů na mřížku kroků (relativně ke kroku)
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Breakpoint:
    """Od času start platí nabízená zátěž rate."""
    start: TimeSpan
    rate: Rate


@dataclass(frozen=True)
class SubscriberTrace:
    """Po částech konstantní nabízená zátěž jednoho odběratele."""
    subscriber_id: Hashable
    breakpoints: Tuple[Breakpoint, ...]

    def __post_init__(self):
        if not self.breakpoints:
            raise ScenarioError(f"Odběratel {self.subscriber_id} nemá žádný bod zátěže")
        if self.breakpoints[0].start.value != 0:
            raise ScenarioError(f"Zátěž odběratele {self.subscriber_id} musí začínat v čase 0")
        for previous, current in zip(self.breakpoints, self.breakpoints[1:]):
            if current.start.value <= previous.start.value:
                raise ScenarioError(
                    f"Body zátěže odběratele {self.subscriber_id} musí být ostře rostoucí v čase")

    @classmethod
    def constant(cls, subscriber_id: Hashable, rate: float) -> "SubscriberTrace":
        return cls(subscriber_id, (Breakpoint(TimeSpan(0.0), Rate(rate)),))


@dataclass(frozen=True)
class DemandScenario:
    """Scénář poptávky všech odběratelů skupiny."""
    traces: Tuple[SubscriberTrace, ...]
    horizon: TimeSpan
    name: str = "scenario"

    def __post_init__(self):
        if self.horizon.value <= 0:
            raise ScenarioError(f"Horizont scénáře {self.name} musí být kladný")
        ids = [t.subscriber_id for t in self.traces]
        if len(set(ids)) != len(ids):
            raise ScenarioError(f"Scénář {self.name} obsahuje duplicitní identifikátory odběratelů")

    @property
    def subscriber_ids(self) -> List[Hashable]:
        return [t.subscriber_id for t in self.traces]

    @classmethod
    def idle(cls, subscriber_ids: Sequence[Hashable], horizon: TimeSpan,
             name: str = "idle") -> "DemandScenario":
        """Prázdný scénář – nikdo nic nestahuje."""
        return cls(tuple(SubscriberTrace.constant(i, 0.0) for i in subscriber_ids), horizon, name)

    @classmethod
    def constant(cls, rates: Dict[Hashable, float], horizon: TimeSpan,
                 name: str = "constant") -> "DemandScenario":
        return cls(tuple(SubscriberTrace.constant(i, r) for i, r in rates.items()), horizon, name)


@dataclass(frozen=True)
class GrantSegment:
    """Interval, ve kterém byly přidělené rychlosti konstantní."""
    start: float
    end: float
    rates: Tuple[float, ...]


@dataclass(frozen=True)
class SubscriberQoS:
    subscriber_id: Hashable
    offered_volume: DataVolume
    granted_volume: DataVolume
    conformant_volume: DataVolume
    excess_volume: DataVolume
    dropped_volume: DataVolume
    mean_granted_rate: Rate
    satisfaction: float


@dataclass(frozen=True)
class GroupMetrics:
    offered_volume: DataVolume
    granted_volume: DataVolume
    conformant_volume: DataVolume
    wasted_capacity_volume: DataVolume


@dataclass(frozen=True)
class SimulationResult:
    mode: str
    scenario_name: str
    step: TimeSpan
    horizon: TimeSpan
    usage_records: Tuple[UsageRecord, ...]
    qos: Tuple[SubscriberQoS, ...]
    group: GroupMetrics
    time_series: Tuple[GrantSegment, ...]

    def usage_by_id(self) -> Dict[Hashable, UsageRecord]:
        return {u.subscriber_id: u for u in self.usage_records}

    def qos_by_id(self) -> Dict[Hashable, SubscriberQoS]:
        return {q.subscriber_id: q for q in self.qos}


class _Accumulator:
    """Průběžné součty objemů; přírůstky ustáleného stavu se násobí počtem kroků."""

    def __init__(self, count: int):
        self.offered = [0.0] * count
        self.granted = [0.0] * count
        self.conformant = [0.0] * count
        self.excess = [0.0] * count
        self.dropped = [0.0] * count
        self.group_conformant = 0.0
        self.wasted = 0.0

    def add(self, step: "_StepOutcome", times: int = 1) -> None:
        for i in range(len(self.offered)):
            self.offered[i] += step.offered[i] * times
            self.granted[i] += step.granted[i] * times
            self.conformant[i] += step.conformant[i] * times
            self.excess[i] += step.excess[i] * times
            self.dropped[i] += step.dropped[i] * times
        self.group_conformant += step.group_conformant * times
        self.wasted += step.wasted * times


@dataclass
class _StepOutcome:
    offered: List[float]
    granted: List[float]
    conformant: List[float]
    excess: List[float]
    dropped: List[float]
    group_conformant: float
    wasted: float


def _snap_index(value: float, step: float, what: str) -> int:
    index = math.floor(value / step + 0.5)
    if abs(index * step - value) > GRID_TOLERANCE * step:
        logger.warning(f"{what} {value:g} s není na mřížce kroku {step:g} s, přichycuji na {index * step:g} s")
    return index


def _demand_schedule(scenario: DemandScenario, step: float,
                     n_steps: int) -> List[Tuple[List[int], List[float]]]:
    """Pro každého odběratele seznam indexů kroků, od kterých platí daná rychlost."""
    schedules = []
    for trace in scenario.traces:
        points: Dict[int, float] = {}
        for bp in trace.breakpoints:
            index = _snap_index(bp.start.value, step, f"Bod zátěže odběratele {trace.subscriber_id}")
            index = min(index, n_steps)
            if index in points:
                logger.warning(f"Body zátěže odběratele {trace.subscriber_id} splynuly v kroku {index}, "
                               f"platí pozdější")
            points[index] = bp.rate.value
        indices = sorted(points)
        schedules.append((indices, [points[i] for i in indices]))
    return schedules


def _rate_at(schedule: Tuple[List[int], List[float]], index: int) -> float:
    indices, rates = schedule
    position = bisect.bisect_right(indices, index) - 1
    return rates[position] if position >= 0 else 0.0


def _segments(schedules, n_steps: int) -> List[Tuple[int, int]]:
    cuts = {0, n_steps}
    for indices, _ in schedules:
        cuts.update(i for i in indices if 0 < i < n_steps)
    ordered = sorted(cuts)
    return list(zip(ordered, ordered[1:]))


def _token_state(buckets: Sequence[TokenBucket]) -> Tuple[float, ...]:
    return tuple(b.tokens.value for b in buckets)


def _advance(buckets: List[TokenBucket], now: TimeSpan) -> List[TokenBucket]:
    return [replace(b, last_update=now) for b in buckets]


class _Engine:
    """Společná smyčka simulace pro oba režimy."""

    def __init__(self, scenario: DemandScenario, step: TimeSpan, sub_specs: Sequence[BucketSpec],
                 link_rate: Rate, group_spec: Optional[BucketSpec], mode: str):
        if step.value <= 0:
            raise ScenarioError("Krok simulace musí být kladný")
        self.scenario = scenario
        self.step = step.value
        self.mode = mode
        self.link_rate = link_rate.value
        self.ids = scenario.subscriber_ids
        self.sub_specs = list(sub_specs)
        self.group_spec = group_spec
        self.n_steps = max(1, _snap_index(scenario.horizon.value, self.step, "Horizont"))

    def _hybrid_step(self, demands: List[float], now: TimeSpan,
                     group: TokenBucket, subs: List[TokenBucket]):
        offered = [d * self.step for d in demands]
        group_volume, _, group = conform(group, DataVolume(math.fsum(offered)), now)
        capacity = Rate(group_volume.value / self.step)
        states = [
            SubscriberState(sid, spec.rate, spec.rate, Rate(d))
            for sid, spec, d in zip(self.ids, self.sub_specs, demands)
        ]
        allocation = allocate(capacity, states)
        granted, conformant, excess, updated = [], [], [], []
        for grant, bucket in zip(allocation.granted(), subs):
            volume = grant * self.step
            c, e, bucket = conform(bucket, DataVolume(volume), now)
            granted.append(volume)
            conformant.append(c.value)
            excess.append(e.value)
            updated.append(bucket)
        outcome = self._outcome(offered, granted, conformant, excess, group_volume.value)
        return outcome, group, updated

    def _legacy_step(self, demands: List[float], now: TimeSpan, subs: List[TokenBucket]):
        offered = [d * self.step for d in demands]
        granted, updated = [], []
        for volume, bucket in zip(offered, subs):
            c, _, bucket = conform(bucket, DataVolume(volume), now)
            granted.append(c.value)
            updated.append(bucket)
        # Nekonformní provoz se zahazuje, přebytečné využití je nulové
        outcome = self._outcome(offered, granted, list(granted), [0.0] * len(granted),
                                math.fsum(granted))
        return outcome, updated

    def _outcome(self, offered, granted, conformant, excess, group_conformant) -> _StepOutcome:
        dropped = [max(0.0, o - g) for o, g in zip(offered, granted)]
        tolerance = GRID_TOLERANCE * max(1.0, self.link_rate * self.step)
        unsatisfied = any(d > tolerance for d in dropped)
        wasted = max(0.0, self.link_rate * self.step - math.fsum(granted)) if unsatisfied else 0.0
        return _StepOutcome(offered, granted, conformant, excess, dropped, group_conformant, wasted)

    def run(self) -> SimulationResult:
        count = len(self.ids)
        schedules = _demand_schedule(self.scenario, self.step, self.n_steps)
        subs = [spec.new_bucket() for spec in self.sub_specs]
        group = self.group_spec.new_bucket() if self.group_spec else None
        totals = _Accumulator(count)
        series: List[GrantSegment] = []

        for seg_start, seg_end in _segments(schedules, self.n_steps):
            demands = [_rate_at(s, seg_start) for s in schedules]
            k = seg_start
            while k < seg_end:
                first = k
                before = _token_state(subs + ([group] if group is not None else []))
                now = TimeSpan((k + 1) * self.step)
                if self.mode == MODE_HYBRID:
                    outcome, group, subs = self._hybrid_step(demands, now, group, subs)
                else:
                    outcome, subs = self._legacy_step(demands, now, subs)
                totals.add(outcome)
                k += 1
                after = _token_state(subs + ([group] if group is not None else []))
                if after == before and k < seg_end:
                    # Ustálený stav: zbývající kroky segmentu jsou totožné
                    repeat = seg_end - k
                    totals.add(outcome, repeat)
                    k = seg_end
                    end_time = TimeSpan(k * self.step)
                    subs = _advance(subs, end_time)
                    if group is not None:
                        group = replace(group, last_update=end_time)
                rates = tuple(g / self.step for g in outcome.granted)
                self._record(series, first * self.step, k * self.step, rates)

        return self._result(totals, series)

    @staticmethod
    def _record(series: List[GrantSegment], start: float, end: float, rates: Tuple[float, ...]) -> None:
        if series and series[-1].rates == rates and series[-1].end == start:
            series[-1] = replace(series[-1], end=end)
        else:
            series.append(GrantSegment(start, end, rates))

    def _result(self, totals: _Accumulator, series: List[GrantSegment]) -> SimulationResult:
        horizon = self.n_steps * self.step
        month = TimeSpan(horizon)
        usage, qos = [], []
        for i, sid in enumerate(self.ids):
            usage.append(UsageRecord(sid, DataVolume(totals.conformant[i]),
                                     DataVolume(totals.excess[i]), month))
            offered = totals.offered[i]
            satisfaction = totals.granted[i] / offered if offered > 0 else 1.0
            qos.append(SubscriberQoS(
                subscriber_id=sid,
                offered_volume=DataVolume(offered),
                granted_volume=DataVolume(totals.granted[i]),
                conformant_volume=DataVolume(totals.conformant[i]),
                excess_volume=DataVolume(totals.excess[i]),
                dropped_volume=DataVolume(totals.dropped[i]),
                mean_granted_rate=Rate(totals.granted[i] / horizon),
                satisfaction=min(1.0, satisfaction),
            ))
        group = GroupMetrics(
            offered_volume=DataVolume(math.fsum(totals.offered)),
            granted_volume=DataVolume(math.fsum(totals.granted)),
            conformant_volume=DataVolume(totals.group_conformant),
            wasted_capacity_volume=DataVolume(totals.wasted),
        )
        logger.info(f"Simulace {self.scenario.name} ({self.mode}) dokončena: {self.n_steps} kroků, "
                    f"přidělený objem {group.granted_volume.value:.6g} Mbit")
        return SimulationResult(self.mode, self.scenario.name, TimeSpan(self.step), month,
                                tuple(usage), tuple(qos), group, tuple(series))


def _check_count(scenario: DemandScenario, expected: int) -> None:
    if len(scenario.traces) != expected:
        raise ScenarioError(
            f"Scénář {scenario.name} má {len(scenario.traces)} odběratelů, plán jich má {expected}")


def _check_group_rate(n: int, sub_rate_total: float, link_rate: float) -> None:
    if sub_rate_total > link_rate * (1 + GRID_TOLERANCE):
        raise InfeasibleConfigurationError(
            f"Skupina {n} odběratelů porušuje {Requirement.GROUP_RATE.formula}: "
            f"{sub_rate_total:g} > {link_rate:g} Mbit/s",
            requirement=Requirement.GROUP_RATE.value, lhs=sub_rate_total, rhs=link_rate)


def group_spec_for(plan: HybridPlan) -> BucketSpec:
    """Skupinový bucket podle kontraktu, proti kterému byl tarif navržen."""
    if plan.group_rate is None:
        raise InfeasibleConfigurationError("Plán neobsahuje rychlost skupinového kontraktu (TGR_H)")
    return BucketSpec(plan.group_rate, plan.group_bucket_size or DataVolume(0.0))


def run_hybrid(plan: HybridPlan, scenario: DemandScenario, step: TimeSpan = DEFAULT_STEP,
               group_bucket: Optional[BucketSpec] = None) -> SimulationResult:
    """
    Simulace hybridního řízení provozu.

    Args:
        plan: Hybridní tarif (N, TGR_L, TBS_L)
        scenario: Scénář poptávky s N odběrateli
        step: Krok simulace
        group_bucket: Skupinový bucket (TGR_H, TBS_H); výchozí z plánu

    Raises:
        ScenarioError: nesoulad počtu odběratelů nebo chybný scénář
        InfeasibleConfigurationError: N × TGR_L > TGR_H
    """
    _check_count(scenario, plan.n_subscribers)
    group_bucket = group_bucket or group_spec_for(plan)
    sub_spec = BucketSpec(plan.token_generation_rate, plan.token_bucket_size)
    _check_group_rate(plan.n_subscribers, plan.n_subscribers * sub_spec.rate.value,
                      group_bucket.rate.value)
    engine = _Engine(scenario, step, [sub_spec] * plan.n_subscribers, group_bucket.rate,
                     group_bucket, MODE_HYBRID)
    return engine.run()


def _as_spec(subscriber: Union[FlatRatePlan, BucketSpec]) -> BucketSpec:
    if isinstance(subscriber, BucketSpec):
        return subscriber
    return BucketSpec(subscriber.token_generation_rate,
                      subscriber.token_bucket_size or DataVolume(0.0))


def run_legacy(subscribers: Sequence[Union[FlatRatePlan, BucketSpec]], scenario: DemandScenario,
               step: TimeSpan = DEFAULT_STEP, link_rate: Optional[Rate] = None) -> SimulationResult:
    """
    Simulace současné praxe: každý odběratel za vlastním TBF.

    Args:
        subscribers: Shapery jednotlivých odběratelů
        scenario: Scénář poptávky
        step: Krok simulace
        link_rate: Rychlost sdíleného spoje (TGR_H) pro metriku nevyužité kapacity;
            výchozí je součet rychlostí odběratelů
    """
    _check_count(scenario, len(subscribers))
    specs = [_as_spec(s) for s in subscribers]
    total = math.fsum(s.rate.value for s in specs)
    link = link_rate or Rate(total)
    _check_group_rate(len(specs), total, link.value)
    return _Engine(scenario, step, specs, link, None, MODE_LEGACY).run()


def run_legacy_for_plan(plan: HybridPlan, scenario: DemandScenario,
                        step: TimeSpan = DEFAULT_STEP) -> SimulationResult:
    """Klasický režim pro stejnou skupinu, jakou popisuje hybridní tarif."""
    spec = BucketSpec(plan.token_generation_rate, plan.token_bucket_size)
    return run_legacy([spec] * plan.n_subscribers, scenario, step, group_spec_for(plan).rate)


def default_subscriber_ids(n: int) -> List[str]:
    return [f"sub-{i}" for i in range(1, n + 1)]


def extreme_case_scenarios(plan: HybridPlan, t_month: Optional[TimeSpan] = None,
                           saturating_rate: Optional[Rate] = None,
                           subscriber_ids: Optional[Sequence[Hashable]] = None
                           ) -> Tuple[DemandScenario, DemandScenario]:
    """
    Dva krajní případy využití přebytečné šířky pásma.

    Případ 1: aktivní je jen první odběratel a saturuje skupinu.
    Případ 2: aktivní jsou všichni a saturují skupinu.
    Saturující poptávka je ve výchozím stavu dvojnásobek TGR_H.
    """
    horizon = t_month or plan.month_length
    ids = list(subscriber_ids) if subscriber_ids else default_subscriber_ids(plan.n_subscribers)
    if len(ids) != plan.n_subscribers:
        raise ScenarioError(f"Očekáváno {plan.n_subscribers} identifikátorů odběratelů")
    if saturating_rate is None:
        group_rate = plan.group_rate.value if plan.group_rate else \
            plan.n_subscribers * plan.token_generation_rate.value
        saturating_rate = Rate(2 * group_rate)
    case1 = DemandScenario(
        tuple(SubscriberTrace.constant(sid, saturating_rate.value if i == 0 else 0.0)
              for i, sid in enumerate(ids)),
        horizon, "case1")
    case2 = DemandScenario(
        tuple(SubscriberTrace.constant(sid, saturating_rate.value) for sid in ids),
        horizon, "case2")
    return case1, case2


def compare_modes(hybrid: SimulationResult, legacy: SimulationResult) -> Dict[Hashable, float]:
    """Objem, o který hybridní režim přidělil víc než klasický (po odběratelích)."""
    legacy_qos = legacy.qos_by_id()
    return {
        q.subscriber_id: q.granted_volume.value - legacy_qos[q.subscriber_id].granted_volume.value
        for q in hybrid.qos
    }
