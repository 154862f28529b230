"""
Okamžité rozdělení přebytečné šířky pásma mezi aktivní odběratele.

Nejdřív každý dostane min(poptávka, garantovaná rychlost), zbytek kapacity
se rozdělí váženým progresivním plněním (max-min férovost s vahami rovnými
rychlostem generování tokenů). Tento modul je jediné místo, kde se dá
zaměnit alokační schéma skupiny.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Hashable, List, Sequence, Tuple

from .errors import AllocationInfeasibleError, UnitError
from .units import Rate

logger = logging.getLogger("hybridplan.allocator")

# Relativní tolerance pro kontrolu proveditelnosti (zaokrouhlení floatů)
FEASIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SubscriberState:
    """Okamžitý stav odběratele pro alokaci."""
    subscriber_id: Hashable
    guaranteed_rate: Rate
    weight: Rate
    demand: Rate

    def __post_init__(self):
        if self.weight.value <= 0:
            raise UnitError(f"Váha odběratele {self.subscriber_id} musí být kladná")


@dataclass(frozen=True)
class SubscriberAllocation:
    subscriber_id: Hashable
    granted_rate: Rate
    guaranteed_part: Rate
    excess_part: Rate


@dataclass(frozen=True)
class AllocationResult:
    """Výsledek alokace v pořadí vstupních odběratelů."""
    allocations: Tuple[SubscriberAllocation, ...]

    def by_id(self) -> Dict[Hashable, SubscriberAllocation]:
        return {a.subscriber_id: a for a in self.allocations}

    def total_granted(self) -> float:
        return math.fsum(a.granted_rate.value for a in self.allocations)

    def granted(self) -> List[float]:
        return [a.granted_rate.value for a in self.allocations]


def _tie_key(subscriber_id: Hashable) -> Tuple[str, str]:
    return (type(subscriber_id).__name__, str(subscriber_id))


def water_fill(capacity: float, caps: Sequence[float], weights: Sequence[float],
               order_keys: Sequence = None) -> List[float]:
    """
    Přesné vážené progresivní plnění v uzavřeném tvaru.

    Odběratelé se zpracují vzestupně podle cap/weight; kdo se vejde pod
    aktuální hladinu, dostane celý svůj strop, ostatní dostanou weight·hladina.

    Args:
        capacity: Kapacita k rozdělení
        caps: Stropy jednotlivých odběratelů (může být inf)
        weights: Kladné váhy
        order_keys: Klíče pro rozhodnutí shod (výchozí je index)

    Returns:
        Přidělené hodnoty v pořadí vstupu
    """
    count = len(caps)
    keys = list(order_keys) if order_keys is not None else list(range(count))
    shares = [0.0] * count
    pending = [i for i in range(count) if caps[i] > 0]
    pending.sort(key=lambda i: (caps[i] / weights[i], keys[i]))

    remaining = max(0.0, capacity)
    weight_left = math.fsum(weights[i] for i in pending)
    for position, index in enumerate(pending):
        if remaining <= 0 or weight_left <= 0:
            break
        level = remaining / weight_left
        if caps[index] <= weights[index] * level:
            shares[index] = caps[index]
            remaining -= caps[index]
            weight_left -= weights[index]
        else:
            # Všichni zbývající jsou nad hladinou
            for rest in pending[position:]:
                shares[rest] = weights[rest] * level
            break
    return shares


def allocate(capacity: Rate, subscribers: Sequence[SubscriberState]) -> AllocationResult:
    """
    Rozdělí kapacitu skupiny mezi odběratele.

    Args:
        capacity: Okamžitá kapacita skupiny
        subscribers: Stavy odběratelů

    Returns:
        Přidělené rychlosti rozdělené na garantovanou a přebytečnou část

    Raises:
        AllocationInfeasibleError: pokud garantované části převyšují kapacitu
    """
    guaranteed = [min(s.demand.value, s.guaranteed_rate.value) for s in subscribers]
    guaranteed_total = math.fsum(guaranteed)
    slack = FEASIBILITY_TOLERANCE * max(1.0, capacity.value)
    if guaranteed_total > capacity.value + slack:
        raise AllocationInfeasibleError(guaranteed_total - capacity.value,
                                        guaranteed_total, capacity.value)

    leftover = max(0.0, capacity.value - guaranteed_total)
    caps = [s.demand.value - g for s, g in zip(subscribers, guaranteed)]
    weights = [s.weight.value for s in subscribers]
    keys = [_tie_key(s.subscriber_id) for s in subscribers]
    excess = water_fill(leftover, caps, weights, keys)

    allocations = tuple(
        SubscriberAllocation(
            subscriber_id=s.subscriber_id,
            granted_rate=Rate(g + e),
            guaranteed_part=Rate(g),
            excess_part=Rate(e),
        )
        for s, g, e in zip(subscribers, guaranteed, excess)
    )
    return AllocationResult(allocations)


def progressive_fill_oracle(capacity: Rate, caps: Sequence[Rate], weights: Sequence[Rate],
                            step: Rate) -> List[float]:
    """
    Pomalá referenční implementace progresivního plnění po krocích step.

    V každém kole dostane každý nezastropený odběratel step·w_i/Σw; co se
    nevejde pod strop, vrací se do zásoby. Slouží jen k ověřování allocate.
    """
    if step.value <= 0:
        raise UnitError("Krok orákula musí být kladný")
    count = len(caps)
    limits = [c.value for c in caps]
    w = [x.value for x in weights]
    shares = [0.0] * count
    remaining = capacity.value
    while remaining > 1e-15:
        active = [i for i in range(count) if shares[i] < limits[i]]
        if not active:
            break
        increment = min(step.value, remaining)
        weight_sum = sum(w[i] for i in active)
        handed_out = 0.0
        for i in active:
            grant = min(increment * w[i] / weight_sum, limits[i] - shares[i])
            shares[i] += grant
            handed_out += grant
        remaining -= handed_out
        if handed_out <= 0:
            break
    return shares
