"""
Fluidní model token bucket filtru (TBF).

Tokeny přibývají rychlostí rate až do kapacity capacity; nabízený objem je
konformní jen do výše dostupných tokenů. Zbytek je nekonformní provoz –
v klasickém režimu se zahazuje, v hybridním se účtuje jako využití přebytečné
šířky pásma.
"""

import logging
from dataclasses import dataclass, replace
from typing import Tuple

from .errors import TimeRegressionError, UnitError
from .units import DataVolume, Rate, TimeSpan

logger = logging.getLogger("hybridplan.tbf")


@dataclass(frozen=True)
class BucketSpec:
    """Parametry shaperu bez stavu: rychlost generování tokenů a velikost bucketu."""
    rate: Rate
    capacity: DataVolume

    def new_bucket(self, at: TimeSpan = TimeSpan(0.0)) -> "TokenBucket":
        """Vytvoří plný bucket v čase at."""
        return TokenBucket.full(self.rate, self.capacity, at)


@dataclass(frozen=True)
class TokenBucket:
    """
    Stav jednoho shaperu.

    Invarianty: 0 ≤ tokens ≤ capacity; last_update neklesá.
    """
    rate: Rate
    capacity: DataVolume
    tokens: DataVolume
    last_update: TimeSpan

    def __post_init__(self):
        if self.tokens.value > self.capacity.value:
            raise UnitError(
                f"Počet tokenů {self.tokens.value} převyšuje kapacitu {self.capacity.value}")

    @classmethod
    def full(cls, rate: Rate, capacity: DataVolume, at: TimeSpan = TimeSpan(0.0)) -> "TokenBucket":
        """Bucket na začátku měsíce začíná plný."""
        return cls(rate=rate, capacity=capacity, tokens=capacity, last_update=at)


def _elapsed(bucket: TokenBucket, now: TimeSpan) -> float:
    if now.value < bucket.last_update.value:
        raise TimeRegressionError(now.value, bucket.last_update.value)
    return now.value - bucket.last_update.value


def refill(bucket: TokenBucket, now: TimeSpan) -> TokenBucket:
    """
    Doplní tokeny za dobu od poslední aktualizace.

    Raises:
        TimeRegressionError: pokud now < last_update
    """
    elapsed = _elapsed(bucket, now)
    tokens = min(bucket.capacity.value, bucket.tokens.value + bucket.rate.value * elapsed)
    return replace(bucket, tokens=DataVolume(tokens), last_update=now)


def conform(bucket: TokenBucket, offered: DataVolume,
            now: TimeSpan) -> Tuple[DataVolume, DataVolume, TokenBucket]:
    """
    Rozdělí nabízený objem na konformní a nekonformní část.

    Objem nabízený za interval (last_update, now] se bere jako rovnoměrně
    rozložený v intervalu, takže tokeny vzniklé během intervalu může provoz
    téhož intervalu spotřebovat i při capacity < rate·Δt. Pro Δt = 0 jde
    přesně o doplnění a odebrání min(offered, tokens).

    Args:
        bucket: Aktuální stav bucketu
        offered: Nabízený objem v Mbit
        now: Konec intervalu

    Returns:
        Trojice (konformní objem, nekonformní objem, nový stav bucketu)
    """
    elapsed = _elapsed(bucket, now)
    available = bucket.tokens.value + bucket.rate.value * elapsed
    conformant = min(offered.value, available)
    excess = offered.value - conformant
    tokens = min(bucket.capacity.value, available - conformant)
    updated = replace(bucket, tokens=DataVolume(max(0.0, tokens)), last_update=now)
    return DataVolume(conformant), DataVolume(max(0.0, excess)), updated


def max_conformant_volume(rate: Rate, capacity: DataVolume, horizon: TimeSpan) -> DataVolume:
    """Horní mez konformního objemu za horizont při plném bucketu na začátku: r·T + b."""
    return DataVolume(rate.value * horizon.value + capacity.value)
