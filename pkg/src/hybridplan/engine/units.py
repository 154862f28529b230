"""
Modul s jednotkově bezpečnými skalárními typy.

Rychlost (Mbit/s), objem dat (Mbit), čas (s) a sklon ceny (£/Mbit) jsou
reálná čísla s dvojitou přesností; peníze jsou celé mikrolibry (10⁻⁶ £),
aby součty účtů byly přesné.
"""

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP, InvalidOperation
from typing import Union

from .errors import UnitError

MICROS_PER_POUND = 1_000_000
SECONDS_PER_DAY = 86_400

PoundsLike = Union[Decimal, int, str, float]


def _check_non_negative(kind: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or value < 0:
        raise UnitError(f"{kind} musí být nezáporná hodnota, zadáno {value!r}")
    return value


@dataclass(frozen=True, order=True)
class Rate:
    """Přenosová rychlost v Mbit/s."""
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _check_non_negative("Rychlost", self.value))

    def __str__(self) -> str:
        return f"{self.value:g} Mbit/s"


@dataclass(frozen=True, order=True)
class DataVolume:
    """Objem dat v Mbit."""
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _check_non_negative("Objem dat", self.value))

    def __str__(self) -> str:
        return f"{self.value:.6g} Mbit"


@dataclass(frozen=True, order=True)
class TimeSpan:
    """Časový interval v sekundách."""
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _check_non_negative("Čas", self.value))

    def __str__(self) -> str:
        return f"{self.value:g} s"


@dataclass(frozen=True, order=True)
class PriceSlope:
    """Sklon lineární ceny za využití v £/Mbit."""
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _check_non_negative("Sklon ceny", self.value))

    def __str__(self) -> str:
        return f"{self.value:.4g} £/Mbit"


@dataclass(frozen=True, order=True)
class Money:
    """
    Peněžní částka v celých mikrolibrách.

    Záporné částky jsou povolené (rozdíly v reportech), účty samotné jsou vždy nezáporné.
    """
    micros: int

    def __post_init__(self):
        if isinstance(self.micros, bool) or not isinstance(self.micros, int):
            raise UnitError(f"Částka musí být celé číslo mikroliber, zadáno {self.micros!r}")

    def __add__(self, other: "Money") -> "Money":
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.micros + other.micros)

    def __radd__(self, other):
        # sum() začíná nulou
        if other == 0:
            return self
        return NotImplemented

    def __sub__(self, other: "Money") -> "Money":
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.micros - other.micros)

    def __mul__(self, factor: int) -> "Money":
        if isinstance(factor, bool) or not isinstance(factor, int):
            return NotImplemented
        return Money(self.micros * factor)

    __rmul__ = __mul__

    def __neg__(self) -> "Money":
        return Money(-self.micros)

    def to_pounds(self) -> Decimal:
        """Vrací přesnou hodnotu v librách."""
        return Decimal(self.micros).scaleb(-6)

    def to_float(self) -> float:
        """Hodnota v librách jako float – pouze pro výpočet mezí, ne pro účty."""
        return self.micros / MICROS_PER_POUND

    def __str__(self) -> str:
        sign = "-" if self.micros < 0 else ""
        whole, frac = divmod(abs(self.micros), MICROS_PER_POUND)
        return f"{sign}{whole}.{frac:06d}"


def rate_times_time(rate: Rate, span: TimeSpan) -> DataVolume:
    """Objem přenesený rychlostí rate za dobu span."""
    return DataVolume(rate.value * span.value)


def money_from_pounds(amount: PoundsLike) -> Money:
    """
    Převede částku v librách na mikrolibry.

    Args:
        amount: Částka jako Decimal, int, řetězec nebo float

    Returns:
        Přesná částka v mikrolibrách

    Raises:
        UnitError: pokud částka potřebuje více než 6 desetinných míst
    """
    if isinstance(amount, bool):
        raise UnitError(f"Neplatná částka {amount!r}")
    try:
        if isinstance(amount, float):
            if not math.isfinite(amount):
                raise UnitError(f"Neplatná částka {amount!r}")
            value = Decimal(repr(amount))
        else:
            value = Decimal(str(amount).strip())
    except InvalidOperation as exc:
        raise UnitError(f"Neplatná částka {amount!r}") from exc
    if not value.is_finite():
        raise UnitError(f"Neplatná částka {amount!r}")
    micros = value.scaleb(6)
    if micros != micros.to_integral_value():
        raise UnitError(f"Částka {amount} má více než 6 desetinných míst")
    return Money(int(micros))


def slope_times_volume(slope: PriceSlope, volume: DataVolume) -> Money:
    """
    Poplatek α·u zaokrouhlený na mikrolibry (polovina od nuly).

    Součin se počítá přesně z binárních hodnot obou floatů; zaokrouhluje se
    pouze zde, při vzniku položky účtu.
    """
    exact = Decimal(slope.value) * Decimal(volume.value) * MICROS_PER_POUND
    return Money(int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP)))


def month_length(days: int = 30) -> TimeSpan:
    """Délka účetního měsíce v sekundách."""
    if days not in (28, 29, 30, 31):
        raise UnitError(f"Měsíc musí mít 28 až 31 dní, zadáno {days}")
    return TimeSpan(days * SECONDS_PER_DAY)


DEFAULT_MONTH = month_length(30)
