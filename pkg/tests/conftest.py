import os
import sys

import pytest
from hypothesis import strategies as st

# Kořen repozitáře do sys.path, aby šlo importovat src.* i plugins.*
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.hybridplan.engine.planner import FlatRatePlan, SelectionPolicy, design_hybrid_plan
from src.hybridplan.engine.units import DEFAULT_MONTH, Money, Rate, money_from_pounds

# α = (P_H − P_L) / ((TGR_H − TGR_L) · T_month) pro dvojici Virgin Media
VIRGIN_ALPHA_MAX = 12.5 / 2.64384e8
VIRGIN_U_MAX = 2.64384e8

POLICIES = [SelectionPolicy.maximum(), SelectionPolicy.minimum()]


@st.composite
def plan_pairs(draw):
    """Náhodná platná dvojice tarifů s neprázdným intervalem N."""
    rate_low = draw(st.integers(1, 500))
    multiple = draw(st.integers(1, 6))
    fraction = draw(st.floats(0.0, 0.99))
    rate_high = rate_low * multiple + rate_low * fraction
    price_low = draw(st.integers(100, 10_000))
    n = draw(st.integers(1, multiple))
    price_high = draw(st.integers(price_low, price_low * n))
    lower = FlatRatePlan(Money(price_low * 10_000), Rate(rate_low))
    higher = FlatRatePlan(Money(price_high * 10_000), Rate(rate_high))
    return lower, higher


@pytest.fixture
def lower() -> FlatRatePlan:
    return FlatRatePlan(money_from_pounds("26.50"), Rate(50), name="Virgin 50")


@pytest.fixture
def higher() -> FlatRatePlan:
    return FlatRatePlan(money_from_pounds("39.00"), Rate(152), name="Virgin 152")


@pytest.fixture
def virgin_plan(lower, higher):
    return design_hybrid_plan(lower, higher, DEFAULT_MONTH)


@pytest.fixture
def virgin_config(tmp_path) -> dict:
    return {
        "lower": {"name": "Virgin 50", "price_gbp": "26.50", "rate_mbps": 50},
        "higher": {"name": "Virgin 152", "price_gbp": "39.00", "rate_mbps": 152},
        "month_days": 30,
        "design": {"n_policy": "max", "alpha_policy": "max"},
        "simulation": {"step_s": 1.0, "mode": "hybrid", "builtin_cases": [1, 2], "workers": 2},
        "output": {"directory": str(tmp_path / "out")},
        "logging": {"level": "WARNING"},
    }
