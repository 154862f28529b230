import pytest
from hypothesis import given, settings, strategies as st

from src.hybridplan.engine.errors import TimeRegressionError, UnitError
from src.hybridplan.engine.tbf import (BucketSpec, TokenBucket, conform, max_conformant_volume,
                                       refill)
from src.hybridplan.engine.units import DataVolume, Rate, TimeSpan


def bucket(rate, capacity, tokens, last=0.0) -> TokenBucket:
    return TokenBucket(Rate(rate), DataVolume(capacity), DataVolume(tokens), TimeSpan(last))


def test_refill_examples():
    assert refill(bucket(50, 100, 0), TimeSpan(1)).tokens.value == 50
    assert refill(bucket(50, 100, 80), TimeSpan(10)).tokens.value == 100
    refilled = refill(bucket(50, 100, 40, last=5), TimeSpan(5))
    assert refilled.tokens.value == 40
    assert refilled.last_update.value == 5


def test_refill_rejects_time_regression():
    with pytest.raises(TimeRegressionError):
        refill(bucket(50, 100, 40, last=5), TimeSpan(4))
    with pytest.raises(TimeRegressionError):
        conform(bucket(50, 100, 40, last=5), DataVolume(1), TimeSpan(4))


def test_tokens_cannot_exceed_capacity():
    with pytest.raises(UnitError):
        bucket(50, 100, 101)


def test_conform_at_zero_elapsed_time():
    conformant, excess, after = conform(bucket(50, 100, 100), DataVolume(60), TimeSpan(0))
    assert (conformant.value, excess.value) == (60, 0)
    assert after.tokens.value == 40

    conformant, excess, after = conform(bucket(50, 100, 100), DataVolume(160), TimeSpan(0))
    assert (conformant.value, excess.value) == (100, 60)
    assert after.tokens.value == 0


def _stream(start: TokenBucket, rate: float, seconds: int) -> float:
    total = 0.0
    current = start
    for t in range(1, seconds + 1):
        conformant, _, current = conform(current, DataVolume(rate), TimeSpan(t))
        total += conformant.value
    return total


def test_constant_stream_with_full_bucket():
    # 70 Mbit/s po 100 s: r·T + b při plném bucketu
    start = BucketSpec(Rate(50), DataVolume(10)).new_bucket()
    assert _stream(start, 70, 100) == pytest.approx(5010)


def test_constant_stream_with_empty_bucket():
    assert _stream(bucket(50, 10, 0), 70, 100) == pytest.approx(5000)


def test_tokens_generated_within_step_are_usable():
    # Bucket menší než rate·Δt nesmí omezit konformní objem pod r·Δt
    conformant, excess, after = conform(bucket(50, 10, 10), DataVolume(200), TimeSpan(2))
    assert conformant.value == 110
    assert excess.value == 90
    assert after.tokens.value == 0


def test_max_conformant_volume_examples():
    assert max_conformant_volume(Rate(50), DataVolume(0), TimeSpan(2.592e6)).value == pytest.approx(1.296e8)
    assert max_conformant_volume(Rate(102), DataVolume(0), TimeSpan(2.592e6)).value == pytest.approx(2.64384e8)
    assert max_conformant_volume(Rate(10), DataVolume(5), TimeSpan(2)).value == 25


traces = st.lists(
    st.tuples(st.floats(0.0, 5.0), st.floats(0.0, 500.0)),
    min_size=1, max_size=30,
)


@settings(max_examples=1000, deadline=None)
@given(st.floats(0.1, 100.0), st.floats(0.0, 200.0), traces)
def test_conformance_bound_for_every_window(rate, capacity, trace):
    current = BucketSpec(Rate(rate), DataVolume(capacity)).new_bucket()
    times, tokens, cumulative = [0.0], [current.tokens.value], [0.0]
    now = 0.0
    for elapsed, offered in trace:
        now += elapsed
        conformant, excess, current = conform(current, DataVolume(offered), TimeSpan(now))
        # Zachování objemu a meze tokenů po každé operaci
        assert conformant.value + excess.value == pytest.approx(offered, rel=1e-12, abs=1e-9)
        assert 0.0 <= current.tokens.value <= capacity
        times.append(now)
        tokens.append(current.tokens.value)
        cumulative.append(cumulative[-1] + conformant.value)

    for i in range(len(times)):
        for j in range(i, len(times)):
            sent = cumulative[j] - cumulative[i]
            bound = rate * (times[j] - times[i]) + tokens[i]
            assert sent <= bound + 1e-9 * max(1.0, bound)


def test_step_size_independence_on_aligned_grid():
    # Po částech konstantní zátěž se zlomy na sudých sekundách
    loads = [(0, 80.0), (4, 10.0), (10, 120.0), (16, 0.0), (20, 60.0)]
    horizon = 30

    def run(step: float) -> float:
        current = BucketSpec(Rate(50), DataVolume(30)).new_bucket()
        total = 0.0
        steps = int(round(horizon / step))
        for k in range(steps):
            t = k * step
            load = [rate for start, rate in loads if start <= t][-1]
            conformant, _, current = conform(current, DataVolume(load * step), TimeSpan((k + 1) * step))
            total += conformant.value
        return total

    coarse, fine = run(2.0), run(1.0)
    assert fine == pytest.approx(coarse, rel=1e-9)
    assert run(0.5) == pytest.approx(coarse, rel=1e-9)
