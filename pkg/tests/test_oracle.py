import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from segcrawl import SimProfile, makespan_oracle


def profile(latency: float) -> SimProfile:
    return SimProfile(base_latency_ms=latency)


def test_parallel_fetch_waves():
    assert makespan_oracle([50], 5, 5, profile(40.0), 0.0) == 400.0


def test_serial_sum():
    assert makespan_oracle([50], 1, 1, profile(40.0), 0.0) == 2000.0


def test_parse_stage_bottleneck_with_tiny_buffer():
    # 20 jobs fetched in one 10ms wave; a single parser at 50ms each is the
    # bottleneck: 10 + 20 * 50.
    predicted = makespan_oracle([20], 20, 1, profile(10.0), 50.0, queue_capacity=2)
    assert predicted == 1010.0


def test_groups_run_in_parallel():
    assert makespan_oracle([50, 10, 5], 1, 1, profile(10.0), 0.0) == 500.0


def test_empty_inputs():
    assert makespan_oracle([], 2, 2, profile(10.0), 0.0) == 0.0
    assert makespan_oracle([0, 0], 2, 2, profile(10.0), 0.0) == 0.0


def test_retry_cost_of_failed_jobs():
    # failure_rate 0.5 thins every second job; with retries=1 each failed
    # fetch costs twice the latency. Serial fetcher: 5*2L + 5*L = 15L.
    prof = SimProfile(base_latency_ms=10.0, failure_rate=0.5)
    assert makespan_oracle([10], 1, 1, prof, 0.0, retries=1) == 150.0


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        makespan_oracle([5], 0, 1, profile(1.0), 0.0)
    with pytest.raises(ValueError):
        makespan_oracle([5], 1, 1, profile(1.0), -1.0)
    with pytest.raises(ValueError):
        makespan_oracle([-1], 1, 1, profile(1.0), 0.0)


@given(
    size=st.integers(min_value=0, max_value=60),
    m=st.integers(min_value=1, max_value=8),
    k=st.integers(min_value=1, max_value=8),
    latency=st.floats(min_value=0.5, max_value=50.0, allow_nan=False),
)
def test_unbounded_buffer_zero_parse_reduces_to_fetch_waves(size, m, k, latency):
    predicted = makespan_oracle([size], m, k, profile(latency), 0.0,
                                queue_capacity=10_000)
    expected = math.ceil(size / m) * latency if size else 0.0
    assert predicted == pytest.approx(expected)


@given(
    size=st.integers(min_value=1, max_value=40),
    latency=st.floats(min_value=0.5, max_value=20.0, allow_nan=False),
    parse_cost=st.floats(min_value=0.0, max_value=30.0, allow_nan=False),
    capacity=st.integers(min_value=1, max_value=6),
)
def test_single_worker_pair_matches_closed_form(size, latency, parse_cost, capacity):
    # With one fetcher and one parser the makespan has an exact closed form
    # regardless of buffer capacity: the slower stage dominates.
    predicted = makespan_oracle([size], 1, 1, profile(latency), parse_cost,
                                queue_capacity=capacity)
    expected = max(size * latency + parse_cost, latency + size * parse_cost)
    assert predicted == pytest.approx(expected)


@given(
    sizes=st.lists(st.integers(min_value=0, max_value=40), min_size=1, max_size=4),
    m=st.integers(min_value=1, max_value=6),
    k=st.integers(min_value=1, max_value=6),
    parse_cost=st.floats(min_value=0.0, max_value=20.0, allow_nan=False),
)
def test_monotone_in_worker_counts(sizes, m, k, parse_cost):
    prof = profile(7.0)
    base = makespan_oracle(sizes, m, k, prof, parse_cost)
    assert makespan_oracle(sizes, m + 1, k, prof, parse_cost) <= base + 1e-9
    assert makespan_oracle(sizes, m, k + 1, prof, parse_cost) <= base + 1e-9
