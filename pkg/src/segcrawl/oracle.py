"""Discrete-event prediction of pipeline makespan. No real time elapses.

Each group is simulated as a two-stage queueing network: m fetch servers
pull jobs from a shared backlog, deposit finished documents into a
capacity-bounded buffer (blocking while it is full, exactly like the real
bounded queue), and k parse servers consume at a fixed cost each. Groups
are independent, so the pipeline makespan is the slowest group.

Approximations, exact in the settings the measured comparisons use
(zero jitter, zero failures): with jitter the per-job latency is modeled as
its expectation (base + jitter/2); with a failure rate f, round(size * f)
evenly spaced jobs fail, each costing (retries + 1) attempts and producing
no parse work.
"""

import heapq
import math
from collections import deque
from typing import Sequence

from .fetchers import SimProfile

_FETCH_DONE = 0
_PARSE_DONE = 1


def makespan_oracle(
    segment_sizes: Sequence[int],
    m: int,
    k: int,
    latency_model: SimProfile,
    parse_cost_ms: float = 0.0,
    queue_capacity: int | None = None,
    retries: int = 1,
) -> float:
    """Predicted wall-clock milliseconds for groups of the given sizes.

    queue_capacity defaults to 2 * (m + k), matching RunConfig's default.
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be >= 1")
    if parse_cost_ms < 0 or retries < 0:
        raise ValueError("parse_cost_ms and retries must be >= 0")
    capacity = queue_capacity if queue_capacity is not None else 2 * (m + k)
    if capacity < 1:
        raise ValueError("queue_capacity must be >= 1")

    worst = 0.0
    for size in segment_sizes:
        if size < 0:
            raise ValueError("segment sizes must be >= 0")
        jobs = _group_jobs(size, latency_model, retries)
        worst = max(worst, _simulate_group(jobs, m, k, capacity, parse_cost_ms))
    return worst


def _group_jobs(size: int, profile: SimProfile, retries: int) -> list[tuple[float, bool]]:
    """(fetch cost, produces parse work) per job, failures evenly thinned."""
    latency = profile.mean_latency_ms()
    jobs = []
    failed_so_far = 0
    for i in range(size):
        failed_now = math.floor((i + 1) * profile.failure_rate + 1e-9)
        fails = failed_now > failed_so_far
        failed_so_far = failed_now
        cost = latency * (retries + 1) if fails else latency
        jobs.append((cost, not fails))
    return jobs


def _simulate_group(jobs: list[tuple[float, bool]], m: int, k: int,
                    capacity: int, parse_cost: float) -> float:
    if not jobs:
        return 0.0

    heap: list[tuple[float, int, int, bool]] = []
    sequence = 0
    cursor = 0
    buffered = 0
    blocked: deque[None] = deque()  # fetchers stalled on a full buffer
    idle_parsers = k
    makespan = 0.0

    def push(at: float, kind: int, ok: bool = True) -> None:
        nonlocal sequence
        heapq.heappush(heap, (at, sequence, kind, ok))
        sequence += 1

    def claim_next(now: float) -> None:
        nonlocal cursor
        if cursor < len(jobs):
            cost, ok = jobs[cursor]
            push(now + cost, _FETCH_DONE, ok)
            cursor += 1

    for _ in range(min(m, len(jobs))):
        claim_next(0.0)

    while heap:
        now, _, kind, produces_parse = heapq.heappop(heap)
        makespan = now
        if kind == _FETCH_DONE:
            if not produces_parse:
                claim_next(now)
            elif idle_parsers > 0:
                # an idle parser implies an empty buffer; hand over directly
                idle_parsers -= 1
                push(now + parse_cost, _PARSE_DONE)
                claim_next(now)
            elif buffered < capacity:
                buffered += 1
                claim_next(now)
            else:
                blocked.append(None)
        else:  # _PARSE_DONE
            if buffered > 0:
                buffered -= 1
                if blocked:
                    blocked.popleft()
                    buffered += 1
                    claim_next(now)
                push(now + parse_cost, _PARSE_DONE)
            else:
                idle_parsers += 1
    return makespan
