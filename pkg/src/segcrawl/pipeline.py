"""Dataset partitioning and the concurrent fetch/parse pipeline.

The concurrency layout: run_pipeline launches n worker groups, one per
dataset segment. Inside a group, m fetch workers pull URLs from a shared
cursor (dynamic work stealing, so a slow URL never strands a whole static
share), push successful documents through a bounded queue, and k parse
workers drain it until the queue is closed and empty. Per-URL failures
become error entries; they never abort a group.
"""

import logging
import threading
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ConsistencyError, InvalidConfigError
from .extraction import RuleSet, extract
from .fetchers import Fetcher, fetch_with_retries
from .queues import ClosableQueue
from .types import (
    ErrorEntry,
    FetchStatus,
    GroupTiming,
    ResultDataSet,
    RunConfig,
    Segment,
    TargetedRecord,
    UrlDataset,
    UrlEntry,
    WebDocument,
)

logger = logging.getLogger(__name__)


def _now_ms() -> float:
    return time.perf_counter() * 1000.0


def partition(dataset: UrlDataset, n: int) -> list[Segment]:
    """Split the dataset into n contiguous, near-even segments.

    The first (len mod n) segments get the extra entry; when n exceeds the
    dataset size the trailing segments are empty. Concatenating the
    segments in id order reproduces the dataset.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidConfigError(f"segment count must be a positive integer, got {n!r}")
    entries = dataset.entries
    base, remainder = divmod(len(entries), n)
    segments = []
    position = 0
    for segment_id in range(n):
        take = base + (1 if segment_id < remainder else 0)
        segments.append(Segment(segment_id, entries[position:position + take]))
        position += take
    return segments


class _SharedCursor:
    """Thread-safe claim-next-entry cursor over a segment."""

    def __init__(self, entries: Sequence[UrlEntry]):
        self._entries = entries
        self._position = 0
        self._lock = threading.Lock()

    def next(self) -> UrlEntry | None:
        with self._lock:
            if self._position >= len(self._entries):
                return None
            entry = self._entries[self._position]
            self._position += 1
            return entry


@dataclass
class GroupResult:
    """Everything one worker group produced, merged at group join."""

    group_id: int
    records: list[TargetedRecord]
    errors: list[ErrorEntry]
    ok_indices: list[int]
    timing: GroupTiming
    queue_high_water: int


def run_group(segment: Segment, config: RunConfig, rules: RuleSet,
              fetcher: Fetcher, stop: threading.Event | None = None) -> GroupResult:
    """Crawl one segment with m fetch and k parse workers.

    Every entry is fetched exactly once (with config.retries extra attempts
    on timeouts/connection errors); successful documents pass through the
    group's bounded queue to exactly one parse worker. The timing spans from
    group launch to the last parser finishing. When `stop` is set, fetchers
    cease claiming new work and parsers drain what is already queued.
    """
    start_ms = _now_ms()
    queue = ClosableQueue(config.queue_capacity)
    cursor = _SharedCursor(segment.entries)

    ok_slots: list[list[int]] = [[] for _ in range(config.m)]
    error_slots: list[list[ErrorEntry]] = [[] for _ in range(config.m)]
    record_slots: list[list[TargetedRecord]] = [[] for _ in range(config.k)]
    worker_failures: list[BaseException] = []

    def fetch_loop(slot: int) -> None:
        ok = ok_slots[slot]
        errors = error_slots[slot]
        while not (stop is not None and stop.is_set()):
            entry = cursor.next()
            if entry is None:
                break
            outcome = fetch_with_retries(fetcher, entry.url, config.fetch_timeout_ms,
                                         config.retries)
            if outcome.status is FetchStatus.OK:
                queue.put(WebDocument(
                    url=entry.url,
                    dataset_index=entry.index,
                    segment_id=segment.segment_id,
                    status=FetchStatus.OK,
                    body=outcome.body,
                    fetch_duration_ms=outcome.elapsed_ms,
                    http_code=outcome.http_code,
                ))
                ok.append(entry.index)
            else:
                errors.append(ErrorEntry(entry.url, entry.index, outcome.status,
                                         outcome.http_code))

    def parse_loop(slot: int) -> None:
        records = record_slots[slot]
        while True:
            document = queue.get()
            if document is None:
                break
            try:
                records.extend(extract(document, rules))
            except Exception as exc:
                # Keep draining so blocked fetchers are never deadlocked;
                # the failure is re-raised after the group joins.
                worker_failures.append(exc)

    def guarded(target: Callable[[int], None], slot: int) -> None:
        try:
            target(slot)
        except BaseException as exc:
            worker_failures.append(exc)

    fetch_threads = [
        threading.Thread(target=guarded, args=(fetch_loop, j),
                         name=f"g{segment.segment_id}-fetch{j}", daemon=True)
        for j in range(config.m)
    ]
    parse_threads = [
        threading.Thread(target=guarded, args=(parse_loop, j),
                         name=f"g{segment.segment_id}-parse{j}", daemon=True)
        for j in range(config.k)
    ]
    for thread in fetch_threads + parse_threads:
        thread.start()
    for thread in fetch_threads:
        thread.join()
    queue.close()
    for thread in parse_threads:
        thread.join()
    end_ms = _now_ms()

    if worker_failures:
        raise worker_failures[0]

    records = [record for slot in record_slots for record in slot]
    errors = [error for slot in error_slots for error in slot]
    ok_indices = [index for slot in ok_slots for index in slot]
    return GroupResult(
        group_id=segment.segment_id,
        records=records,
        errors=errors,
        ok_indices=ok_indices,
        timing=GroupTiming.spanning(segment.segment_id, start_ms, end_ms),
        queue_high_water=queue.high_water,
    )


def aggregate(group_results: Sequence[GroupResult]) -> ResultDataSet:
    """Merge group outputs into one canonically ordered result dataset.

    Records are sorted by (dataset_index, rule_name, value) so concurrent
    arrival order never leaks into serialized output. A dataset index seen
    in more than one group means the partition was broken.
    """
    seen: set[int] = set()
    records: list[TargetedRecord] = []
    errors: list[ErrorEntry] = []
    fetched_ok = 0
    for group in group_results:
        for index in group.ok_indices:
            _claim_index(seen, index)
        for error in group.errors:
            _claim_index(seen, error.dataset_index)
        records.extend(group.records)
        errors.extend(group.errors)
        fetched_ok += len(group.ok_indices)
    records.sort(key=TargetedRecord.sort_key)
    errors.sort(key=lambda e: e.dataset_index)
    return ResultDataSet(
        records=records,
        errors=errors,
        fetched_ok=fetched_ok,
        fetched_failed=len(errors),
        records_extracted=len(records),
    )


def _claim_index(seen: set[int], index: int) -> None:
    if index in seen:
        raise ConsistencyError(
            f"dataset index {index} was processed by more than one group"
        )
    seen.add(index)


def run_pipeline(
    dataset: UrlDataset,
    config: RunConfig,
    rules: RuleSet,
    fetcher: Fetcher,
    stop: threading.Event | None = None,
    on_group_done: Callable[[GroupResult], None] | None = None,
) -> tuple[ResultDataSet, list[GroupTiming]]:
    """Run all n worker groups concurrently and merge their outputs.

    Returns the aggregated result plus one GroupTiming per group, in
    group_id order. `on_group_done` (if given) is invoked from each group's
    thread as it completes, so it must be thread-safe. The function keeps no
    global state and may be called concurrently by independent callers.
    """
    _validate_config(config)
    dataset.validate()
    segments = partition(dataset, config.n)

    results: list[GroupResult | None] = [None] * config.n
    failures: list[BaseException] = []

    def group_main(segment: Segment) -> None:
        try:
            group = run_group(segment, config, rules, fetcher, stop=stop)
            results[segment.segment_id] = group
            if on_group_done is not None:
                on_group_done(group)
        except BaseException as exc:
            failures.append(exc)

    threads = [
        threading.Thread(target=group_main, args=(segment,),
                         name=f"group{segment.segment_id}", daemon=True)
        for segment in segments
    ]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    if failures:
        raise failures[0]

    group_results = [group for group in results if group is not None]
    result = aggregate(group_results)
    interrupted = stop is not None and stop.is_set()
    processed = result.fetched_ok + result.fetched_failed
    if interrupted:
        result.interrupted = True
    elif processed != len(dataset):
        raise ConsistencyError(
            f"processed {processed} of {len(dataset)} dataset entries"
        )
    timings = [group.timing for group in group_results]
    return result, timings


def _validate_config(config: RunConfig) -> None:
    if min(config.n, config.m, config.k) < 1 or config.queue_capacity < 1:
        raise InvalidConfigError(f"invalid run configuration: {config!r}")
    if config.fetch_timeout_ms <= 0 or config.retries < 0:
        raise InvalidConfigError(f"invalid run configuration: {config!r}")
