"""Bounded handoff queue between a group's fetch and parse workers."""

import threading
from collections import deque
from typing import Any


class QueueClosed(RuntimeError):
    """put() was called after close(); indicates a coordination bug."""


class ClosableQueue:
    """FIFO with a hard capacity and an explicit end-of-stream.

    Producers block in put() while the queue is full. Consumers block in
    get() while it is empty; once close() has been called and the backlog is
    drained, get() returns None to every consumer. Peak occupancy is tracked
    so the capacity bound can be asserted after a run.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self._capacity = capacity
        self._items: deque = deque()
        self._mutex = threading.Lock()
        self._not_full = threading.Condition(self._mutex)
        self._not_empty = threading.Condition(self._mutex)
        self._closed = False
        self._high_water = 0

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def high_water(self) -> int:
        """Largest occupancy ever observed."""
        with self._mutex:
            return self._high_water

    @property
    def closed(self) -> bool:
        with self._mutex:
            return self._closed

    def put(self, item: Any) -> None:
        with self._not_full:
            while len(self._items) >= self._capacity and not self._closed:
                self._not_full.wait()
            if self._closed:
                raise QueueClosed("put() on a closed queue")
            self._items.append(item)
            if len(self._items) > self._high_water:
                self._high_water = len(self._items)
            self._not_empty.notify()

    def get(self) -> Any | None:
        """Next item, or None once the queue is closed and drained."""
        with self._not_empty:
            while not self._items and not self._closed:
                self._not_empty.wait()
            if self._items:
                item = self._items.popleft()
                self._not_full.notify()
                return item
            return None

    def close(self) -> None:
        """Mark end-of-stream and wake all waiting workers. Idempotent."""
        with self._mutex:
            self._closed = True
            self._not_empty.notify_all()
            self._not_full.notify_all()
