import threading
import time

import pytest

from segcrawl import ClosableQueue, QueueClosed


def test_capacity_must_be_positive():
    with pytest.raises(ValueError):
        ClosableQueue(0)


def test_fifo_order():
    q = ClosableQueue(10)
    for i in range(5):
        q.put(i)
    assert [q.get() for _ in range(5)] == [0, 1, 2, 3, 4]


def test_get_returns_none_once_closed_and_drained():
    q = ClosableQueue(2)
    q.put("x")
    q.close()
    assert q.get() == "x"
    assert q.get() is None
    assert q.get() is None


def test_close_unblocks_waiting_consumer():
    q = ClosableQueue(1)
    seen = []

    def consume():
        seen.append(q.get())

    t = threading.Thread(target=consume)
    t.start()
    time.sleep(0.05)
    q.close()
    t.join(timeout=2)
    assert not t.is_alive()
    assert seen == [None]


def test_put_after_close_raises():
    q = ClosableQueue(1)
    q.close()
    with pytest.raises(QueueClosed):
        q.put(1)


def test_producer_blocks_at_capacity_and_high_water_is_bounded():
    q = ClosableQueue(3)
    produced = 20

    def produce():
        for i in range(produced):
            q.put(i)
        q.close()

    t = threading.Thread(target=produce)
    t.start()
    time.sleep(0.05)  # let the producer hit the bound
    assert q.high_water == 3

    got = []
    while (item := q.get()) is not None:
        got.append(item)
    t.join(timeout=2)
    assert got == list(range(produced))
    assert q.high_water <= 3


def test_concurrent_producers_and_consumers_deliver_exactly_once():
    q = ClosableQueue(4)
    n_producers, per_producer = 5, 40
    results = [[] for _ in range(3)]

    def produce(base):
        for i in range(per_producer):
            q.put(base + i)

    def consume(slot):
        while (item := q.get()) is not None:
            results[slot].append(item)

    producers = [threading.Thread(target=produce, args=(p * 1000,)) for p in range(n_producers)]
    consumers = [threading.Thread(target=consume, args=(c,)) for c in range(3)]
    for t in producers + consumers:
        t.start()
    for t in producers:
        t.join()
    q.close()
    for t in consumers:
        t.join()

    delivered = sorted(x for chunk in results for x in chunk)
    expected = sorted(p * 1000 + i for p in range(n_producers) for i in range(per_producer))
    assert delivered == expected
    assert q.high_water <= 4
