import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synsetlink.cache import LruCache


class ListLru:
    """Reference LRU: an ordered list, most recent last. The oracle the
    real cache is checked against."""

    def __init__(self, capacity):
        self.capacity = capacity
        self.items = []  # (key, value), least recent first

    def get(self, key):
        for position, (candidate, value) in enumerate(self.items):
            if candidate == key:
                self.items.append(self.items.pop(position))
                return value
        return None

    def put(self, key, value):
        for position, (candidate, _) in enumerate(self.items):
            if candidate == key:
                self.items.pop(position)
                break
        self.items.append((key, value))
        if len(self.items) > self.capacity:
            return self.items.pop(0)
        return None


def run_both(capacity, ops):
    trace = []
    cache = LruCache(capacity, on_evict=lambda key, value: trace.append((key, value)))
    oracle = ListLru(capacity)
    oracle_trace = []
    for op, key in ops:
        if op == "put":
            evicted = oracle.put(key, key * 7)
            if evicted is not None:
                oracle_trace.append(evicted)
            cache.put(key, key * 7)
        else:
            assert cache.get(key) == oracle.get(key)
    assert trace == oracle_trace
    return cache, oracle


ops_strategy = st.lists(
    st.tuples(st.sampled_from(["put", "get"]), st.integers(0, 9)), max_size=60
)


@given(st.integers(1, 5), ops_strategy)
@settings(max_examples=200)
def test_lru_matches_ordered_list_oracle(capacity, ops):
    cache, oracle = run_both(capacity, ops)
    assert cache.size == len(oracle.items)
    assert cache.size <= capacity


def test_lru_matches_oracle_over_many_random_sequences():
    rng = random.Random(97)
    for _ in range(1_000):
        capacity = rng.randint(1, 6)
        ops = [
            (rng.choice(["put", "get"]), rng.randint(0, 11))
            for _ in range(rng.randint(1, 50))
        ]
        run_both(capacity, ops)


def test_eviction_order_example():
    evicted = []
    cache = LruCache(2, on_evict=lambda key, value: evicted.append(key))
    cache.put("a", 1)
    cache.put("b", 2)
    assert cache.get("a") == 1
    cache.put("c", 3)
    assert evicted == ["b"]
    assert cache.get("b") is None


def test_fresh_cache_stats_are_zero():
    stats = LruCache(4).stats()
    assert (stats.hits, stats.misses, stats.evictions, stats.size) == (0, 0, 0, 0)


def test_miss_then_hit_counters():
    cache = LruCache(4)
    assert cache.get("k") is None
    cache.put("k", "v")
    assert cache.get("k") == "v"
    stats = cache.stats()
    assert stats.hits == 1
    assert stats.misses == 1


def test_counters_are_monotone():
    cache = LruCache(2)
    previous = cache.stats()
    rng = random.Random(3)
    for _ in range(200):
        if rng.random() < 0.5:
            cache.put(rng.randint(0, 5), "x")
        else:
            cache.get(rng.randint(0, 5))
        current = cache.stats()
        assert current.hits >= previous.hits
        assert current.misses >= previous.misses
        assert current.evictions >= previous.evictions
        previous = current


def test_size_never_exceeds_capacity():
    cache = LruCache(3)
    for n in range(50):
        cache.put(n, n)
        assert cache.size <= 3


def test_ttl_expiry_with_virtual_clock(virtual_clock):
    cache = LruCache(4, ttl=10.0, clock=virtual_clock)
    cache.put("k", "v")
    virtual_clock.advance(10.0)
    assert cache.get("k") == "v"  # exactly ttl old: still fresh
    virtual_clock.advance(0.001)
    assert cache.get("k") is None
    assert cache.stats().misses == 1


def test_zero_ttl_never_expires(virtual_clock):
    cache = LruCache(4, ttl=0.0, clock=virtual_clock)
    cache.put("k", "v")
    virtual_clock.advance(10_000_000.0)
    assert cache.get("k") == "v"


def test_put_refreshes_ttl(virtual_clock):
    cache = LruCache(4, ttl=10.0, clock=virtual_clock)
    cache.put("k", "v1")
    virtual_clock.advance(8.0)
    cache.put("k", "v2")
    virtual_clock.advance(8.0)
    assert cache.get("k") == "v2"


def test_none_is_a_cacheable_value():
    cache = LruCache(4)
    cache.put("negative", None)
    sentinel = object()
    assert cache.get("negative", sentinel) is None
    assert cache.stats().hits == 1


def test_invalid_parameters():
    with pytest.raises(ValueError):
        LruCache(0)
    with pytest.raises(ValueError):
        LruCache(4, ttl=-1)
