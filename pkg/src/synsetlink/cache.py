"""A thread-safe least-recently-used cache with optional TTL expiry.

Used by the resolver to key resolutions by canonical synset URI and labels
by (qid, language). ``ttl=0`` disables expiry. Counters are monotone and
expose hits, misses and capacity evictions; TTL expiries count as misses,
not evictions.
"""

from __future__ import annotations

import threading
import time
from collections import OrderedDict
from dataclasses import dataclass
from typing import Any, Callable, Hashable

_MISS = object()


@dataclass(frozen=True)
class CacheStats:
    hits: int
    misses: int
    evictions: int
    size: int


class LruCache:
    def __init__(
        self,
        capacity: int,
        ttl: float = 0.0,
        clock: Callable[[], float] | None = None,
        on_evict: Callable[[Hashable, Any], None] | None = None,
    ):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        if ttl < 0:
            raise ValueError("ttl must be >= 0")
        self.capacity = capacity
        self.ttl = ttl
        self._clock = clock or time.monotonic
        self._on_evict = on_evict
        self._entries: OrderedDict[Hashable, tuple[Any, float]] = OrderedDict()
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0
        self._evictions = 0

    def get(self, key: Hashable, default: Any = None) -> Any:
        """Return the cached value and mark the key most recently used.

        An entry strictly older than ``ttl`` seconds is dropped and treated
        as a miss.
        """
        with self._lock:
            entry = self._entries.get(key, _MISS)
            if entry is _MISS:
                self._misses += 1
                return default
            value, stored_at = entry
            if self.ttl > 0 and self._clock() - stored_at > self.ttl:
                del self._entries[key]
                self._misses += 1
                return default
            self._entries.move_to_end(key)
            self._hits += 1
            return value

    def __contains__(self, key: Hashable) -> bool:
        sentinel = object()
        return self.get(key, sentinel) is not sentinel

    def put(self, key: Hashable, value: Any) -> None:
        evicted = None
        with self._lock:
            if key in self._entries:
                del self._entries[key]
            self._entries[key] = (value, self._clock())
            if len(self._entries) > self.capacity:
                evicted_key, (evicted_value, _) = self._entries.popitem(last=False)
                self._evictions += 1
                evicted = (evicted_key, evicted_value)
        if evicted is not None and self._on_evict is not None:
            self._on_evict(*evicted)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    @property
    def size(self) -> int:
        with self._lock:
            return len(self._entries)

    def stats(self) -> CacheStats:
        with self._lock:
            return CacheStats(self._hits, self._misses, self._evictions, len(self._entries))
