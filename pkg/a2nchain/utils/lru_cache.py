import threading
from collections import OrderedDict
from typing import Any, Callable, Generic, Optional, TypeVar

from a2nchain.utils.read_write_lock import ReadWriteLock

K = TypeVar("K")
V = TypeVar("V")


class LRUCache(Generic[K, V]):
    """An OrderedDict-backed LRU cache with an optional eviction callback."""

    def __init__(self, capacity: int, callback: Optional[Callable[[K, V], Any]] = None):
        if capacity < 1:
            raise ValueError(f"capacity must be at least 1, got {capacity}")
        self.capacity = capacity
        self.cache: OrderedDict[K, V] = OrderedDict()
        self.callback = callback

    def __len__(self) -> int:
        return len(self.cache)

    def __contains__(self, key: object) -> bool:
        return key in self.cache

    def peek(self, key: K) -> Optional[V]:
        """Look up without touching recency; safe under a shared read lock."""
        return self.cache.get(key)

    def get(self, key: K) -> Optional[V]:
        if key not in self.cache:
            return None
        self.cache.move_to_end(key)
        return self.cache[key]

    def set(self, key: K, value: V) -> None:
        if key in self.cache:
            self.cache.move_to_end(key)
        elif len(self.cache) >= self.capacity:
            evicted_key, evicted_value = self.cache.popitem(last=False)
            if self.callback:
                self.callback(evicted_key, evicted_value)
        self.cache[key] = value

    def clear(self) -> None:
        self.cache.clear()


class MemoCache(Generic[K, V]):
    """LRUCache behind a ReadWriteLock.

    Lookups share the read lock; values are computed outside any lock and
    inserted under the write lock, where the first insertion wins. A call that
    loses the insertion race counts as a hit, so misses equals insertions.
    """

    def __init__(self, capacity: int):
        self._cache: LRUCache[K, V] = LRUCache(capacity)
        self._lock = ReadWriteLock()
        self._counter_lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _count(self, hit: bool) -> None:
        with self._counter_lock:
            if hit:
                self.hits += 1
            else:
                self.misses += 1

    def get_or_compute(self, key: K, compute: Callable[[], V]) -> V:
        with self._lock.reading():
            found = self._cache.peek(key)
        if found is not None:
            self._count(hit=True)
            return found

        value = compute()
        with self._lock.writing():
            existing = self._cache.get(key)
            if existing is None:
                self._cache.set(key, value)
        self._count(hit=existing is not None)
        return value if existing is None else existing

    def resize(self, capacity: int) -> None:
        with self._lock.writing():
            old = self._cache
            self._cache = LRUCache(capacity)
            for k, v in list(old.cache.items())[-capacity:]:
                self._cache.set(k, v)

    def clear(self) -> None:
        with self._lock.writing():
            self._cache.clear()
            with self._counter_lock:
                self.hits = self.misses = 0

    def __len__(self) -> int:
        with self._lock.reading():
            return len(self._cache)
