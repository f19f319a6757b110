"""A chained-bucket hash map with an explicit, configurable load factor.

Python's dict would do the job functionally, but the indexes in this package
treat the bucket layout as part of their design: the load factor is a tuning
parameter, the hash function is swappable, and benchmark reports include
chain statistics.  Keys are byte strings; values are arbitrary objects
stored next to their key inside the bucket.
"""

from __future__ import annotations

from .hashes import DEFAULT_HASH, get_hash


class ChainedHashMap:
    """Hash map resolving collisions by chaining.

    The load factor (entries / buckets) may exceed 1; once it would pass
    `max_load_factor` the bucket count doubles and entries are rehashed.
    Iteration order is bucket order, then insertion order within a bucket,
    which is deterministic for a fixed hash function and insertion sequence.
    """

    def __init__(self, hash_name: str = DEFAULT_HASH, max_load_factor: float = 2.0,
                 initial_buckets: int = 8):
        if max_load_factor <= 0:
            raise ValueError("max_load_factor must be positive")
        if initial_buckets < 1:
            raise ValueError("initial_buckets must be positive")
        self.hash_name = hash_name
        self.max_load_factor = max_load_factor
        self._hash = get_hash(hash_name)
        self._buckets: list[list] = [[] for _ in range(initial_buckets)]
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def __contains__(self, key: bytes) -> bool:
        return self.get(key) is not None

    @property
    def bucket_count(self) -> int:
        return len(self._buckets)

    @property
    def load_factor(self) -> float:
        return self._size / len(self._buckets)

    def get(self, key: bytes):
        bucket = self._buckets[self._hash(key) % len(self._buckets)]
        for entry in bucket:
            if entry[0] == key:
                return entry[1]
        return None

    def put(self, key: bytes, value) -> None:
        """Insert or replace the value for `key`."""
        bucket = self._buckets[self._hash(key) % len(self._buckets)]
        for entry in bucket:
            if entry[0] == key:
                entry[1] = value
                return
        bucket.append([key, value])
        self._size += 1
        if self._size / len(self._buckets) > self.max_load_factor:
            self._grow()

    def setdefault(self, key: bytes, factory):
        bucket = self._buckets[self._hash(key) % len(self._buckets)]
        for entry in bucket:
            if entry[0] == key:
                return entry[1]
        value = factory()
        bucket.append([key, value])
        self._size += 1
        if self._size / len(self._buckets) > self.max_load_factor:
            self._grow()
        return value

    def _grow(self) -> None:
        target = len(self._buckets)
        while self._size / target > self.max_load_factor:
            target *= 2
        fresh: list[list] = [[] for _ in range(target)]
        for bucket in self._buckets:
            for entry in bucket:
                fresh[self._hash(entry[0]) % target].append(entry)
        self._buckets = fresh

    def items(self):
        """Yield (key, value) pairs in bucket order."""
        for bucket in self._buckets:
            for key, value in bucket:
                yield key, value

    def stats(self) -> dict:
        lengths = [len(b) for b in self._buckets]
        used = sum(1 for n in lengths if n)
        return {
            "entries": self._size,
            "buckets": len(self._buckets),
            "load_factor": self.load_factor,
            "max_chain": max(lengths, default=0),
            "mean_chain_nonempty": (self._size / used) if used else 0.0,
        }
