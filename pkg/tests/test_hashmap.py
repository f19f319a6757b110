import random

import pytest

from textindex.hashes import (HASH_FUNCTIONS, fnv1_32, fnv1a_32, get_hash,
                              murmur3_32, xxhash32)
from textindex.hashmap import ChainedHashMap


class TestHashVectors:
    # frozen reference digests from the upstream implementations
    XXHASH32 = {
        b"": 0x02CC5D05,
        b"a": 0x550D7456,
        b"abc": 0x32D153FF,
        b"texting": 0x19F493CE,
        b"Nobody inspects the spammish repetition": 0xE2293B2F,
        b"tablet": 0x302D31B8,
    }
    MURMUR3 = {
        b"": 0x00000000,
        b"hello": 0x248BFA47,
        b"The quick brown fox jumps over the lazy dog": 0x2E4FF723,
    }

    def test_xxhash32(self):
        for data, want in self.XXHASH32.items():
            assert xxhash32(data) == want

    def test_murmur3(self):
        for data, want in self.MURMUR3.items():
            assert murmur3_32(data) == want

    def test_fnv(self):
        assert fnv1a_32(b"") == 0x811C9DC5
        assert fnv1a_32(b"a") == 0xE40C292C
        assert fnv1_32(b"a") == 0x050C5D7E

    def test_all_candidates_are_32_bit(self):
        for name in HASH_FUNCTIONS:
            fn = get_hash(name)
            for data in (b"", b"a", b"some longer input string", bytes(range(256))):
                value = fn(data)
                assert 0 <= value <= 0xFFFFFFFF

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            get_hash("md5")


class TestChainedHashMap:
    def test_put_get(self):
        m = ChainedHashMap()
        m.put(b"key", 1)
        m.put(b"other", 2)
        assert m.get(b"key") == 1
        assert m.get(b"other") == 2
        assert m.get(b"missing") is None

    def test_replace(self):
        m = ChainedHashMap()
        m.put(b"key", 1)
        m.put(b"key", 2)
        assert m.get(b"key") == 2
        assert len(m) == 1

    def test_load_factor_bound(self):
        m = ChainedHashMap(max_load_factor=2.0, initial_buckets=4)
        for i in range(1000):
            m.put(str(i).encode(), i)
        assert m.load_factor <= 2.0
        assert len(m) == 1000
        assert all(m.get(str(i).encode()) == i for i in range(1000))

    def test_growth_doubles(self):
        m = ChainedHashMap(max_load_factor=1.0, initial_buckets=4)
        seen = {m.bucket_count}
        for i in range(100):
            m.put(str(i).encode(), i)
            seen.add(m.bucket_count)
        assert sorted(seen) == [4, 8, 16, 32, 64, 128]

    def test_high_load_factor_allows_chains(self):
        m = ChainedHashMap(max_load_factor=8.0, initial_buckets=2)
        for i in range(16):
            m.put(str(i).encode(), i)
        assert m.bucket_count == 2
        assert m.load_factor == 8.0

    def test_deterministic_iteration(self):
        def fill():
            m = ChainedHashMap(hash_name="sdbm", max_load_factor=1.5)
            for i in range(200):
                m.put(f"w{i}".encode(), i)
            return list(m.items())
        assert fill() == fill()

    def test_stats(self):
        m = ChainedHashMap(initial_buckets=8)
        for i in range(20):
            m.put(str(i).encode(), i)
        stats = m.stats()
        assert stats["entries"] == 20
        assert stats["buckets"] == m.bucket_count
        assert stats["max_chain"] >= 1

    @pytest.mark.parametrize("hash_name", sorted(HASH_FUNCTIONS))
    def test_every_hash_candidate_plugs_in(self, hash_name):
        rng = random.Random(1)
        m = ChainedHashMap(hash_name=hash_name)
        reference = {}
        for _ in range(300):
            key = bytes(rng.choice(b"abcdef") for _ in range(rng.randint(1, 8)))
            value = rng.randrange(1000)
            m.put(key, value)
            reference[key] = value
        for key, value in reference.items():
            assert m.get(key) == value
        assert len(m) == len(reference)
