from concurrent.futures import ThreadPoolExecutor

from SwitchLab.core.cache import ResultCache


def test_get_and_set():
    cache = ResultCache(capacity=4)

    assert cache.get("a") is None

    cache.set("a", True)
    cache.set("b", False)

    assert cache.get("a") is True
    assert cache.get("b") is False
    assert "b" in cache
    assert cache.size() == 2

    statistics = cache.statistics()

    assert (statistics.hits, statistics.misses, statistics.size) == (2, 1, 2)


def test_oldest_entry_is_evicted():
    cache = ResultCache(capacity=2)

    cache.set(1, True)
    cache.set(2, True)
    cache.set(1, False)
    cache.set(3, True)

    assert 1 not in cache
    assert cache.get(2) is True
    assert cache.get(3) is True
    assert cache.statistics().evictions == 1


def test_invalidate_and_clear():
    cache = ResultCache()

    cache.set(("beta", 1), True)
    cache.invalidate(("beta", 1))
    cache.invalidate(("beta", 2))

    assert cache.size() == 0

    cache.set("x", True)
    cache.get("x")
    cache.clear()

    assert cache.size() == 0
    assert cache.statistics().hits == 0


def test_capacity_is_at_least_one():
    cache = ResultCache(capacity=0)

    cache.set("a", True)

    assert cache.capacity == 1
    assert cache.get("a") is True


def test_concurrent_writers_respect_capacity():
    cache = ResultCache(capacity=50)

    def fill(offset):
        for index in range(200):
            cache.set((offset, index), index % 2 == 0)

    with ThreadPoolExecutor(max_workers=4) as executor:
        list(executor.map(fill, range(4)))

    assert cache.size() == 50
    assert cache.statistics().evictions == 750
