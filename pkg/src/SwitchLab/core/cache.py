"""
A thread-safe memo for pruned tree-depth results.

Date: 2026-10-18
"""

from threading import RLock
from typing import Dict, Final, Hashable, List, Optional

from Logger import Logger


__all__: Final[List[str]] = [
    "CacheStatistics",
    "ResultCache",
]


class CacheStatistics:
    """
    A snapshot of the counters of a result cache.

    Attributes:
        evictions (int): The number of entries dropped to respect the capacity.
        hits (int): The number of lookups answered from the cache.
        misses (int): The number of lookups not found in the cache.
        size (int): The number of stored entries.
    """

    def __init__(
        self,
        evictions: int,
        hits: int,
        misses: int,
        size: int,
    ) -> None:
        """
        Initialize the statistics.

        :param evictions: The number of evictions
        :type evictions: int
        :param hits: The number of hits
        :type hits: int
        :param misses: The number of misses
        :type misses: int
        :param size: The number of stored entries
        :type size: int

        :return: None
        :rtype: None
        """

        self._evictions: Final[int] = evictions
        self._hits: Final[int] = hits
        self._misses: Final[int] = misses
        self._size: Final[int] = size

    @property
    def evictions(self) -> int:
        """
        Returns the number of evictions.

        :return: The number of evictions
        :rtype: int
        """

        return self._evictions

    @property
    def hits(self) -> int:
        """
        Returns the number of hits.

        :return: The number of hits
        :rtype: int
        """

        return self._hits

    @property
    def misses(self) -> int:
        """
        Returns the number of misses.

        :return: The number of misses
        :rtype: int
        """

        return self._misses

    @property
    def size(self) -> int:
        """
        Returns the number of stored entries.

        :return: The number of stored entries
        :rtype: int
        """

        return self._size

    def __repr__(self) -> str:
        """
        Returns the string representation of the statistics.

        :return: The string representation of the statistics
        :rtype: str
        """

        return (
            f"<CacheStatistics(evictions={self.evictions}, hits={self.hits}, "
            f"misses={self.misses}, size={self.size})>"
        )


class ResultCache:
    """
    A bounded, thread-safe mapping from hashable keys to results.

    The canonical tree below a round boundary depends only on the restricted
    formula, so depth checks store their answers here under that key and
    every restriction reaching the same restricted formula reuses them.

    Attributes:
        capacity (int): The maximum number of entries; the oldest goes first.
        lock (RLock): The lock.
        logger (Logger): The logger.
        storage (Dict[Hashable, bool]): The storage.
    """

    def __init__(
        self,
        capacity: int = 1_000_000,
    ) -> None:
        """
        Initialize the cache.

        :param capacity: The maximum number of entries. Defaults to 1000000.
        :type capacity: int

        :return: None
        :rtype: None
        """

        # Store the capacity in a final variable
        self._capacity: Final[int] = max(1, capacity)

        # Initialize the counters
        self._evictions: int = 0
        self._hits: int = 0
        self._misses: int = 0

        # Initialize the lock
        self._lock: Final[RLock] = RLock()

        # Initialize the logger
        self._logger: Final[Logger] = Logger.get_logger(name=self.__class__.__name__)

        # Initialize the storage (dicts keep insertion order, oldest first)
        self._storage: Final[Dict[Hashable, bool]] = {}

    @property
    def capacity(self) -> int:
        """
        Returns the capacity of the cache.

        :return: The capacity of the cache
        :rtype: int
        """

        return self._capacity

    def __contains__(
        self,
        key: Hashable,
    ) -> bool:
        """
        Checks if the cache contains the given key.

        :param key: The key to check
        :type key: Hashable

        :return: True if the cache contains the given key, False otherwise
        :rtype: bool
        """

        with self._lock:
            return key in self._storage

    def __repr__(self) -> str:
        """
        Returns the string representation of the cache.

        :return: The string representation of the cache
        :rtype: str
        """

        return f"<ResultCache(capacity={self.capacity}, size={self.size()})>"

    def __str__(self) -> str:
        """
        Returns the string representation of the cache.

        :return: The string representation of the cache
        :rtype: str
        """

        return self.__repr__()

    def clear(self) -> None:
        """
        Clears the cache and its counters.

        :return: None
        :rtype: None
        """

        with self._lock:
            # Clear the storage
            self._storage.clear()

            # Reset the counters
            self._evictions = 0
            self._hits = 0
            self._misses = 0

        # Log the cache clearing
        self._logger.info(message="Result cache cleared")

    def get(
        self,
        key: Hashable,
    ) -> Optional[bool]:
        """
        Gets a result from the cache.

        :param key: The key of the result
        :type key: Hashable

        :return: The result or None if not found
        :rtype: Optional[bool]
        """

        with self._lock:
            # Look the key up
            result: Optional[bool] = self._storage.get(key)

            # Count the lookup
            if result is None:
                self._misses += 1
            else:
                self._hits += 1

            return result

    def invalidate(
        self,
        key: Hashable,
    ) -> None:
        """
        Removes a result from the cache.

        :param key: The key of the result
        :type key: Hashable

        :return: None
        :rtype: None
        """

        with self._lock:
            removed: Optional[bool] = self._storage.pop(key, None)

        # Check if the result existed
        if removed is None:
            # Log a warning message
            self._logger.warning(
                message=f"Result with key {key!r} does not exist. Aborting invalidation."
            )

            # Return early if the result does not exist
            return

        # Log the invalidation
        self._logger.debug(message=f"Result invalidated with key {key!r}")

    def set(
        self,
        key: Hashable,
        value: bool,
    ) -> None:
        """
        Stores a result in the cache, evicting the oldest entry when full.

        :param key: The key of the result
        :type key: Hashable
        :param value: The result
        :type value: bool

        :return: None
        :rtype: None
        """

        with self._lock:
            # Evict the oldest entry if the cache is full
            if key not in self._storage and len(self._storage) >= self._capacity:
                oldest: Hashable = next(iter(self._storage))
                del self._storage[oldest]
                self._evictions += 1

            # Store the result
            self._storage[key] = value

    def size(self) -> int:
        """
        Returns the size of the cache.

        :return: The size of the cache
        :rtype: int
        """

        with self._lock:
            return len(self._storage)

    def statistics(self) -> CacheStatistics:
        """
        Returns a snapshot of the counters.

        :return: The statistics
        :rtype: CacheStatistics
        """

        with self._lock:
            return CacheStatistics(
                evictions=self._evictions,
                hits=self._hits,
                misses=self._misses,
                size=len(self._storage),
            )
