"""
Memo tables for hash-consed formula nodes, canonical forms and progression results.
"""

from collections import OrderedDict
from typing import Any, Hashable, Optional


class MemoTable:
    """Bounded memo table keyed by formulas or (formula, letter) pairs.

    Once more than ``capacity`` entries are stored, the entry whose last
    lookup is oldest is dropped. A miss returns None, so None cannot be
    stored as a value. Single-threaded.
    """

    def __init__(self, name: str, capacity: int):
        self.name = name
        self.capacity = capacity
        self._entries: "OrderedDict[Hashable, Any]" = OrderedDict()
        self.hits = 0
        self.misses = 0

    def lookup(self, key: Hashable) -> Optional[Any]:
        value = self._entries.get(key)
        if value is None:
            self.misses += 1
            return None
        self._entries.move_to_end(key)
        self.hits += 1
        return value

    def store(self, key: Hashable, value: Any) -> Any:
        """Record value under key and return it."""
        self._entries[key] = value
        self._entries.move_to_end(key)
        if len(self._entries) > self.capacity:
            self._entries.popitem(last=False)
        return value

    def stats(self) -> str:
        return f"{self.name}: {len(self._entries)} entries, {self.hits} hits, {self.misses} misses"

    def __len__(self) -> int:
        return len(self._entries)
