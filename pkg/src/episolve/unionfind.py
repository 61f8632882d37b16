"""Disjoint sets with path compression and union by rank."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Callable, Hashable, Iterable
from typing import Any, Generic, TypeVar

T = TypeVar("T", bound=Hashable)


class DisjointSet(Generic[T]):
    def __init__(self, elements: Iterable[T] = ()) -> None:
        self._parent: dict[T, T] = {}
        self._rank: dict[T, int] = {}
        for element in elements:
            self.make_set(element)

    def make_set(self, element: T) -> None:
        if element in self._parent:
            return
        self._parent[element] = element
        self._rank[element] = 0

    def find(self, element: T) -> T:
        self.make_set(element)
        root = element
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[element] != root:
            self._parent[element], element = root, self._parent[element]
        return root

    def union(self, left: T, right: T) -> bool:
        left_root = self.find(left)
        right_root = self.find(right)
        if left_root == right_root:
            return False
        if self._rank[left_root] < self._rank[right_root]:
            left_root, right_root = right_root, left_root
        self._parent[right_root] = left_root
        if self._rank[left_root] == self._rank[right_root]:
            self._rank[left_root] += 1
        return True

    def union_all(self, elements: Iterable[T]) -> None:
        iterator = iter(elements)
        first = next(iterator, None)
        if first is None:
            return
        self.make_set(first)
        for element in iterator:
            self.union(first, element)

    def groups(
        self, key: Callable[[T], Any] | None = None
    ) -> tuple[tuple[T, ...], ...]:
        """Classes sorted internally and by least member (canonical form)."""
        buckets: dict[T, list[T]] = defaultdict(list)
        for element in self._parent:
            buckets[self.find(element)].append(element)
        ordered = [tuple(sorted(members, key=key)) for members in buckets.values()]
        ordered.sort(key=(lambda group: key(group[0])) if key else None)
        return tuple(ordered)
