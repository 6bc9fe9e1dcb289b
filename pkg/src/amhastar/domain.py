"""Abstract search-domain interface and state interning."""
from __future__ import annotations

import abc
from typing import Hashable, Sequence


class StateInterner:
    """Bijection between hashable domain state keys and dense integer ids.

    Interning the same key twice returns the same id; ids are assigned in
    first-touch order starting at 0, so they are dense and deterministic for
    a deterministic touch order.
    """

    __slots__ = ("_ids", "_keys")

    def __init__(self) -> None:
        self._ids: dict[Hashable, int] = {}
        self._keys: list[Hashable] = []

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, key: Hashable) -> bool:
        return key in self._ids

    def intern(self, key: Hashable) -> int:
        sid = self._ids.get(key)
        if sid is None:
            sid = len(self._keys)
            self._ids[key] = sid
            self._keys.append(key)
        return sid

    def key_of(self, sid: int) -> Hashable:
        return self._keys[sid]


class SearchDomain(abc.ABC):
    """A search problem over interned states.

    Implementors expose a start state, a goal predicate, successor generation
    with strictly positive integer edge costs, and num_inadmissible + 1
    heuristic evaluators. heuristic(s, 0) must be admissible and consistent;
    heuristic(s, i) for i >= 1 may overestimate. Every heuristic must return
    0 on states satisfying the goal predicate.
    """

    num_inadmissible: int = 0

    @abc.abstractmethod
    def start(self) -> int:
        """Id of the start state."""

    @abc.abstractmethod
    def is_goal(self, sid: int) -> bool:
        """Goal predicate."""

    @abc.abstractmethod
    def successors(self, sid: int) -> Sequence[tuple[int, int]]:
        """(successor id, edge cost) pairs; costs are positive integers."""

    @abc.abstractmethod
    def heuristic(self, sid: int, i: int) -> float:
        """Value of heuristic i at a state, 0 <= i <= num_inadmissible."""
