"""Search for a chromatic map from a protocol complex into a task complex.

Variables are protocol vertices. A vertex may only go to a task vertex of its
color over the same input vertex, and every protocol facet must land on a
task facet. Facet constraints are kept generalized-arc-consistent; branching
follows a fixed variable order and tries values in canonical order, so the
first solution found is the least one for that order.
"""

from __future__ import annotations

import logging
import random
import time
from collections import defaultdict, deque
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from episolve.errors import AgentMismatch
from episolve.simplicial import ChromaticComplex, ChromaticMap, Facet, Vertex

logger = logging.getLogger(__name__)

Domains = dict[Vertex, frozenset[Vertex]]


@dataclass
class SearchStats:
    nodes: int = 0
    wipeouts: int = 0
    elapsed_seconds: float = 0.0
    workers: int = 1

    def absorb(self, other: SearchStats) -> None:
        self.nodes += other.nodes
        self.wipeouts += other.wipeouts

    def as_dict(self) -> dict[str, object]:
        return {
            "nodes": self.nodes,
            "wipeouts": self.wipeouts,
            "elapsed_seconds": round(self.elapsed_seconds, 6),
            "workers": self.workers,
        }


@dataclass
class SearchResult:
    mapping: dict[Vertex, Vertex] | None
    stats: SearchStats = field(default_factory=SearchStats)


class SimplicialMapSearch:
    def __init__(
        self,
        protocol: ChromaticComplex,
        protocol_to_input: ChromaticMap,
        task: ChromaticComplex,
        task_to_input: ChromaticMap,
        *,
        seed: int | None = None,
    ) -> None:
        if protocol.agents != task.agents:
            raise AgentMismatch("Protocol and task complexes have different agents.")
        self.protocol = protocol
        self.task = task
        self.variables: list[Vertex] = list(protocol.vertices)
        if seed is not None:
            random.Random(seed).shuffle(self.variables)
        by_input: dict[tuple[str, Vertex], list[Vertex]] = defaultdict(list)
        for vertex in task.vertices:
            by_input[(vertex.color, task_to_input(vertex))].append(vertex)
        self.initial: Domains = {
            x: frozenset(by_input.get((x.color, protocol_to_input(x)), ()))
            for x in protocol.vertices
        }
        facets_over: dict[Facet, list[Facet]] = defaultdict(list)
        for facet in task.facets:
            facets_over[task_to_input.image(facet)].append(facet)
        self.supports: dict[Facet, tuple[dict[str, Vertex], ...]] = {
            facet: tuple(
                {v.color: v for v in candidate}
                for candidate in facets_over.get(protocol_to_input.image(facet), ())
            )
            for facet in protocol.facets
        }

    def _propagate(
        self, domains: Domains, changed: Sequence[Vertex], stats: SearchStats
    ) -> Domains | None:
        queue: deque[Facet] = deque()
        queued: set[Facet] = set()
        for vertex in changed:
            for facet in self.protocol.facets_containing(vertex):
                if facet not in queued:
                    queue.append(facet)
                    queued.add(facet)
        while queue:
            facet = queue.popleft()
            queued.discard(facet)
            alive = [
                support
                for support in self.supports[facet]
                if all(support[x.color] in domains[x] for x in facet)
            ]
            for x in facet:
                narrowed = frozenset(support[x.color] for support in alive)
                if narrowed == domains[x]:
                    continue
                if not narrowed:
                    stats.wipeouts += 1
                    return None
                domains[x] = narrowed
                for other in self.protocol.facets_containing(x):
                    if other not in queued:
                        queue.append(other)
                        queued.add(other)
        return domains

    def _dfs(self, domains: Domains, stats: SearchStats) -> dict[Vertex, Vertex] | None:
        stats.nodes += 1
        for x in self.variables:
            if len(domains[x]) > 1:
                break
        else:
            return {x: next(iter(domains[x])) for x in self.variables}
        for value in sorted(domains[x]):
            trial = dict(domains)
            trial[x] = frozenset({value})
            narrowed = self._propagate(trial, [x], stats)
            if narrowed is None:
                continue
            found = self._dfs(narrowed, stats)
            if found is not None:
                return found
        return None

    def _root(self, stats: SearchStats) -> Domains | None:
        domains = dict(self.initial)
        if any(not d for d in domains.values()):
            stats.wipeouts += 1
            return None
        return self._propagate(domains, self.variables, stats)

    def run(self, workers: int = 1) -> SearchResult:
        started = time.perf_counter()
        stats = SearchStats(workers=workers)
        root = self._root(stats)
        mapping: dict[Vertex, Vertex] | None = None
        if root is not None:
            mapping = self._split(root, stats, workers) if workers > 1 else self._dfs(root, stats)
        stats.elapsed_seconds = time.perf_counter() - started
        logger.debug(
            "Search finished: solvable=%s nodes=%d wipeouts=%d",
            mapping is not None,
            stats.nodes,
            stats.wipeouts,
        )
        return SearchResult(mapping=mapping, stats=stats)

    def _split(
        self, root: Domains, stats: SearchStats, workers: int
    ) -> dict[Vertex, Vertex] | None:
        branch = next((x for x in self.variables if len(root[x]) > 1), None)
        if branch is None:
            return self._dfs(root, stats)
        values = sorted(root[branch])

        def explore(value: Vertex) -> tuple[dict[Vertex, Vertex] | None, SearchStats]:
            local = SearchStats()
            trial = dict(root)
            trial[branch] = frozenset({value})
            narrowed = self._propagate(trial, [branch], local)
            if narrowed is None:
                return None, local
            return self._dfs(narrowed, local), local

        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(explore, values))
        stats.nodes += 1
        found: dict[Vertex, Vertex] | None = None
        for mapping, local in outcomes:
            stats.absorb(local)
            if found is None and mapping is not None:
                found = mapping
        return found
