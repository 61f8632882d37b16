"""Iterated immediate snapshot: schedules, action models and protocol complexes.

A round is scheduled by an ordered partition of the agents into concurrency
classes. Every agent snapshots the agents in its own class and the classes
before it, and learns their previous local states.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations

from episolve.actions import ActionModel, product_update
from episolve.equivalence import (
    facet_label,
    frame_morphism_to_map,
    model_to_simplicial,
    simplicial_to_model,
)
from episolve.errors import EpisolveError, UnknownSymbol
from episolve.kripke import FrameMorphism, KripkeFrame, KripkeModel, compose, identity, is_proper
from episolve.simplicial import (
    ChromaticComplex,
    ChromaticMap,
    Facet,
    SimplicialModel,
    Vertex,
    compose_maps,
)
from episolve.types import AgentSet, Issue, ValidationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrderedPartition:
    blocks: tuple[tuple[str, ...], ...]

    def __str__(self) -> str:
        return "|".join("+".join(block) for block in self.blocks)

    def view(self, agent: str) -> frozenset[str]:
        seen: set[str] = set()
        for block in self.blocks:
            seen.update(block)
            if agent in block:
                return frozenset(seen)
        raise UnknownSymbol("agent", agent)


def validate_ordered_partition(partition: OrderedPartition, agents: AgentSet) -> ValidationReport:
    issues: list[Issue] = []
    seen: list[str] = [a for block in partition.blocks for a in block]
    if any(not block for block in partition.blocks):
        issues.append(Issue("block-empty", "empty concurrency class", subject=str(partition)))
    issues.extend(
        Issue("block-overlap", "agent in two classes", agent=a, subject=str(partition))
        for a in sorted({a for a in seen if seen.count(a) > 1})
    )
    issues.extend(
        Issue("block-cover", "agent missing from schedule", agent=a, subject=str(partition))
        for a in agents
        if a not in seen
    )
    issues.extend(
        Issue("block-unknown-agent", "unknown agent in schedule", agent=a, subject=str(partition))
        for a in sorted(set(seen))
        if a not in agents
    )
    return ValidationReport(tuple(issues))


@dataclass(frozen=True)
class Schedule:
    rounds: tuple[OrderedPartition, ...]

    def __post_init__(self) -> None:
        if not self.rounds:
            raise EpisolveError("A schedule needs at least one round.")

    def __str__(self) -> str:
        return " ; ".join(str(p) for p in self.rounds)


def _ordered_partitions(remaining: Sequence[str]) -> Iterator[tuple[tuple[str, ...], ...]]:
    if not remaining:
        yield ()
        return
    for size in range(1, len(remaining) + 1):
        for first in combinations(remaining, size):
            rest = [a for a in remaining if a not in first]
            for tail in _ordered_partitions(rest):
                yield (first, *tail)


def enumerate_ordered_partitions(agents: AgentSet) -> list[OrderedPartition]:
    return [OrderedPartition(blocks) for blocks in _ordered_partitions(agents.agents)]


def enumerate_schedules(agents: AgentSet, rounds: int) -> Iterator[Schedule]:
    partitions = enumerate_ordered_partitions(agents)

    def extend(prefix: tuple[OrderedPartition, ...]) -> Iterator[Schedule]:
        if len(prefix) == rounds:
            yield Schedule(prefix)
            return
        for partition in partitions:
            yield from extend((*prefix, partition))

    if rounds < 1:
        raise EpisolveError("A schedule needs at least one round.")
    yield from extend(())


def iis_view(agent: str, partition: OrderedPartition) -> frozenset[str]:
    return partition.view(agent)


def iis_one_round_action_model(agents: AgentSet) -> ActionModel:
    partitions = enumerate_ordered_partitions(agents)
    names = [str(p) for p in partitions]
    views = {str(p): {a: iis_view(a, p) for a in agents} for p in partitions}
    frame = KripkeFrame.build(
        agents,
        names,
        {a: _classes_by_view(names, views, a) for a in agents},
    )
    if not is_proper(frame):
        raise EpisolveError("Immediate-snapshot action model is not proper.")
    return ActionModel(frame=frame, observes=views, name="iis")


def _classes_by_view(
    names: Sequence[str], views: dict[str, dict[str, frozenset[str]]], agent: str
) -> list[list[str]]:
    classes: dict[frozenset[str], list[str]] = {}
    for name in names:
        classes.setdefault(views[name][agent], []).append(name)
    return list(classes.values())


def protocol_model(model: KripkeModel, rounds: int) -> tuple[KripkeModel, FrameMorphism]:
    """Apply ``rounds`` immediate-snapshot rounds; returns the model and its
    projection to ``model``."""
    if rounds < 0:
        raise EpisolveError("Round count must be non-negative.")
    action = iis_one_round_action_model(model.agents)
    current, projection = model, identity(model.frame)
    for round_number in range(1, rounds + 1):
        current, step = product_update(current, action)
        projection = compose(projection, step)
        logger.debug("Round %d: %d worlds", round_number, len(current.states))
    return current, projection


def _relabel_to_complex(
    chromatic: ChromaticMap, complex_: ChromaticComplex
) -> ChromaticMap:
    """Point a map into ``G(F(complex_))`` at ``complex_`` itself."""
    by_label = {facet_label(complex_, f): f for f in complex_.facets}
    mapping = {
        vertex: complex_.vertex_of_color(by_label[image.name[len(image.color) + 1 :]], image.color)
        for vertex, image in chromatic.mapping.items()
    }
    return ChromaticMap(chromatic.source, complex_, mapping)


def protocol_complex(
    model: SimplicialModel | KripkeModel, rounds: int
) -> tuple[SimplicialModel, ChromaticMap]:
    """Protocol complex after ``rounds`` rounds with its projection ``π_I``.

    For a simplicial input the projection lands on the input complex itself.
    """
    kripke = simplicial_to_model(model) if isinstance(model, SimplicialModel) else model
    protocol, projection = protocol_model(kripke, rounds)
    result = model_to_simplicial(protocol)
    chromatic = frame_morphism_to_map(projection)
    if isinstance(model, SimplicialModel):
        chromatic = _relabel_to_complex(chromatic, model.complex)
    return result, chromatic


def standard_chromatic_subdivision(complex_: ChromaticComplex) -> ChromaticComplex:
    bare = SimplicialModel(complex=complex_, ap=(), vval={})
    return protocol_complex(bare, 1)[0].complex


def view_vertex(agent: str, seen: Facet) -> Vertex:
    names = ",".join(sorted(v.name for v in seen))
    return Vertex(name=f"{agent}<{names}>", color=agent)


def chromatic_subdivision_by_views(
    complex_: ChromaticComplex, rounds: int = 1
) -> tuple[ChromaticComplex, ChromaticMap]:
    """Iterated subdivision built directly from snapshot views.

    A new vertex is an agent with the set of previous-round vertices it saw.
    """
    partitions = enumerate_ordered_partitions(complex_.agents)
    current = complex_
    projection: ChromaticMap | None = None
    for _ in range(rounds):
        facets: list[Facet] = []
        own: dict[Vertex, Vertex] = {}
        for facet in current.facets:
            for partition in partitions:
                new_facet: set[Vertex] = set()
                for agent in current.agents:
                    seen = frozenset(v for v in facet if v.color in partition.view(agent))
                    vertex = view_vertex(agent, seen)
                    own[vertex] = current.vertex_of_color(facet, agent)
                    new_facet.add(vertex)
                facets.append(frozenset(new_facet))
        subdivided = ChromaticComplex.build(current.agents, facets)
        step = ChromaticMap(subdivided, current, own)
        projection = step if projection is None else compose_maps(projection, step)
        current = subdivided
    if projection is None:
        projection = ChromaticMap(complex_, complex_, {v: v for v in complex_.vertices})
    return current, projection
