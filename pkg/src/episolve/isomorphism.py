"""Isomorphism tests for frames and complexes.

Both objects are encoded as node-labelled graphs and handed to networkx's
VF2 matcher. The witness is made canonical by pinning sources one at a time
in canonical order to the least target that still admits an isomorphism.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Hashable, Sequence
from itertools import combinations
from typing import Any

import networkx as nx
from networkx.algorithms import isomorphism as nx_iso

from episolve.kripke import FrameMorphism, KripkeFrame
from episolve.simplicial import ChromaticComplex, ChromaticMap, Vertex

logger = logging.getLogger(__name__)


def _frame_graph(frame: KripkeFrame) -> nx.Graph:
    graph = nx.Graph()
    for state in frame.states:
        graph.add_node(state, label=_class_profile(frame, state), pin=None)
    for left, right in combinations(frame.states, 2):
        agents = frozenset(a for a in frame.agents if frame.related(a, left, right))
        if agents:
            graph.add_edge(left, right, agents=agents)
    return graph


def _class_profile(frame: KripkeFrame, state: str) -> tuple[int, ...]:
    return tuple(len(frame.class_of(a, state)) for a in frame.agents)


def _complex_graph(complex_: ChromaticComplex) -> nx.Graph:
    graph = nx.Graph()
    for vertex in complex_.vertices:
        graph.add_node(("v", vertex.name), label=("v", vertex.color), pin=None)
    for index, facet in enumerate(complex_.facets):
        graph.add_node(("f", index), label=("f",), pin=None)
        for vertex in facet:
            graph.add_edge(("f", index), ("v", vertex.name))
    return graph


def _node_match(x: dict[str, Any], y: dict[str, Any]) -> bool:
    return x["label"] == y["label"] and x["pin"] == y["pin"]


def _edge_match(x: dict[str, Any], y: dict[str, Any]) -> bool:
    return x.get("agents") == y.get("agents")


def _matches(left: nx.Graph, right: nx.Graph) -> bool:
    return nx_iso.GraphMatcher(
        left, right, node_match=_node_match, edge_match=_edge_match
    ).is_isomorphic()


def _least_witness[S: Hashable, T: Hashable](
    left: nx.Graph,
    right: nx.Graph,
    sources: Sequence[S],
    candidates: Callable[[S], Sequence[T]],
) -> dict[S, T] | None:
    if not _matches(left, right):
        return None
    left, right = left.copy(), right.copy()
    mapping: dict[S, T] = {}
    used: set[T] = set()
    for pin, source in enumerate(sources):
        left.nodes[source]["pin"] = pin
        for target in candidates(source):
            if target in used:
                continue
            right.nodes[target]["pin"] = pin
            if _matches(left, right):
                mapping[source] = target
                used.add(target)
                break
            right.nodes[target]["pin"] = None
        else:
            logger.error("No pinned extension for %r; matcher disagreed with itself", source)
            return None
    return mapping


def frames_isomorphic(left: KripkeFrame, right: KripkeFrame) -> FrameMorphism | None:
    if left.agents != right.agents or len(left.states) != len(right.states):
        return None
    mapping = _least_witness(
        _frame_graph(left),
        _frame_graph(right),
        left.states,
        lambda _state: right.states,
    )
    if mapping is None:
        return None
    return FrameMorphism(left, right, mapping)


def complexes_isomorphic(
    left: ChromaticComplex, right: ChromaticComplex
) -> ChromaticMap | None:
    if (
        left.agents != right.agents
        or len(left.vertices) != len(right.vertices)
        or len(left.facets) != len(right.facets)
    ):
        return None
    by_color: dict[str, list[Vertex]] = {a: [] for a in right.agents}
    for vertex in right.vertices:
        by_color.setdefault(vertex.color, []).append(vertex)
    mapping = _least_witness(
        _complex_graph(left),
        _complex_graph(right),
        [("v", v.name) for v in left.vertices],
        lambda node: [("v", v.name) for v in by_color.get(left.vertex(node[1]).color, [])],
    )
    if mapping is None:
        return None
    return ChromaticMap(
        left,
        right,
        {left.vertex(src[1]): right.vertex(dst[1]) for src, dst in mapping.items()},
    )
