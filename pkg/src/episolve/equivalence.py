"""Translation between proper Kripke frames/models and chromatic complexes/models.

``complex_to_frame`` turns facets into states, related for an agent when they
share that agent's vertex. ``frame_to_complex`` goes the other way with one
vertex per indistinguishability class.
"""

from __future__ import annotations

import logging
from collections import defaultdict

from episolve.errors import MissingOwnership, MorphismError, NotAgentLocal, NotProper
from episolve.kripke import (
    FrameMorphism,
    KripkeFrame,
    KripkeModel,
    improper_pair,
    is_model_morphism,
    is_morphism,
)
from episolve.simplicial import (
    ChromaticComplex,
    ChromaticMap,
    Facet,
    SimplicialModel,
    Vertex,
    is_chromatic_map,
)
from episolve.types import Lit

logger = logging.getLogger(__name__)


def facet_label(complex_: ChromaticComplex, facet: Facet) -> str:
    """State name of a facet: its vertex names in agent order."""
    return "(" + ",".join(v.name for v in complex_.ordered(facet)) + ")"


def class_vertex(agent: str, members: tuple[str, ...]) -> Vertex:
    return Vertex(name=f"{agent}:{members[0]}", color=agent)


def complex_to_frame(complex_: ChromaticComplex) -> KripkeFrame:
    partitions: dict[str, list[list[str]]] = {}
    for agent in complex_.agents:
        classes: dict[Vertex, list[str]] = defaultdict(list)
        for facet in complex_.facets:
            classes[complex_.vertex_of_color(facet, agent)].append(
                facet_label(complex_, facet)
            )
        partitions[agent] = list(classes.values())
    states = [facet_label(complex_, f) for f in complex_.facets]
    return KripkeFrame.build(complex_.agents, states, partitions)


def state_facets(frame: KripkeFrame) -> dict[str, Facet]:
    """Facet of every state under ``frame_to_complex``; the frame must be proper."""
    pair = improper_pair(frame)
    if pair is not None:
        raise NotProper(*pair)
    return {
        state: frozenset(class_vertex(a, frame.class_of(a, state)) for a in frame.agents)
        for state in frame.states
    }


def frame_to_complex(frame: KripkeFrame) -> ChromaticComplex:
    return ChromaticComplex.build(frame.agents, state_facets(frame).values())


def frame_morphism_to_map(morphism: FrameMorphism) -> ChromaticMap:
    source, target = morphism.source, morphism.target
    if not is_morphism(morphism.mapping, source, target):
        raise MorphismError("Cannot transport a map that is not a frame morphism.")
    mapping = {
        class_vertex(a, members): class_vertex(a, target.class_of(a, morphism(members[0])))
        for a in source.agents
        for members in source.rel[a]
    }
    return ChromaticMap(frame_to_complex(source), frame_to_complex(target), mapping)


def chromatic_map_to_morphism(chromatic: ChromaticMap) -> FrameMorphism:
    source, target = chromatic.source, chromatic.target
    if not is_chromatic_map(chromatic.mapping, source, target):
        raise MorphismError("Cannot transport a map that is not chromatic.")
    mapping = {
        facet_label(source, facet): facet_label(target, chromatic.image(facet))
        for facet in source.facets
    }
    return FrameMorphism(complex_to_frame(source), complex_to_frame(target), mapping)


def _require_ownership(model: KripkeModel) -> None:
    unowned = [p for p in model.ap if p not in model.owner]
    if unowned:
        raise MissingOwnership(
            f"Atoms {unowned} have no owner agent; literals cannot be placed on vertices."
        )


def model_to_simplicial(model: KripkeModel) -> SimplicialModel:
    _require_ownership(model)
    facets = state_facets(model.frame)
    vval: dict[Vertex, frozenset[Lit]] = {}
    for agent in model.agents:
        owned = set(model.owned_atoms(agent))
        for members in model.frame.rel[agent]:
            first = members[0]
            local = frozenset(lit for lit in model.val[first] if lit.atom in owned)
            for state in members[1:]:
                other = frozenset(lit for lit in model.val[state] if lit.atom in owned)
                if other != local:
                    raise NotAgentLocal(agent, first, state)
            vval[class_vertex(agent, members)] = local
    complex_ = ChromaticComplex.build(model.agents, facets.values())
    return SimplicialModel(complex=complex_, ap=model.ap, vval=vval, owner=dict(model.owner))


def simplicial_to_model(model: SimplicialModel) -> KripkeModel:
    complex_ = model.complex
    frame = complex_to_frame(complex_)
    val = {
        facet_label(complex_, facet): model.facet_valuation(facet)
        for facet in complex_.facets
    }
    return KripkeModel(frame=frame, ap=model.ap, val=val, owner=model.inferred_owner())


def model_morphism_to_map(
    morphism: FrameMorphism, source: KripkeModel, target: KripkeModel
) -> ChromaticMap:
    if not is_model_morphism(morphism.mapping, source, target):
        raise MorphismError("Cannot transport a map that is not a model morphism.")
    return frame_morphism_to_map(morphism)
