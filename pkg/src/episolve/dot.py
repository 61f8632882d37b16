"""Graphviz DOT export of Kripke frames and complex 1-skeletons."""

from __future__ import annotations

import graphviz

from episolve.kripke import KripkeModel
from episolve.simplicial import ChromaticComplex, SimplicialModel, skeleton_edges
from episolve.types import render_lits

PALETTE = ("lightgray", "white", "lightblue", "orange", "palegreen", "pink")


def _label(name: str, literals: list[str]) -> str:
    return f"{name}\\n{','.join(literals)}" if literals else name


def kripke_to_dot(model: KripkeModel) -> str:
    """States labelled with their literals; one edge per related pair,
    labelled with every agent that confuses the two states."""
    # Node ids are positional; state names may contain DOT port separators.
    ids = {state: f"s{i}" for i, state in enumerate(model.states)}
    graph = graphviz.Graph("kripke", node_attr={"shape": "ellipse"})
    for state in model.states:
        literals = render_lits(model.val.get(state, frozenset()), model.ap)
        graph.node(ids[state], label=_label(state, literals))
    labels: dict[tuple[str, str], list[str]] = {}
    for agent in model.agents:
        for pair in model.frame.edges(agent):
            labels.setdefault(pair, []).append(agent)
    for (left, right), agents in sorted(labels.items()):
        graph.edge(ids[left], ids[right], label=",".join(agents))
    return graph.source


def complex_to_dot(subject: SimplicialModel | ChromaticComplex) -> str:
    if isinstance(subject, SimplicialModel):
        complex_, ap, vval = subject.complex, subject.ap, subject.vval
    else:
        complex_, ap, vval = subject, (), {}
    colors = {agent: PALETTE[i % len(PALETTE)] for i, agent in enumerate(complex_.agents)}
    ids = {vertex: f"v{i}" for i, vertex in enumerate(complex_.vertices)}
    graph = graphviz.Graph("complex", node_attr={"shape": "circle", "style": "filled"})
    for vertex in complex_.vertices:
        literals = render_lits(vval.get(vertex, frozenset()), ap)
        graph.node(
            ids[vertex],
            label=_label(vertex.name, literals),
            agent=vertex.color,
            fillcolor=colors[vertex.color],
        )
    for x, y in skeleton_edges(complex_):
        graph.edge(ids[x], ids[y])
    return graph.source
