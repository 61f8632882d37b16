"""Pure chromatic simplicial complexes and models.

A complex is stored as its facet list; lower faces are never materialized.
Vertices are identified by name and carry their color (an agent).
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from episolve.errors import AgentMismatch, MorphismError, UnknownSymbol
from episolve.types import (
    AgentSet,
    Issue,
    Lit,
    ValidationReport,
    first_clash,
    reserved_name_issues,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Vertex:
    name: str
    color: str

    def __str__(self) -> str:
        return self.name


Facet = frozenset[Vertex]


def facet_key(facet: Iterable[Vertex]) -> tuple[str, ...]:
    return tuple(sorted(v.name for v in facet))


@dataclass(frozen=True)
class ChromaticComplex:
    agents: AgentSet
    vertices: tuple[Vertex, ...]
    facets: tuple[Facet, ...]

    @classmethod
    def build(cls, agents: AgentSet, facets: Iterable[Iterable[Vertex]]) -> ChromaticComplex:
        """Canonical complex; duplicate facets merge, subsumed ones are dropped."""
        unique = sorted({frozenset(f) for f in facets}, key=facet_key)
        kept: list[Facet] = []
        for facet in unique:
            if any(facet < other for other in unique):
                logger.warning("Dropping subsumed facet %s", facet_key(facet))
                continue
            kept.append(facet)
        vertices = tuple(sorted({v for f in kept for v in f}))
        return cls(agents=agents, vertices=vertices, facets=tuple(kept))

    @property
    def dimension(self) -> int:
        return len(self.agents) - 1

    @cached_property
    def _incidence(self) -> dict[Vertex, tuple[Facet, ...]]:
        incidence: dict[Vertex, list[Facet]] = defaultdict(list)
        for facet in self.facets:
            for vertex in facet:
                incidence[vertex].append(facet)
        return {v: tuple(fs) for v, fs in incidence.items()}

    @cached_property
    def facet_set(self) -> frozenset[Facet]:
        return frozenset(self.facets)

    @cached_property
    def by_name(self) -> dict[str, Vertex]:
        return {v.name: v for v in self.vertices}

    def vertex(self, name: str) -> Vertex:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownSymbol("vertex", name) from None

    def facets_containing(self, vertex: Vertex) -> tuple[Facet, ...]:
        facets = self._incidence.get(vertex)
        if not facets:
            raise UnknownSymbol("vertex", vertex.name)
        return facets

    def vertex_of_color(self, facet: Facet, color: str) -> Vertex:
        for vertex in facet:
            if vertex.color == color:
                return vertex
        raise UnknownSymbol("color", color)

    def ordered(self, facet: Facet) -> tuple[Vertex, ...]:
        """Facet vertices in agent order."""
        return tuple(self.vertex_of_color(facet, a) for a in self.agents)


def skeleton_edges(complex_: ChromaticComplex) -> list[tuple[Vertex, Vertex]]:
    edges = {
        (x, y) if x < y else (y, x)
        for facet in complex_.facets
        for x, y in combinations(facet, 2)
    }
    return sorted(edges)


def validate_complex(complex_: ChromaticComplex) -> ValidationReport:
    issues: list[Issue] = []
    agents = complex_.agents
    declared = set(complex_.vertices)
    names: dict[str, Vertex] = {}
    for vertex in complex_.vertices:
        if vertex.color not in agents:
            issues.append(Issue("vertex-color", "color is not an agent", vertex.color, vertex.name))
        other = names.setdefault(vertex.name, vertex)
        if other != vertex:
            issues.append(Issue("vertex-name-clash", "two vertices share a name", subject=vertex.name))
    used: set[Vertex] = set()
    for facet in complex_.facets:
        key = ",".join(facet_key(facet))
        colors = [v.color for v in facet]
        if len(facet) != len(agents):
            issues.append(
                Issue("facet-not-pure", f"facet has {len(facet)} vertices, expected {len(agents)}", subject=key)
            )
        if len(set(colors)) != len(colors):
            issues.append(Issue("facet-not-chromatic", "two vertices share a color", subject=key))
        for vertex in facet:
            if vertex not in declared:
                issues.append(Issue("vertex-unknown", "facet uses undeclared vertex", subject=vertex.name))
        used.update(facet)
    issues.extend(
        Issue("vertex-isolated", "vertex lies in no facet", v.color, v.name)
        for v in complex_.vertices
        if v not in used
    )
    warnings: list[Issue] = []
    seen: set[Facet] = set()
    for facet in complex_.facets:
        if facet in seen:
            warnings.append(Issue("facet-duplicate", "facet listed twice", subject=",".join(facet_key(facet))))
        seen.add(facet)
    for facet in seen:
        if any(facet < other for other in seen):
            warnings.append(Issue("facet-subsumed", "facet is a face of another facet", subject=",".join(facet_key(facet))))
    if not complex_.facets:
        issues.append(Issue("complex-empty", "complex has no facets"))
    issues.extend(reserved_name_issues("agent", agents))
    return ValidationReport(tuple(issues), tuple(warnings))


@dataclass(frozen=True)
class SimplicialModel:
    complex: ChromaticComplex
    ap: tuple[str, ...]
    vval: Mapping[Vertex, frozenset[Lit]]
    owner: Mapping[str, str] = field(default_factory=dict)

    @property
    def agents(self) -> AgentSet:
        return self.complex.agents

    def facet_valuation(self, facet: Facet) -> frozenset[Lit]:
        return frozenset().union(*(self.vval.get(v, frozenset()) for v in facet))

    def atom_colors(self) -> dict[str, frozenset[str]]:
        """Colors of the vertices carrying a literal of each atom."""
        colors: dict[str, set[str]] = defaultdict(set)
        for vertex, lits in self.vval.items():
            for lit in lits:
                colors[lit.atom].add(vertex.color)
        return {atom: frozenset(found) for atom, found in colors.items()}

    def inferred_owner(self) -> dict[str, str]:
        """Declared owners, completed from the single color carrying each atom."""
        owner = dict(self.owner)
        for atom, colors in self.atom_colors().items():
            if atom not in owner and len(colors) == 1:
                owner[atom] = next(iter(colors))
        return owner


def validate_simplicial_model(model: SimplicialModel) -> ValidationReport:
    report = validate_complex(model.complex)
    issues: list[Issue] = []
    ap = set(model.ap)
    for vertex in model.complex.vertices:
        unknown = {lit.atom for lit in model.vval.get(vertex, frozenset())} - ap
        issues.extend(
            Issue("valuation-unknown-atom", f"atom {atom} not in AP", subject=vertex.name)
            for atom in sorted(unknown)
        )
    for facet in model.complex.facets:
        key = ",".join(facet_key(facet))
        lits = model.facet_valuation(facet)
        clash = first_clash(lits)
        if clash is not None:
            issues.append(Issue("valuation-inconsistent", f"contains {clash} and !{clash}", subject=key))
        missing = ap - {lit.atom for lit in lits}
        issues.extend(
            Issue("valuation-not-maximal", f"neither {atom} nor !{atom}", subject=key)
            for atom in sorted(missing)
        )
    for atom, agent in sorted(model.owner.items()):
        if atom not in ap or agent not in model.agents:
            issues.append(Issue("owner-invalid", f"bad ownership {atom} -> {agent}"))
    for atom, colors in sorted(model.atom_colors().items()):
        if len(colors) > 1:
            issues.append(
                Issue("owner-ambiguous", f"literals on colors {sorted(colors)}", subject=atom)
            )
        elif atom in model.owner and model.owner[atom] not in colors:
            issues.append(
                Issue("owner-mismatch", f"owned by {model.owner[atom]} but carried by another color", subject=atom)
            )
    issues.extend(reserved_name_issues("atom", model.ap))
    return report.merged(ValidationReport(tuple(issues)))


@dataclass(frozen=True)
class ChromaticMap:
    source: ChromaticComplex
    target: ChromaticComplex
    mapping: Mapping[Vertex, Vertex]

    def __call__(self, vertex: Vertex) -> Vertex:
        return self.mapping[vertex]

    def image(self, facet: Iterable[Vertex]) -> Facet:
        return frozenset(self.mapping[v] for v in facet)


def is_chromatic_map(
    mapping: Mapping[Vertex, Vertex], source: ChromaticComplex, target: ChromaticComplex
) -> bool:
    if source.agents != target.agents:
        raise AgentMismatch("Chromatic map between complexes over different agents.")
    targets = set(target.vertices)
    for vertex in source.vertices:
        if vertex not in mapping:
            raise MorphismError(f"Map is not total; no image for {vertex.name!r}.")
        if mapping[vertex] not in targets:
            raise MorphismError(f"Image of {vertex.name!r} is not a target vertex.")
    if any(mapping[v].color != v.color for v in source.vertices):
        return False
    return all(
        frozenset(mapping[v] for v in facet) in target.facet_set
        for facet in source.facets
    )


def identity_map(complex_: ChromaticComplex) -> ChromaticMap:
    return ChromaticMap(complex_, complex_, {v: v for v in complex_.vertices})


def compose_maps(second: ChromaticMap, first: ChromaticMap) -> ChromaticMap:
    """Return ``second ∘ first``."""
    return ChromaticMap(
        source=first.source,
        target=second.target,
        mapping={v: second.mapping[first.mapping[v]] for v in first.source.vertices},
    )


def pair_vertex(left: Vertex, right: Vertex) -> Vertex:
    return Vertex(name=f"({left.name},{right.name})", color=left.color)


def restrict_product(
    left: ChromaticComplex,
    right: ChromaticComplex,
    pairs: Iterable[tuple[Facet, Facet]],
) -> tuple[ChromaticComplex, ChromaticMap, ChromaticMap]:
    """Sub-complex of the product spanned by the given facet pairs."""
    if left.agents != right.agents:
        raise AgentMismatch("Product of complexes over different agents.")
    facets: list[Facet] = []
    to_left: dict[Vertex, Vertex] = {}
    to_right: dict[Vertex, Vertex] = {}
    for first, second in pairs:
        facet: set[Vertex] = set()
        for agent in left.agents:
            x = left.vertex_of_color(first, agent)
            y = right.vertex_of_color(second, agent)
            paired = pair_vertex(x, y)
            to_left[paired] = x
            to_right[paired] = y
            facet.add(paired)
        facets.append(frozenset(facet))
    product = ChromaticComplex.build(left.agents, facets)
    return (
        product,
        ChromaticMap(product, left, to_left),
        ChromaticMap(product, right, to_right),
    )


def complex_product(
    left: ChromaticComplex, right: ChromaticComplex
) -> tuple[ChromaticComplex, ChromaticMap, ChromaticMap]:
    return restrict_product(
        left, right, ((f, g) for f in left.facets for g in right.facets)
    )
