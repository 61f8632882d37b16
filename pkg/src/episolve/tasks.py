"""Tasks, their carrier relation and the solvability decision.

A task is solvable in a protocol when some chromatic map ``h`` from the
protocol complex into the task complex ``Δ*`` commutes with the projections
to the input: ``π_I ∘ h = π_I``.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

from episolve.equivalence import frame_morphism_to_map, model_to_simplicial, state_facets
from episolve.errors import EpisolveError, UnknownSymbol
from episolve.homology import MAX_DIMENSION, ObstructionReport, obstruction_report
from episolve.kripke import (
    FrameMorphism,
    KripkeFrame,
    KripkeModel,
    merge_ap,
    pair_name,
    union_valuation,
)
from episolve.protocol import protocol_complex
from episolve.simplicial import ChromaticMap, Facet, SimplicialModel, Vertex
from episolve.solver import SearchStats, SimplicialMapSearch
from episolve.types import Issue, Lit, ValidationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TaskSpec:
    input: KripkeModel
    output: KripkeModel
    delta: Mapping[str, frozenset[str]]
    name: str = "task"

    def allowed(self, state: str) -> frozenset[str]:
        try:
            return self.delta[state]
        except KeyError:
            raise UnknownSymbol("input state", state) from None


def validate_carrier(task: TaskSpec) -> ValidationReport:
    issues: list[Issue] = []
    inputs, outputs = set(task.input.states), set(task.output.states)
    if task.input.agents != task.output.agents:
        issues.append(Issue("agents-mismatch", "input and output agents differ"))
        return ValidationReport(tuple(issues))
    for state in sorted(set(task.delta) - inputs):
        issues.append(Issue("delta-unknown-input", "delta given for unknown state", subject=state))
    for state in task.input.states:
        targets = task.delta.get(state, frozenset())
        if not targets:
            issues.append(Issue("delta-empty", "no allowed outputs", subject=state))
        issues.extend(
            Issue("delta-unknown-output", f"unknown output {target}", subject=state)
            for target in sorted(targets - outputs)
        )
    if issues:
        return ValidationReport(tuple(issues))
    frame, out = task.input.frame, task.output.frame
    for agent in task.input.agents:
        for members in frame.rel[agent]:
            for i, u in enumerate(members):
                for v in members[i + 1 :]:
                    if not any(
                        out.related(agent, x, y)
                        for x in task.delta[u]
                        for y in task.delta[v]
                    ):
                        issues.append(
                            Issue(
                                "carrier-violation",
                                f"no {agent}-related outputs for {u} and {v}",
                                agent,
                                f"{u},{v}",
                            )
                        )
    return ValidationReport(tuple(issues))


@dataclass(frozen=True)
class DeltaSubmodel:
    """The sub-model of ``I × O`` on pairs allowed by the task."""

    model: KripkeModel
    to_input: FrameMorphism
    to_output: FrameMorphism
    input: KripkeModel
    output: KripkeModel

    @cached_property
    def simplicial(self) -> SimplicialModel:
        return model_to_simplicial(self.model)

    @cached_property
    def input_map(self) -> ChromaticMap:
        return frame_morphism_to_map(self.to_input)

    @cached_property
    def output_map(self) -> ChromaticMap:
        return frame_morphism_to_map(self.to_output)


def build_delta_submodel(task: TaskSpec) -> DeltaSubmodel:
    validate_carrier(task).raise_for_issues(subject=f"task {task.name!r}")
    source, target = task.input, task.output
    pairs = [(s, t) for s in source.states for t in sorted(task.delta[s])]
    ap, owner = merge_ap(source, target)
    partitions: dict[str, list[list[str]]] = {}
    for agent in source.agents:
        classes: dict[tuple[int, int], list[str]] = {}
        for s, t in pairs:
            key = (source.frame.class_id(agent, s), target.frame.class_id(agent, t))
            classes.setdefault(key, []).append(pair_name(s, t))
        partitions[agent] = list(classes.values())
    frame = KripkeFrame.build(source.agents, [pair_name(s, t) for s, t in pairs], partitions)
    model = KripkeModel(
        frame=frame,
        ap=ap,
        val={pair_name(s, t): union_valuation(source, s, target, t) for s, t in pairs},
        owner=owner,
    )
    return DeltaSubmodel(
        model=model,
        to_input=FrameMorphism(frame, source.frame, {pair_name(s, t): s for s, t in pairs}),
        to_output=FrameMorphism(frame, target.frame, {pair_name(s, t): t for s, t in pairs}),
        input=source,
        output=target,
    )


@dataclass(frozen=True)
class DecisionMap:
    """Per protocol vertex, the output vertex it decides."""

    mapping: Mapping[Vertex, Vertex]
    literals: Mapping[Vertex, frozenset[Lit]]

    def as_dict(self) -> dict[str, dict[str, object]]:
        return {
            vertex.name: {
                "agent": vertex.color,
                "output": self.mapping[vertex].name,
                "decides": sorted(str(lit) for lit in self.literals[vertex]),
            }
            for vertex in sorted(self.mapping)
        }


@dataclass
class SolvabilityVerdict:
    solvable: bool
    witness: ChromaticMap | None = None
    decision_map: DecisionMap | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    def as_dict(self) -> dict[str, object]:
        payload: dict[str, object] = {
            "verdict": "Solvable" if self.solvable else "Unsolvable",
            "stats": self.stats.as_dict(),
        }
        if self.witness is not None:
            payload["witness"] = {
                x.name: self.witness(x).name for x in sorted(self.witness.mapping)
            }
        if self.decision_map is not None:
            payload["decisions"] = self.decision_map.as_dict()
        return payload


def check_solvability(
    protocol: SimplicialModel,
    projection: ChromaticMap,
    delta: DeltaSubmodel,
    *,
    workers: int = 1,
    seed: int | None = None,
) -> SolvabilityVerdict:
    search = SimplicialMapSearch(
        protocol.complex,
        projection,
        delta.simplicial.complex,
        delta.input_map,
        seed=seed,
    )
    result = search.run(workers=workers)
    if result.mapping is None:
        return SolvabilityVerdict(solvable=False, stats=result.stats)
    witness = ChromaticMap(protocol.complex, delta.simplicial.complex, result.mapping)
    if not check_witness(witness, projection, delta.input_map):
        raise EpisolveError("Search returned a map that fails verification.")
    return SolvabilityVerdict(solvable=True, witness=witness, stats=result.stats)


def check_witness(
    witness: ChromaticMap, projection: ChromaticMap, delta_projection: ChromaticMap
) -> bool:
    """Check ``witness`` is chromatic, lands on facets and commutes over the input."""
    source, target = witness.source, witness.target
    targets = set(target.vertices)
    facets = set(target.facets)
    for vertex in source.vertices:
        image = witness.mapping.get(vertex)
        if image is None or image not in targets or image.color != vertex.color:
            return False
        if delta_projection.mapping.get(image) != projection.mapping.get(vertex):
            return False
    return all(frozenset(witness.mapping[v] for v in f) in facets for f in source.facets)


def extract_decision_map(witness: ChromaticMap, delta: DeltaSubmodel) -> DecisionMap:
    output = model_to_simplicial(delta.output)
    to_output = delta.output_map
    mapping = {x: to_output(witness(x)) for x in witness.source.vertices}
    return DecisionMap(
        mapping=mapping,
        literals={x: output.vval.get(v, frozenset()) for x, v in mapping.items()},
    )


def decision_carried_by_delta(
    decisions: DecisionMap,
    projection: ChromaticMap,
    protocol: SimplicialModel,
    task: TaskSpec,
) -> bool:
    """Every protocol facet decides an output allowed for its input."""
    input_state = _facet_states(task.input)
    output_state = _facet_states(task.output)
    for facet in protocol.complex.facets:
        source = input_state.get(projection.image(facet))
        decided = output_state.get(frozenset(decisions.mapping[v] for v in facet))
        if source is None or decided is None or decided not in task.allowed(source):
            return False
    return True


def _facet_states(model: KripkeModel) -> dict[Facet, str]:
    return {facet: state for state, facet in state_facets(model.frame).items()}


def witness_to_morphism(
    witness: ChromaticMap, protocol: KripkeModel, delta: DeltaSubmodel
) -> FrameMorphism:
    """The witness as a map of protocol states into ``Δ*`` states."""
    delta_states = _facet_states(delta.model)
    mapping = {
        state: delta_states[witness.image(facet)]
        for state, facet in state_facets(protocol.frame).items()
    }
    return FrameMorphism(protocol.frame, delta.model.frame, mapping)


def decorate_with_decisions(
    protocol: KripkeModel, morphism: FrameMorphism, delta: DeltaSubmodel
) -> KripkeModel:
    """Protocol model whose states also carry the decided output literals."""
    ap, owner = merge_ap(protocol, delta.model)
    val = {
        state: union_valuation(protocol, state, delta.model, morphism(state))
        for state in protocol.states
    }
    return KripkeModel(frame=protocol.frame, ap=ap, val=val, owner=owner)


@dataclass
class SolveResult:
    task: TaskSpec
    rounds: int
    protocol: SimplicialModel
    projection: ChromaticMap
    delta: DeltaSubmodel
    verdict: SolvabilityVerdict
    obstruction: ObstructionReport | None

    def as_dict(self) -> dict[str, object]:
        payload: dict[str, object] = {
            "task": self.task.name,
            "rounds": self.rounds,
            "protocol_facets": len(self.protocol.complex.facets),
            "delta_facets": len(self.delta.simplicial.complex.facets),
            **self.verdict.as_dict(),
        }
        if self.obstruction is not None:
            payload["obstruction"] = self.obstruction.as_dict()
        return payload


def solve_task(
    task: TaskSpec,
    rounds: int,
    *,
    workers: int = 1,
    seed: int | None = None,
) -> SolveResult:
    delta = build_delta_submodel(task)
    protocol, projection = protocol_complex(task.input, rounds)
    verdict = check_solvability(protocol, projection, delta, workers=workers, seed=seed)
    if verdict.witness is not None:
        verdict.decision_map = extract_decision_map(verdict.witness, delta)
        if not decision_carried_by_delta(verdict.decision_map, projection, protocol, task):
            raise EpisolveError("Decision map is not carried by the task relation.")
    obstruction = None
    if protocol.complex.dimension <= MAX_DIMENSION:
        obstruction = obstruction_report(protocol.complex, projection, delta.simplicial.complex)
        if obstruction.verdict == "OBSTRUCTED" and verdict.solvable:
            raise EpisolveError("Homology obstruction contradicts a found decision map.")
    logger.info(
        "Task %s at %d round(s): %s",
        task.name,
        rounds,
        "solvable" if verdict.solvable else "unsolvable",
    )
    return SolveResult(
        task=task,
        rounds=rounds,
        protocol=protocol,
        projection=projection,
        delta=delta,
        verdict=verdict,
        obstruction=obstruction,
    )
