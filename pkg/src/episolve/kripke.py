"""Proper Kripke frames and models, their morphisms and products.

Relations are stored as one partition of the state set per agent, so every
relation is an equivalence by construction. Edge-list input is closed into
partitions by :meth:`KripkeFrame.from_edges`.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from episolve.errors import (
    AgentMismatch,
    EpisolveError,
    InconsistentValuation,
    MorphismError,
    UnknownSymbol,
)
from episolve.types import (
    AgentSet,
    Issue,
    Lit,
    ValidationReport,
    first_clash,
    reserved_name_issues,
)
from episolve.unionfind import DisjointSet

logger = logging.getLogger(__name__)

Partition = tuple[tuple[str, ...], ...]


def pair_name(left: str, right: str) -> str:
    return f"({left},{right})"


def canonical_partition(classes: Iterable[Iterable[str]]) -> Partition:
    ordered = [tuple(sorted(set(members))) for members in classes]
    return tuple(sorted(ordered))


@dataclass(frozen=True)
class KripkeFrame:
    agents: AgentSet
    states: tuple[str, ...]
    rel: Mapping[str, Partition]

    @classmethod
    def build(
        cls,
        agents: AgentSet,
        states: Iterable[str],
        partitions: Mapping[str, Iterable[Iterable[str]]],
    ) -> KripkeFrame:
        """Canonicalize without repairing; see :func:`validate_frame`."""
        return cls(
            agents=agents,
            states=tuple(sorted(states)),
            rel={a: canonical_partition(partitions[a]) for a in agents if a in partitions},
        )

    @classmethod
    def from_edges(
        cls,
        agents: AgentSet,
        states: Iterable[str],
        edges: Mapping[str, Iterable[tuple[str, str]]],
    ) -> KripkeFrame:
        """Close per-agent edge lists into partitions of the state set."""
        state_list = sorted(set(states))
        known = set(state_list)
        partitions: dict[str, Partition] = {}
        for agent in agents:
            classes = DisjointSet(state_list)
            listed: set[frozenset[str]] = set()
            for left, right in edges.get(agent, ()):
                for state in (left, right):
                    if state not in known:
                        raise UnknownSymbol("state", state)
                classes.union(left, right)
                if left != right:
                    listed.add(frozenset((left, right)))
            partition = classes.groups()
            implied = sum(len(c) * (len(c) - 1) // 2 for c in partition)
            if implied > len(listed):
                logger.warning(
                    "Closing relation of agent %s added %d pair(s)",
                    agent,
                    implied - len(listed),
                )
            partitions[agent] = partition
        for agent in edges:
            if agent not in agents:
                raise UnknownSymbol("agent", agent)
        return cls(agents=agents, states=tuple(state_list), rel=partitions)

    @classmethod
    def discrete(cls, agents: AgentSet, states: Iterable[str]) -> KripkeFrame:
        state_list = sorted(set(states))
        return cls(
            agents=agents,
            states=tuple(state_list),
            rel={a: tuple((s,) for s in state_list) for a in agents},
        )

    @cached_property
    def _index(self) -> dict[str, dict[str, int]]:
        index: dict[str, dict[str, int]] = {}
        for agent, partition in self.rel.items():
            index[agent] = {
                state: position
                for position, members in enumerate(partition)
                for state in members
            }
        return index

    def class_id(self, agent: str, state: str) -> int:
        try:
            return self._index[agent][state]
        except KeyError:
            if agent not in self.agents:
                raise UnknownSymbol("agent", agent) from None
            raise UnknownSymbol("state", state) from None

    def class_of(self, agent: str, state: str) -> tuple[str, ...]:
        return self.rel[agent][self.class_id(agent, state)]

    def related(self, agent: str, left: str, right: str) -> bool:
        return self.class_id(agent, left) == self.class_id(agent, right)

    def signature(self, state: str) -> tuple[int, ...]:
        return tuple(self.class_id(a, state) for a in self.agents)

    def edges(self, agent: str) -> list[tuple[str, str]]:
        return [
            (members[i], members[j])
            for members in self.rel[agent]
            for i in range(len(members))
            for j in range(i + 1, len(members))
        ]


def validate_frame(frame: KripkeFrame) -> ValidationReport:
    issues: list[Issue] = []
    states = set(frame.states)
    if len(states) != len(frame.states):
        issues.append(Issue("states-duplicate", "state listed more than once"))
    if not states:
        issues.append(Issue("states-empty", "frame has no states"))
    for agent in frame.agents:
        partition = frame.rel.get(agent)
        if partition is None:
            issues.append(Issue("relation-missing", "no relation given", agent=agent))
            continue
        seen: dict[str, int] = {}
        for position, members in enumerate(partition):
            if not members:
                issues.append(Issue("class-empty", "empty class", agent=agent))
            for state in members:
                if state not in states:
                    issues.append(
                        Issue("state-unknown", "class mentions unknown state", agent, state)
                    )
                if state in seen and seen[state] != position:
                    issues.append(
                        Issue("class-overlap", "state lies in two classes", agent, state)
                    )
                seen[state] = position
        issues.extend(
            Issue("partition-cover", "partition does not cover states", agent, state)
            for state in sorted(states - set(seen))
        )
    issues.extend(
        Issue("relation-unknown-agent", "relation for unknown agent", agent=agent)
        for agent in sorted(frame.rel)
        if agent not in frame.agents
    )
    issues.extend(reserved_name_issues("agent", frame.agents))
    return ValidationReport(tuple(issues))


def improper_pair(frame: KripkeFrame) -> tuple[str, str] | None:
    first_by_signature: dict[tuple[int, ...], str] = {}
    for state in frame.states:
        signature = frame.signature(state)
        if signature in first_by_signature:
            return first_by_signature[signature], state
        first_by_signature[signature] = state
    return None


def is_proper(frame: KripkeFrame) -> bool:
    return improper_pair(frame) is None


@dataclass(frozen=True)
class KripkeModel:
    frame: KripkeFrame
    ap: tuple[str, ...]
    val: Mapping[str, frozenset[Lit]]
    owner: Mapping[str, str] = field(default_factory=dict)

    @property
    def agents(self) -> AgentSet:
        return self.frame.agents

    @property
    def states(self) -> tuple[str, ...]:
        return self.frame.states

    def holds(self, state: str, atom: str) -> bool:
        if atom not in self.ap:
            raise UnknownSymbol("atom", atom)
        try:
            return Lit(atom) in self.val[state]
        except KeyError:
            raise UnknownSymbol("state", state) from None

    def owned_atoms(self, agent: str) -> tuple[str, ...]:
        return tuple(p for p in self.ap if self.owner.get(p) == agent)


def validate_model(model: KripkeModel) -> ValidationReport:
    report = validate_frame(model.frame)
    issues: list[Issue] = []
    ap = set(model.ap)
    if len(ap) != len(model.ap):
        issues.append(Issue("ap-duplicate", "atom listed more than once"))
    for state in model.states:
        lits = model.val.get(state)
        if lits is None:
            issues.append(Issue("valuation-missing", "state has no valuation", subject=state))
            continue
        clash = first_clash(lits)
        if clash is not None:
            issues.append(
                Issue("valuation-inconsistent", f"contains {clash} and !{clash}", subject=state)
            )
        atoms = {lit.atom for lit in lits}
        issues.extend(
            Issue("valuation-unknown-atom", f"atom {atom} not in AP", subject=state)
            for atom in sorted(atoms - ap)
        )
        issues.extend(
            Issue("valuation-not-maximal", f"neither {atom} nor !{atom}", subject=state)
            for atom in sorted(ap - atoms)
        )
    for atom, agent in sorted(model.owner.items()):
        if atom not in ap:
            issues.append(Issue("owner-unknown-atom", f"owner given for {atom}"))
        if agent not in model.agents:
            issues.append(Issue("owner-unknown-agent", f"{atom} owned by unknown agent", agent))
    issues.extend(reserved_name_issues("atom", model.ap))
    return report.merged(ValidationReport(tuple(issues)))


@dataclass(frozen=True)
class FrameMorphism:
    source: KripkeFrame
    target: KripkeFrame
    mapping: Mapping[str, str]

    def __call__(self, state: str) -> str:
        return self.mapping[state]

    @classmethod
    def checked(
        cls, mapping: Mapping[str, str], source: KripkeFrame, target: KripkeFrame
    ) -> FrameMorphism:
        if not is_morphism(mapping, source, target):
            raise MorphismError("Map does not preserve indistinguishability.")
        return cls(source=source, target=target, mapping=dict(mapping))


def identity(frame: KripkeFrame) -> FrameMorphism:
    return FrameMorphism(frame, frame, {s: s for s in frame.states})


def compose(second: FrameMorphism, first: FrameMorphism) -> FrameMorphism:
    """Return ``second ∘ first``."""
    return FrameMorphism(
        source=first.source,
        target=second.target,
        mapping={s: second.mapping[first.mapping[s]] for s in first.source.states},
    )


def _check_total(mapping: Mapping[str, str], source: KripkeFrame, target: KripkeFrame) -> None:
    missing = [s for s in source.states if s not in mapping]
    if missing:
        raise MorphismError(f"Map is not total; no image for {missing[0]!r}.")
    targets = set(target.states)
    for state in source.states:
        if mapping[state] not in targets:
            raise MorphismError(
                f"Image {mapping[state]!r} of {state!r} is not a target state."
            )


def is_morphism(mapping: Mapping[str, str], source: KripkeFrame, target: KripkeFrame) -> bool:
    if source.agents != target.agents:
        raise AgentMismatch("Morphism source and target have different agents.")
    _check_total(mapping, source, target)
    for agent in source.agents:
        for members in source.rel[agent]:
            image_class = {target.class_id(agent, mapping[s]) for s in members}
            if len(image_class) > 1:
                return False
    return True


def is_model_morphism(
    mapping: Mapping[str, str], source: KripkeModel, target: KripkeModel
) -> bool:
    if not is_morphism(mapping, source.frame, target.frame):
        return False
    return all(target.val[mapping[s]] <= source.val[s] for s in source.states)


def _require_same_agents(left: KripkeFrame, right: KripkeFrame) -> None:
    if left.agents != right.agents:
        raise AgentMismatch(
            f"Agent sets differ: {list(left.agents)} vs {list(right.agents)}."
        )


def frame_product(
    left: KripkeFrame, right: KripkeFrame
) -> tuple[KripkeFrame, FrameMorphism, FrameMorphism]:
    _require_same_agents(left, right)
    states = [pair_name(s, t) for s in left.states for t in right.states]
    partitions = {
        agent: [
            [pair_name(s, t) for s in first for t in second]
            for first in left.rel[agent]
            for second in right.rel[agent]
        ]
        for agent in left.agents
    }
    product = KripkeFrame.build(left.agents, states, partitions)
    to_left = {pair_name(s, t): s for s in left.states for t in right.states}
    to_right = {pair_name(s, t): t for s in left.states for t in right.states}
    return (
        product,
        FrameMorphism(product, left, to_left),
        FrameMorphism(product, right, to_right),
    )


def merge_ap(left: KripkeModel, right: KripkeModel) -> tuple[tuple[str, ...], dict[str, str]]:
    ap = left.ap + tuple(p for p in right.ap if p not in left.ap)
    owner = dict(right.owner)
    for atom, agent in left.owner.items():
        if owner.get(atom, agent) != agent:
            raise EpisolveError(
                f"Atom {atom!r} has different owners ({agent!r}, {owner[atom]!r})."
            )
        owner[atom] = agent
    return ap, owner


def union_valuation(left: KripkeModel, s: str, right: KripkeModel, t: str) -> frozenset[Lit]:
    lits = left.val[s] | right.val[t]
    clash = first_clash(lits)
    if clash is not None:
        raise InconsistentValuation(s, t, clash)
    return lits


def model_product(left: KripkeModel, right: KripkeModel) -> KripkeModel:
    frame, _, _ = frame_product(left.frame, right.frame)
    ap, owner = merge_ap(left, right)
    val = {
        pair_name(s, t): union_valuation(left, s, right, t)
        for s in left.states
        for t in right.states
    }
    return KripkeModel(frame=frame, ap=ap, val=val, owner=owner)


def submodel(model: KripkeModel, states: Iterable[str]) -> KripkeModel:
    kept = set(states)
    for state in kept:
        if state not in model.val:
            raise UnknownSymbol("state", state)
    partitions = {
        agent: [
            [s for s in members if s in kept]
            for members in model.frame.rel[agent]
            if any(s in kept for s in members)
        ]
        for agent in model.agents
    }
    frame = KripkeFrame.build(model.agents, kept, partitions)
    return KripkeModel(
        frame=frame,
        ap=model.ap,
        val={s: model.val[s] for s in frame.states},
        owner=dict(model.owner),
    )


def quotient(model: KripkeModel) -> tuple[KripkeModel, FrameMorphism]:
    """Merge states that every agent confuses and that carry equal valuations."""
    buckets: dict[tuple[tuple[int, ...], frozenset[Lit]], list[str]] = defaultdict(list)
    for state in model.states:
        buckets[(model.frame.signature(state), model.val[state])].append(state)
    representative = {
        state: min(members) for members in buckets.values() for state in members
    }
    partitions = {
        agent: [
            sorted({representative[s] for s in members})
            for members in model.frame.rel[agent]
        ]
        for agent in model.agents
    }
    frame = KripkeFrame.build(model.agents, set(representative.values()), partitions)
    merged = KripkeModel(
        frame=frame,
        ap=model.ap,
        val={s: model.val[s] for s in frame.states},
        owner=dict(model.owner),
    )
    removed = len(model.states) - len(frame.states)
    if removed:
        logger.info("Quotient merged %d state(s)", removed)
    return merged, FrameMorphism(model.frame, frame, representative)
