"""S5 model checking with group and common knowledge and action modalities.

Evaluation is set-at-a-time: :meth:`Evaluator.extension` returns every state
where a formula holds, memoized per subformula.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping

from episolve.actions import ActionModel, product_update
from episolve.config import CommonKnowledgeMode
from episolve.errors import (
    CommonKnowledgeMismatch,
    EmptyGroup,
    EmptyProduct,
    MissingOwnership,
    UnknownSymbol,
)
from episolve.formula import And, Atom, Box, Common, Everybody, Formula, Knows, Not, Top
from episolve.kripke import KripkeFrame, KripkeModel
from episolve.types import Lit
from episolve.unionfind import DisjointSet

logger = logging.getLogger(__name__)

StateSet = frozenset[str]


def group_components(frame: KripkeFrame, group: Iterable[str]) -> tuple[tuple[str, ...], ...]:
    """Connected components of the union of the relations of ``group``."""
    members = frame.agents.require(group)
    if not members:
        raise EmptyGroup("Group reachability")
    components = DisjointSet(frame.states)
    for agent in members:
        for block in frame.rel[agent]:
            components.union_all(block)
    return components.groups()


class Evaluator:
    def __init__(
        self,
        model: KripkeModel,
        actions: Mapping[str, ActionModel] | None = None,
        common_knowledge_mode: CommonKnowledgeMode = "components",
    ) -> None:
        self.model = model
        self.actions = dict(actions or {})
        self.common_knowledge_mode = common_knowledge_mode
        self._all: StateSet = frozenset(model.states)
        self._cache: dict[Formula, StateSet] = {}
        self._updates: dict[str, tuple[Evaluator, dict[str, list[str]]] | None] = {}

    def holds(self, state: str, formula: Formula) -> bool:
        if state not in self._all:
            raise UnknownSymbol("state", state)
        return state in self.extension(formula)

    def extension(self, formula: Formula) -> StateSet:
        cached = self._cache.get(formula)
        if cached is None:
            cached = self._compute(formula)
            self._cache[formula] = cached
        return cached

    def _compute(self, formula: Formula) -> StateSet:
        match formula:
            case Top():
                return self._all
            case Atom(name):
                if name not in self.model.ap:
                    raise UnknownSymbol("atom", name)
                return frozenset(s for s in self.model.states if Lit(name) in self.model.val[s])
            case Not(body):
                return self._all - self.extension(body)
            case And(left, right):
                return self.extension(left) & self.extension(right)
            case Knows(agent, body):
                return self._knows(agent, self.extension(body))
            case Everybody(group, body):
                return self._everybody(group, self.extension(body))
            case Common(group, body):
                return self._common(group, self.extension(body))
            case Box(action, body):
                return self._box(action, body)
        raise TypeError(f"not a formula: {formula!r}")

    def _knows(self, agent: str, target: StateSet) -> StateSet:
        self.model.agents.index(agent)
        return frozenset(
            state
            for block in self.model.frame.rel[agent]
            if target.issuperset(block)
            for state in block
        )

    def _everybody(self, group: tuple[str, ...], target: StateSet) -> StateSet:
        members = self.model.agents.require(group)
        if not members:
            raise EmptyGroup("Everybody-knows")
        result = self._all
        for agent in members:
            result &= self._knows(agent, target)
        return result

    def _common(self, group: tuple[str, ...], target: StateSet) -> StateSet:
        mode = self.common_knowledge_mode
        if mode == "fixpoint":
            return self._common_fixpoint(group, target)
        by_components = self._common_components(group, target)
        if mode == "crosscheck":
            by_fixpoint = self._common_fixpoint(group, target)
            if by_fixpoint != by_components:
                raise CommonKnowledgeMismatch(
                    f"Common knowledge for {group} disagrees: components give "
                    f"{sorted(by_components)}, fixpoint gives {sorted(by_fixpoint)}."
                )
            logger.debug("Common knowledge cross-check agreed on %d state(s)", len(by_components))
        return by_components

    def _common_components(self, group: tuple[str, ...], target: StateSet) -> StateSet:
        return frozenset(
            state
            for component in group_components(self.model.frame, group)
            if target.issuperset(component)
            for state in component
        )

    def _common_fixpoint(self, group: tuple[str, ...], target: StateSet) -> StateSet:
        current = target
        while True:
            following = target & self._everybody(group, current)
            if following == current:
                return current
            current = following

    def _update(self, name: str) -> tuple[Evaluator, dict[str, list[str]]] | None:
        if name not in self._updates:
            action = self.actions.get(name)
            if action is None:
                raise UnknownSymbol("action", name)
            try:
                updated, projection = product_update(self.model, action, self)
            except EmptyProduct:
                self._updates[name] = None
            else:
                fibres: dict[str, list[str]] = {}
                for world, state in projection.mapping.items():
                    fibres.setdefault(state, []).append(world)
                self._updates[name] = (
                    Evaluator(updated, self.actions, self.common_knowledge_mode),
                    fibres,
                )
        return self._updates[name]

    def _box(self, name: str, body: Formula) -> StateSet:
        update = self._update(name)
        if update is None:
            return self._all
        inner, fibres = update
        holds = inner.extension(body)
        return frozenset(
            s for s in self.model.states if all(w in holds for w in fibres.get(s, ()))
        )


def evaluate(
    model: KripkeModel,
    state: str,
    formula: Formula,
    actions: Mapping[str, ActionModel] | None = None,
    common_knowledge_mode: CommonKnowledgeMode = "components",
) -> bool:
    return Evaluator(model, actions, common_knowledge_mode).holds(state, formula)


def common_knowledge_class(
    model: KripkeModel, group: Iterable[str], state: str
) -> frozenset[str]:
    if state not in model.val:
        raise UnknownSymbol("state", state)
    for component in group_components(model.frame, group):
        if state in component:
            return frozenset(component)
    raise UnknownSymbol("state", state)


def restrict_to_group(model: KripkeModel, group: Iterable[str]) -> KripkeModel:
    """The model as seen by ``group``: other agents' relations become identity
    and atoms they own leave the vocabulary."""
    members = set(model.agents.require(group))
    if not members:
        raise EmptyGroup("Group restriction")
    unowned = [p for p in model.ap if p not in model.owner]
    if unowned:
        raise MissingOwnership(f"Atoms {unowned} have no owner; cannot restrict to a group.")
    ap = tuple(p for p in model.ap if model.owner[p] in members)
    kept = set(ap)
    frame = KripkeFrame(
        agents=model.agents,
        states=model.states,
        rel={
            a: model.frame.rel[a] if a in members else tuple((s,) for s in model.states)
            for a in model.agents
        },
    )
    val = {s: frozenset(lit for lit in model.val[s] if lit.atom in kept) for s in model.states}
    return KripkeModel(
        frame=frame,
        ap=ap,
        val=val,
        owner={p: a for p, a in model.owner.items() if p in kept},
    )
