"""Action models and the restricted modal product (product update)."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from episolve.errors import AgentMismatch, EmptyProduct
from episolve.formula import Formula, Top
from episolve.kripke import (
    FrameMorphism,
    KripkeFrame,
    KripkeModel,
    improper_pair,
    pair_name,
    validate_frame,
)
from episolve.types import Issue, ValidationReport

if TYPE_CHECKING:
    from episolve.logic import Evaluator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ActionModel:
    """Points with per-agent indistinguishability and preconditions.

    ``observes[point][agent]`` lists the agents whose prior state ``agent``
    learns when ``point`` happens; missing entries mean just ``agent`` itself.
    """

    frame: KripkeFrame
    pre: Mapping[str, Formula] = field(default_factory=dict)
    observes: Mapping[str, Mapping[str, frozenset[str]]] = field(default_factory=dict)
    name: str = "action"

    @property
    def points(self) -> tuple[str, ...]:
        return self.frame.states

    def precondition(self, point: str) -> Formula:
        return self.pre.get(point, Top())

    def observed(self, point: str, agent: str) -> frozenset[str]:
        return self.observes.get(point, {}).get(agent, frozenset({agent}))


def validate_action_model(action: ActionModel) -> ValidationReport:
    report = validate_frame(action.frame)
    issues: list[Issue] = []
    points = set(action.points)
    issues.extend(
        Issue("precondition-unknown-point", "precondition for unknown point", subject=p)
        for p in sorted(set(action.pre) - points)
    )
    for point, views in sorted(action.observes.items()):
        if point not in points:
            issues.append(Issue("observes-unknown-point", "view for unknown point", subject=point))
            continue
        for agent, seen in sorted(views.items()):
            if agent not in action.frame.agents:
                issues.append(Issue("observes-unknown-agent", "view of unknown agent", agent, point))
                continue
            if agent not in seen:
                issues.append(Issue("observes-self", "agent must observe itself", agent, point))
            unknown = sorted(seen - set(action.frame.agents))
            if unknown:
                issues.append(Issue("observes-unknown-agent", f"observes {unknown}", agent, point))
    if report.ok:
        for agent in action.frame.agents:
            for members in action.frame.rel[agent]:
                views = {action.observed(p, agent) for p in members}
                if len(views) > 1:
                    issues.append(
                        Issue(
                            "observes-not-constant",
                            "indistinguishable points give different views",
                            agent,
                            members[0],
                        )
                    )
    return report.merged(ValidationReport(tuple(issues)))


def product_update(
    model: KripkeModel,
    action: ActionModel,
    evaluator: Evaluator | None = None,
) -> tuple[KripkeModel, FrameMorphism]:
    """``model ⊗ action`` with its projection back to ``model``.

    Worlds are the pairs ``(s, p)`` with ``pre(p)`` true at ``s``. They are
    related for ``a`` when ``p ∼a q`` and the prior states agree for every
    agent ``a`` observes at ``p``. The valuation is inherited from ``model``.
    """
    from episolve.logic import Evaluator

    if model.agents != action.frame.agents:
        raise AgentMismatch("Model and action model have different agents.")
    if evaluator is None:
        evaluator = Evaluator(model)
    enabled = {p: evaluator.extension(action.precondition(p)) for p in action.points}
    pairs = [(s, p) for s in model.states for p in action.points if s in enabled[p]]
    if not pairs:
        raise EmptyProduct(f"No state satisfies any precondition of {action.name!r}.")

    frame = model.frame
    partitions: dict[str, list[list[str]]] = {}
    for agent in model.agents:
        classes: dict[tuple[int, tuple[int, ...]], list[str]] = {}
        for state, point in pairs:
            seen = action.observed(point, agent)
            key = (
                action.frame.class_id(agent, point),
                tuple(frame.class_id(b, state) for b in model.agents if b in seen),
            )
            classes.setdefault(key, []).append(pair_name(state, point))
        partitions[agent] = list(classes.values())
    names = [pair_name(s, p) for s, p in pairs]
    updated_frame = KripkeFrame.build(model.agents, names, partitions)
    updated = KripkeModel(
        frame=updated_frame,
        ap=model.ap,
        val={pair_name(s, p): model.val[s] for s, p in pairs},
        owner=dict(model.owner),
    )
    clash = improper_pair(updated_frame)
    if clash is not None:
        logger.warning(
            "Product update with %s is not proper (%s and %s merge); see quotient()",
            action.name,
            *clash,
        )
    logger.debug("Product update with %s: %d worlds", action.name, len(pairs))
    projection = FrameMorphism(updated_frame, model.frame, {pair_name(s, p): s for s, p in pairs})
    return updated, projection
