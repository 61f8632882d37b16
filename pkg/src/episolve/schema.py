"""JSON documents for Kripke models, simplicial models, action models and tasks.

Relations are written as edge lists and closed into partitions on load.
Emitted documents list every pair of every class, so loading what was
dumped never widens a relation.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter
from pydantic import ValidationError as PydanticValidationError

from episolve.actions import ActionModel, validate_action_model
from episolve.equivalence import simplicial_to_model
from episolve.errors import EpisolveError, FormulaSyntaxError, SchemaError, ValidationError
from episolve.formula import Formula
from episolve.kripke import KripkeFrame, KripkeModel, validate_model
from episolve.parsing import parse_formula
from episolve.simplicial import (
    ChromaticComplex,
    SimplicialModel,
    Vertex,
    validate_simplicial_model,
)
from episolve.tasks import TaskSpec, validate_carrier
from episolve.types import AgentSet, Issue, Lit, ValidationReport, parse_lit, render_lits

logger = logging.getLogger(__name__)

Core = KripkeModel | SimplicialModel | ActionModel | TaskSpec
Relations = dict[str, list[tuple[str, str]]]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AtomEntry(_Document):
    atom: str
    owner: str | None = None


class KripkeDocument(_Document):
    kind: Literal["kripke"]
    agents: list[str] = Field(min_length=1)
    ap: list[AtomEntry] = Field(default_factory=list)
    states: list[str] = Field(min_length=1)
    relations: Relations = Field(default_factory=dict)
    valuation: dict[str, list[str]] = Field(default_factory=dict)


class VertexEntry(_Document):
    name: str
    color: str
    literals: list[str] = Field(default_factory=list)


class SimplicialDocument(_Document):
    kind: Literal["simplicial"]
    agents: list[str] = Field(min_length=1)
    ap: list[AtomEntry] = Field(default_factory=list)
    vertices: list[VertexEntry] = Field(min_length=1)
    facets: list[list[str]] = Field(min_length=1)


class ActionDocument(_Document):
    kind: Literal["action"]
    name: str = "action"
    agents: list[str] = Field(min_length=1)
    points: list[str] = Field(min_length=1)
    relations: Relations = Field(default_factory=dict)
    preconditions: dict[str, str] = Field(default_factory=dict)
    observes: dict[str, dict[str, list[str]]] = Field(default_factory=dict)


ModelDocument = Annotated[KripkeDocument | SimplicialDocument, Field(discriminator="kind")]


class TaskDocument(_Document):
    kind: Literal["task"]
    name: str = "task"
    input: ModelDocument
    output: ModelDocument
    delta: dict[str, list[str]]


Document = Annotated[
    KripkeDocument | SimplicialDocument | ActionDocument | TaskDocument,
    Field(discriminator="kind"),
]
_ADAPTER: TypeAdapter[Document] = TypeAdapter(Document)


def parse_document(text: str) -> Document:
    try:
        return _ADAPTER.validate_json(text)
    except PydanticValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise SchemaError(first["msg"], location=location) from None


def read_document(path: Path) -> Document:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise EpisolveError(f"Cannot read {path}: {exc.strerror or exc}") from None
    return parse_document(text)


def _duplicates(names: list[str], code: str, subject: str) -> list[Issue]:
    return [
        Issue(code, f"{subject} listed more than once", subject=name)
        for name in sorted({n for n in names if names.count(n) > 1})
    ]


def _atoms(entries: list[AtomEntry]) -> tuple[tuple[str, ...], dict[str, str]]:
    ap = tuple(entry.atom for entry in entries)
    owner = {entry.atom: entry.owner for entry in entries if entry.owner is not None}
    return ap, owner


def _lits(texts: list[str]) -> frozenset[Lit]:
    return frozenset(parse_lit(text) for text in texts)


def _kripke(document: KripkeDocument) -> tuple[KripkeModel, ValidationReport]:
    agents = AgentSet(tuple(document.agents))
    issues = _duplicates(document.states, "states-duplicate", "state")
    frame = KripkeFrame.from_edges(agents, document.states, document.relations)
    issues.extend(
        Issue("valuation-unknown-state", "valuation for unknown state", subject=state)
        for state in sorted(set(document.valuation) - set(frame.states))
    )
    ap, owner = _atoms(document.ap)
    model = KripkeModel(
        frame=frame,
        ap=ap,
        val={state: _lits(texts) for state, texts in document.valuation.items()},
        owner=owner,
    )
    return model, ValidationReport(tuple(issues)).merged(validate_model(model))


def _simplicial(document: SimplicialDocument) -> tuple[SimplicialModel, ValidationReport]:
    agents = AgentSet(tuple(document.agents))
    issues = _duplicates(
        [entry.name for entry in document.vertices], "vertex-duplicate", "vertex"
    )
    by_name: dict[str, Vertex] = {}
    vval: dict[Vertex, frozenset[Lit]] = {}
    for entry in document.vertices:
        vertex = Vertex(name=entry.name, color=entry.color)
        by_name[entry.name] = vertex
        vval[vertex] = _lits(entry.literals)
    facets: list[frozenset[Vertex]] = []
    for index, names in enumerate(document.facets):
        issues.extend(
            Issue("vertex-unknown", f"facet {index} uses undeclared vertex", subject=name)
            for name in names
            if name not in by_name
        )
        facets.append(frozenset(by_name[name] for name in names if name in by_name))
    ap, owner = _atoms(document.ap)
    raw = SimplicialModel(
        complex=ChromaticComplex(agents, tuple(sorted(vval)), tuple(facets)),
        ap=ap,
        vval=vval,
        owner=owner,
    )
    report = ValidationReport(tuple(issues)).merged(validate_simplicial_model(raw))
    if not report.ok:
        return raw, report
    canonical = SimplicialModel(
        complex=ChromaticComplex.build(agents, facets),
        ap=ap,
        vval=vval,
        owner=raw.inferred_owner(),
    )
    return canonical, report


def _action(document: ActionDocument) -> tuple[ActionModel, ValidationReport]:
    agents = AgentSet(tuple(document.agents))
    issues = _duplicates(document.points, "points-duplicate", "point")
    frame = KripkeFrame.from_edges(agents, document.points, document.relations)
    pre: dict[str, Formula] = {}
    for point, text in document.preconditions.items():
        try:
            pre[point] = parse_formula(text)
        except FormulaSyntaxError as exc:
            raise SchemaError(exc.user_message, location=f"preconditions.{point}") from None
    action = ActionModel(
        frame=frame,
        pre=pre,
        observes={
            point: {agent: frozenset(seen) for agent, seen in views.items()}
            for point, views in document.observes.items()
        },
        name=document.name,
    )
    return action, ValidationReport(tuple(issues)).merged(validate_action_model(action))


def _side(document: KripkeDocument | SimplicialDocument, side: str) -> KripkeModel:
    if isinstance(document, KripkeDocument):
        model, report = _kripke(document)
        report.raise_for_issues(subject=f"task {side}")
        return model
    simplicial, report = _simplicial(document)
    report.raise_for_issues(subject=f"task {side}")
    return simplicial_to_model(simplicial)


def _task(document: TaskDocument) -> tuple[TaskSpec, ValidationReport]:
    task = TaskSpec(
        input=_side(document.input, "input"),
        output=_side(document.output, "output"),
        delta={state: frozenset(targets) for state, targets in document.delta.items()},
        name=document.name,
    )
    return task, validate_carrier(task)


def _convert(document: Document) -> tuple[Core, ValidationReport]:
    match document:
        case KripkeDocument():
            return _kripke(document)
        case SimplicialDocument():
            return _simplicial(document)
        case ActionDocument():
            return _action(document)
        case TaskDocument():
            return _task(document)
    raise TypeError(f"not a document: {document!r}")


def to_core(document: Document) -> Core:
    core, report = _convert(document)
    report.raise_for_issues(subject=f"{document.kind} document")
    for warning in report.warnings:
        logger.warning("%s", warning.render())
    return core


def check_document(document: Document) -> ValidationReport:
    """Validation report for ``document``; construction failures become issues."""
    try:
        return _convert(document)[1]
    except ValidationError as exc:
        return exc.report
    except EpisolveError as exc:
        return ValidationReport((Issue("invalid", exc.user_message),))


def load(path: Path) -> Core:
    return to_core(read_document(path))


def _atom_entries(ap: tuple[str, ...], owner: dict[str, str]) -> list[AtomEntry]:
    return [AtomEntry(atom=atom, owner=owner.get(atom)) for atom in ap]


def _relations(frame: KripkeFrame) -> Relations:
    return {agent: frame.edges(agent) for agent in frame.agents}


def kripke_document(model: KripkeModel) -> KripkeDocument:
    return KripkeDocument(
        kind="kripke",
        agents=list(model.agents),
        ap=_atom_entries(model.ap, dict(model.owner)),
        states=list(model.states),
        relations=_relations(model.frame),
        valuation={s: render_lits(model.val[s], model.ap) for s in model.states},
    )


def simplicial_document(model: SimplicialModel) -> SimplicialDocument:
    complex_ = model.complex
    return SimplicialDocument(
        kind="simplicial",
        agents=list(model.agents),
        ap=_atom_entries(model.ap, dict(model.owner)),
        vertices=[
            VertexEntry(
                name=v.name,
                color=v.color,
                literals=render_lits(model.vval.get(v, frozenset()), model.ap),
            )
            for v in complex_.vertices
        ],
        facets=[[v.name for v in complex_.ordered(f)] for f in complex_.facets],
    )


def action_document(action: ActionModel) -> ActionDocument:
    agents = action.frame.agents
    return ActionDocument(
        kind="action",
        name=action.name,
        agents=list(agents),
        points=list(action.points),
        relations=_relations(action.frame),
        preconditions={p: str(action.pre[p]) for p in action.points if p in action.pre},
        observes={
            p: {a: [b for b in agents if b in action.observes[p][a]] for a in agents if a in action.observes[p]}
            for p in action.points
            if p in action.observes
        },
    )


def task_document(task: TaskSpec) -> TaskDocument:
    return TaskDocument(
        kind="task",
        name=task.name,
        input=kripke_document(task.input),
        output=kripke_document(task.output),
        delta={s: sorted(task.delta[s]) for s in task.input.states if s in task.delta},
    )


def to_document(core: Core) -> Document:
    match core:
        case KripkeModel():
            return kripke_document(core)
        case SimplicialModel():
            return simplicial_document(core)
        case ActionModel():
            return action_document(core)
        case TaskSpec():
            return task_document(core)
    raise TypeError(f"cannot serialize {type(core).__name__}")


def render_json(data: object, *, canonical: bool = False) -> str:
    return json.dumps(data, indent=2, sort_keys=canonical, ensure_ascii=False) + "\n"


def dump(core: Core, *, canonical: bool = False) -> str:
    data = to_document(core).model_dump(mode="json", exclude_none=True)
    return render_json(data, canonical=canonical)
