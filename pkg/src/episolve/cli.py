from __future__ import annotations

import logging
from enum import StrEnum
from pathlib import Path
from typing import NoReturn

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from episolve.actions import ActionModel, product_update
from episolve.catalog import get_example, list_examples
from episolve.config import Settings
from episolve.dot import complex_to_dot, kripke_to_dot
from episolve.equivalence import frame_to_complex, model_to_simplicial, simplicial_to_model
from episolve.errors import EpisolveError
from episolve.homology import (
    betti_numbers,
    common_knowledge_report,
    connected_components,
    obstruction_report,
)
from episolve.kripke import KripkeModel
from episolve.logic import Evaluator
from episolve.parsing import parse_formula
from episolve.protocol import protocol_complex, protocol_model
from episolve.schema import Core, check_document, dump, load, read_document, render_json
from episolve.simplicial import ChromaticComplex, SimplicialModel
from episolve.tasks import TaskSpec, build_delta_submodel, solve_task
from episolve.types import render_lits

logger = logging.getLogger(__name__)

app = typer.Typer(
    help="Kripke and simplicial models, IIS protocols and task solvability.",
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)

EXAMPLE_PREFIX = "example:"

MODEL_HELP = "JSON file, or example:NAME for a built-in"


class TargetKind(StrEnum):
    kripke = "kripke"
    simplicial = "simplicial"


def _fail(message: str) -> NoReturn:
    err_console.print(f"[red]Error:[/red] {escape(message)}")
    raise typer.Exit(code=2)


def _settings() -> Settings:
    try:
        return Settings.from_env()
    except RuntimeError as exc:
        _fail(str(exc))


def _load(source: str) -> Core:
    if source.startswith(EXAMPLE_PREFIX):
        return get_example(source.removeprefix(EXAMPLE_PREFIX))
    return load(Path(source))


def _as_kripke(core: Core) -> KripkeModel:
    if isinstance(core, KripkeModel):
        return core
    if isinstance(core, SimplicialModel):
        return simplicial_to_model(core)
    raise EpisolveError(f"Expected a Kripke or simplicial model, got {type(core).__name__}.")


def _as_complex(core: Core) -> ChromaticComplex:
    if isinstance(core, SimplicialModel):
        return core.complex
    if isinstance(core, KripkeModel):
        return frame_to_complex(core.frame)
    raise EpisolveError(f"Expected a Kripke or simplicial model, got {type(core).__name__}.")


def _as_task(core: Core) -> TaskSpec:
    if not isinstance(core, TaskSpec):
        raise EpisolveError(f"Expected a task document, got {type(core).__name__}.")
    return core


def _check_rounds(rounds: int, settings: Settings) -> None:
    if rounds > settings.max_rounds:
        raise EpisolveError(
            f"{rounds} rounds exceeds the limit of {settings.max_rounds} "
            "(raise EPISOLVE_MAX_ROUNDS to allow more)."
        )


def _emit(core: Core, output: Path | None, settings: Settings) -> None:
    text = dump(core, canonical=settings.canonical_output)
    if output is None:
        typer.echo(text, nl=False)
        return
    output.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", output)


def _print_json(data: object, settings: Settings) -> None:
    console.print_json(render_json(data, canonical=settings.canonical_output))


@app.command("validate")
def validate(path: Path = typer.Argument(..., help="JSON document")) -> None:
    """Validate a model, action model or task document."""
    settings = _settings()
    try:
        document = read_document(path)
    except EpisolveError as exc:
        _fail(exc.user_message)
    report = check_document(document)
    _print_json({"kind": document.kind, **report.as_dict()}, settings)
    if not report.ok:
        raise typer.Exit(code=1)


@app.command("convert")
def convert(
    source: str = typer.Argument(..., help=MODEL_HELP),
    to: TargetKind = typer.Option(..., "--to", help="Target kind"),
    output: Path | None = typer.Option(None, "--output", "-o"),
) -> None:
    """Convert between Kripke and simplicial models."""
    settings = _settings()
    try:
        core = _load(source)
        converted: Core
        if to is TargetKind.kripke:
            converted = _as_kripke(core)
        elif isinstance(core, SimplicialModel):
            converted = core
        else:
            converted = model_to_simplicial(_as_kripke(core))
        _emit(converted, output, settings)
    except EpisolveError as exc:
        _fail(exc.user_message)


@app.command("update")
def update(
    source: str = typer.Argument(..., help=MODEL_HELP),
    action: str = typer.Argument(..., help="Action model file or example:NAME"),
    output: Path | None = typer.Option(None, "--output", "-o"),
) -> None:
    """Product update of a model with an action model."""
    settings = _settings()
    try:
        model = _as_kripke(_load(source))
        loaded = _load(action)
        if not isinstance(loaded, ActionModel):
            raise EpisolveError(f"Expected an action document, got {type(loaded).__name__}.")
        updated, _ = product_update(model, loaded)
        _emit(updated, output, settings)
    except EpisolveError as exc:
        _fail(exc.user_message)


@app.command("protocol")
def protocol(
    source: str = typer.Argument(..., help=MODEL_HELP),
    rounds: int = typer.Option(1, "--rounds", "-r", min=0),
    output: Path | None = typer.Option(None, "--output", "-o"),
) -> None:
    """Iterated immediate-snapshot protocol model; output has the input's kind."""
    settings = _settings()
    try:
        _check_rounds(rounds, settings)
        core = _load(source)
        result: Core
        if isinstance(core, SimplicialModel):
            result = protocol_complex(core, rounds)[0]
        else:
            result = protocol_model(_as_kripke(core), rounds)[0]
        _emit(result, output, settings)
    except EpisolveError as exc:
        _fail(exc.user_message)


@app.command("check")
def check(
    source: str = typer.Argument(..., help=MODEL_HELP),
    state: str = typer.Option(..., "--state", "-s"),
    formula: str = typer.Option(..., "--formula", "-f"),
    actions: list[str] | None = typer.Option(
        None, "--action", "-a", help="Action model usable as [name] in the formula"
    ),
) -> None:
    """Evaluate a formula at a state. Exit code 0 when it holds, 1 otherwise."""
    settings = _settings()
    try:
        model = _as_kripke(_load(source))
        parsed = parse_formula(formula)
        available: dict[str, ActionModel] = {}
        for item in actions or []:
            loaded = _load(item)
            if not isinstance(loaded, ActionModel):
                raise EpisolveError(f"{item} is not an action model.")
            available[loaded.name] = loaded
        evaluator = Evaluator(model, available, settings.common_knowledge_mode)
        holds = evaluator.holds(state, parsed)
    except EpisolveError as exc:
        _fail(exc.user_message)
    _print_json({"state": state, "formula": str(parsed), "holds": holds}, settings)
    if not holds:
        raise typer.Exit(code=1)


@app.command("solve")
def solve(
    source: str = typer.Argument(..., help="Task file or example:NAME"),
    rounds: int = typer.Option(1, "--rounds", "-r", min=0),
    witness: Path | None = typer.Option(None, "--witness", "-w", help="Write the decision map here"),
    seed: int | None = typer.Option(None, "--seed", help="Shuffle the search order"),
    workers: int | None = typer.Option(None, "--workers", min=1),
) -> None:
    """Decide wait-free solvability. Exit code 0 when solvable, 1 otherwise."""
    settings = _settings()
    try:
        _check_rounds(rounds, settings)
        task = _as_task(_load(source))
        result = solve_task(
            task,
            rounds,
            workers=workers or settings.solver_workers,
            seed=seed if seed is not None else settings.seed,
        )
    except EpisolveError as exc:
        _fail(exc.user_message)
    payload = result.as_dict()
    _print_json(payload, settings)
    if witness is not None and result.verdict.solvable:
        written = {key: payload[key] for key in ("witness", "decisions")}
        witness.write_text(render_json(written, canonical=True), encoding="utf-8")
        logger.info("Wrote witness to %s", witness)
    if not result.verdict.solvable:
        raise typer.Exit(code=1)


@app.command("components")
def components(
    source: str = typer.Argument(..., help=MODEL_HELP),
    group: str | None = typer.Option(None, "--group", "-g", help="Comma-separated agents"),
) -> None:
    """Connected components for a group, with the literals common to each."""
    settings = _settings()
    try:
        model = _as_kripke(_load(source))
        members = model.agents.require(group.split(",")) if group else model.agents.agents
        report = common_knowledge_report(model, members)
    except EpisolveError as exc:
        _fail(exc.user_message)
    _print_json(
        {
            "group": list(members),
            "components": [
                {"states": list(c.states), "common": render_lits(c.common, model.ap)}
                for c in report
            ],
        },
        settings,
    )


@app.command("betti")
def betti(source: str = typer.Argument(..., help=MODEL_HELP)) -> None:
    """Betti numbers over GF(2) of the complex (Kripke models are converted)."""
    settings = _settings()
    try:
        complex_ = _as_complex(_load(source))
        numbers = betti_numbers(complex_)
        facets = connected_components(complex_)
    except EpisolveError as exc:
        _fail(exc.user_message)
    _print_json({"betti": list(numbers), "components": len(facets)}, settings)


@app.command("obstruct")
def obstruct(
    source: str = typer.Argument(..., help="Task file or example:NAME"),
    rounds: int = typer.Option(1, "--rounds", "-r", min=0),
) -> None:
    """Homology obstruction report for a task at a round count."""
    settings = _settings()
    try:
        _check_rounds(rounds, settings)
        task = _as_task(_load(source))
        delta = build_delta_submodel(task)
        protocol, projection = protocol_complex(task.input, rounds)
        report = obstruction_report(protocol.complex, projection, delta.simplicial.complex)
    except EpisolveError as exc:
        _fail(exc.user_message)
    _print_json({"task": task.name, "rounds": rounds, **report.as_dict()}, settings)


@app.command("dot")
def dot(
    source: str = typer.Argument(..., help=MODEL_HELP),
    output: Path | None = typer.Option(None, "--output", "-o"),
) -> None:
    """Graphviz DOT of a Kripke frame or a complex 1-skeleton."""
    try:
        core = _load(source)
        if isinstance(core, SimplicialModel):
            text = complex_to_dot(core)
        else:
            text = kripke_to_dot(_as_kripke(core))
    except EpisolveError as exc:
        _fail(exc.user_message)
    if output is None:
        typer.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")


@app.command("list")
def list_command() -> None:
    """List built-in examples."""
    table = Table(title="Built-in examples")
    table.add_column("Name", style="cyan", no_wrap=True)
    table.add_column("Kind", style="green")
    table.add_column("Description")
    for entry in list_examples():
        table.add_row(entry.name, type(entry.build()).__name__, entry.description)
    console.print(table)


@app.command("show")
def show(
    name: str = typer.Argument(..., help="Example name"),
    output: Path | None = typer.Option(None, "--output", "-o"),
) -> None:
    """Write a built-in example as a JSON document."""
    settings = _settings()
    try:
        _emit(get_example(name), output, settings)
    except EpisolveError as exc:
        _fail(exc.user_message)


if __name__ == "__main__":
    app()
