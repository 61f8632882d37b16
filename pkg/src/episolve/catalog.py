"""Built-in example models, action models and tasks, registered by name."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

from episolve.actions import ActionModel
from episolve.errors import UnknownSymbol
from episolve.formula import Atom
from episolve.kripke import KripkeFrame, KripkeModel, submodel
from episolve.simplicial import ChromaticComplex, SimplicialModel, Vertex
from episolve.tasks import TaskSpec
from episolve.types import AgentSet, Lit

Example = KripkeModel | SimplicialModel | ActionModel | TaskSpec

TWO = AgentSet.of("a0", "a1")
THREE = AgentSet.of("a0", "a1", "a2")


@dataclass(frozen=True)
class ExampleEntry:
    name: str
    description: str
    build: Callable[[], Example]


_EXAMPLES: dict[str, ExampleEntry] = {}


def register[B: Callable[[], Example]](name: str, description: str) -> Callable[[B], B]:
    """Decorator to register an example builder."""

    def decorator(build: B) -> B:
        _EXAMPLES[name] = ExampleEntry(name=name, description=description, build=build)
        return build

    return decorator


def get_example(name: str) -> Example:
    if name not in _EXAMPLES:
        raise UnknownSymbol("example", name)
    return _EXAMPLES[name].build()


def list_examples() -> list[ExampleEntry]:
    return [_EXAMPLES[name] for name in sorted(_EXAMPLES)]


def _binary(atom: str, value: str) -> frozenset[Lit]:
    return frozenset({Lit(atom, value == "1")})


def _two_bits(prefix: str, first: str, second: str) -> KripkeFrame:
    """States ``prefix+xy``; ``a0`` sees x and ``a1`` sees y."""
    states = [f"{prefix}{x}{y}" for x in first for y in second]
    return KripkeFrame.build(
        TWO,
        states,
        {
            "a0": [[f"{prefix}{x}{y}" for y in second] for x in first],
            "a1": [[f"{prefix}{x}{y}" for x in first] for y in second],
        },
    )


@register("three_states", "Three-state model: a1 confuses alpha/beta, a0 beta/gamma")
def three_states() -> KripkeModel:
    frame = KripkeFrame.build(
        TWO,
        ["alpha", "beta", "gamma"],
        {"a0": [["alpha"], ["beta", "gamma"]], "a1": [["alpha", "beta"], ["gamma"]]},
    )
    return KripkeModel(
        frame=frame,
        ap=("l0", "l1"),
        val={
            "alpha": frozenset({Lit("l0", False), Lit("l1", False)}),
            "beta": frozenset({Lit("l0"), Lit("l1", False)}),
            "gamma": frozenset({Lit("l0"), Lit("l1")}),
        },
        owner={"l0": "a0", "l1": "a1"},
    )


@register("binary_inputs", "Binary inputs of two processes as a Kripke model")
def binary_inputs() -> KripkeModel:
    frame = _two_bits("", "01", "01")
    return KripkeModel(
        frame=frame,
        ap=("l0", "l1"),
        val={s: _binary("l0", s[0]) | _binary("l1", s[1]) for s in frame.states},
        owner={"l0": "a0", "l1": "a1"},
    )


def _decisions() -> KripkeModel:
    frame = _two_bits("o", "01", "01")
    return KripkeModel(
        frame=frame,
        ap=("d0", "d1"),
        val={s: _binary("d0", s[1]) | _binary("d1", s[2]) for s in frame.states},
        owner={"d0": "a0", "d1": "a1"},
    )


@register("segment", "One edge between two processes")
def segment() -> SimplicialModel:
    facet = frozenset({Vertex("p0", "a0"), Vertex("p1", "a1")})
    return SimplicialModel(complex=ChromaticComplex.build(TWO, [facet]), ap=(), vval={})


@register("square_input", "Binary input complex of two processes, a 4-cycle")
def square_input() -> SimplicialModel:
    vertices = {
        (agent, bit): Vertex(f"{'xy'[i]}{bit}", agent)
        for i, agent in enumerate(TWO)
        for bit in "01"
    }
    facets = [
        frozenset({vertices[("a0", x)], vertices[("a1", y)]}) for x in "01" for y in "01"
    ]
    return SimplicialModel(
        complex=ChromaticComplex.build(TWO, facets),
        ap=("l0", "l1"),
        vval={v: _binary(f"l{TWO.index(agent)}", bit) for (agent, bit), v in vertices.items()},
        owner={"l0": "a0", "l1": "a1"},
    )


@register("triangle", "One 2-simplex for three processes")
def triangle() -> SimplicialModel:
    facet = frozenset(Vertex(f"p{i}", agent) for i, agent in enumerate(THREE))
    return SimplicialModel(complex=ChromaticComplex.build(THREE, [facet]), ap=(), vval={})


@register("consensus", "Binary consensus: both decide one of the inputs")
def consensus() -> TaskSpec:
    return TaskSpec(
        input=binary_inputs(),
        output=submodel(_decisions(), {"o00", "o11"}),
        delta={
            "00": frozenset({"o00"}),
            "01": frozenset({"o00", "o11"}),
            "10": frozenset({"o00", "o11"}),
            "11": frozenset({"o11"}),
        },
        name="consensus",
    )


@register("pseudo_consensus", "Consensus relaxed on mixed inputs; solvable in one round")
def pseudo_consensus() -> TaskSpec:
    return TaskSpec(
        input=binary_inputs(),
        output=_decisions(),
        delta={
            "00": frozenset({"o00"}),
            "01": frozenset({"o00", "o01", "o11"}),
            "10": frozenset({"o00", "o01", "o11"}),
            "11": frozenset({"o11"}),
        },
        name="pseudo_consensus",
    )


@register("identity_square", "Each process outputs its own input")
def identity_square() -> TaskSpec:
    inputs = binary_inputs()
    return TaskSpec(
        input=inputs,
        output=_decisions(),
        delta={s: frozenset({f"o{s}"}) for s in inputs.states},
        name="identity_square",
    )


@register("announce_l0", "Public announcement that l0 holds")
def announce_l0() -> ActionModel:
    return ActionModel(
        frame=KripkeFrame.discrete(TWO, ["l0"]),
        pre={"l0": Atom("l0")},
        name="announce_l0",
    )
