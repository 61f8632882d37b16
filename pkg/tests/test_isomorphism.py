from __future__ import annotations

from episolve.catalog import square_input, three_states
from episolve.isomorphism import complexes_isomorphic, frames_isomorphic
from episolve.kripke import KripkeFrame, is_morphism
from episolve.simplicial import ChromaticComplex, Vertex, is_chromatic_map
from episolve.types import AgentSet

TWO = AgentSet.of("a0", "a1")


def _renamed(frame: KripkeFrame, names: dict[str, str]) -> KripkeFrame:
    return KripkeFrame.build(
        frame.agents,
        [names[s] for s in frame.states],
        {a: [[names[s] for s in c] for c in frame.rel[a]] for a in frame.agents},
    )


def test_renamed_frame_is_isomorphic() -> None:
    frame = three_states().frame
    names = {"alpha": "z", "beta": "y", "gamma": "x"}

    witness = frames_isomorphic(frame, _renamed(frame, names))

    assert witness is not None
    assert dict(witness.mapping) == names


def test_witness_is_a_morphism_both_ways() -> None:
    frame = three_states().frame
    other = _renamed(frame, {"alpha": "s2", "beta": "s0", "gamma": "s1"})

    witness = frames_isomorphic(frame, other)

    assert witness is not None
    inverse = {v: k for k, v in witness.mapping.items()}
    assert is_morphism(witness.mapping, frame, other)
    assert is_morphism(inverse, other, frame)


def test_relabelled_agents_match_through_relations() -> None:
    frame = three_states().frame
    swapped = KripkeFrame.build(
        TWO, frame.states, {"a0": frame.rel["a1"], "a1": frame.rel["a0"]}
    )

    witness = frames_isomorphic(frame, swapped)

    assert witness is not None
    assert witness.mapping == {"alpha": "gamma", "beta": "beta", "gamma": "alpha"}


def test_agents_are_not_interchangeable() -> None:
    states = ["s", "t"]
    first = KripkeFrame.build(TWO, states, {"a0": [states], "a1": [["s"], ["t"]]})
    second = KripkeFrame.build(TWO, states, {"a0": [["s"], ["t"]], "a1": [states]})

    assert frames_isomorphic(first, second) is None


def test_chain_and_discrete_frames_differ() -> None:
    chain = KripkeFrame.build(
        TWO, ["s", "t", "u"], {"a0": [["s", "t"], ["u"]], "a1": [["s"], ["t", "u"]]}
    )
    discrete = KripkeFrame.discrete(TWO, ["s", "t", "u"])

    assert frames_isomorphic(chain, discrete) is None


def test_symmetric_frame_witness_is_least() -> None:
    frame = KripkeFrame.discrete(TWO, ["s", "t"])

    witness = frames_isomorphic(frame, frame)

    assert witness is not None
    assert witness.mapping == {"s": "s", "t": "t"}


def test_complex_isomorphism_respects_colors() -> None:
    square = square_input().complex
    renamed = ChromaticComplex.build(
        TWO,
        [
            frozenset({Vertex(f"p{v.name}", v.color) for v in facet})
            for facet in square.facets
        ],
    )

    witness = complexes_isomorphic(square, renamed)

    assert witness is not None
    assert is_chromatic_map(witness.mapping, square, renamed)
    assert all(witness(v).name == f"p{v.name}" for v in square.vertices)


def test_paths_match_and_cycle_does_not() -> None:
    x0, x1 = Vertex("x0", "a0"), Vertex("x1", "a0")
    y0, y1 = Vertex("y0", "a1"), Vertex("y1", "a1")
    path = ChromaticComplex.build(
        TWO, [frozenset({x0, y0}), frozenset({x1, y0}), frozenset({x1, y1})]
    )
    other_path = ChromaticComplex.build(
        TWO, [frozenset({x0, y0}), frozenset({x0, y1}), frozenset({x1, y1})]
    )

    assert complexes_isomorphic(path, other_path) is not None
    assert complexes_isomorphic(square_input().complex, path) is None
