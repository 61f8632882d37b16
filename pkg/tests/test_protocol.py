from __future__ import annotations

import itertools

import pytest

from episolve.actions import product_update, validate_action_model
from episolve.catalog import binary_inputs, segment, square_input, three_states, triangle
from episolve.equivalence import complex_to_frame, simplicial_to_model
from episolve.errors import EpisolveError
from episolve.isomorphism import complexes_isomorphic, frames_isomorphic
from episolve.kripke import KripkeModel, is_model_morphism, is_proper
from episolve.protocol import (
    OrderedPartition,
    Schedule,
    chromatic_subdivision_by_views,
    enumerate_ordered_partitions,
    enumerate_schedules,
    iis_one_round_action_model,
    iis_view,
    protocol_complex,
    protocol_model,
    standard_chromatic_subdivision,
    validate_ordered_partition,
)
from episolve.simplicial import (
    SimplicialModel,
    is_chromatic_map,
    skeleton_edges,
    validate_simplicial_model,
)
from episolve.types import AgentSet


def _brute_force_ordered_partitions(n: int) -> int:
    """Rank assignments whose ranks form an initial segment."""
    return sum(
        1
        for ranks in itertools.product(range(n), repeat=n)
        if set(ranks) == set(range(max(ranks) + 1))
    )


@pytest.mark.parametrize(("count", "expected"), [(1, 1), (2, 3), (3, 13), (4, 75)])
def test_ordered_partition_counts(count: int, expected: int) -> None:
    agents = AgentSet(tuple(f"a{i}" for i in range(count)))

    partitions = enumerate_ordered_partitions(agents)

    assert len(partitions) == expected == _brute_force_ordered_partitions(count)
    assert len({str(p) for p in partitions}) == expected
    assert all(validate_ordered_partition(p, agents).ok for p in partitions)


def test_two_agent_partitions_and_views() -> None:
    partitions = enumerate_ordered_partitions(AgentSet.of("a0", "a1"))

    assert [str(p) for p in partitions] == ["a0|a1", "a1|a0", "a0+a1"]
    assert iis_view("a0", partitions[0]) == {"a0"}
    assert iis_view("a1", partitions[0]) == {"a0", "a1"}
    assert iis_view("a0", partitions[2]) == {"a0", "a1"}


def test_invalid_ordered_partition_is_reported() -> None:
    agents = AgentSet.of("a0", "a1", "a2")
    partition = OrderedPartition((("a0",), ("a0", "a9"), ()))

    codes = [issue.code for issue in validate_ordered_partition(partition, agents).issues]

    assert codes == ["block-empty", "block-overlap", "block-cover", "block-cover", "block-unknown-agent"]


def test_schedules_enumerate_every_round() -> None:
    schedules = list(enumerate_schedules(AgentSet.of("a0", "a1"), 2))

    assert len(schedules) == 9
    assert str(schedules[0]) == "a0|a1 ; a0|a1"


def test_schedule_needs_a_round() -> None:
    with pytest.raises(EpisolveError):
        Schedule(())
    with pytest.raises(EpisolveError):
        list(enumerate_schedules(AgentSet.of("a0"), 0))


def test_iis_action_model_is_valid_and_proper() -> None:
    action = iis_one_round_action_model(AgentSet.of("a0", "a1", "a2"))

    assert len(action.points) == 13
    assert validate_action_model(action).ok
    assert is_proper(action.frame)


def test_two_agent_iis_relations() -> None:
    action = iis_one_round_action_model(AgentSet.of("a0", "a1"))

    assert action.frame.rel["a0"] == (("a0+a1", "a1|a0"), ("a0|a1",))
    assert action.frame.rel["a1"] == (("a0+a1", "a0|a1"), ("a1|a0",))


@pytest.mark.parametrize(
    ("model", "rounds", "facets"),
    [
        (segment(), 1, 3),
        (segment(), 2, 9),
        (square_input(), 1, 12),
        (triangle(), 1, 13),
    ],
)
def test_protocol_complex_sizes(model: SimplicialModel, rounds: int, facets: int) -> None:
    protocol, projection = protocol_complex(model, rounds)

    assert len(protocol.complex.facets) == facets
    assert validate_simplicial_model(protocol).ok
    assert is_chromatic_map(projection.mapping, protocol.complex, model.complex)


def test_subdivided_square_is_a_twelve_cycle() -> None:
    protocol, _ = protocol_complex(square_input(), 1)
    complex_ = protocol.complex

    degrees = {v: 0 for v in complex_.vertices}
    for left, right in skeleton_edges(complex_):
        degrees[left] += 1
        degrees[right] += 1

    assert len(complex_.vertices) == 12
    assert set(degrees.values()) == {2}


def test_projection_carries_facets_onto_their_input() -> None:
    model = square_input()

    protocol, projection = protocol_complex(model, 1)

    for facet in protocol.complex.facets:
        image = projection.image(facet)
        assert image in model.complex.facet_set
        for vertex in facet:
            assert protocol.vval[vertex] == model.vval[projection(vertex)]


def test_protocol_model_is_product_update_with_iis() -> None:
    for model in (binary_inputs(), three_states()):
        action = iis_one_round_action_model(model.agents)

        protocol, projection = protocol_model(model, 1)
        updated, _ = product_update(model, action)

        assert frames_isomorphic(protocol.frame, updated.frame) is not None
        assert is_model_morphism(dict(projection.mapping), protocol, model)


@pytest.mark.parametrize(
    ("model", "rounds"), [(segment(), 2), (square_input(), 1), (triangle(), 1)]
)
def test_subdivision_by_views_matches_protocol(model: SimplicialModel, rounds: int) -> None:
    by_update, _ = protocol_complex(model, rounds)
    by_views, projection = chromatic_subdivision_by_views(model.complex, rounds)

    assert complexes_isomorphic(by_update.complex, by_views) is not None
    assert is_chromatic_map(projection.mapping, by_views, model.complex)


def test_standard_subdivision_of_edge() -> None:
    subdivided = standard_chromatic_subdivision(segment().complex)

    assert len(subdivided.facets) == 3
    assert len(subdivided.vertices) == 4


def test_zero_rounds_is_identity() -> None:
    model = binary_inputs()

    protocol, projection = protocol_model(model, 0)

    assert protocol is model
    assert all(projection(s) == s for s in model.states)


def test_negative_rounds_are_rejected() -> None:
    with pytest.raises(EpisolveError):
        protocol_model(binary_inputs(), -1)


@pytest.mark.parametrize("model", [segment(), square_input(), triangle(), three_states()])
def test_protocol_complex_translates_to_product_update(
    model: SimplicialModel | KripkeModel,
) -> None:
    kripke = simplicial_to_model(model) if isinstance(model, SimplicialModel) else model
    updated, _ = product_update(kripke, iis_one_round_action_model(kripke.agents))

    protocol, _ = protocol_complex(model, 1)

    assert frames_isomorphic(complex_to_frame(protocol.complex), updated.frame) is not None
