from __future__ import annotations

from itertools import combinations

import pytest

from episolve.catalog import consensus, identity_square, pseudo_consensus
from episolve.errors import UnknownSymbol, ValidationError
from episolve.homology import betti_numbers, induced_h1_rank
from episolve.kripke import is_model_morphism, is_morphism, validate_model
from episolve.logic import Evaluator
from episolve.parsing import parse_formula
from episolve.protocol import protocol_complex, protocol_model
from episolve.simplicial import ChromaticMap, identity_map, is_chromatic_map
from episolve.tasks import (
    TaskSpec,
    build_delta_submodel,
    check_witness,
    decision_carried_by_delta,
    decorate_with_decisions,
    solve_task,
    validate_carrier,
    witness_to_morphism,
)


def test_catalog_tasks_have_valid_carriers() -> None:
    for task in (consensus(), pseudo_consensus(), identity_square()):
        assert validate_carrier(task).ok


def test_unknown_and_empty_delta_entries_are_reported() -> None:
    task = consensus()
    broken = TaskSpec(
        input=task.input,
        output=task.output,
        delta={"00": frozenset({"o00"}), "01": frozenset({"o42"}), "zz": frozenset({"o00"})},
    )

    codes = [issue.code for issue in validate_carrier(broken).issues]

    assert codes == [
        "delta-unknown-input",
        "delta-unknown-output",
        "delta-empty",
        "delta-empty",
    ]


def test_carrier_violation_is_reported() -> None:
    task = consensus()
    split = TaskSpec(
        input=task.input,
        output=task.output,
        delta={**task.delta, "01": frozenset({"o11"})},
    )

    report = validate_carrier(split)

    assert [issue.code for issue in report.issues] == ["carrier-violation"]
    assert report.issues[0].agent == "a0"
    assert report.issues[0].subject == "00,01"
    with pytest.raises(ValidationError):
        build_delta_submodel(split)


def test_allowed_rejects_unknown_input() -> None:
    with pytest.raises(UnknownSymbol):
        consensus().allowed("22")


def test_consensus_delta_submodel() -> None:
    delta = build_delta_submodel(consensus())

    assert len(delta.model.states) == 6
    assert validate_model(delta.model).ok
    assert is_morphism(dict(delta.to_input.mapping), delta.model.frame, delta.input.frame)
    assert is_model_morphism(dict(delta.to_output.mapping), delta.model, delta.output)
    assert is_chromatic_map(
        delta.input_map.mapping, delta.simplicial.complex, delta.input_map.target
    )


@pytest.mark.parametrize("rounds", [1, 2, 3])
def test_consensus_is_unsolvable(rounds: int) -> None:
    result = solve_task(consensus(), rounds)

    assert not result.verdict.solvable
    assert result.verdict.witness is None
    assert result.obstruction is not None
    assert result.obstruction.verdict == "OBSTRUCTED"
    assert result.obstruction.projection_h1_rank == 1
    assert result.obstruction.task_betti == (2, 0)
    assert "witness" not in result.as_dict()


def test_pseudo_consensus_delta_joins_the_two_decision_paths() -> None:
    delta = build_delta_submodel(pseudo_consensus())

    assert set(delta.model.states) == {
        "(00,o00)",
        "(01,o00)",
        "(01,o01)",
        "(01,o11)",
        "(10,o00)",
        "(10,o01)",
        "(10,o11)",
        "(11,o11)",
    }
    assert betti_numbers(delta.simplicial.complex) == (1, 1)
    assert solve_task(pseudo_consensus(), 1).verdict.solvable


def test_pseudo_consensus_is_solvable_in_one_round() -> None:
    task = pseudo_consensus()

    result = solve_task(task, 1)

    assert result.verdict.solvable
    witness = result.verdict.witness
    assert witness is not None
    assert check_witness(witness, result.projection, result.delta.input_map)
    decisions = result.verdict.decision_map
    assert decisions is not None
    assert decision_carried_by_delta(decisions, result.projection, result.protocol, task)
    assert result.obstruction is not None
    assert result.obstruction.verdict == "INCONCLUSIVE"
    assert result.obstruction.task_betti == (1, 1)


def test_solution_payload() -> None:
    payload = solve_task(pseudo_consensus(), 1).as_dict()

    assert payload["verdict"] == "Solvable"
    assert payload["protocol_facets"] == 12
    assert payload["delta_facets"] == 8
    decisions = payload["decisions"]
    assert isinstance(decisions, dict)
    assert len(decisions) == 12
    assert all(entry["decides"] in (["d0"], ["!d0"], ["d1"], ["!d1"]) for entry in decisions.values())


def test_identity_task_is_solvable() -> None:
    result = solve_task(identity_square(), 1)

    assert result.verdict.solvable


def test_witness_is_deterministic() -> None:
    first = solve_task(pseudo_consensus(), 1).as_dict()
    second = solve_task(pseudo_consensus(), 1).as_dict()

    assert first["witness"] == second["witness"]


@pytest.mark.parametrize(("workers", "seed"), [(1, 7), (3, None), (4, 11)])
def test_workers_and_seeds_agree_on_verdict(workers: int, seed: int | None) -> None:
    solvable = solve_task(pseudo_consensus(), 1, workers=workers, seed=seed)
    unsolvable = solve_task(consensus(), 1, workers=workers, seed=seed)

    assert solvable.verdict.solvable
    assert solvable.verdict.stats.workers == workers
    assert not unsolvable.verdict.solvable


def test_check_witness_rejects_tampering() -> None:
    result = solve_task(pseudo_consensus(), 1)
    witness = result.verdict.witness
    assert witness is not None
    vertex = witness.source.vertices[0]
    over = result.delta.input_map
    wrong = next(
        v
        for v in witness.target.vertices
        if v.color == vertex.color and over(v) != over(witness(vertex))
    )
    tampered = ChromaticMap(witness.source, witness.target, {**witness.mapping, vertex: wrong})

    assert not check_witness(tampered, result.projection, result.delta.input_map)


def test_decisions_become_local_knowledge() -> None:
    task = pseudo_consensus()
    result = solve_task(task, 1)
    protocol, _ = protocol_model(task.input, 1)
    assert result.verdict.witness is not None

    morphism = witness_to_morphism(result.verdict.witness, protocol, result.delta)
    decorated = decorate_with_decisions(protocol, morphism, result.delta)
    evaluator = Evaluator(decorated)

    assert is_morphism(dict(morphism.mapping), protocol.frame, result.delta.model.frame)
    assert validate_model(decorated).ok
    for formula in ("K a0 d0 | K a0 !d0", "K a1 d1 | K a1 !d1"):
        assert evaluator.extension(parse_formula(formula)) == set(decorated.states)


def test_protocol_complex_for_task_input_matches_solver() -> None:
    task = consensus()
    protocol, _ = protocol_complex(task.input, 2)

    result = solve_task(task, 2)

    assert len(result.protocol.complex.facets) == len(protocol.complex.facets) == 36


def test_identity_task_is_solvable_without_communication() -> None:
    result = solve_task(identity_square(), 0)

    assert result.verdict.solvable
    assert len(result.protocol.complex.facets) == 4


def _mixed_choices() -> list[frozenset[str]]:
    outputs = ("o00", "o01", "o11")
    return [frozenset(c) for k in range(1, 4) for c in combinations(outputs, k)]


def test_solvability_is_monotone_in_delta() -> None:
    base = pseudo_consensus()
    verdicts: dict[tuple[frozenset[str], frozenset[str]], bool] = {}
    for left in _mixed_choices():
        for right in _mixed_choices():
            task = TaskSpec(
                input=base.input,
                output=base.output,
                delta={"00": frozenset({"o00"}), "01": left, "10": right, "11": frozenset({"o11"})},
            )
            if validate_carrier(task).ok:
                verdicts[(left, right)] = solve_task(task, 1).verdict.solvable

    assert set(verdicts.values()) == {True, False}
    for (left, right), solvable in verdicts.items():
        for (bigger_left, bigger_right), other in verdicts.items():
            if solvable and left <= bigger_left and right <= bigger_right:
                assert other, (left, right, bigger_left, bigger_right)


def test_maps_into_consensus_delta_kill_first_homology() -> None:
    result = solve_task(consensus(), 1)
    target = result.delta.simplicial.complex
    facet = target.facets[0]
    constant = ChromaticMap(
        result.protocol.complex,
        target,
        {v: target.vertex_of_color(facet, v.color) for v in result.protocol.complex.vertices},
    )

    assert is_chromatic_map(constant.mapping, constant.source, target)
    assert induced_h1_rank(result.projection) == 1
    assert induced_h1_rank(constant) == 0
    assert induced_h1_rank(identity_map(target)) == 0
