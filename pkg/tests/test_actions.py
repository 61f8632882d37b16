from __future__ import annotations

import logging

import pytest

from episolve.actions import ActionModel, product_update, validate_action_model
from episolve.catalog import announce_l0, binary_inputs, three_states
from episolve.errors import AgentMismatch, EmptyProduct
from episolve.isomorphism import frames_isomorphic
from episolve.kripke import KripkeFrame, KripkeModel, is_model_morphism, is_morphism, model_product, pair_name
from episolve.parsing import parse_formula
from episolve.types import AgentSet

TWO = AgentSet.of("a0", "a1")


def test_public_announcement_removes_states() -> None:
    model = three_states()

    updated, projection = product_update(model, announce_l0())

    assert updated.states == (pair_name("beta", "l0"), pair_name("gamma", "l0"))
    assert updated.frame.related("a0", *updated.states)
    assert not updated.frame.related("a1", *updated.states)
    assert is_model_morphism(dict(projection.mapping), updated, model)


def test_unsatisfiable_precondition_is_empty_product() -> None:
    action = ActionModel(
        frame=KripkeFrame.discrete(TWO, ["never"]),
        pre={"never": parse_formula("l0 & !l0")},
        name="never",
    )

    with pytest.raises(EmptyProduct) as exc:
        product_update(three_states(), action)

    assert "'never'" in str(exc.value)


def test_agent_sets_must_match() -> None:
    action = ActionModel(frame=KripkeFrame.discrete(AgentSet.of("a0"), ["p"]))

    with pytest.raises(AgentMismatch):
        product_update(three_states(), action)


def test_private_observation_splits_only_the_observer() -> None:
    model = binary_inputs()
    peek = ActionModel(
        frame=KripkeFrame.discrete(TWO, ["peek"]),
        observes={"peek": {"a0": frozenset({"a0", "a1"})}},
        name="peek",
    )

    updated, _ = product_update(model, peek)

    assert len(updated.frame.rel["a0"]) == 4
    assert updated.frame.rel["a1"] == tuple(
        tuple(pair_name(s, "peek") for s in members) for members in model.frame.rel["a1"]
    )


def test_indistinguishable_points_merge_worlds() -> None:
    model = three_states()
    coin = ActionModel(
        frame=KripkeFrame.build(TWO, ["heads", "tails"], {"a0": [["heads"], ["tails"]], "a1": [["heads", "tails"]]}),
        name="coin",
    )

    updated, _ = product_update(model, coin)

    assert len(updated.states) == 6
    assert updated.frame.related("a1", pair_name("alpha", "heads"), pair_name("beta", "tails"))
    assert not updated.frame.related("a0", pair_name("beta", "heads"), pair_name("gamma", "tails"))


def test_improper_update_warns(caplog: pytest.LogCaptureFixture) -> None:
    model = three_states()
    blind = ActionModel(
        frame=KripkeFrame.build(TWO, ["x", "y"], {"a0": [["x", "y"]], "a1": [["x", "y"]]}),
        name="blind",
    )

    with caplog.at_level(logging.WARNING):
        product_update(model, blind)

    assert "not proper" in caplog.text


def test_valid_action_model() -> None:
    assert validate_action_model(announce_l0()).ok


def test_action_model_issues_are_reported() -> None:
    action = ActionModel(
        frame=KripkeFrame.build(TWO, ["x", "y"], {"a0": [["x", "y"]], "a1": [["x"], ["y"]]}),
        pre={"z": parse_formula("true")},
        observes={
            "x": {"a0": frozenset({"a0", "a1"}), "a1": frozenset({"a0"})},
            "w": {"a0": frozenset({"a0"})},
        },
    )

    codes = [issue.code for issue in validate_action_model(action).issues]

    assert codes == [
        "precondition-unknown-point",
        "observes-unknown-point",
        "observes-self",
        "observes-not-constant",
    ]


def test_update_without_preconditions_is_the_product() -> None:
    model = three_states()
    coin = ActionModel(
        frame=KripkeFrame.build(TWO, ["heads", "tails"], {"a0": [["heads"], ["tails"]], "a1": [["heads", "tails"]]}),
        name="coin",
    )
    as_model = KripkeModel(frame=coin.frame, ap=(), val={p: frozenset() for p in coin.points})

    updated, _ = product_update(model, coin)
    product = model_product(model, as_model)

    assert frames_isomorphic(updated.frame, product.frame) is not None
    names = {s: s for s in updated.states}
    assert is_morphism(names, updated.frame, product.frame)
    assert is_morphism(names, product.frame, updated.frame)
    assert dict(updated.val) == dict(product.val)
