from __future__ import annotations

import pytest
from hypothesis import given, settings
from strategies import formulas

from episolve.errors import FormulaSyntaxError
from episolve.formula import (
    And,
    Atom,
    Box,
    Common,
    Everybody,
    Formula,
    Knows,
    Not,
    Top,
    actions,
    agents,
    atoms,
    is_positive,
    modal_depth,
)
from episolve.parsing import parse_formula
from episolve.types import AgentSet


def test_parse_knowledge_of_negated_atom() -> None:
    assert parse_formula("K a0 !l1") == Knows("a0", Not(Atom("l1")))


def test_prefix_operators_bind_tighter_than_and() -> None:
    assert parse_formula("K a p & q") == And(Knows("a", Atom("p")), Atom("q"))


def test_groups_are_sorted_and_deduplicated() -> None:
    assert parse_formula("C {b, a, b} p") == Common(("a", "b"), Atom("p"))
    assert parse_formula("E{a}p") == Everybody(("a",), Atom("p"))


def test_sugar_expands_to_core_connectives() -> None:
    assert parse_formula("p | q") == Not(And(Not(Atom("p")), Not(Atom("q"))))
    assert parse_formula("p -> q") == Not(And(Atom("p"), Not(Atom("q"))))
    assert parse_formula("false") == Not(Top())


def test_implication_is_right_associative() -> None:
    assert parse_formula("p -> q -> r") == parse_formula("p -> (q -> r)")


def test_box_and_alternative_negations() -> None:
    assert parse_formula("[announce] ~p") == Box("announce", Not(Atom("p")))
    assert parse_formula("¬p") == Not(Atom("p"))


@pytest.mark.parametrize(
    ("text", "column"),
    [
        ("p &", 4),
        ("K", 2),
        ("(p", 3),
        ("p q", 3),
        ("C {a p", 6),
        ("p $ q", 3),
    ],
)
def test_syntax_errors_report_column(text: str, column: int) -> None:
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula(text)

    assert exc.value.position == column - 1
    assert f"column {column}" in str(exc.value)


def test_empty_formula_is_rejected() -> None:
    with pytest.raises(FormulaSyntaxError):
        parse_formula("   ")


@settings(max_examples=200, deadline=None)
@given(formulas(AgentSet.of("a0", "a1", "a2"), ("p", "q", "r")))
def test_rendered_formula_parses_back(formula: Formula) -> None:
    assert parse_formula(str(formula)) == formula


def test_formula_inventory() -> None:
    formula = parse_formula("[act] K a0 (p & C {a1,a2} !q)")

    assert atoms(formula) == {"p", "q"}
    assert agents(formula) == {"a0", "a1", "a2"}
    assert actions(formula) == {"act"}
    assert modal_depth(formula) == 3


@pytest.mark.parametrize(
    ("text", "positive"),
    [
        ("K a0 !l1", True),
        ("C {a0,a1} (p & K a1 q)", True),
        ("E {a0} true", True),
        ("!K a0 p", False),
        ("K a !K b p", False),
        ("!!p", False),
        ("[act] p", False),
    ],
)
def test_positive_fragment(text: str, positive: bool) -> None:
    assert is_positive(parse_formula(text)) is positive
