from __future__ import annotations

import json
import logging
from pathlib import Path

import pytest

from episolve.catalog import get_example, list_examples
from episolve.errors import EpisolveError, SchemaError, ValidationError
from episolve.kripke import KripkeModel
from episolve.schema import (
    check_document,
    dump,
    load,
    parse_document,
    read_document,
    to_core,
)
from episolve.simplicial import SimplicialModel

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _kripke(**overrides: object) -> str:
    document: dict[str, object] = {
        "kind": "kripke",
        "agents": ["a0", "a1"],
        "ap": [{"atom": "p", "owner": "a0"}],
        "states": ["s", "t"],
        "relations": {"a0": [], "a1": [["s", "t"]]},
        "valuation": {"s": ["p"], "t": ["!p"]},
    }
    document.update(overrides)
    return json.dumps(document)


@pytest.mark.parametrize("name", [entry.name for entry in list_examples()])
def test_fixture_matches_builtin_example(name: str) -> None:
    loaded = load(FIXTURES / f"{name}.json")

    assert dump(loaded, canonical=True) == dump(get_example(name), canonical=True)


@pytest.mark.parametrize("name", [entry.name for entry in list_examples()])
def test_dumped_documents_load_back(name: str) -> None:
    text = dump(get_example(name))

    assert dump(to_core(parse_document(text))) == text


def test_kripke_document_loads() -> None:
    model = to_core(parse_document(_kripke()))

    assert isinstance(model, KripkeModel)
    assert model.frame.rel["a1"] == (("s", "t"),)
    assert model.owner == {"p": "a0"}


def test_extra_fields_are_rejected() -> None:
    with pytest.raises(SchemaError) as exc:
        parse_document(_kripke(colour="red"))

    assert exc.value.location == "kripke.colour"


def test_unknown_kind_is_rejected() -> None:
    with pytest.raises(SchemaError):
        parse_document(json.dumps({"kind": "graph"}))


def test_malformed_json_is_schema_error() -> None:
    with pytest.raises(SchemaError):
        parse_document("{not json")


def test_missing_file_is_reported(tmp_path: Path) -> None:
    with pytest.raises(EpisolveError) as exc:
        read_document(tmp_path / "missing.json")

    assert "Cannot read" in str(exc.value)


def test_incomplete_valuation_is_a_validation_error() -> None:
    document = parse_document(_kripke(valuation={"s": ["p"]}))

    with pytest.raises(ValidationError) as exc:
        to_core(document)

    assert [issue.code for issue in exc.value.report.issues] == ["valuation-missing"]
    assert not check_document(document).ok


def test_unknown_relation_state_is_reported_as_invalid() -> None:
    document = parse_document(_kripke(relations={"a0": [["s", "x"]]}))

    report = check_document(document)

    assert [issue.code for issue in report.issues] == ["invalid"]
    assert "'x'" in report.issues[0].message


def test_open_relations_are_closed(caplog: pytest.LogCaptureFixture) -> None:
    text = _kripke(
        states=["s", "t", "u"],
        relations={"a1": [["s", "t"], ["t", "u"]]},
        valuation={"s": ["p"], "t": ["p"], "u": ["!p"]},
        ap=[{"atom": "p"}],
    )

    with caplog.at_level(logging.WARNING):
        model = to_core(parse_document(text))

    assert isinstance(model, KripkeModel)
    assert model.frame.rel["a1"] == (("s", "t", "u"),)
    assert "added 1 pair" in caplog.text


def test_bad_precondition_names_its_location() -> None:
    text = json.dumps(
        {
            "kind": "action",
            "agents": ["a0"],
            "points": ["e"],
            "preconditions": {"e": "p &"},
        }
    )

    with pytest.raises(SchemaError) as exc:
        to_core(parse_document(text))

    assert exc.value.location == "preconditions.e"


def test_duplicate_facets_load_with_warning(caplog: pytest.LogCaptureFixture) -> None:
    text = json.dumps(
        {
            "kind": "simplicial",
            "agents": ["a0", "a1"],
            "vertices": [{"name": "x", "color": "a0"}, {"name": "y", "color": "a1"}],
            "facets": [["x", "y"], ["y", "x"]],
        }
    )
    document = parse_document(text)

    with caplog.at_level(logging.WARNING):
        model = to_core(document)

    assert isinstance(model, SimplicialModel)
    assert len(model.complex.facets) == 1
    assert "facet-duplicate" in caplog.text
    assert check_document(document).ok


def test_undeclared_facet_vertex_is_reported() -> None:
    text = json.dumps(
        {
            "kind": "simplicial",
            "agents": ["a0", "a1"],
            "vertices": [{"name": "x", "color": "a0"}],
            "facets": [["x", "y"]],
        }
    )

    report = check_document(parse_document(text))

    assert "vertex-unknown" in [issue.code for issue in report.issues]


def test_task_with_simplicial_sides_loads() -> None:
    square = json.loads(dump(get_example("square_input")))
    text = json.dumps(
        {
            "kind": "task",
            "name": "copy",
            "input": square,
            "output": square,
            "delta": {
                "(x0,y0)": ["(x0,y0)"],
                "(x0,y1)": ["(x0,y1)"],
                "(x1,y0)": ["(x1,y0)"],
                "(x1,y1)": ["(x1,y1)"],
            },
        }
    )

    task = to_core(parse_document(text))

    assert task.name == "copy"
    assert task.input.states == ("(x0,y0)", "(x0,y1)", "(x1,y0)", "(x1,y1)")


def test_canonical_dump_sorts_keys() -> None:
    text = dump(get_example("segment"), canonical=True)

    assert list(json.loads(text)) == sorted(json.loads(text))
    assert text.endswith("}\n")
