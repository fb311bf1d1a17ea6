from __future__ import annotations

import pytest

from gdiagram import Session
from gdiagram.diagram import Atom
from gdiagram.errors import EngineError, ParseError, ResourceLimitError
from gdiagram.evaluate import PointOfReference, eval_formula
from gdiagram.formula import parse_formula
from gdiagram.intension import (
    CONCEPT_SORT,
    IndexSet,
    as_indexed_diagrams,
    list_individual_concepts,
)
from gdiagram.truth import TRUE, UNKNOWN

from conftest import theory_text


TWO_BY_TWO = IndexSet(("I1", "I2"), ("t0",))


def test_concept_enumeration_two_entities_two_points():
    concepts = list_individual_concepts(["NI", "HU"], TWO_BY_TWO)
    assert len(concepts) == 4
    by_name = {c.name: c.graph for c in concepts}
    assert by_name["NIHUIC"] == ("NI", "HU")
    assert by_name["HUNIIC"] == ("HU", "NI")
    assert list(by_name) == ["NINIIC", "NIHUIC", "HUNIIC", "HUHUIC"]


def test_single_entity_gives_single_constant_concept():
    concepts = list_individual_concepts(["J"], TWO_BY_TWO)
    assert len(concepts) == 1
    assert concepts[0].graph == ("J", "J")


def test_four_entities_give_sixteen_concepts():
    concepts = list_individual_concepts(["J", "M", "NI", "HU"], TWO_BY_TWO)
    assert len(concepts) == 16
    assert len({c.name for c in concepts}) == 16


def test_enumeration_count_is_entities_to_the_points():
    refs = IndexSet(("w1", "w2"), ("t0", "t1"))
    assert len(list_individual_concepts(["a", "b", "c"], refs)) == 3 ** 4


def test_enumeration_bound_enforced():
    refs = IndexSet(tuple(f"w{i}" for i in range(8)), ("t0", "t1"))
    with pytest.raises(ResourceLimitError):
        list_individual_concepts(["a", "b"], refs)


def test_prices_tripartitions(prices_model):
    price1 = prices_model.partial_set("price", 0, 0)
    assert {str(t[0]) for t in price1.members} == {"NINIIC", "NIHUIC"}
    assert price1.unknowns == frozenset()

    price2 = prices_model.partial_set("price", 1, 0)
    assert {str(t[0]) for t in price2.unknowns} == {"NINIIC"}
    assert {str(t[0]) for t in price2.members} == {"NIHUIC", "HUNIIC"}

    for world in (0, 1):
        rise = prices_model.partial_set("rise", world, 0)
        assert {str(t[0]) for t in rise.members} == {"NIHUIC"}
        assert rise.unknowns == frozenset()


def test_lookup_consults_the_world(prices_model):
    sig = prices_model.signature
    price = sig.predicate("price")
    niniic = prices_model.universe(CONCEPT_SORT)[0]
    atom = Atom(price, (niniic,))
    assert prices_model.lookup(atom, PointOfReference(0, 0)) is TRUE
    assert prices_model.lookup(atom, PointOfReference(1, 0)) is UNKNOWN


def test_meaning_accessor(prices_model):
    assert prices_model.meaning("price", "I1").name == "PRICE1"
    assert prices_model.meaning("price", "I2").name == "PRICE2"
    assert prices_model.meaning("NIHUIC", "I1").graph == ("NI", "HU")
    assert prices_model.meaning("NI", "I1") == "NI"


def test_empty_conceptset_makes_predicate_false_everywhere():
    text = theory_text("prices") + "conceptset EMPTY =\nproperty flat = I1:EMPTY I2:EMPTY\n"
    model = Session(text, name="prices2").model
    for i in (0, 1):
        ps = model.partial_set("flat", i, 0)
        assert ps.members == frozenset() and ps.unknowns == frozenset()
        assert len(ps.non_members) == 3


def test_undeclared_concept_in_set_rejected():
    text = theory_text("prices").replace(
        "conceptset RISE1 = NIHUIC", "conceptset RISE1 = GHOSTIC"
    )
    with pytest.raises(EngineError, match="undeclared concept: GHOSTIC"):
        Session(text)


def test_property_missing_world_rejected():
    text = theory_text("prices").replace(
        "property rise = I1:RISE1 I2:RISE1", "property rise = I1:RISE1"
    )
    with pytest.raises(ParseError, match=r"property rise has no value at \(I2,t0\)"):
        Session(text)


def test_concept_missing_world_rejected():
    text = theory_text("prices").replace(
        "concept HUNIIC = I1:HU I2:NI", "concept HUNIIC = I1:HU"
    )
    with pytest.raises(ParseError, match=r"concept HUNIIC has no value at \(I2,t0\)"):
        Session(text)


def test_concept_with_undeclared_entity_rejected():
    text = theory_text("prices").replace(
        "concept HUNIIC = I1:HU I2:NI", "concept HUNIIC = I1:HU I2:XX"
    )
    with pytest.raises(EngineError, match="undeclared entity: XX"):
        Session(text)


def test_concept_totality_holds_in_corpus(prices_model):
    n_points = len(prices_model.refs.worlds) * len(prices_model.refs.times)
    for concept in prices_model.concepts:
        assert len(concept.graph) == n_points


def test_indexed_diagrams_assign_explicit_values(prices_model):
    indexed = as_indexed_diagrams(prices_model)
    sig = prices_model.signature
    price = sig.predicate("price")
    niniic = prices_model.universe(CONCEPT_SORT)[0]

    facts_i1 = dict(indexed.diagrams[(0, 0)].facts)
    facts_i2 = dict(indexed.diagrams[(1, 0)].facts)
    assert facts_i1[Atom(price, (niniic,))] is TRUE
    assert facts_i2[Atom(price, (niniic,))] is UNKNOWN


def test_indexed_diagrams_round_trip_evaluation(prices_model):
    indexed = as_indexed_diagrams(prices_model)
    formulas = [
        "exists x:concept. (price(x) & rise(x))",
        "forall x:concept. (rise(x) -> price(x))",
        "price(NINIIC)",
        "~rise(HUNIIC)",
        "NINIIC = NIHUIC",
    ]
    for point in prices_model.refs.points():
        point_model = indexed.model_at(point)
        for text in formulas:
            for mode in ("paper", "exhaustive"):
                f_int = parse_formula(text, prices_model.signature)
                f_ext = parse_formula(text, point_model.signature)
                v_int, _ = eval_formula(
                    prices_model, f_int, PointOfReference(*point), mode
                )
                v_ext, _ = eval_formula(point_model, f_ext, mode=mode)
                assert v_int is v_ext, (point, text, mode)


def test_total_model_round_trips_with_all_atoms_definite():
    text = """
worlds I1 I2
times t0
entity a b
concept AIC = I1:a I2:a
concept BIC = I1:b I2:b
conceptset S = AIC
property p = I1:S I2:S
"""
    model = Session(text).model
    indexed = as_indexed_diagrams(model)
    for point, diagram in indexed.diagrams.items():
        assert all(v is not UNKNOWN for _, v in diagram.facts)
