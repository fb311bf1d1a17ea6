from __future__ import annotations

import pytest

from gdiagram.errors import ResourceLimitError
from gdiagram.signature import (
    FuncSymbol,
    PredSymbol,
    Signature,
    Sort,
    generate_terms,
    validate_signature,
)
from gdiagram.theory import parse_theory

from conftest import brute_force_terms, theory_text

BLOCK = Sort("block")
TABLE = Sort("table")


def blocks_signature() -> Signature:
    return parse_theory(theory_text("blocks")).signature


def johnny_signature() -> Signature:
    return parse_theory(theory_text("johnny")).signature


def strings_signature() -> Signature:
    return parse_theory(theory_text("strings")).signature


def test_blocks_signature_validates_clean():
    assert validate_signature(blocks_signature()) == []


def test_duplicate_constant_is_diagnosed():
    sig = Signature(
        sorts=(BLOCK,),
        functions=(FuncSymbol("A", (), BLOCK), FuncSymbol("A", (), BLOCK)),
    )
    diags = validate_signature(sig)
    assert any(d.startswith("duplicate symbol: A") for d in diags)


def test_predicate_over_constructorless_sort_is_diagnosed():
    sig = Signature(
        sorts=(BLOCK,),
        functions=(),
        predicates=(PredSymbol("p", (BLOCK,)),),
    )
    diags = validate_signature(sig)
    assert any(d.startswith("uninhabited sort: block") for d in diags)


def test_composite_only_inhabitation_is_diagnosed():
    # s2 is only reachable through f over s1, which itself is empty
    s1, s2 = Sort("s1"), Sort("s2")
    sig = Signature(
        sorts=(s1, s2),
        functions=(FuncSymbol("f", (s1,), s2),),
        predicates=(PredSymbol("p", (s2,)),),
    )
    assert any("uninhabited sort: s2" in d for d in validate_signature(sig))


def test_table_terms_depth0():
    sig = blocks_signature()
    terms = generate_terms(sig, TABLE, 0)
    assert [str(t) for t in terms] == ["Tab0"]


def test_table_terms_depth1_is_tab0_plus_nine_puts():
    sig = blocks_signature()
    terms = generate_terms(sig, TABLE, 1)
    assert [str(t) for t in terms] == [
        "Tab0",
        "put(A,A,Tab0)",
        "put(A,B,Tab0)",
        "put(A,C,Tab0)",
        "put(B,A,Tab0)",
        "put(B,B,Tab0)",
        "put(B,C,Tab0)",
        "put(C,A,Tab0)",
        "put(C,B,Tab0)",
        "put(C,C,Tab0)",
    ]
    assert len(terms) == 10


def test_constants_only_sort_is_depth_independent():
    sig = johnny_signature()
    entity = sig.sort("entity")
    for depth in range(4):
        assert [str(t) for t in generate_terms(sig, entity, depth)] == [
            "J", "M", "B", "j", "m", "b",
        ]


@pytest.mark.parametrize(
    "sig_factory,max_depth",
    [(blocks_signature, 3), (johnny_signature, 3), (strings_signature, 2)],
)
def test_prefix_monotonicity(sig_factory, max_depth):
    sig = sig_factory()
    for sort in sig.sorts:
        for d in range(max_depth):
            shorter = generate_terms(sig, sort, d)
            longer = generate_terms(sig, sort, d + 1)
            assert longer[: len(shorter)] == shorter


@pytest.mark.parametrize(
    "sig_factory,max_depth",
    [(blocks_signature, 3), (johnny_signature, 3), (strings_signature, 2)],
)
def test_sort_soundness_and_counts_match_bruteforce(sig_factory, max_depth):
    sig = sig_factory()
    for sort in sig.sorts:
        for d in range(max_depth + 1):
            terms = generate_terms(sig, sort, d)
            assert all(t.sort == sort for t in terms)
            assert all(t.depth() <= d for t in terms)
            expected = brute_force_terms(sig, sort, d)
            assert len(terms) == len(set(terms)) == len(expected)
            assert set(terms) == expected


def test_depth_over_bound_raises_resource_limit():
    sig = blocks_signature()
    with pytest.raises(ResourceLimitError):
        generate_terms(sig, TABLE, 9)


def test_negative_depth_rejected():
    with pytest.raises(ValueError):
        generate_terms(blocks_signature(), TABLE, -1)
