from __future__ import annotations

import random

import pytest

from gdiagram.congruence import class_groups, congruence_close
from gdiagram.errors import SortError
from gdiagram.signature import FuncSymbol, Sort, Term

from conftest import naive_congruence

S = Sort("s")
OTHER = Sort("other")
CONSTS = [FuncSymbol(n, (), S) for n in "abcde"]
F = FuncSymbol("f", (S,), S)
G = FuncSymbol("g", (S, S), S)


def c(i: int) -> Term:
    return Term(CONSTS[i], ())


def test_equation_lifts_through_function_application():
    a, b = c(0), c(1)
    fa, fb = Term(F, (a,)), Term(F, (b,))
    mapping = congruence_close([(a, b)], [fa, fb])
    assert mapping[fa] == mapping[fb] == fa


def test_no_equations_gives_identity_partition():
    terms = [c(i) for i in range(5)] + [Term(F, (c(0),))]
    mapping = congruence_close([], terms)
    assert mapping == {t: t for t in terms}


def test_transitive_chain_collapses():
    a, b, d = c(0), c(1), c(3)
    mapping = congruence_close([(a, b), (b, d)], [a, b, d])
    assert mapping[a] == mapping[b] == mapping[d] == a


def test_nested_lifting():
    a, b = c(0), c(1)
    ffa = Term(F, (Term(F, (a,)),))
    ffb = Term(F, (Term(F, (b,)),))
    mapping = congruence_close([(a, b)], [ffa, ffb])
    assert mapping[ffa] == mapping[ffb]


def test_representative_is_earliest_given_term():
    a, b = c(0), c(1)
    mapping = congruence_close([(a, b)], [b, a])
    assert mapping[a] == mapping[b] == b


def test_cross_sort_equation_rejected():
    other_const = FuncSymbol("x", (), OTHER)
    with pytest.raises(SortError):
        congruence_close([(c(0), Term(other_const, ()))], [c(0)])


def test_variable_equation_rejected():
    from gdiagram.signature import Variable

    with pytest.raises(SortError):
        congruence_close([(Term(Variable("v", S), ()), c(0))], [c(0)])


def _random_instance(rng: random.Random):
    terms: list[Term] = [c(i) for i in range(5)]

    def random_term(depth: int) -> Term:
        if depth == 0 or rng.random() < 0.4:
            return rng.choice(terms[:5])
        if rng.random() < 0.5:
            return Term(F, (random_term(depth - 1),))
        return Term(G, (random_term(depth - 1), random_term(depth - 1)))

    pool = [random_term(rng.randint(0, 3)) for _ in range(rng.randint(5, 20))]
    equations = [
        (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randint(0, 6))
    ]
    return equations, pool


def _same_relation(mapping, oracle, terms):
    for t1 in terms:
        for t2 in terms:
            assert (mapping[t1] == mapping[t2]) == (t2 in oracle[t1]), (t1, t2)


def test_matches_naive_fixpoint_oracle_on_100_random_instances():
    rng = random.Random(20250810)
    for _ in range(100):
        equations, terms = _random_instance(rng)
        mapping = congruence_close(equations, terms)
        oracle = naive_congruence(equations, terms)
        _same_relation(mapping, oracle, terms)


def test_class_groups_puts_representative_first():
    a, b = c(0), c(1)
    mapping = congruence_close([(a, b)], [a, b, c(2)])
    groups = {tuple(map(str, g)) for g in class_groups(mapping)}
    assert ("a", "b") in groups
    assert ("c",) in groups
