"""Dynamic model expansion: forcing, element addition, partial-set merging.

Every operation is snapshot-in, snapshot-out; the input model is never
mutated. Successful steps only ever move atoms from Unknown to a definite
value, so evaluation is monotone across an expansion sequence. Each step is
recorded on the new snapshot's history together with its diagram delta, and
replaying the history over the base theory reproduces the snapshot.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .diagram import Atom, Model, PartialSet, build_canonical_model
from .errors import EngineError, InconsistencyError, SortError
from .signature import FuncSymbol, PredSymbol, Sort, Term
from .truth import FALSE, TRUE, UNKNOWN, Truth3


@dataclass(frozen=True)
class ExpansionStep:
    kind: str  # "force" | "add_element" | "merge_predicates"
    payload: tuple
    facts_added: tuple[tuple[Atom, Truth3], ...] = ()
    consts_added: tuple[FuncSymbol, ...] = ()

    def describe(self) -> str:
        if self.kind == "force":
            atom, value = self.payload
            return f"force {atom} {value}"
        if self.kind == "add_element":
            sort, name = self.payload
            return f"add {sort} {name}"
        atom_p, atom_q = self.payload
        return f"eqforce {atom_p} {atom_q}"


@dataclass(frozen=True)
class Obligation:
    """A tuple left Unknown on one side of a merge must be confirmed at the
    merged definite value."""

    atom: Atom
    required: Truth3
    provenance: ExpansionStep

    def __post_init__(self) -> None:
        if not self.required.is_definite:
            raise EngineError("obligation value must be definite")


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    reason: Optional[str] = None


def _rebuild(model: Model, step: ExpansionStep) -> Model:
    theory = model.theory
    if step.consts_added:
        sig = theory.signature
        sig = replace(sig, functions=sig.functions + step.consts_added)
        theory = replace(theory, signature=sig)
    if step.facts_added:
        theory = replace(theory, facts=theory.facts + step.facts_added)
    return build_canonical_model(
        theory,
        model.depth,
        base_theory=model.base_theory,
        history=model.history + (step,),
    )


def apply_step(model: Model, step: ExpansionStep) -> Model:
    """Re-apply a recorded step (delta replay)."""
    return _rebuild(model, step)


def replay(base: Model, history: Sequence[ExpansionStep]) -> Model:
    out = base
    for step in history:
        out = apply_step(out, step)
    return out


def check_consistency(model: Model, atom: Atom, value: Truth3) -> ConsistencyVerdict:
    """Can `atom := value` be added without collapsing True into False?

    The assignment is propagated through the congruence classes and all
    bounded ground axiom instances are re-checked; an instance that comes out
    Unknown does not count against consistency.
    """
    if not value.is_definite:
        raise EngineError("can only force a definite truth value")
    current = model.lookup_atom(atom)
    if current is value:
        return ConsistencyVerdict(True)
    if current.is_definite:
        return ConsistencyVerdict(
            False, f"{model.canon_atom(atom)} is already {current}"
        )
    step = ExpansionStep("force", (atom, value), facts_added=((atom, value),))
    try:
        _rebuild(model, step)
    except InconsistencyError as err:
        return ConsistencyVerdict(False, str(err))
    return ConsistencyVerdict(True)


def force(model: Model, atom: Atom, value: Truth3) -> Model:
    """New snapshot with the atom (and all congruent instances) made definite.

    Forcing an atom to its current definite value is a no-op and returns the
    input snapshot unchanged.
    """
    if not value.is_definite:
        raise EngineError("can only force a definite truth value")
    current = model.lookup_atom(atom)
    if current is value:
        return model
    if current.is_definite:
        raise InconsistencyError(
            f"cannot force {model.canon_atom(atom)} to {value}: it is already {current}"
        )
    step = ExpansionStep("force", (atom, value), facts_added=((atom, value),))
    return _rebuild(model, step)


def add_element(model: Model, sort: Sort, name: str) -> Model:
    """New snapshot whose signature gains a fresh constructor constant.

    The universe is regenerated at the same depth; the new constant sits at
    depth 0, after the previously declared constants, so the generation
    order of existing terms is preserved. Tuples involving the new element
    take the predicate defaults.
    """
    sig = model.signature
    if sig.sort(sort.name) is None:
        raise SortError(f"unknown sort: {sort.name}")
    if sig.function(name) is not None or sig.predicate(name) is not None:
        raise EngineError(f"duplicate name: {name}")
    const = FuncSymbol(name, (), sort, True)
    step = ExpansionStep("add_element", (sort.name, name), consts_added=(const,))
    return _rebuild(model, step)


def test_function_equality(model: Model, p: PredSymbol, q: PredSymbol) -> Truth3:
    """Three-valued equality of two partially specified predicates."""
    if p.arg_sorts != q.arg_sorts:
        raise SortError(
            f"incompatible sort profiles: {p.name}{tuple(map(str, p.arg_sorts))} vs "
            f"{q.name}{tuple(map(str, q.arg_sorts))}"
        )
    ps, qs = model.denotations[p], model.denotations[q]
    if (ps.members & qs.non_members) or (qs.members & ps.non_members):
        return FALSE
    if ps.members == qs.members and ps.non_members == qs.non_members and ps.is_total and qs.is_total:
        return TRUE
    return UNKNOWN


def force_predicates_equal(
    model: Model, p: PredSymbol, q: PredSymbol
) -> tuple[Model, list[Obligation]]:
    """Merge two predicates' partial sets into one shared denotation.

    Definite values are unioned (a definite disagreement is an error); every
    tuple Unknown on one side but definite on the other is returned as an
    obligation to confirm the merged value.
    """
    verdict = test_function_equality(model, p, q)
    if verdict is FALSE:
        clash = _first_disagreement(model.denotations[p], model.denotations[q])
        raise InconsistencyError(
            f"cannot merge {p.name} and {q.name}: definite disagreement at {_tuple_str(clash)}"
        )
    ps, qs = model.denotations[p], model.denotations[q]
    facts: list[tuple[Atom, Truth3]] = []
    obligations: list[Obligation] = []
    step = ExpansionStep("merge_predicates", (p.name, q.name))
    for tup in model.tuples_for(p):
        pv = ps.value_of(tup)
        qv = qs.value_of(tup)
        merged = pv if pv is not UNKNOWN else qv
        if merged is UNKNOWN or merged is None:
            continue
        if pv is UNKNOWN:
            obligations.append(Obligation(Atom(p, tup), merged, step))
        if qv is UNKNOWN:
            obligations.append(Obligation(Atom(q, tup), merged, step))
        if pv is UNKNOWN:
            facts.append((Atom(p, tup), merged))
        if qv is UNKNOWN:
            facts.append((Atom(q, tup), merged))
    step = ExpansionStep("merge_predicates", (p.name, q.name), facts_added=tuple(facts))
    obligations = [replace(o, provenance=step) for o in obligations]
    new_model = _rebuild(model, step)
    return new_model, obligations


def _first_disagreement(ps: PartialSet, qs: PartialSet):
    both = sorted(
        (ps.members & qs.non_members) | (qs.members & ps.non_members),
        key=lambda t: [str(x) for x in t],
    )
    return both[0]


def _tuple_str(tup: tuple[Term, ...]) -> str:
    if len(tup) == 1:
        return str(tup[0])
    return "(" + ",".join(str(t) for t in tup) + ")"
