"""G-diagrams and the canonical models they determine.

A diagram assigns three-valued truth to ground atoms through three layers:
explicit facts, then rule schemata in declaration order, then the
predicate's default. Declared ground equations induce a congruence on the
generated term universe; the model's elements are the congruence classes,
with the earliest generated term of each class as its representative.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

from .congruence import congruence_close
from .errors import InconsistencyError, SignatureError, SortError
from .signature import (
    PredSymbol,
    Signature,
    Sort,
    Term,
    Variable,
    generate_terms,
    validate_signature,
)
from .truth import FALSE, TRUE, UNKNOWN, Truth3

if TYPE_CHECKING:
    from .expand import ExpansionStep
    from .intension import IndexSet
    from .theory import Theory


@dataclass(frozen=True)
class Atom:
    pred: PredSymbol
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        if len(self.args) != self.pred.arity:
            raise SortError(
                f"atom {self.pred.name}: expected {self.pred.arity} argument(s), got {len(self.args)}"
            )
        for a, s in zip(self.args, self.pred.arg_sorts):
            if a.sort != s:
                raise SortError(f"atom {self}: argument {a} has sort {a.sort}, expected {s}")

    def __str__(self) -> str:
        if not self.args:
            return self.pred.name
        return f"{self.pred.name}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class DiagramRule:
    """pred(params...) = value when all guard equations hold.

    Guards may mention extra variables beyond the pattern parameters; those
    range over the universe of their sort (and over subterms of the queried
    atom, so lookups outside the generated universe still match).
    """

    pred: PredSymbol
    params: tuple[Variable, ...]
    value: Truth3
    guards: tuple[tuple[Term, Term], ...]

    def guard_only_vars(self) -> tuple[Variable, ...]:
        seen: dict[str, Variable] = {}
        param_names = {v.name for v in self.params}
        for lhs, rhs in self.guards:
            for t in (lhs, rhs):
                for v in t.variables():
                    if v.name not in param_names and v.name not in seen:
                        seen[v.name] = v
        return tuple(seen.values())


@dataclass(frozen=True)
class GDiagram:
    """Facts (first match wins), rules in declaration order, ground equations."""

    facts: tuple[tuple[Atom, Truth3], ...] = ()
    rules: tuple[DiagramRule, ...] = ()
    equations: tuple[tuple[Term, Term], ...] = ()


@dataclass(frozen=True)
class PartialSet:
    """A predicate denotation split into definite members, definite
    non-members, and unknowns; the three parts are disjoint and cover all
    universe tuples of the predicate's sort profile."""

    members: frozenset[tuple[Term, ...]]
    non_members: frozenset[tuple[Term, ...]]
    unknowns: frozenset[tuple[Term, ...]]

    def value_of(self, tup: tuple[Term, ...]) -> Optional[Truth3]:
        if tup in self.members:
            return TRUE
        if tup in self.non_members:
            return FALSE
        if tup in self.unknowns:
            return UNKNOWN
        return None

    @property
    def is_total(self) -> bool:
        return not self.unknowns


class Model:
    """Immutable snapshot of a canonical model built from a theory."""

    def __init__(
        self,
        theory: "Theory",
        depth: int,
        universe: dict[Sort, tuple[Term, ...]],
        rep_map: dict[Term, Term],
        denotations: dict[PredSymbol, PartialSet],
        base_theory: Optional["Theory"] = None,
        history: tuple["ExpansionStep", ...] = (),
    ) -> None:
        self.theory = theory
        self.signature = theory.signature
        self.depth = depth
        self._universe = universe
        self._rep_map = rep_map
        self.denotations = denotations
        self.base_theory = base_theory if base_theory is not None else theory
        self.history = history
        self._facts_canonical: dict[Atom, Truth3] = {}
        self._value_cache: dict[Atom, Truth3] = {}

    # -- index set (a single extensional point of reference) --

    @property
    def index_set(self) -> "IndexSet":
        from .intension import IndexSet

        return IndexSet(("w0",), ("t0",))

    # -- universe ------------------------------------------------------

    def universe(self, sort: Sort) -> tuple[Term, ...]:
        return self._universe.get(sort, ())

    def canon(self, term: Term) -> Term:
        """Rewrite a ground term to its congruence-class representative."""
        rep = self._rep_map.get(term)
        if rep is not None:
            return rep
        if not term.args:
            return term
        rebuilt = Term(term.head, tuple(self.canon(a) for a in term.args))
        return self._rep_map.get(rebuilt, rebuilt)

    def canon_atom(self, atom: Atom) -> Atom:
        return Atom(atom.pred, tuple(self.canon(a) for a in atom.args))

    # -- lookup --------------------------------------------------------

    def lookup_atom(self, atom: Atom) -> Truth3:
        """Truth of a ground atom: facts, then rules in order, then default.

        Congruent argument terms give identical results because arguments are
        canonicalized before every layer.
        """
        for a in atom.args:
            if not a.is_ground:
                raise SortError(f"atom {atom} is not ground")
        canon = self.canon_atom(atom)
        cached = self._value_cache.get(canon)
        if cached is not None:
            return cached
        value = self._lookup_canonical(canon)
        self._value_cache[canon] = value
        return value

    def lookup(self, atom: Atom, point=None) -> Truth3:
        return self.lookup_atom(atom)

    def _lookup_canonical(self, atom: Atom) -> Truth3:
        fact_value = self._facts_canonical.get(atom)
        if fact_value is not None:
            return fact_value
        for rule in self.theory.diagram.rules:
            if rule.pred != atom.pred:
                continue
            if self._rule_matches(rule, atom):
                return rule.value
        return atom.pred.default

    def _rule_matches(self, rule: DiagramRule, atom: Atom) -> bool:
        env = {v.name: arg for v, arg in zip(rule.params, atom.args)}
        extra = rule.guard_only_vars()
        pools: list[list[Term]] = []
        for v in extra:
            pool = list(self.universe(v.sort))
            for arg in atom.args:
                for sub in arg.subterms():
                    if sub.sort == v.sort and sub not in pool:
                        pool.append(sub)
            if not pool:
                return False
            pools.append(pool)
        for combo in itertools.product(*pools):
            full_env = dict(env)
            for v, t in zip(extra, combo):
                full_env[v.name] = t
            ok = True
            for lhs, rhs in rule.guards:
                if self.canon(lhs.substitute(full_env)) != self.canon(rhs.substitute(full_env)):
                    ok = False
                    break
            if ok:
                return True
        return False

    # -- reporting helpers ----------------------------------------------

    def sorts_in_order(self) -> tuple[Sort, ...]:
        return self.signature.sorts

    def tuples_for(self, pred: PredSymbol) -> list[tuple[Term, ...]]:
        pools = [self.universe(s) for s in pred.arg_sorts]
        return list(itertools.product(*pools))


def lookup_atom(model: Model, atom: Atom) -> Truth3:
    return model.lookup_atom(atom)


def build_canonical_model(
    theory: "Theory",
    depth: int,
    base_theory: Optional["Theory"] = None,
    history: tuple = (),
) -> Model:
    """Build the canonical model of a theory at the given universe depth.

    Raises InconsistencyError if congruent facts clash or a declared axiom
    instance evaluates to False over the generated universe; axiom instances
    that come out Unknown are left as expansion targets.
    """
    sig = theory.signature
    diags = validate_signature(sig)
    if diags:
        raise SignatureError("invalid signature: " + "; ".join(diags))

    universe: dict[Sort, tuple[Term, ...]] = {}
    ordered_terms: list[Term] = []
    for sort in sig.sorts:
        terms = generate_terms(sig, sort, depth)
        universe[sort] = tuple(terms)
        ordered_terms.extend(terms)

    # Close over equation subterms too, so declared equations whose sides
    # exceed the build depth still canonicalize correctly.
    extra: list[Term] = []
    seen = set(ordered_terms)
    for lhs, rhs in theory.diagram.equations:
        for side in (lhs, rhs):
            for sub in side.subterms():
                if sub not in seen:
                    extra.append(sub)
                    seen.add(sub)
    rep_map = congruence_close(theory.diagram.equations, ordered_terms + extra)

    universe = {
        sort: tuple(t for t in terms if rep_map.get(t, t) == t)
        for sort, terms in universe.items()
    }

    model = Model(theory, depth, universe, rep_map, {}, base_theory, history)

    # Fact conflict check across congruence classes; first declaration wins.
    canonical: dict[Atom, tuple[Truth3, Atom]] = {}
    for atom, value in theory.diagram.facts:
        can = model.canon_atom(atom)
        prev = canonical.get(can)
        if prev is None:
            canonical[can] = (value, atom)
        elif prev[0] is not value and TRUE in (prev[0], value) and FALSE in (prev[0], value):
            raise InconsistencyError(
                f"atom {can} is declared both {prev[0]} (via {prev[1]}) and {value} (via {atom})"
            )
    model._facts_canonical = {a: v for a, (v, _) in canonical.items()}

    denotations: dict[PredSymbol, PartialSet] = {}
    for pred in sig.predicates:
        members: set[tuple[Term, ...]] = set()
        non_members: set[tuple[Term, ...]] = set()
        unknowns: set[tuple[Term, ...]] = set()
        for tup in itertools.product(*(universe[s] for s in pred.arg_sorts)):
            value = model.lookup_atom(Atom(pred, tup))
            if value is TRUE:
                members.add(tup)
            elif value is FALSE:
                non_members.add(tup)
            else:
                unknowns.add(tup)
        denotations[pred] = PartialSet(
            frozenset(members), frozenset(non_members), frozenset(unknowns)
        )
    model.denotations = denotations

    _check_axioms(model)
    return model


def _check_axioms(model: Model) -> None:
    from .evaluate import eval_formula

    for text, axiom in zip(model.theory.axiom_texts, model.theory.axioms):
        value, trace = eval_formula(model, axiom, mode="exhaustive")
        if value is FALSE:
            witness = _first_false_witness(trace)
            detail = f" (counterexample: {witness})" if witness else ""
            raise InconsistencyError(f"axiom fails: {text}{detail}")


def _first_false_witness(trace) -> Optional[Term]:
    if trace.value is FALSE and trace.witness is not None:
        return trace.witness
    for child in trace.children:
        found = _first_false_witness(child)
        if found is not None:
            return found
    return None
