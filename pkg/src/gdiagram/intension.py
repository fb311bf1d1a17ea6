"""Intensional models: worlds x times, individual concepts, and per-world
denotations of concept predicates.

An individual concept is a total map from points of reference to entities.
Predicates over concepts denote, at each world, a concept set with an exact
member / non-member / unknown tripartition ('?'-marked members are the
unknowns). The whole model can be re-expressed as one G-diagram per point of
reference; evaluation agrees either way.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .diagram import Atom, GDiagram, Model, PartialSet
from .errors import EngineError, ResourceLimitError, SortError
from .evaluate import PointOfReference
from .signature import FuncSymbol, PredSymbol, Signature, Sort, Term, const_term
from .truth import FALSE, TRUE, UNKNOWN, Truth3

MAX_CONCEPTS = 10_000

ENTITY_SORT = Sort("entity")
CONCEPT_SORT = Sort("concept")


@dataclass(frozen=True)
class IndexSet:
    worlds: tuple[str, ...]
    times: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.worlds or not self.times:
            raise EngineError("index set needs at least one world and one time")
        if len(set(self.worlds)) != len(self.worlds):
            raise EngineError("world identifiers must be unique")
        if len(set(self.times)) != len(self.times):
            raise EngineError("time identifiers must be unique")

    def points(self) -> list[tuple[int, int]]:
        return [
            (i, j) for i in range(len(self.worlds)) for j in range(len(self.times))
        ]

    def world_index(self, name: str) -> int:
        try:
            return self.worlds.index(name)
        except ValueError:
            raise EngineError(f"unknown world: {name}") from None

    def time_index(self, name: str) -> int:
        try:
            return self.times.index(name)
        except ValueError:
            raise EngineError(f"unknown time: {name}") from None


@dataclass(frozen=True)
class IndividualConcept:
    """Total map from points of reference to entity names.

    `graph` is indexed world-major: entry i*len(times)+j is the entity at
    world i, time j.
    """

    name: str
    graph: tuple[str, ...]

    def at(self, world: int, time: int, n_times: int) -> str:
        return self.graph[world * n_times + time]


def list_individual_concepts(
    entities: Sequence[str], refs: IndexSet
) -> list[IndividualConcept]:
    """Enumerate every total map from points of reference to entities.

    Points are swept world-major; entity choices vary in declaration order,
    last point fastest. Names concatenate the chosen entities plus 'IC'.
    """
    if not entities:
        raise EngineError("no entities to build concepts from")
    n_points = len(refs.worlds) * len(refs.times)
    count = len(entities) ** n_points
    if count > MAX_CONCEPTS:
        raise ResourceLimitError(
            f"{count} concepts would exceed the bound of {MAX_CONCEPTS}"
        )
    out = []
    for combo in itertools.product(entities, repeat=n_points):
        out.append(IndividualConcept("".join(combo) + "IC", tuple(combo)))
    return out


@dataclass(frozen=True)
class ConceptSet:
    """Named set of concepts with '?'-marked members kept as unknowns."""

    name: str
    members: tuple[str, ...]
    unknowns: tuple[str, ...]


class IntensionalModel:
    """Immutable model over worlds x times with concept-valued predicates."""

    def __init__(
        self,
        refs: IndexSet,
        entities: tuple[str, ...],
        concepts: tuple[IndividualConcept, ...],
        conceptsets: dict[str, ConceptSet],
        properties: dict[str, dict[tuple[int, int], str]],
    ) -> None:
        self.refs = refs
        self.entities = entities
        self.concepts = concepts
        self.conceptsets = conceptsets
        self.properties = properties
        self.signature = self._build_signature()
        self._concept_terms = tuple(
            const_term(self.signature.function(c.name)) for c in concepts
        )
        self._entity_terms = tuple(
            const_term(self.signature.function(e)) for e in entities
        )

    def _build_signature(self) -> Signature:
        functions = [
            FuncSymbol(e, (), ENTITY_SORT, True) for e in self.entities
        ] + [FuncSymbol(c.name, (), CONCEPT_SORT, True) for c in self.concepts]
        predicates = [
            PredSymbol(name, (CONCEPT_SORT,), FALSE) for name in self.properties
        ]
        return Signature(
            sorts=(ENTITY_SORT, CONCEPT_SORT),
            functions=tuple(functions),
            predicates=tuple(predicates),
        )

    @property
    def index_set(self) -> IndexSet:
        return self.refs

    def universe(self, sort: Sort) -> tuple[Term, ...]:
        if sort == CONCEPT_SORT:
            return self._concept_terms
        if sort == ENTITY_SORT:
            return self._entity_terms
        return ()

    def canon(self, term: Term) -> Term:
        return term

    def concept_named(self, name: str) -> Optional[IndividualConcept]:
        for c in self.concepts:
            if c.name == name:
                return c
        return None

    def meaning(self, symbol: str, world: str):
        """Denotation of a symbol at a world: a ConceptSet for predicates,
        the concept itself for concept constants, the entity name otherwise."""
        if symbol in self.properties:
            i = self.refs.world_index(world)
            return self.conceptsets[self.properties[symbol][(i, 0)]]
        concept = self.concept_named(symbol)
        if concept is not None:
            return concept
        if symbol in self.entities:
            return symbol
        raise EngineError(f"no denotation for symbol: {symbol}")

    def lookup(self, atom: Atom, at) -> Truth3:
        table = self.properties.get(atom.pred.name)
        if table is None:
            raise SortError(f"unknown predicate: {atom.pred.name}")
        cs = self.conceptsets[table[(at.world, at.time)]]
        name = str(atom.args[0])
        if name in cs.members:
            return TRUE
        if name in cs.unknowns:
            return UNKNOWN
        return FALSE

    def partial_set(self, pred_name: str, world: int, time: int) -> PartialSet:
        cs = self.conceptsets[self.properties[pred_name][(world, time)]]
        members = frozenset(
            (t,) for t in self._concept_terms if str(t) in cs.members
        )
        unknowns = frozenset(
            (t,) for t in self._concept_terms if str(t) in cs.unknowns
        )
        non = frozenset(
            (t,) for t in self._concept_terms if (t,) not in members and (t,) not in unknowns
        )
        return PartialSet(members, non, unknowns)


def build_intensional_model(
    entities: Sequence[str],
    refs: IndexSet,
    concepts: Sequence[IndividualConcept],
    conceptsets: Sequence[ConceptSet],
    properties: dict[str, dict[tuple[int, int], str]],
) -> IntensionalModel:
    """Assemble and validate an intensional model from declarations.

    `properties` maps each predicate to a point-indexed choice of concept
    set; declarations that named only a world are expanded time-constant
    before this is called.
    """
    n_points = len(refs.worlds) * len(refs.times)
    entity_set = set(entities)
    for c in concepts:
        if len(c.graph) != n_points:
            raise EngineError(
                f"concept {c.name} is not total: {len(c.graph)} of {n_points} points given"
            )
        for e in c.graph:
            if e not in entity_set:
                raise EngineError(f"concept {c.name} uses undeclared entity: {e}")
    declared = {c.name for c in concepts}
    set_map: dict[str, ConceptSet] = {}
    for cs in conceptsets:
        for name in (*cs.members, *cs.unknowns):
            if name not in declared:
                raise EngineError(
                    f"concept set {cs.name} references undeclared concept: {name}"
                )
        set_map[cs.name] = cs
    for pred, table in properties.items():
        for point in refs.points():
            if point not in table:
                world = refs.worlds[point[0]]
                raise EngineError(f"property {pred} has no value at world {world}")
        for target in table.values():
            if target not in set_map:
                raise EngineError(f"property {pred} references unknown set: {target}")
    return IntensionalModel(
        refs, tuple(entities), tuple(concepts), set_map, properties
    )


@dataclass
class IndexedDiagram:
    """One G-diagram per point of reference, over a shared signature."""

    signature: Signature
    refs: IndexSet
    diagrams: dict[tuple[int, int], GDiagram]

    def model_at(self, point: tuple[int, int]) -> Model:
        from .diagram import build_canonical_model
        from .theory import Theory

        diagram = self.diagrams[point]
        theory = Theory(
            name=f"at({self.refs.worlds[point[0]]},{self.refs.times[point[1]]})",
            signature=self.signature,
            facts=diagram.facts,
            rules=(),
            equations=(),
            axioms=(),
            axiom_texts=(),
            families={},
        )
        return build_canonical_model(theory, depth=0)


def as_indexed_diagrams(model: IntensionalModel) -> IndexedDiagram:
    """Re-express an intensional model as point-indexed G-diagrams.

    Every atom's value is written out explicitly (unknowns included), so the
    per-point diagram reproduces intensional lookup exactly.
    """
    diagrams: dict[tuple[int, int], GDiagram] = {}
    for point in model.refs.points():
        facts: list[tuple[Atom, Truth3]] = []
        for pred in model.signature.predicates:
            for t in model.universe(CONCEPT_SORT):
                atom = Atom(pred, (t,))
                value = model.lookup(atom, PointOfReference(*point))
                facts.append((atom, value))
        diagrams[point] = GDiagram(facts=tuple(facts))
    return IndexedDiagram(model.signature, model.refs, diagrams)
