"""Theory files: the textual declarations a session is loaded from.

Extensional clauses:

    sort block
    const A B C : block
    func put : block block table -> table constructor
    pred top : block block table default false
    fact walk(J) = true
    rule top(x,y,z) = true when z = put(x,y,Tab0)
    equal j J
    axiom forall x:block. ~top(x,x,Tab0)
    family P = m:man w:walk

Intensional clauses (a file is one kind or the other):

    worlds I1 I2
    times t0
    entity NI HU
    concept NIHUIC = I1:NI I2:HU
    conceptset PRICE2 = NINIIC? NIHUIC HUNIIC
    property price = I1:PRICE1 I2:PRICE2

Keys in concept/property clauses name a world (time-constant) or a
world.time point. Lines starting with '#' are comments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .diagram import Atom, DiagramRule, GDiagram
from .errors import ParseError
from .formula import (
    Formula,
    IndexedFunctionFamily,
    TokenStream,
    _Parser,
    parse_formula,
    tokenize,
)
from .intension import (
    ConceptSet,
    IndexSet,
    IndividualConcept,
    IntensionalModel,
    build_intensional_model,
)
from .signature import FuncSymbol, PredSymbol, Signature, Sort, Term, Variable
from .truth import FALSE, Truth3


@dataclass(frozen=True)
class Theory:
    name: Optional[str]
    signature: Signature
    facts: tuple[tuple[Atom, Truth3], ...]
    rules: tuple[DiagramRule, ...]
    equations: tuple[tuple[Term, Term], ...]
    axioms: tuple[Formula, ...]
    axiom_texts: tuple[str, ...]
    families: dict[str, IndexedFunctionFamily] = field(default_factory=dict)

    @property
    def diagram(self) -> GDiagram:
        return GDiagram(self.facts, self.rules, self.equations)


@dataclass
class IntensionalTheory:
    name: Optional[str]
    refs: IndexSet
    entities: tuple[str, ...]
    concepts: tuple[IndividualConcept, ...]
    conceptsets: tuple[ConceptSet, ...]
    properties: dict[str, dict[tuple[int, int], str]]

    def build(self) -> IntensionalModel:
        return build_intensional_model(
            self.entities, self.refs, self.concepts, self.conceptsets, self.properties
        )


_EXTENSIONAL = {"sort", "const", "func", "pred", "fact", "rule", "equal", "axiom", "family"}
_INTENSIONAL = {"worlds", "times", "entity", "concept", "conceptset", "property"}


def parse_theory(text: str, name: Optional[str] = None) -> Union[Theory, IntensionalTheory]:
    lines = text.splitlines()
    kind: Optional[str] = None
    decls: list[tuple[int, str, str]] = []  # (lineno, keyword, rest)

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        if keyword in _EXTENSIONAL:
            this = "extensional"
        elif keyword in _INTENSIONAL:
            this = "intensional"
        else:
            raise ParseError(f"unknown declaration: {keyword}", lineno)
        if kind is None:
            kind = this
        elif kind != this:
            raise ParseError(
                f"cannot mix {this} clause '{keyword}' into an {kind} theory", lineno
            )
        decls.append((lineno, keyword, rest.strip()))

    if kind is None:
        raise ParseError("empty theory", 1)
    if kind == "intensional":
        return _finish_intensional(decls, name)
    return _finish_extensional(decls, name)


# --- extensional -----------------------------------------------------------

def _finish_extensional(decls: list[tuple[int, str, str]], name: Optional[str]) -> Theory:
    sorts: list[Sort] = []
    functions: list[FuncSymbol] = []
    predicates: list[PredSymbol] = []
    deferred: list[tuple[int, str, str]] = []

    def find_sort(sname: str, lineno: int) -> Sort:
        for s in sorts:
            if s.name == sname:
                return s
        raise ParseError(f"unknown sort: {sname}", lineno)

    for lineno, keyword, rest in decls:
        words = rest.split()
        if keyword == "sort":
            if len(words) != 1:
                raise ParseError("sort takes exactly one name", lineno)
            sorts.append(Sort(words[0]))
        elif keyword == "const":
            if ":" not in rest:
                raise ParseError("const needs ': <sort>'", lineno)
            names_part, _, sort_part = rest.rpartition(":")
            names = names_part.split()
            sort = find_sort(sort_part.strip(), lineno)
            if not names:
                raise ParseError("const needs at least one name", lineno)
            for n in names:
                functions.append(FuncSymbol(n, (), sort, True))
        elif keyword == "func":
            functions.append(_parse_func(rest, sorts, lineno, find_sort))
        elif keyword == "pred":
            predicates.append(_parse_pred(rest, lineno, find_sort))
        else:
            deferred.append((lineno, keyword, rest))

    sig = Signature(tuple(sorts), tuple(functions), tuple(predicates))

    facts: list[tuple[Atom, Truth3]] = []
    rules: list[DiagramRule] = []
    equations: list[tuple[Term, Term]] = []
    axioms: list[Formula] = []
    axiom_texts: list[str] = []
    families: dict[str, IndexedFunctionFamily] = {}

    for lineno, keyword, rest in deferred:
        offset = lineno - 1
        if keyword == "fact":
            facts.append(_parse_fact(rest, sig, offset))
        elif keyword == "rule":
            rules.append(_parse_rule(rest, sig, offset))
        elif keyword == "equal":
            equations.append(_parse_equal(rest, sig, offset))
        elif keyword == "axiom":
            axioms.append(parse_formula(rest, sig, offset))
            axiom_texts.append(rest)
        elif keyword == "family":
            fam = _parse_family(rest, sig, offset)
            families[fam.name] = fam

    return Theory(
        name=name,
        signature=sig,
        facts=tuple(facts),
        rules=tuple(rules),
        equations=tuple(equations),
        axioms=tuple(axioms),
        axiom_texts=tuple(axiom_texts),
        families=families,
    )


def _parse_func(rest: str, sorts: list[Sort], lineno: int, find_sort) -> FuncSymbol:
    head, sep, sig_part = rest.partition(":")
    if not sep:
        raise ParseError("func needs ': <args> -> <result>'", lineno)
    names = head.split()
    if len(names) != 1:
        raise ParseError("func takes exactly one name", lineno)
    arrow_lhs, sep, arrow_rhs = sig_part.partition("->")
    if not sep:
        raise ParseError("func needs '->' between argument and result sorts", lineno)
    arg_sorts = tuple(find_sort(w, lineno) for w in arrow_lhs.split())
    result_words = arrow_rhs.split()
    is_constructor = False
    if result_words and result_words[-1] == "constructor":
        is_constructor = True
        result_words = result_words[:-1]
    if len(result_words) != 1:
        raise ParseError("func needs exactly one result sort", lineno)
    return FuncSymbol(names[0], arg_sorts, find_sort(result_words[0], lineno), is_constructor)


def _parse_pred(rest: str, lineno: int, find_sort) -> PredSymbol:
    head, sep, sig_part = rest.partition(":")
    if not sep:
        raise ParseError("pred needs ': <arg sorts>'", lineno)
    names = head.split()
    if len(names) != 1:
        raise ParseError("pred takes exactly one name", lineno)
    words = sig_part.split()
    default = FALSE
    if "default" in words:
        at = words.index("default")
        if at != len(words) - 2 or words[at + 1] not in ("false", "unknown"):
            raise ParseError("pred default must be 'false' or 'unknown'", lineno)
        default = Truth3.from_name(words[at + 1])
        words = words[:at]
    arg_sorts = tuple(find_sort(w, lineno) for w in words)
    return PredSymbol(names[0], arg_sorts, default)


def _parse_fact(rest: str, sig: Signature, offset: int) -> tuple[Atom, Truth3]:
    ts = TokenStream(tokenize(rest, offset))
    parser = _Parser(ts, sig)
    from .formula import AtomFormula

    formula = parser.parse_atom()
    if not isinstance(formula, AtomFormula):
        tok = ts.peek()
        raise ParseError("fact needs a predicate atom", tok.line, tok.column)
    ts.expect("EQ", "'='")
    value_tok = ts.expect("IDENT", "a truth value")
    if value_tok.text not in ("true", "false", "unknown"):
        raise ParseError(
            f"not a truth value: {value_tok.text}", value_tok.line, value_tok.column
        )
    _expect_eof(ts)
    for a in formula.args:
        if not a.is_ground:
            raise ParseError("fact atoms must be ground", value_tok.line, value_tok.column)
    return Atom(formula.pred, formula.args), Truth3.from_name(value_tok.text)


def _parse_equal(rest: str, sig: Signature, offset: int) -> tuple[Term, Term]:
    ts = TokenStream(tokenize(rest, offset))
    parser = _Parser(ts, sig)
    lhs = parser.parse_term()
    rhs = parser.parse_term()
    tok = _expect_eof(ts)
    if lhs.sort != rhs.sort:
        raise ParseError(
            f"equation relates different sorts: {lhs.sort} vs {rhs.sort}", tok.line, 1
        )
    if not (lhs.is_ground and rhs.is_ground):
        raise ParseError("equations must be ground", tok.line, 1)
    return lhs, rhs


@dataclass
class _RawTerm:
    name: str
    args: list["_RawTerm"]
    line: int
    column: int


def _parse_raw_term(ts: TokenStream) -> _RawTerm:
    tok = ts.expect("IDENT", "a term")
    args: list[_RawTerm] = []
    if ts.peek().kind == "LPAREN":
        ts.next()
        args.append(_parse_raw_term(ts))
        while ts.peek().kind == "COMMA":
            ts.next()
            args.append(_parse_raw_term(ts))
        ts.expect("RPAREN", "')'")
    return _RawTerm(tok.text, args, tok.line, tok.column)


def _raw_sort(raw: _RawTerm, sig: Signature, env: dict[str, Sort]) -> Optional[Sort]:
    f = sig.function(raw.name)
    if f is not None:
        return f.result_sort
    return env.get(raw.name)


def _type_raw(raw: _RawTerm, expected: Sort, sig: Signature, env: dict[str, Sort]) -> Term:
    f = sig.function(raw.name)
    if f is not None:
        if f.result_sort != expected:
            raise ParseError(
                f"sort mismatch: {raw.name} : {f.result_sort} where {expected} expected",
                raw.line,
                raw.column,
            )
        if len(raw.args) != f.arity:
            raise ParseError(
                f"function {f.name} expects {f.arity} argument(s), got {len(raw.args)}",
                raw.line,
                raw.column,
            )
        return Term(f, tuple(_type_raw(a, s, sig, env) for a, s in zip(raw.args, f.arg_sorts)))
    if raw.args:
        raise ParseError(f"unknown function: {raw.name}", raw.line, raw.column)
    bound = env.get(raw.name)
    if bound is not None and bound != expected:
        raise ParseError(
            f"variable {raw.name} used at sorts {bound} and {expected}", raw.line, raw.column
        )
    env[raw.name] = expected
    return Term(Variable(raw.name, expected), ())


def _parse_rule(rest: str, sig: Signature, offset: int) -> DiagramRule:
    ts = TokenStream(tokenize(rest, offset))
    head = ts.expect("IDENT", "a predicate name")
    pred = sig.predicate(head.text)
    if pred is None:
        raise ParseError(f"unknown predicate: {head.text}", head.line, head.column)
    ts.expect("LPAREN", "'('")
    param_names: list[str] = []
    while True:
        tok = ts.expect("IDENT", "a variable name")
        if sig.function(tok.text) is not None:
            raise ParseError(
                f"rule patterns use variables, not symbols: {tok.text}", tok.line, tok.column
            )
        param_names.append(tok.text)
        if ts.peek().kind == "COMMA":
            ts.next()
            continue
        break
    ts.expect("RPAREN", "')'")
    if len(param_names) != pred.arity:
        raise ParseError(
            f"predicate {pred.name} expects {pred.arity} argument(s), got {len(param_names)}",
            head.line,
            head.column,
        )
    if len(set(param_names)) != len(param_names):
        raise ParseError("rule pattern variables must be distinct", head.line, head.column)
    params = [Variable(n, s) for n, s in zip(param_names, pred.arg_sorts)]
    ts.expect("EQ", "'='")
    value_tok = ts.expect("IDENT", "a truth value")
    if value_tok.text not in ("true", "false", "unknown"):
        raise ParseError(
            f"not a truth value: {value_tok.text}", value_tok.line, value_tok.column
        )
    when_tok = ts.expect("IDENT", "'when'")
    if when_tok.text != "when":
        raise ParseError("expected 'when'", when_tok.line, when_tok.column)

    env: dict[str, Sort] = {v.name: v.sort for v in params}
    guards: list[tuple[Term, Term]] = []
    while True:
        raw_lhs = _parse_raw_term(ts)
        ts.expect("EQ", "'='")
        raw_rhs = _parse_raw_term(ts)
        sort = _raw_sort(raw_lhs, sig, env) or _raw_sort(raw_rhs, sig, env)
        if sort is None:
            raise ParseError(
                "cannot infer the sort of a guard equation", raw_lhs.line, raw_lhs.column
            )
        lhs = _type_raw(raw_lhs, sort, sig, env)
        rhs = _type_raw(raw_rhs, sort, sig, env)
        guards.append((lhs, rhs))
        if ts.peek().kind == "AMP":
            ts.next()
            continue
        break
    _expect_eof(ts)
    return DiagramRule(pred, tuple(params), Truth3.from_name(value_tok.text), tuple(guards))


def _parse_family(rest: str, sig: Signature, offset: int) -> IndexedFunctionFamily:
    ts = TokenStream(tokenize(rest, offset))
    name = ts.expect("IDENT", "a family name")
    ts.expect("EQ", "'='")
    members: list[tuple[str, PredSymbol]] = []
    while ts.peek().kind == "IDENT":
        idx = ts.next()
        ts.expect("COLON", "':'")
        pred_tok = ts.expect("IDENT", "a predicate name")
        pred = sig.predicate(pred_tok.text)
        if pred is None:
            raise ParseError(
                f"unknown predicate: {pred_tok.text}", pred_tok.line, pred_tok.column
            )
        members.append((idx.text, pred))
    _expect_eof(ts)
    if not members:
        raise ParseError("family needs at least one member", name.line, name.column)
    return IndexedFunctionFamily(name.text, tuple(members))


def _expect_eof(ts: TokenStream):
    tok = ts.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected trailing input: {tok.text!r}", tok.line, tok.column)
    return tok


# --- intensional -----------------------------------------------------------

def _finish_intensional(
    decls: list[tuple[int, str, str]], name: Optional[str]
) -> IntensionalTheory:
    worlds: list[str] = []
    times: list[str] = []
    entities: list[str] = []
    concept_raw: list[tuple[int, str, list[tuple[str, str]]]] = []
    sets: list[ConceptSet] = []
    property_raw: list[tuple[int, str, list[tuple[str, str]]]] = []

    for lineno, keyword, rest in decls:
        if keyword == "worlds":
            worlds.extend(rest.split())
        elif keyword == "times":
            times.extend(rest.split())
        elif keyword == "entity":
            entities.extend(rest.split())
        elif keyword == "concept":
            cname, pairs = _parse_assignment(rest, lineno, "concept")
            concept_raw.append((lineno, cname, pairs))
        elif keyword == "conceptset":
            sname, _, body = rest.partition("=")
            sname = sname.strip()
            if not sname:
                raise ParseError("conceptset needs a name", lineno)
            members: list[str] = []
            unknowns: list[str] = []
            for word in body.split():
                if word.endswith("?"):
                    unknowns.append(word[:-1])
                else:
                    members.append(word)
            sets.append(ConceptSet(sname, tuple(members), tuple(unknowns)))
        elif keyword == "property":
            pname, pairs = _parse_assignment(rest, lineno, "property")
            property_raw.append((lineno, pname, pairs))

    if not worlds:
        raise ParseError("intensional theory needs a worlds clause", 1)
    if not times:
        times = ["t0"]
    refs = IndexSet(tuple(worlds), tuple(times))

    concepts = []
    for lineno, cname, pairs in concept_raw:
        graph = _expand_points(refs, pairs, lineno, f"concept {cname}")
        concepts.append(
            IndividualConcept(
                cname,
                tuple(graph[(i, j)] for i in range(len(worlds)) for j in range(len(times))),
            )
        )

    properties: dict[str, dict[tuple[int, int], str]] = {}
    for lineno, pname, pairs in property_raw:
        table = _expand_points(refs, pairs, lineno, f"property {pname}", require_total=False)
        properties[pname] = table

    return IntensionalTheory(
        name=name,
        refs=refs,
        entities=tuple(entities),
        concepts=tuple(concepts),
        conceptsets=tuple(sets),
        properties=properties,
    )


def _parse_assignment(rest: str, lineno: int, what: str) -> tuple[str, list[tuple[str, str]]]:
    name, sep, body = rest.partition("=")
    name = name.strip()
    if not sep or not name:
        raise ParseError(f"{what} needs '<name> = <key>:<value> ...'", lineno)
    pairs: list[tuple[str, str]] = []
    for word in body.split():
        key, sep, value = word.partition(":")
        if not sep or not key or not value:
            raise ParseError(f"bad {what} entry: {word!r}", lineno)
        pairs.append((key, value))
    if not pairs:
        raise ParseError(f"{what} needs at least one entry", lineno)
    return name, pairs


def _expand_points(
    refs: IndexSet,
    pairs: list[tuple[str, str]],
    lineno: int,
    what: str,
    require_total: bool = True,
) -> dict[tuple[int, int], str]:
    table: dict[tuple[int, int], str] = {}
    for key, value in pairs:
        world_part, sep, time_part = key.partition(".")
        if world_part not in refs.worlds:
            raise ParseError(f"{what}: unknown world {world_part}", lineno)
        i = refs.worlds.index(world_part)
        if sep:
            if time_part not in refs.times:
                raise ParseError(f"{what}: unknown time {time_part}", lineno)
            table[(i, refs.times.index(time_part))] = value
        else:
            for j in range(len(refs.times)):
                table.setdefault((i, j), value)
    for i, w in enumerate(refs.worlds):
        for j, t in enumerate(refs.times):
            if (i, j) not in table:
                raise ParseError(f"{what} has no value at ({w},{t})", lineno)
    return table
