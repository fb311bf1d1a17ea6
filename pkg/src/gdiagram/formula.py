"""Formula AST, concrete-syntax parser, and renderer.

Grammar (whitespace-insensitive):

    formula := quant | impl
    quant   := ("exists"|"forall") IDENT ":" IDENT "." formula
             | ("nec"|"past"|"fut") formula
    impl    := disj ("->" impl)?
    disj    := conj ("|" conj)*
    conj    := neg ("&" neg)*
    neg     := "~" neg | "(" formula ")" | atom
    atom    := IDENT "(" term ("," term)* ")" | term "=" term
    term    := IDENT ("(" term ("," term)* ")")?

~ binds tightest, then &, then |, then -> (right-associative); quantifiers
and the modal operators take the loosest scope to their right. A bare IDENT
naming a nullary predicate is accepted as a propositional atom.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import ParseError, SortError
from .signature import PredSymbol, Signature, Sort, Term, Variable

KEYWORDS = {"exists", "forall", "nec", "past", "fut"}


@dataclass(frozen=True)
class AtomFormula:
    pred: PredSymbol
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Variable
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Variable
    body: "Formula"


@dataclass(frozen=True)
class Nec:
    body: "Formula"


@dataclass(frozen=True)
class Past:
    body: "Formula"


@dataclass(frozen=True)
class Fut:
    body: "Formula"


Formula = Union[
    AtomFormula, Equation, Not, And, Or, Implies, Exists, Forall, Nec, Past, Fut
]

_MODAL = {"nec": Nec, "past": Past, "fut": Fut}


# --- tokenizer -------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_PUNCT = {
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    ":": "COLON",
    ".": "DOT",
    "~": "TILDE",
    "&": "AMP",
    "|": "PIPE",
    "=": "EQ",
}


def tokenize(text: str, line_offset: int = 0) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("->", i):
            tokens.append(Token("ARROW", "->", line + line_offset, col))
            i += 2
            col += 2
            continue
        if c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, line + line_offset, col))
            i += 1
            col += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", text[i:j], line + line_offset, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line + line_offset, col)
    tokens.append(Token("EOF", "", line + line_offset, col))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}",
                tok.line,
                tok.column,
            )
        return self.next()


# --- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, stream: TokenStream, sig: Signature) -> None:
        self.ts = stream
        self.sig = sig
        self.scope: list[Variable] = []

    def lookup_var(self, name: str) -> Optional[Variable]:
        for v in reversed(self.scope):
            if v.name == name:
                return v
        return None

    def parse_formula(self) -> Formula:
        tok = self.ts.peek()
        if tok.kind == "IDENT" and tok.text in ("exists", "forall"):
            self.ts.next()
            name_tok = self.ts.expect("IDENT", "variable name")
            self.ts.expect("COLON", "':'")
            sort_tok = self.ts.expect("IDENT", "sort name")
            sort = self.sig.sort(sort_tok.text)
            if sort is None:
                raise ParseError(f"unknown sort: {sort_tok.text}", sort_tok.line, sort_tok.column)
            self.ts.expect("DOT", "'.'")
            var = Variable(name_tok.text, sort)
            self.scope.append(var)
            body = self.parse_formula()
            self.scope.pop()
            return (Exists if tok.text == "exists" else Forall)(var, body)
        if tok.kind == "IDENT" and tok.text in _MODAL:
            self.ts.next()
            return _MODAL[tok.text](self.parse_formula())
        return self.parse_impl()

    def parse_impl(self) -> Formula:
        left = self.parse_disj()
        if self.ts.peek().kind == "ARROW":
            self.ts.next()
            return Implies(left, self.parse_impl())
        return left

    def parse_disj(self) -> Formula:
        f = self.parse_conj()
        while self.ts.peek().kind == "PIPE":
            self.ts.next()
            f = Or(f, self.parse_conj())
        return f

    def parse_conj(self) -> Formula:
        f = self.parse_neg()
        while self.ts.peek().kind == "AMP":
            self.ts.next()
            f = And(f, self.parse_neg())
        return f

    def parse_neg(self) -> Formula:
        tok = self.ts.peek()
        if tok.kind == "TILDE":
            self.ts.next()
            return Not(self.parse_neg())
        if tok.kind == "LPAREN":
            self.ts.next()
            f = self.parse_formula()
            self.ts.expect("RPAREN", "')'")
            return f
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.ts.peek()
        if tok.kind != "IDENT":
            raise ParseError(
                f"expected a formula, found {tok.text!r}" if tok.text else "unexpected end of input",
                tok.line,
                tok.column,
            )
        if tok.text in KEYWORDS:
            # quantifier in operand position: only valid parenthesized
            raise ParseError(f"misplaced keyword {tok.text!r}", tok.line, tok.column)
        pred = self.sig.predicate(tok.text)
        if pred is not None and self.lookup_var(tok.text) is None:
            self.ts.next()
            args: tuple[Term, ...] = ()
            if self.ts.peek().kind == "LPAREN":
                args = self.parse_term_args()
            if len(args) != pred.arity:
                raise ParseError(
                    f"predicate {pred.name} expects {pred.arity} argument(s), got {len(args)}",
                    tok.line,
                    tok.column,
                )
            for a, s in zip(args, pred.arg_sorts):
                if a.sort != s:
                    raise ParseError(
                        f"sort mismatch: {a} : {a.sort} where {s} expected",
                        tok.line,
                        tok.column,
                    )
            return AtomFormula(pred, args)
        lhs = self.parse_term()
        eq = self.ts.peek()
        if eq.kind != "EQ":
            raise ParseError(
                f"expected '=' after term {lhs}", eq.line, eq.column
            )
        self.ts.next()
        rhs = self.parse_term()
        if lhs.sort != rhs.sort:
            raise ParseError(
                f"sort mismatch in equation: {lhs.sort} = {rhs.sort}", tok.line, tok.column
            )
        return Equation(lhs, rhs)

    def parse_term_args(self) -> tuple[Term, ...]:
        self.ts.expect("LPAREN", "'('")
        args = [self.parse_term()]
        while self.ts.peek().kind == "COMMA":
            self.ts.next()
            args.append(self.parse_term())
        self.ts.expect("RPAREN", "')'")
        return tuple(args)

    def parse_term(self) -> Term:
        tok = self.ts.expect("IDENT", "a term")
        var = self.lookup_var(tok.text)
        if var is not None:
            return Term(var, ())
        func = self.sig.function(tok.text)
        if func is None:
            raise ParseError(
                f"unknown symbol or unbound variable: {tok.text}", tok.line, tok.column
            )
        args: tuple[Term, ...] = ()
        if self.ts.peek().kind == "LPAREN":
            args = self.parse_term_args()
        if len(args) != func.arity:
            raise ParseError(
                f"function {func.name} expects {func.arity} argument(s), got {len(args)}",
                tok.line,
                tok.column,
            )
        for a, s in zip(args, func.arg_sorts):
            if a.sort != s:
                raise ParseError(
                    f"sort mismatch: {a} : {a.sort} where {s} expected", tok.line, tok.column
                )
        return Term(func, args)


def parse_formula(text: str, sig: Signature, line_offset: int = 0) -> Formula:
    """Parse a closed formula against a signature."""
    ts = TokenStream(tokenize(text, line_offset))
    parser = _Parser(ts, sig)
    f = parser.parse_formula()
    tail = ts.peek()
    if tail.kind != "EOF":
        raise ParseError(f"unexpected trailing input: {tail.text!r}", tail.line, tail.column)
    return f


def parse_term(text: str, sig: Signature, line_offset: int = 0) -> Term:
    """Parse a single ground term."""
    ts = TokenStream(tokenize(text, line_offset))
    parser = _Parser(ts, sig)
    t = parser.parse_term()
    tail = ts.peek()
    if tail.kind != "EOF":
        raise ParseError(f"unexpected trailing input: {tail.text!r}", tail.line, tail.column)
    return t


def parse_atom_text(text: str, sig: Signature, line_offset: int = 0):
    """Parse a single predicate atom (no connectives)."""
    ts = TokenStream(tokenize(text, line_offset))
    parser = _Parser(ts, sig)
    f = parser.parse_atom()
    tail = ts.peek()
    if tail.kind != "EOF":
        raise ParseError(f"unexpected trailing input: {tail.text!r}", tail.line, tail.column)
    if not isinstance(f, AtomFormula):
        raise ParseError("expected a predicate atom", 1 + line_offset, 1)
    return f


# --- rendering -------------------------------------------------------------

_PREC = {
    AtomFormula: 5,
    Equation: 5,
    Not: 4,
    And: 3,
    Or: 2,
    Implies: 1,
    Exists: 0,
    Forall: 0,
    Nec: 0,
    Past: 0,
    Fut: 0,
}


def render(f: Formula) -> str:
    """Render a formula; parse(render(f)) is structurally identical to f."""
    return _render(f, 0)


def _render(f: Formula, req: int) -> str:
    prec = _PREC[type(f)]
    if isinstance(f, AtomFormula):
        s = f.pred.name if not f.args else f"{f.pred.name}({','.join(map(str, f.args))})"
    elif isinstance(f, Equation):
        s = f"{f.lhs} = {f.rhs}"
    elif isinstance(f, Not):
        s = "~" + _render(f.body, 4)
    elif isinstance(f, And):
        s = _render(f.left, 3) + " & " + _render(f.right, 4)
    elif isinstance(f, Or):
        s = _render(f.left, 2) + " | " + _render(f.right, 3)
    elif isinstance(f, Implies):
        s = _render(f.left, 2) + " -> " + _render(f.right, 1)
    elif isinstance(f, (Exists, Forall)):
        word = "exists" if isinstance(f, Exists) else "forall"
        s = f"{word} {f.var.name}:{f.var.sort}. " + _render(f.body, 0)
    else:
        word = {Nec: "nec", Past: "past", Fut: "fut"}[type(f)]
        s = f"{word} " + _render(f.body, 0)
    if prec < req:
        return "(" + s + ")"
    return s


def substitute(f: Formula, env: dict[str, Term]) -> Formula:
    """Capture-avoiding substitution of variables by ground terms."""
    if isinstance(f, AtomFormula):
        return AtomFormula(f.pred, tuple(a.substitute(env) for a in f.args))
    if isinstance(f, Equation):
        return Equation(f.lhs.substitute(env), f.rhs.substitute(env))
    if isinstance(f, Not):
        return Not(substitute(f.body, env))
    if isinstance(f, And):
        return And(substitute(f.left, env), substitute(f.right, env))
    if isinstance(f, Or):
        return Or(substitute(f.left, env), substitute(f.right, env))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, env), substitute(f.right, env))
    if isinstance(f, (Exists, Forall)):
        inner = {k: v for k, v in env.items() if k != f.var.name}
        return type(f)(f.var, substitute(f.body, inner))
    if isinstance(f, (Nec, Past, Fut)):
        return type(f)(substitute(f.body, env))
    raise TypeError(f"not a formula: {f!r}")


def free_variables(f: Formula, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(f, AtomFormula):
        return {v.name for a in f.args for v in a.variables() if v.name not in bound}
    if isinstance(f, Equation):
        return {
            v.name
            for t in (f.lhs, f.rhs)
            for v in t.variables()
            if v.name not in bound
        }
    if isinstance(f, Not):
        return free_variables(f.body, bound)
    if isinstance(f, (And, Or, Implies)):
        return free_variables(f.left, bound) | free_variables(f.right, bound)
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body, bound | {f.var.name})
    if isinstance(f, (Nec, Past, Fut)):
        return free_variables(f.body, bound)
    raise TypeError(f"not a formula: {f!r}")


# --- indexed function families ---------------------------------------------

@dataclass(frozen=True)
class IndexedFunctionFamily:
    """A named family of unary predicates sharing one argument sort.

    Applying a member to an element produces a membership atom; the element
    is checked against the member predicate's denotation, so application
    behaves as a choice-then-membership test rather than lambda abstraction.
    """

    name: str
    members: tuple[tuple[str, PredSymbol], ...]

    def __post_init__(self) -> None:
        profiles = {p.arg_sorts for _, p in self.members}
        if len(profiles) > 1:
            raise SortError(f"family {self.name}: members have different sort profiles")
        for _, p in self.members:
            if p.arity != 1:
                raise SortError(f"family {self.name}: member {p.name} is not unary")

    def member(self, index: str) -> Optional[PredSymbol]:
        for idx, p in self.members:
            if idx == index:
                return p
        return None


def apply_family(family: IndexedFunctionFamily, index: str, element: Term):
    """Resolve a family member at `index` and apply it to `element`."""
    from .diagram import Atom

    pred = family.member(index)
    if pred is None:
        raise SortError(f"family {family.name} has no member at index {index!r}")
    if element.sort != pred.arg_sorts[0]:
        raise SortError(
            f"sort mismatch: {element} : {element.sort} where {pred.arg_sorts[0]} expected"
        )
    return Atom(pred, (element,))
