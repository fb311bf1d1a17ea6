"""Sorts, symbols, terms, and generation of the finite term universe.

Universe elements are the ground terms built from constructor symbols only.
Term enumeration is stratified by nesting depth so that the list produced at
depth d is always a prefix of the list at depth d+1; inside one stratum terms
are ordered by head declaration order and then argument order. That order is
part of the contract: witness selection during evaluation depends on it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union

from .errors import ResourceLimitError
from .truth import Truth3

MAX_GENERATION_DEPTH = 8
MAX_UNIVERSE_TERMS = 200_000


@dataclass(frozen=True)
class Sort:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Variable:
    name: str
    sort: Sort

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FuncSymbol:
    name: str
    arg_sorts: tuple[Sort, ...]
    result_sort: Sort
    is_constructor: bool = True

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    @property
    def is_constant(self) -> bool:
        return not self.arg_sorts

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PredSymbol:
    name: str
    arg_sorts: tuple[Sort, ...]
    default: Truth3 = Truth3.FALSE

    def __post_init__(self) -> None:
        if self.default is Truth3.TRUE:
            raise ValueError("predicate default must be false or unknown")

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Term:
    head: Union[FuncSymbol, Variable]
    args: tuple["Term", ...] = ()

    @property
    def sort(self) -> Sort:
        if isinstance(self.head, Variable):
            return self.head.sort
        return self.head.result_sort

    @property
    def is_ground(self) -> bool:
        if isinstance(self.head, Variable):
            return False
        return all(a.is_ground for a in self.args)

    def variables(self) -> set[Variable]:
        if isinstance(self.head, Variable):
            return {self.head}
        out: set[Variable] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def subterms(self) -> Iterator["Term"]:
        yield self
        for a in self.args:
            yield from a.subterms()

    def depth(self) -> int:
        if not self.args:
            return 0
        return 1 + max(a.depth() for a in self.args)

    def substitute(self, env: dict[str, "Term"]) -> "Term":
        if isinstance(self.head, Variable):
            return env.get(self.head.name, self)
        if not self.args:
            return self
        return Term(self.head, tuple(a.substitute(env) for a in self.args))

    def __str__(self) -> str:
        if not self.args:
            return str(self.head)
        return f"{self.head}({','.join(str(a) for a in self.args)})"


def const_term(symbol: FuncSymbol) -> Term:
    return Term(symbol, ())


@dataclass(frozen=True)
class Signature:
    sorts: tuple[Sort, ...] = ()
    functions: tuple[FuncSymbol, ...] = ()
    predicates: tuple[PredSymbol, ...] = ()

    def sort(self, name: str) -> Optional[Sort]:
        for s in self.sorts:
            if s.name == name:
                return s
        return None

    def function(self, name: str) -> Optional[FuncSymbol]:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def predicate(self, name: str) -> Optional[PredSymbol]:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def constructors(self) -> tuple[FuncSymbol, ...]:
        return tuple(f for f in self.functions if f.is_constructor)


def inhabited_sorts(sig: Signature) -> set[Sort]:
    """Sorts whose universe is non-empty at some finite depth."""
    inhabited: set[Sort] = set()
    changed = True
    while changed:
        changed = False
        for f in sig.constructors():
            if f.result_sort in inhabited:
                continue
            if all(s in inhabited for s in f.arg_sorts):
                inhabited.add(f.result_sort)
                changed = True
    return inhabited


def validate_signature(sig: Signature) -> list[str]:
    """Return diagnostics; an empty list means the signature is usable."""
    diags: list[str] = []
    seen_sorts: set[str] = set()
    for s in sig.sorts:
        if s.name in seen_sorts:
            diags.append(f"duplicate sort: {s.name}")
        seen_sorts.add(s.name)

    seen_symbols: set[str] = set()
    for sym in (*sig.functions, *sig.predicates):
        if sym.name in seen_symbols:
            diags.append(f"duplicate symbol: {sym.name}")
        seen_symbols.add(sym.name)

    declared = set(sig.sorts)
    for f in sig.functions:
        for s in (*f.arg_sorts, f.result_sort):
            if s not in declared:
                diags.append(f"unknown sort: {s.name} (symbol {f.name})")
    for p in sig.predicates:
        for s in p.arg_sorts:
            if s not in declared:
                diags.append(f"unknown sort: {s.name} (predicate {p.name})")

    livable = inhabited_sorts(sig)
    for p in sig.predicates:
        for s in p.arg_sorts:
            if s in declared and s not in livable:
                diags.append(f"uninhabited sort: {s.name} (predicate {p.name})")
    return diags


@lru_cache(maxsize=128)
def _strata(sig: Signature, depth: int) -> dict[Sort, tuple[tuple[Term, ...], ...]]:
    """Per sort, the tuple of depth strata 0..depth (exact-depth term lists)."""
    strata: dict[Sort, list[tuple[Term, ...]]] = {s: [] for s in sig.sorts}
    exact: dict[Term, int] = {}
    total = 0

    for s in sig.sorts:
        level0 = tuple(
            const_term(f) for f in sig.constructors() if f.is_constant and f.result_sort == s
        )
        strata[s].append(level0)
        for t in level0:
            exact[t] = 0
        total += len(level0)

    for k in range(1, depth + 1):
        new_level: dict[Sort, list[Term]] = {s: [] for s in sig.sorts}
        for f in sig.constructors():
            if f.is_constant:
                continue
            pools = []
            for s in f.arg_sorts:
                pools.append([t for lvl in strata[s][:k] for t in lvl])
            for combo in itertools.product(*pools):
                if combo and max(exact[t] for t in combo) == k - 1:
                    term = Term(f, combo)
                    exact[term] = k
                    new_level[f.result_sort].append(term)
                    total += 1
                    if total > MAX_UNIVERSE_TERMS:
                        raise ResourceLimitError(
                            f"universe exceeds {MAX_UNIVERSE_TERMS} terms at depth {k}"
                        )
        for s in sig.sorts:
            strata[s].append(tuple(new_level[s]))

    return {s: tuple(levels) for s, levels in strata.items()}


def generate_terms(sig: Signature, sort: Sort, depth: int) -> list[Term]:
    """All ground constructor terms of `sort` with nesting depth <= depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth > MAX_GENERATION_DEPTH:
        raise ResourceLimitError(
            f"depth {depth} exceeds the generation bound {MAX_GENERATION_DEPTH}"
        )
    strata = _strata(sig, depth)
    if sort not in strata:
        return []
    return [t for level in strata[sort] for t in level]
