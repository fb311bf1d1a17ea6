"""Three-valued truth and the strong Kleene connectives.

A definite operand decides the result whenever it can: False dominates
conjunction, True dominates disjunction, and Unknown propagates otherwise.
This keeps every connective monotone when Unknown is refined to a definite
value, which the expansion engine relies on.
"""
from __future__ import annotations

import enum
from typing import Iterable


class Truth3(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value

    @property
    def is_definite(self) -> bool:
        return self is not Truth3.UNKNOWN

    @classmethod
    def from_bool(cls, flag: bool) -> Truth3:
        return cls.TRUE if flag else cls.FALSE

    @classmethod
    def from_name(cls, name: str) -> Truth3:
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"not a truth value: {name!r}") from None


TRUE = Truth3.TRUE
FALSE = Truth3.FALSE
UNKNOWN = Truth3.UNKNOWN


def kleene_not(a: Truth3) -> Truth3:
    if a is TRUE:
        return FALSE
    if a is FALSE:
        return TRUE
    return UNKNOWN


def kleene_and(a: Truth3, b: Truth3) -> Truth3:
    if a is FALSE or b is FALSE:
        return FALSE
    if a is UNKNOWN or b is UNKNOWN:
        return UNKNOWN
    return TRUE


def kleene_or(a: Truth3, b: Truth3) -> Truth3:
    if a is TRUE or b is TRUE:
        return TRUE
    if a is UNKNOWN or b is UNKNOWN:
        return UNKNOWN
    return FALSE


def kleene_implies(a: Truth3, b: Truth3) -> Truth3:
    return kleene_or(kleene_not(a), b)


def kleene_all(values: Iterable[Truth3]) -> Truth3:
    result = TRUE
    for v in values:
        result = kleene_and(result, v)
    return result


def kleene_any(values: Iterable[Truth3]) -> Truth3:
    result = FALSE
    for v in values:
        result = kleene_or(result, v)
    return result
