"""Line-oriented report rendering shared by the REPL and the wire interface.

Partial sets render with the '?' convention: definite members plain,
unknowns suffixed with '?', non-members omitted, e.g. {J, M, B?}.
"""
from __future__ import annotations

from typing import Union

from .diagram import Model, PartialSet
from .intension import IntensionalModel, CONCEPT_SORT
from .signature import Term


def tuple_label(tup: tuple[Term, ...]) -> str:
    if len(tup) == 1:
        return str(tup[0])
    return "(" + ",".join(str(t) for t in tup) + ")"


def render_partial_set(ps: PartialSet, ordered_tuples: list[tuple[Term, ...]]) -> str:
    entries = [tuple_label(t) for t in ordered_tuples if t in ps.members]
    entries += [tuple_label(t) + "?" for t in ordered_tuples if t in ps.unknowns]
    return "{" + ", ".join(entries) + "}"


def render_model(model: Union[Model, IntensionalModel]) -> str:
    if isinstance(model, IntensionalModel):
        return _render_intensional(model)
    return _render_extensional(model)


def _render_extensional(model: Model) -> str:
    lines = ["MODEL", f"DEPTH: {model.depth}"]
    for sort in model.signature.sorts:
        terms = ", ".join(str(t) for t in model.universe(sort))
        lines.append(f"SORT {sort.name}: {terms}")
    for pred in model.signature.predicates:
        ordered = model.tuples_for(pred)
        lines.append(f"PRED {pred.name}: {render_partial_set(model.denotations[pred], ordered)}")
    return "\n".join(lines)


def _render_intensional(model: IntensionalModel) -> str:
    refs = model.refs
    lines = [
        "MODEL",
        f"WORLDS: {', '.join(refs.worlds)}",
        f"TIMES: {', '.join(refs.times)}",
        f"SORT entity: {', '.join(model.entities)}",
        f"SORT concept: {', '.join(c.name for c in model.concepts)}",
    ]
    ordered = [(t,) for t in model.universe(CONCEPT_SORT)]
    for pred in model.signature.predicates:
        per_time_constant = True
        world_sets = []
        for i in range(len(refs.worlds)):
            sets = [model.partial_set(pred.name, i, j) for j in range(len(refs.times))]
            if any(s != sets[0] for s in sets[1:]):
                per_time_constant = False
            world_sets.append(sets)
        if per_time_constant:
            for i, world in enumerate(refs.worlds):
                lines.append(
                    f"PRED {pred.name} @{world}: {render_partial_set(world_sets[i][0], ordered)}"
                )
        else:
            for i, world in enumerate(refs.worlds):
                for j, time in enumerate(refs.times):
                    lines.append(
                        f"PRED {pred.name} @{world}.{time}: "
                        f"{render_partial_set(world_sets[i][j], ordered)}"
                    )
    return "\n".join(lines)


def render_worlds(model: Union[Model, IntensionalModel]) -> str:
    idx = model.index_set
    return f"WORLDS: {', '.join(idx.worlds)}\nTIMES: {', '.join(idx.times)}"
