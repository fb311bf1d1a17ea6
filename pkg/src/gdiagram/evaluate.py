"""Three-valued formula evaluation at a point of reference.

Two existential-witness modes: `exhaustive` searches every universe class;
`paper` instantiates a single Skolem witness, the first term of the sort in
generation order not yet used as a witness within the current evaluation.
Universal quantifiers always sweep the whole universe in both modes. The
modal operators range over the time column of the current world.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .diagram import Atom, Model
from .errors import CommandError, EngineError, UninhabitedSortError
from .formula import (
    And,
    AtomFormula,
    Equation,
    Exists,
    Forall,
    Formula,
    Fut,
    Implies,
    Nec,
    Not,
    Or,
    Past,
    free_variables,
    render,
    substitute,
)
from .signature import Sort, Term
from .truth import (
    FALSE,
    TRUE,
    UNKNOWN,
    Truth3,
    kleene_all,
    kleene_and,
    kleene_any,
    kleene_implies,
    kleene_not,
    kleene_or,
)

Mode = str  # "paper" | "exhaustive"

ModelLike = Union[Model, "IntensionalModel"]  # anything with universe/lookup/index_set


@dataclass(frozen=True)
class PointOfReference:
    world: int
    time: int


@dataclass
class EvalTrace:
    """One node per subformula, mirroring the AST of what was evaluated."""

    formula: Formula
    value: Truth3
    point: tuple[str, str]
    witness: Optional[Term] = None
    children: list["EvalTrace"] = field(default_factory=list)

    def render_lines(self, indent: int = 0) -> list[str]:
        mark = f" [witness={self.witness}]" if self.witness is not None else ""
        line = (
            "  " * indent
            + f"{self.value} {render(self.formula)} @({self.point[0]},{self.point[1]}){mark}"
        )
        out = [line]
        for child in self.children:
            out.extend(child.render_lines(indent + 1))
        return out

    def render(self) -> str:
        return "\n".join(self.render_lines())

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


class _Ctx:
    def __init__(self, mode: Mode) -> None:
        if mode not in ("paper", "exhaustive"):
            raise CommandError(f"unknown evaluation mode: {mode}")
        self.mode = mode
        self.used: dict[Sort, set[Term]] = {}

    def pick_witness(self, sort: Sort, domain: tuple[Term, ...]) -> Term:
        used = self.used.setdefault(sort, set())
        for t in domain:
            if t not in used:
                used.add(t)
                return t
        return domain[0]  # every term already used: reuse the first


def _point_names(model: ModelLike, at: PointOfReference) -> tuple[str, str]:
    idx = model.index_set
    return (idx.worlds[at.world], idx.times[at.time])


def _check_point(model: ModelLike, at: PointOfReference) -> None:
    idx = model.index_set
    if not (0 <= at.world < len(idx.worlds)) or not (0 <= at.time < len(idx.times)):
        raise EngineError(f"point of reference out of range: ({at.world},{at.time})")


def eval_formula(
    model: ModelLike,
    f: Formula,
    at: Optional[PointOfReference] = None,
    mode: Mode = "paper",
) -> tuple[Truth3, EvalTrace]:
    """Evaluate a closed formula; returns its value and the full trace."""
    free = free_variables(f)
    if free:
        raise EngineError(f"formula is not closed; free variables: {', '.join(sorted(free))}")
    point = at if at is not None else PointOfReference(0, 0)
    _check_point(model, point)
    ctx = _Ctx(mode)
    trace = _eval(model, f, point, ctx)
    return trace.value, trace


def _eval(model: ModelLike, f: Formula, at: PointOfReference, ctx: _Ctx) -> EvalTrace:
    names = _point_names(model, at)

    if isinstance(f, AtomFormula):
        atom = Atom(f.pred, tuple(model.canon(a) for a in f.args))
        return EvalTrace(f, model.lookup(atom, at), names)

    if isinstance(f, Equation):
        same = model.canon(f.lhs) == model.canon(f.rhs)
        return EvalTrace(f, Truth3.from_bool(same), names)

    if isinstance(f, Not):
        child = _eval(model, f.body, at, ctx)
        return EvalTrace(f, kleene_not(child.value), names, children=[child])

    if isinstance(f, (And, Or, Implies)):
        left = _eval(model, f.left, at, ctx)
        right = _eval(model, f.right, at, ctx)
        op = {And: kleene_and, Or: kleene_or, Implies: kleene_implies}[type(f)]
        return EvalTrace(f, op(left.value, right.value), names, children=[left, right])

    if isinstance(f, Forall):
        domain = model.universe(f.var.sort)
        if not domain:
            raise UninhabitedSortError(f"uninhabited sort: {f.var.sort}")
        children = []
        counterexample = None
        for t in domain:
            child = _eval(model, substitute(f.body, {f.var.name: t}), at, ctx)
            children.append(child)
            if counterexample is None and child.value is FALSE:
                counterexample = t
        value = kleene_all(c.value for c in children)
        return EvalTrace(f, value, names, witness=counterexample, children=children)

    if isinstance(f, Exists):
        domain = model.universe(f.var.sort)
        if not domain:
            raise UninhabitedSortError(f"uninhabited sort: {f.var.sort}")
        if ctx.mode == "paper":
            witness = ctx.pick_witness(f.var.sort, domain)
            child = _eval(model, substitute(f.body, {f.var.name: witness}), at, ctx)
            return EvalTrace(f, child.value, names, witness=witness, children=[child])
        children = []
        witness = None
        for t in domain:
            child = _eval(model, substitute(f.body, {f.var.name: t}), at, ctx)
            children.append(child)
            if witness is None and child.value is TRUE:
                witness = t
        value = kleene_any(c.value for c in children)
        return EvalTrace(f, value, names, witness=witness, children=children)

    if isinstance(f, (Nec, Past, Fut)):
        times = model.index_set.times
        if isinstance(f, Nec):
            span = range(len(times))
        elif isinstance(f, Past):
            span = range(0, at.time)
        else:
            span = range(at.time + 1, len(times))
        children = [
            _eval(model, f.body, PointOfReference(at.world, j), ctx) for j in span
        ]
        if isinstance(f, Nec):
            value = kleene_all(c.value for c in children)
        else:
            value = kleene_any(c.value for c in children)
        return EvalTrace(f, value, names, children=children)

    raise TypeError(f"not a formula: {f!r}")


def eval_modal(
    model: ModelLike,
    op: str,
    body: Formula,
    at: Optional[PointOfReference] = None,
    mode: Mode = "paper",
) -> Truth3:
    """Evaluate nec/past/fut applied to `body` at a point of reference."""
    wrapper = {"nec": Nec, "past": Past, "fut": Fut}.get(op)
    if wrapper is None:
        raise CommandError(f"unknown modal operator: {op}")
    value, _ = eval_formula(model, wrapper(body), at, mode)
    return value


def skolemize_existential(f: Formula, model: ModelLike) -> tuple[Formula, Term]:
    """Instantiate a top-level existential with its Skolem witness."""
    if not isinstance(f, Exists):
        raise EngineError("skolemize_existential expects an existential formula")
    domain = model.universe(f.var.sort)
    if not domain:
        raise UninhabitedSortError(f"uninhabited sort: {f.var.sort}")
    witness = domain[0]
    return substitute(f.body, {f.var.name: witness}), witness


def truth_set(
    model: ModelLike,
    f: Formula,
    time: int = 0,
    mode: Mode = "paper",
) -> set[str]:
    """Worlds at which the formula evaluates to True at the given time.

    Worlds where the value is Unknown are excluded. In paper mode a single
    witness context is threaded through the world sweep, so each world's
    existentials skolemize with the next unused term in generation order.
    """
    free = free_variables(f)
    if free:
        raise EngineError(f"formula is not closed; free variables: {', '.join(sorted(free))}")
    idx = model.index_set
    if not (0 <= time < len(idx.times)):
        raise EngineError(f"time index out of range: {time}")
    ctx = _Ctx(mode)
    worlds: set[str] = set()
    for i, name in enumerate(idx.worlds):
        trace = _eval(model, f, PointOfReference(i, time), ctx)
        if trace.value is TRUE:
            worlds.add(name)
    return worlds


def first_unknown_atom(trace: EvalTrace) -> Optional[EvalTrace]:
    """First Unknown-valued atom node in depth-first trace order."""
    for node in trace.walk():
        if isinstance(node.formula, AtomFormula) and node.value is UNKNOWN:
            return node
    return None
