from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from gdiagram import Session, SessionConfig
from gdiagram.formula import (
    And,
    AtomFormula,
    Equation,
    Exists,
    Forall,
    Fut,
    Implies,
    Nec,
    Not,
    Or,
    Past,
)
from gdiagram.signature import Signature, Term, Variable

THEORY_DIR = Path(__file__).resolve().parent.parent / "theories"


def theory_text(name: str) -> str:
    return (THEORY_DIR / f"{name}.thy").read_text()


@pytest.fixture(scope="session")
def johnny_session_factory():
    text = theory_text("johnny")
    return lambda **cfg: Session(text, SessionConfig(**cfg), name="johnny")


@pytest.fixture()
def johnny_model():
    return Session(theory_text("johnny"), name="johnny").model


@pytest.fixture()
def talkers_model():
    return Session(theory_text("talkers"), name="talkers").model


@pytest.fixture()
def blocks_model():
    return Session(theory_text("blocks"), SessionConfig(depth=1), name="blocks").model


@pytest.fixture()
def prices_model():
    return Session(theory_text("prices"), name="prices").model


# --- independent oracles ----------------------------------------------------

def brute_force_terms(sig: Signature, sort, depth: int) -> set[Term]:
    """Set of all ground constructor terms of `sort` with depth <= depth,
    by plain recursive enumeration (no ordering, no sharing)."""
    out: set[Term] = set()
    for f in sig.functions:
        if not f.is_constructor or f.result_sort != sort:
            continue
        if f.is_constant:
            out.add(Term(f, ()))
        elif depth > 0:
            pools = [brute_force_terms(sig, s, depth - 1) for s in f.arg_sorts]
            for combo in itertools.product(*pools):
                out.add(Term(f, combo))
    return out


def naive_congruence(equations, terms):
    """Fixpoint oracle: merge equation sides, then repeatedly merge any two
    applications with the same head and classwise-equal arguments."""
    univ: list[Term] = []
    seen: set[Term] = set()

    def add(t: Term) -> None:
        if t in seen:
            return
        for a in t.args:
            add(a)
        seen.add(t)
        univ.append(t)

    for t in terms:
        add(t)
    for lhs, rhs in equations:
        add(lhs)
        add(rhs)

    classes: dict[Term, set[Term]] = {t: {t} for t in univ}

    def merge(a: Term, b: Term) -> bool:
        sa, sb = classes[a], classes[b]
        if sa is sb:
            return False
        union = sa | sb
        for t in union:
            classes[t] = union
        return True

    for lhs, rhs in equations:
        merge(lhs, rhs)
    changed = True
    while changed:
        changed = False
        for t1 in univ:
            for t2 in univ:
                if (
                    t1.head == t2.head
                    and t1.args
                    and len(t1.args) == len(t2.args)
                    and classes[t1] is not classes[t2]
                    and all(classes[a] is classes[b] for a, b in zip(t1.args, t2.args))
                ):
                    if merge(t1, t2):
                        changed = True
    wanted = set(terms)
    return {t: frozenset(x for x in classes[t] if x in wanted) for t in terms}


# --- random formula generation ----------------------------------------------

def random_formula(model, rng: random.Random, depth: int = 4, positive: bool = False):
    """Random closed formula over a model's signature.

    With positive=True, negation only wraps atoms and implication is not
    generated, so every existential sits in positive polarity.
    """
    sig = model.signature
    quantifiable = [s for s in sig.sorts if model.universe(s)]
    counter = itertools.count()

    def random_term(sort, scope):
        in_scope = [v for v in scope if v.sort == sort]
        domain = model.universe(sort)
        if in_scope and (not domain or rng.random() < 0.5):
            return Term(rng.choice(in_scope), ())
        return rng.choice(domain)

    def atom(scope):
        choices = []
        for p in sig.predicates:
            if all(model.universe(s) or any(v.sort == s for v in scope) for s in p.arg_sorts):
                choices.append(p)
        eq_sorts = [s for s in quantifiable]
        if choices and (not eq_sorts or rng.random() < 0.8):
            p = rng.choice(choices)
            return AtomFormula(p, tuple(random_term(s, scope) for s in p.arg_sorts))
        sort = rng.choice(eq_sorts)
        return Equation(random_term(sort, scope), random_term(sort, scope))

    def go(d, scope):
        if d <= 0:
            base = atom(scope)
            if not positive and rng.random() < 0.3:
                return Not(base)
            return base
        kinds = ["atom", "not", "and", "or", "forall"]
        if not positive:
            kinds += ["implies"]
        if quantifiable:
            kinds += ["exists"]
        if len(model.index_set.times) > 1 or rng.random() < 0.15:
            kinds += ["nec", "past", "fut"]
        kind = rng.choice(kinds)
        if kind == "atom":
            return atom(scope)
        if kind == "not":
            body = atom(scope) if positive else go(d - 1, scope)
            return Not(body)
        if kind in ("and", "or", "implies"):
            ctor = {"and": And, "or": Or, "implies": Implies}[kind]
            return ctor(go(d - 1, scope), go(d - 1, scope))
        if kind in ("forall", "exists"):
            sort = rng.choice(quantifiable)
            var = Variable(f"v{next(counter)}", sort)
            ctor = Forall if kind == "forall" else Exists
            return ctor(var, go(d - 1, scope + [var]))
        ctor = {"nec": Nec, "past": Past, "fut": Fut}[kind]
        return ctor(go(d - 1, scope))

    return go(depth, [])


# --- transcript runner (mirrors the CLI's batch behaviour) --------------------

def run_transcript(theory_name: str, commands: list[str], config: SessionConfig | None = None) -> str:
    from gdiagram.errors import EngineError

    session = Session(theory_text(theory_name), config, name=theory_name)
    lines = [session.run("model").output]
    for command in commands:
        command = command.strip()
        if not command or command.startswith("#"):
            continue
        lines.append(f"> {command}")
        try:
            output = session.run(command).output
        except EngineError as err:
            lines.append(f"ERROR: {err}")
            continue
        if output:
            lines.append(output)
    return "\n".join(lines) + "\n"
