"""Sessions: a loaded theory, its current model snapshot, and the command
surface shared by the REPL and the wire interface.

A session's state is always reproducible by replaying its recorded history
over the base theory text; undo rebuilds from a history prefix. Saved
sessions store exactly that: the theory text plus the history as commands.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .diagram import Atom, Model, build_canonical_model
from .errors import CommandError, SessionFormatError
from .evaluate import (
    PointOfReference,
    eval_formula,
    first_unknown_atom,
    truth_set,
)
from .expand import add_element, force, force_predicates_equal, test_function_equality
from .formula import parse_atom_text, parse_formula
from .intension import IntensionalModel
from .report import render_model, render_worlds
from .theory import IntensionalTheory, parse_theory
from .truth import TRUE, UNKNOWN, Truth3

SESSION_FORMAT_VERSION = 1

CHOICES = ("force-true", "force-false", "leave-unknown", "add-element")


@dataclass
class SessionConfig:
    depth: int = 2
    mode: str = "paper"  # "paper" | "exhaustive"
    batch_policy: str = "leave"  # "leave" | "force-true" | "force-false"

    def validate(self) -> None:
        if self.mode not in ("paper", "exhaustive"):
            raise CommandError(f"unknown mode: {self.mode}")
        if self.batch_policy not in ("leave", "force-true", "force-false"):
            raise CommandError(f"unknown batch policy: {self.batch_policy}")


@dataclass
class PendingChoice:
    """An Unknown atom blocking an evaluation, with the actions on offer."""

    atom: Atom
    formula_text: str
    choices: tuple[str, ...] = CHOICES

    def as_dict(self) -> dict:
        return {
            "atom": str(self.atom),
            "formula": self.formula_text,
            "choices": list(self.choices),
        }


@dataclass
class CommandResult:
    output: str
    pending: Optional[PendingChoice] = None
    data: dict = field(default_factory=dict)


class Session:
    def __init__(
        self,
        theory_text: str,
        config: Optional[SessionConfig] = None,
        name: Optional[str] = None,
    ) -> None:
        self.config = config or SessionConfig()
        self.config.validate()
        self.theory_text = theory_text
        self.name = name
        self.history: list[str] = []
        self.theory = parse_theory(theory_text, name)
        self.model: Union[Model, IntensionalModel] = self._build_base()

    @classmethod
    def load(
        cls,
        source: Union[str, Path],
        config: Optional[SessionConfig] = None,
    ) -> "Session":
        """Load from a theory file path or from theory text."""
        if isinstance(source, Path) or (
            "\n" not in str(source) and str(source).endswith(".thy")
        ):
            path = Path(source)
            return cls(path.read_text(), config, name=path.stem)
        return cls(str(source), config)

    def _build_base(self) -> Union[Model, IntensionalModel]:
        if isinstance(self.theory, IntensionalTheory):
            return self.theory.build()
        return build_canonical_model(self.theory, self.config.depth)

    @property
    def is_extensional(self) -> bool:
        return isinstance(self.model, Model)

    # -- command dispatch ------------------------------------------------

    def run(self, line: str) -> CommandResult:
        line = line.strip()
        if not line or line.startswith("#"):
            return CommandResult("")
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        handler = {
            "eval": self._cmd_eval,
            "force": self._cmd_force,
            "add": self._cmd_add,
            "eqtest": self._cmd_eqtest,
            "eqforce": self._cmd_eqforce,
            "worlds": self._cmd_worlds,
            "truthset": self._cmd_truthset,
            "model": self._cmd_model,
            "undo": self._cmd_undo,
            "history": self._cmd_history,
            "save": self._cmd_save,
            "restore": self._cmd_restore,
        }.get(keyword)
        if handler is None:
            raise CommandError(f"unknown command: {keyword}")
        return handler(rest)

    def _require_extensional(self, what: str) -> Model:
        if not isinstance(self.model, Model):
            raise CommandError(f"{what} requires an extensional model")
        return self.model

    # -- eval -------------------------------------------------------------

    def _split_eval_suffixes(
        self, text: str, point_takes_world: bool
    ) -> tuple[str, Optional[tuple[str, ...]], Optional[str]]:
        mode = None
        m = re.search(r"\s+mode\s+(\S+)$", text)
        if m:
            mode = m.group(1)
            text = text[: m.start()]
        point = None
        n_parts = 2 if point_takes_world else 1
        pattern = r"\s+at" + r"\s+(\S+)" * n_parts + r"$"
        m = re.search(pattern, text)
        if m:
            point = m.groups()
            text = text[: m.start()]
        return text.strip(), point, mode

    def _resolve_point(self, point: Optional[tuple[str, ...]]) -> PointOfReference:
        if point is None:
            return PointOfReference(0, 0)
        idx = self.model.index_set
        return PointOfReference(idx.world_index(point[0]), idx.time_index(point[1]))

    def _cmd_eval(self, rest: str) -> CommandResult:
        if not rest:
            raise CommandError("eval needs a formula")
        formula_text, point, mode = self._split_eval_suffixes(rest, point_takes_world=True)
        mode = mode or self.config.mode
        f = parse_formula(formula_text, self.model.signature)
        at = self._resolve_point(point)

        lines: list[str] = []
        value, trace = eval_formula(self.model, f, at, mode)
        if (
            value is UNKNOWN
            and self.is_extensional
            and self.config.batch_policy in ("force-true", "force-false")
        ):
            target = TRUE if self.config.batch_policy == "force-true" else Truth3.FALSE
            while value is UNKNOWN:
                blocking = first_unknown_atom(trace)
                if blocking is None:
                    break
                atom = blocking.formula
                assert isinstance(self.model, Model)
                self.model = force(self.model, Atom(atom.pred, atom.args), target)
                self.history.append(f"force {Atom(atom.pred, atom.args)} {target}")
                lines.append(f"AUTO-FORCED: {Atom(atom.pred, atom.args)} = {target}")
                value, trace = eval_formula(self.model, f, at, mode)

        lines.append(f"VALUE: {value}")
        lines.append("TRACE:")
        lines.extend(trace.render_lines())
        pending = None
        if value is UNKNOWN and self.is_extensional:
            blocking = first_unknown_atom(trace)
            if blocking is not None:
                atom = blocking.formula
                pending = PendingChoice(Atom(atom.pred, atom.args), formula_text)
                lines.append(f"PENDING: {pending.atom}")
                lines.append("CHOICES: " + " | ".join(pending.choices))
        data = {"value": str(value), "trace": trace.render()}
        if pending:
            data["pending"] = pending.as_dict()
        return CommandResult("\n".join(lines), pending, data)

    # -- expansion commands ------------------------------------------------

    def _cmd_force(self, rest: str) -> CommandResult:
        model = self._require_extensional("force")
        atom_text, _, value_text = rest.rpartition(" ")
        atom_text = atom_text.strip()
        if not atom_text or value_text not in ("true", "false"):
            raise CommandError("usage: force <atom> true|false")
        af = parse_atom_text(atom_text, model.signature)
        atom = Atom(af.pred, af.args)
        value = Truth3.from_name(value_text)
        new_model = force(model, atom, value)
        noop = new_model is model
        self.model = new_model
        if not noop:
            self.history.append(f"force {atom_text} {value_text}")
        suffix = " (no-op)" if noop else ""
        output = f"FORCED: {atom} = {value}{suffix}\n" + render_model(self.model)
        return CommandResult(output, data={"report": render_model(self.model)})

    def _cmd_add(self, rest: str) -> CommandResult:
        model = self._require_extensional("add")
        words = rest.split()
        if len(words) != 2:
            raise CommandError("usage: add <sort> <name>")
        sort_name, name = words
        sort = model.signature.sort(sort_name)
        if sort is None:
            raise CommandError(f"unknown sort: {sort_name}")
        self.model = add_element(model, sort, name)
        self.history.append(f"add {sort_name} {name}")
        output = f"ADDED: {sort_name} {name}\n" + render_model(self.model)
        return CommandResult(output, data={"report": render_model(self.model)})

    def _resolve_preds(self, rest: str, what: str):
        model = self._require_extensional(what)
        words = rest.split()
        if len(words) != 2:
            raise CommandError(f"usage: {what} <pred> <pred>")
        preds = []
        for w in words:
            p = model.signature.predicate(w)
            if p is None:
                raise CommandError(f"unknown predicate: {w}")
            preds.append(p)
        return model, preds[0], preds[1]

    def _cmd_eqtest(self, rest: str) -> CommandResult:
        model, p, q = self._resolve_preds(rest, "eqtest")
        verdict = test_function_equality(model, p, q)
        return CommandResult(
            f"EQTEST {p.name} {q.name}: {verdict}", data={"verdict": str(verdict)}
        )

    def _cmd_eqforce(self, rest: str) -> CommandResult:
        model, p, q = self._resolve_preds(rest, "eqforce")
        new_model, obligations = force_predicates_equal(model, p, q)
        self.model = new_model
        self.history.append(f"eqforce {p.name} {q.name}")
        lines = [f"EQFORCE {p.name} {q.name}"]
        for ob in obligations:
            lines.append(f"OBLIGATION: {ob.atom} = {ob.required}")
        lines.append(render_model(self.model))
        return CommandResult(
            "\n".join(lines),
            data={
                "obligations": [
                    {"atom": str(o.atom), "value": str(o.required)} for o in obligations
                ],
                "report": render_model(self.model),
            },
        )

    # -- inspection --------------------------------------------------------

    def _cmd_worlds(self, rest: str) -> CommandResult:
        if rest:
            raise CommandError("worlds takes no arguments")
        idx = self.model.index_set
        return CommandResult(
            render_worlds(self.model),
            data={"worlds": list(idx.worlds), "times": list(idx.times)},
        )

    def _cmd_truthset(self, rest: str) -> CommandResult:
        if not rest:
            raise CommandError("truthset needs a formula")
        formula_text, point, mode = self._split_eval_suffixes(rest, point_takes_world=False)
        mode = mode or self.config.mode
        f = parse_formula(formula_text, self.model.signature)
        idx = self.model.index_set
        time = idx.time_index(point[0]) if point else 0
        worlds = truth_set(self.model, f, time, mode)
        ordered = [w for w in idx.worlds if w in worlds]
        return CommandResult(
            "TRUTHSET: {" + ", ".join(ordered) + "}", data={"worlds": ordered}
        )

    def _cmd_model(self, rest: str) -> CommandResult:
        report = render_model(self.model)
        return CommandResult(report, data={"report": report})

    # -- history -----------------------------------------------------------

    def _cmd_undo(self, rest: str) -> CommandResult:
        if not self.history:
            raise CommandError("nothing to undo")
        undone = self.history[-1]
        remaining = self.history[:-1]
        self.model = self._build_base()
        self.history = []
        for cmd in remaining:
            self.run(cmd)
        output = f"UNDONE: {undone}\n" + render_model(self.model)
        return CommandResult(output, data={"report": render_model(self.model)})

    def _cmd_history(self, rest: str) -> CommandResult:
        lines = ["HISTORY"]
        for i, cmd in enumerate(self.history, 1):
            lines.append(f"{i}: {cmd}")
        return CommandResult("\n".join(lines), data={"commands": list(self.history)})

    # -- persistence ---------------------------------------------------------

    def _cmd_save(self, rest: str) -> CommandResult:
        if not rest:
            raise CommandError("save needs a path")
        save_session(self, rest)
        return CommandResult(f"SAVED: {rest}")

    def _cmd_restore(self, rest: str) -> CommandResult:
        if not rest:
            raise CommandError("restore needs a path")
        restored = restore_session(rest)
        self.theory_text = restored.theory_text
        self.theory = restored.theory
        self.config = restored.config
        self.model = restored.model
        self.history = restored.history
        self.name = restored.name
        output = f"RESTORED: {rest}\n" + render_model(self.model)
        return CommandResult(output, data={"report": render_model(self.model)})


def run_command(session: Session, command: str) -> tuple[Session, str, Optional[PendingChoice]]:
    result = session.run(command)
    return session, result.output, result.pending


def load_theory(source: Union[str, Path], config: Optional[SessionConfig] = None) -> Session:
    return Session.load(source, config)


def save_session(session: Session, path: Union[str, Path]) -> None:
    theory_lines = session.theory_text.splitlines()
    lines = [
        f"gdiagram-session v{SESSION_FORMAT_VERSION}",
        f"name {session.name or '-'}",
        f"depth {session.config.depth}",
        f"mode {session.config.mode}",
        f"batch {session.config.batch_policy}",
        f"theory {len(theory_lines)}",
        *theory_lines,
        f"history {len(session.history)}",
        *session.history,
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def restore_session(path: Union[str, Path]) -> Session:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise SessionFormatError(f"cannot read session file: {err}") from None
    lines = text.splitlines()
    if not lines or not lines[0].startswith("gdiagram-session v"):
        raise SessionFormatError("not a session file")
    version_text = lines[0].removeprefix("gdiagram-session v")
    try:
        version = int(version_text)
    except ValueError:
        raise SessionFormatError(f"bad session version: {version_text}") from None
    if version != SESSION_FORMAT_VERSION:
        raise SessionFormatError(
            f"unsupported session format version {version} (this build reads v{SESSION_FORMAT_VERSION})"
        )

    def header(idx: int, key: str) -> str:
        if idx >= len(lines) or not lines[idx].startswith(key + " "):
            raise SessionFormatError(f"missing '{key}' header")
        return lines[idx].partition(" ")[2]

    name = header(1, "name")
    depth = int(header(2, "depth"))
    mode = header(3, "mode")
    batch = header(4, "batch")
    n_theory = int(header(5, "theory"))
    theory_text = "\n".join(lines[6 : 6 + n_theory])
    hist_at = 6 + n_theory
    n_history = int(header(hist_at, "history"))
    history = lines[hist_at + 1 : hist_at + 1 + n_history]

    config = SessionConfig(depth=depth, mode=mode, batch_policy=batch)
    session = Session(theory_text, config, name=None if name == "-" else name)
    for cmd in history:
        session.run(cmd)
    return session
