"""Grounding of lifted actions over problem objects."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from ..pddl.model import (
    OBJECT,
    ActionDef,
    Constant,
    Diagnostic,
    DomainFile,
    Literal,
    ProblemFile,
    Variable,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class GroundAtom:
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.args) + ")"


State = frozenset  # frozenset[GroundAtom]; absent atoms are false


@dataclass(frozen=True)
class GroundAction:
    name: str
    binding: tuple[str, ...]
    pre_pos: frozenset
    pre_neg: frozenset
    add: frozenset
    delete: frozenset

    def __str__(self) -> str:
        return "(" + " ".join((self.name,) + self.binding) + ")"


class UnresolvableConstant(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"constant {name!r} is not a problem object")


class DeadlineExceeded(Exception):
    pass


def body_constants(df: DomainFile) -> list[str]:
    seen: dict[str, None] = {}
    for action in df.actions:
        for lit in action.literals():
            for arg in lit.args:
                if isinstance(arg, Constant):
                    seen.setdefault(arg.name)
    return list(seen)


def resolve_objects(
    df: DomainFile, pf: ProblemFile, auto_declare: bool = True
) -> tuple[dict[str, str], list[Diagnostic]]:
    """Problem objects plus any action-body constants the problem omits.

    An omitted constant becomes an object of the same-named type if the
    domain declares one, else of type ``object``.
    """
    objects = dict(pf.objects)
    diags = []
    known = df.header.types.known
    for name in body_constants(df):
        if name in objects:
            continue
        if not auto_declare:
            raise UnresolvableConstant(name)
        typ = name if name in known else OBJECT
        objects[name] = typ
        diags.append(
            Diagnostic("auto_declared_constant", f"constant {name!r} declared as object of type {typ}", "info")
        )
        log.debug("auto-declared constant %s - %s", name, typ)
    return objects, diags


def objects_by_type(df: DomainFile, objects: dict[str, str]) -> dict[str, list[str]]:
    types = df.header.types
    wanted = {OBJECT} | types.known
    for action in df.actions:
        wanted.update(t for _, t in action.params)
    out = {}
    for t in wanted:
        out[t] = sorted(o for o, ot in objects.items() if types.is_subtype(ot, t))
    return out


def _ground_literal(lit: Literal, env: dict[str, str]) -> GroundAtom:
    args = []
    for arg in lit.args:
        if isinstance(arg, Variable):
            # A free variable stays symbolic, so atoms using it never match.
            args.append(env.get(arg.name, f"?{arg.name}"))
        else:
            args.append(arg.name)
    return GroundAtom(lit.predicate, tuple(args))


def instantiate(action: ActionDef, binding: tuple[str, ...]) -> GroundAction:
    env = dict(zip((v for v, _ in action.params), binding))
    pre_pos, pre_neg, add, delete = set(), set(), set(), set()
    for lit in action.precondition:
        (pre_pos if lit.positive else pre_neg).add(_ground_literal(lit, env))
    for lit in action.effect:
        (add if lit.positive else delete).add(_ground_literal(lit, env))
    return GroundAction(
        action.name, tuple(binding), frozenset(pre_pos), frozenset(pre_neg), frozenset(add), frozenset(delete)
    )


def static_predicates(df: DomainFile) -> set[str]:
    changing = {lit.predicate for a in df.actions for lit in a.effect}
    used = {lit.predicate for a in df.actions for lit in a.precondition}
    return used - changing


def _bindings(
    action: ActionDef,
    candidates: list[list[str]],
    statics: list[tuple[int, Literal]],
    init: frozenset,
    deadline: Optional[float],
) -> Iterator[tuple[str, ...]]:
    """Lexicographic bindings; static literals are checked as soon as their
    last variable is bound."""
    names = [v for v, _ in action.params]
    by_level: dict[int, list[Literal]] = {}
    for level, lit in statics:
        by_level.setdefault(level, []).append(lit)
    env: dict[str, str] = {}
    counter = 0

    def rec(i: int) -> Iterator[tuple[str, ...]]:
        nonlocal counter
        if i == len(names):
            yield tuple(env[n] for n in names)
            return
        for obj in candidates[i]:
            counter += 1
            if deadline is not None and counter & 0xFFF == 0 and time.perf_counter() > deadline:
                raise DeadlineExceeded
            env[names[i]] = obj
            ok = True
            for lit in by_level.get(i, ()):
                if (_ground_literal(lit, env) in init) != lit.positive:
                    ok = False
                    break
            if ok:
                yield from rec(i + 1)
        env.pop(names[i], None)

    # Static literals without variables are checked once up front.
    for lit in by_level.get(-1, ()):
        if (_ground_literal(lit, env) in init) != lit.positive:
            return
    yield from rec(0)


def ground(
    df: DomainFile,
    pf: ProblemFile,
    *,
    prune_static: bool = False,
    auto_declare: bool = True,
    deadline: Optional[float] = None,
) -> list[GroundAction]:
    """All type-respecting instances of every action.

    Order is action declaration order, then lexicographic binding order.
    With ``prune_static`` bindings that violate a precondition on a predicate
    no action changes are dropped early.
    """
    objects, _ = resolve_objects(df, pf, auto_declare)
    pools = objects_by_type(df, objects)
    init = frozenset(GroundAtom(l.predicate, tuple(a.name for a in l.args)) for l in pf.init)
    statics = static_predicates(df) if prune_static else set()
    out = []
    for action in df.actions:
        names = [v for v, _ in action.params]
        candidates = [pools.get(t, []) for _, t in action.params]
        checks: list[tuple[int, Literal]] = []
        for lit in action.precondition:
            if lit.predicate not in statics:
                continue
            levels = [
                names.index(a.name) for a in lit.args if isinstance(a, Variable) and a.name in names
            ]
            if any(isinstance(a, Variable) and a.name not in names for a in lit.args):
                if lit.positive:
                    checks.append((-1, lit))  # free variable: never true
                continue
            checks.append((max(levels) if levels else -1, lit))
        for binding in _bindings(action, candidates, checks, init, deadline):
            out.append(instantiate(action, binding))
    return out


def applicable(state: Iterable[GroundAtom], action: GroundAction) -> bool:
    s = state if isinstance(state, (set, frozenset)) else set(state)
    return action.pre_pos <= s and not (action.pre_neg & s)


class NotApplicable(Exception):
    def __init__(self, action: GroundAction, missing: frozenset, violated: frozenset):
        self.action = action
        self.missing = missing
        self.violated = violated
        parts = []
        if missing:
            parts.append("missing " + " ".join(sorted(map(str, missing))))
        if violated:
            parts.append("violated " + " ".join(sorted(f"(not {a})" for a in violated)))
        super().__init__(f"{action} not applicable: " + "; ".join(parts))


def apply(state: frozenset, action: GroundAction) -> frozenset:
    """Delete-then-add successor; raises :class:`NotApplicable`."""
    missing = action.pre_pos - state
    violated = action.pre_neg & state
    if missing or violated:
        raise NotApplicable(action, frozenset(missing), frozenset(violated))
    return frozenset((state - action.delete) | action.add)


def initial_state(pf: ProblemFile) -> frozenset:
    return frozenset(GroundAtom(l.predicate, tuple(a.name for a in l.args)) for l in pf.init)


def goal_atoms(pf: ProblemFile) -> tuple[frozenset, frozenset]:
    pos = {GroundAtom(l.predicate, tuple(a.name for a in l.args)) for l in pf.goal if l.positive}
    neg = {GroundAtom(l.predicate, tuple(a.name for a in l.args)) for l in pf.goal if not l.positive}
    return frozenset(pos), frozenset(neg)
