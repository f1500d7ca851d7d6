"""Immutable AST for the typed-STRIPS PDDL subset.

Identifiers are plain lowercase ``str``. Variables are stored without their
leading ``?``; the printer adds it back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

OBJECT = "object"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    severity: str = "error"  # "error" | "warning" | "info"
    action: Optional[str] = None
    line: Optional[int] = None

    # Groups codes into the translation-error families used in error analysis.
    CATEGORY = {
        "hallucinated_predicate": "hallucinated predicate",
        "arity_mismatch": "mismatched predicate",
        "type_mismatch": "mismatched predicate",
        "complicated_predicate": "complicated predicate",
        "unbound_variable": "complicated predicate",
    }

    @property
    def category(self) -> Optional[str]:
        return self.CATEGORY.get(self.code)

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message, "severity": self.severity}
        if self.action is not None:
            out["action"] = self.action
        if self.line is not None:
            out["line"] = self.line
        return out


@dataclass(frozen=True)
class Variable:
    name: str
    # Only set when a model writes ``?x - type`` inside a literal.
    type: Optional[str] = None

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Variable, Constant]


@dataclass(frozen=True)
class Literal:
    predicate: str
    args: tuple[Term, ...] = ()
    positive: bool = True

    @property
    def arity(self) -> int:
        return len(self.args)

    def negate(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.positive)


@dataclass(frozen=True)
class Condition:
    """A flat conjunction of literals; the empty conjunction is always true."""

    literals: tuple[Literal, ...] = ()

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    @property
    def positive(self) -> tuple[Literal, ...]:
        return tuple(lit for lit in self.literals if lit.positive)

    @property
    def negative(self) -> tuple[Literal, ...]:
        return tuple(lit for lit in self.literals if not lit.positive)


@dataclass(frozen=True)
class TypeHierarchy:
    """Declared ``(type, parent)`` pairs in source order.

    Types without an explicit parent hang off ``object``. Parents that are
    never declared themselves (``item`` in ``stone - item``) also default to
    ``object``.
    """

    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        parents = self.as_dict()
        for start in parents:
            seen = {start}
            cur = start
            while cur != OBJECT:
                cur = parents.get(cur, OBJECT)
                if cur in seen:
                    raise ValueError(f"type hierarchy has a cycle through {start!r}")
                seen.add(cur)

    def as_dict(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for child, parent in self.edges:
            out[child] = parent
        return out

    def parent(self, t: str) -> Optional[str]:
        if t == OBJECT:
            return None
        return self.as_dict().get(t, OBJECT)

    def ancestors(self, t: str) -> list[str]:
        """``t`` itself followed by every supertype up to ``object``."""
        parents = self.as_dict()
        chain = [t]
        while t != OBJECT:
            t = parents.get(t, OBJECT)
            chain.append(t)
        return chain

    def is_subtype(self, t: str, of: str) -> bool:
        return of == OBJECT or of in self.ancestors(t)

    def compatible(self, a: str, b: str) -> bool:
        return self.is_subtype(a, b) or self.is_subtype(b, a)

    @property
    def known(self) -> set[str]:
        names = {OBJECT}
        for child, parent in self.edges:
            names.add(child)
            names.add(parent)
        return names

    def __contains__(self, t: str) -> bool:
        return t in self.known


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    params: tuple[tuple[str, str], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ActionDef:
    name: str
    params: tuple[tuple[str, str], ...] = ()
    precondition: Condition = Condition()
    effect: Condition = Condition()

    @property
    def param_types(self) -> dict[str, str]:
        return dict(self.params)

    def literals(self) -> Iterator[Literal]:
        yield from self.precondition
        yield from self.effect


@dataclass(frozen=True)
class DomainHeader:
    name: str
    requirements: tuple[str, ...] = ()
    types: TypeHierarchy = TypeHierarchy()
    predicates: tuple[PredicateDecl, ...] = ()
    action_names: tuple[str, ...] = ()

    def predicate(self, name: str) -> Optional[PredicateDecl]:
        for decl in self.predicates:
            if decl.name == name:
                return decl
        return None


@dataclass(frozen=True)
class DomainFile:
    header: DomainHeader
    actions: tuple[ActionDef, ...] = ()
    # Parse/splice warnings; not part of structural equality.
    notes: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @property
    def name(self) -> str:
        return self.header.name

    def action(self, name: str) -> Optional[ActionDef]:
        for act in self.actions:
            if act.name == name:
                return act
        return None


@dataclass(frozen=True)
class ProblemFile:
    name: str
    domain: str
    objects: tuple[tuple[str, str], ...] = ()
    init: tuple[Literal, ...] = ()
    goal: Condition = Condition()
    notes: tuple[Diagnostic, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class PlanStep:
    action: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.action,) + self.args) + ")"


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[PlanStep]:
        return iter(self.steps)

    def to_text(self) -> str:
        return "".join(f"{step}\n" for step in self.steps)
