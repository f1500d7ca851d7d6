"""Canonical, deterministic PDDL text for the AST."""

from __future__ import annotations

from .model import (
    OBJECT,
    ActionDef,
    Condition,
    DomainFile,
    DomainHeader,
    Literal,
    PredicateDecl,
    ProblemFile,
    Variable,
)


def format_typed_list(pairs, prefix: str = "") -> str:
    """Inverse of ``parse_typed_list``.

    Consecutive names sharing a type are grouped. A trailing ``object`` run is
    left bare; any other ``object`` run needs an explicit ``- object`` or the
    next designator would capture it.
    """
    runs: list[tuple[str, list[str]]] = []
    for name, typ in pairs:
        if runs and runs[-1][0] == typ:
            runs[-1][1].append(name)
        else:
            runs.append((typ, [name]))
    parts = []
    for i, (typ, names) in enumerate(runs):
        chunk = " ".join(prefix + n for n in names)
        if typ == OBJECT and i == len(runs) - 1:
            parts.append(chunk)
        else:
            parts.append(f"{chunk} - {typ}")
    return " ".join(parts)


def format_literal(lit: Literal) -> str:
    args = []
    for arg in lit.args:
        if isinstance(arg, Variable) and arg.type is not None:
            args.append(f"?{arg.name} - {arg.type}")
        else:
            args.append(str(arg))
    atom = "(" + " ".join([lit.predicate] + args) + ")"
    return atom if lit.positive else f"(not {atom})"


def format_condition(cond: Condition) -> str:
    return "(and" + "".join(" " + format_literal(lit) for lit in cond) + ")"


def format_predicate(decl: PredicateDecl) -> str:
    params = format_typed_list(decl.params, "?")
    return f"({decl.name} {params})" if params else f"({decl.name})"


def format_types(header: DomainHeader) -> list[str]:
    """One line per run of types sharing a parent, in declaration order."""
    lines = []
    edges = list(header.types.edges)
    i = 0
    while i < len(edges):
        parent = edges[i][1]
        j = i
        while j < len(edges) and edges[j][1] == parent:
            j += 1
        names = " ".join(name for name, _ in edges[i:j])
        last = j == len(edges)
        lines.append(names if parent == OBJECT and last else f"{names} - {parent}")
        i = j
    return lines


def format_action(action: ActionDef, indent: str = "  ") -> str:
    inner = indent * 2
    return "\n".join(
        [
            f"{indent}(:action {action.name}",
            f"{inner}:parameters ({format_typed_list(action.params, '?')})",
            f"{inner}:precondition {format_condition(action.precondition)}",
            f"{inner}:effect {format_condition(action.effect)}",
            f"{indent})",
        ]
    )


def print_domain(df: DomainFile) -> str:
    h = df.header
    lines = [f"(define (domain {h.name})"]
    if h.requirements:
        lines.append("  (:requirements " + " ".join(":" + r for r in h.requirements) + ")")
    if h.types.edges:
        lines.append("  (:types")
        lines.extend("    " + line for line in format_types(h))
        lines.append("  )")
    if h.predicates:
        lines.append("  (:predicates")
        lines.extend("    " + format_predicate(p) for p in h.predicates)
        lines.append("  )")
    for action in df.actions:
        lines.append(format_action(action))
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_problem(pf: ProblemFile) -> str:
    lines = [f"(define (problem {pf.name})", f"  (:domain {pf.domain})"]
    if pf.objects:
        lines.append("  (:objects")
        # Group by type the same way the types section does.
        runs: list[tuple[str, list[str]]] = []
        for name, typ in pf.objects:
            if runs and runs[-1][0] == typ:
                runs[-1][1].append(name)
            else:
                runs.append((typ, [name]))
        for i, (typ, names) in enumerate(runs):
            bare = typ == OBJECT and i == len(runs) - 1
            lines.append("    " + " ".join(names) + ("" if bare else f" - {typ}"))
        lines.append("  )")
    lines.append("  (:init")
    lines.extend("    " + format_literal(lit) for lit in pf.init)
    lines.append("  )")
    lines.append(f"  (:goal {format_condition(pf.goal)})")
    lines.append(")")
    return "\n".join(lines) + "\n"
