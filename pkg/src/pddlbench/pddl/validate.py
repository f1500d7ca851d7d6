"""Static checks over a parsed domain."""

from __future__ import annotations

from .model import (
    OBJECT,
    ActionDef,
    Condition,
    Constant,
    Diagnostic,
    DomainFile,
    DomainHeader,
    Variable,
)
from .parser import SUPPORTED_REQUIREMENTS


def constant_type(header: DomainHeader, name: str) -> str:
    # Body constants take the same-named type when one exists.
    return name if name in header.types.known else OBJECT


def _check_header(h: DomainHeader) -> list[Diagnostic]:
    out = []
    for req in h.requirements:
        if req not in SUPPORTED_REQUIREMENTS:
            out.append(Diagnostic("unsupported_requirement", f"requirement :{req} is ignored", "warning"))
    known = h.types.known
    seen_preds = set()
    for decl in h.predicates:
        if decl.name in seen_preds:
            out.append(Diagnostic("duplicate_predicate", f"predicate {decl.name!r} declared twice"))
        seen_preds.add(decl.name)
        names = [v for v, _ in decl.params]
        if len(set(names)) != len(names):
            out.append(Diagnostic("duplicate_variable", f"repeated variable in predicate {decl.name!r}"))
        for var, typ in decl.params:
            if typ not in known:
                out.append(Diagnostic("unknown_type", f"predicate {decl.name!r}: unknown type {typ!r} for ?{var}"))
    return out


def _check_condition(h: DomainHeader, action: ActionDef, cond: Condition, part: str) -> list[Diagnostic]:
    out = []
    params = action.param_types
    types = h.types
    seen = set()
    for lit in cond:
        where = f"{action.name} {part}"
        key = (lit.predicate, lit.args, lit.positive)
        if key in seen:
            out.append(
                Diagnostic("duplicate_literal", f"{where}: literal ({lit.predicate} ...) repeated", "warning", action.name)
            )
        seen.add(key)
        if (lit.predicate, lit.args, not lit.positive) in seen and part == "precondition":
            out.append(
                Diagnostic(
                    "contradictory_precondition",
                    f"{where}: ({lit.predicate} ...) required both true and false",
                    "warning",
                    action.name,
                )
            )
        decl = h.predicate(lit.predicate)
        if decl is None:
            out.append(
                Diagnostic("hallucinated_predicate", f"{where}: predicate {lit.predicate!r} is not declared", "error", action.name)
            )
        elif decl.arity != lit.arity:
            out.append(
                Diagnostic(
                    "arity_mismatch",
                    f"{where}: ({lit.predicate} ...) takes {decl.arity} arguments, got {lit.arity}",
                    "error",
                    action.name,
                )
            )
        for i, arg in enumerate(lit.args):
            if isinstance(arg, Variable):
                if arg.type is not None:
                    out.append(
                        Diagnostic(
                            "complicated_predicate",
                            f"{where}: typed argument ?{arg.name} - {arg.type} inside ({lit.predicate} ...)",
                            "error",
                            action.name,
                        )
                    )
                if arg.name in params:
                    arg_type = params[arg.name]
                elif arg.type is not None:
                    arg_type = arg.type
                else:
                    out.append(
                        Diagnostic(
                            "unbound_variable",
                            f"{where}: ?{arg.name} is not a parameter",
                            "error",
                            action.name,
                        )
                    )
                    continue
            else:
                assert isinstance(arg, Constant)
                arg_type = constant_type(h, arg.name)
            if decl is None or decl.arity != lit.arity:
                continue
            expected = decl.params[i][1]
            if arg_type in types and expected in types and not types.compatible(arg_type, expected):
                out.append(
                    Diagnostic(
                        "type_mismatch",
                        f"{where}: argument {i + 1} of ({lit.predicate} ...) is {arg_type}, expected {expected}",
                        "error",
                        action.name,
                    )
                )
    return out


def validate_action(h: DomainHeader, action: ActionDef) -> list[Diagnostic]:
    out = []
    names = [v for v, _ in action.params]
    if len(set(names)) != len(names):
        out.append(Diagnostic("duplicate_variable", f"{action.name}: repeated parameter name", "error", action.name))
    for var, typ in action.params:
        if typ not in h.types.known:
            out.append(Diagnostic("unknown_type", f"{action.name}: unknown type {typ!r} for ?{var}", "error", action.name))
    out.extend(_check_condition(h, action, action.precondition, "precondition"))
    out.extend(_check_condition(h, action, action.effect, "effect"))
    if not action.precondition.literals:
        out.append(Diagnostic("empty_condition", f"{action.name}: empty precondition", "info", action.name))
    if not action.effect.literals:
        out.append(Diagnostic("empty_condition", f"{action.name}: empty effect", "info", action.name))
    return out


def validate_domain(df: DomainFile) -> list[Diagnostic]:
    """Report undeclared predicates, arity/type mismatches, unknown types,
    free variables and duplicate literals. Never raises."""
    out = _check_header(df.header)
    for action in df.actions:
        out.extend(validate_action(df.header, action))
    return out


def errors_only(diags: list[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == "error"]
