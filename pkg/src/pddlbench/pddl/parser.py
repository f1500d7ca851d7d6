"""Recursive-descent parser from s-expressions to the PDDL AST.

The accepted grammar is written out in ``docs/grammar.ebnf``.
"""

from __future__ import annotations

from typing import Union

from .lexer import (
    KEYWORD,
    NAME,
    VARIABLE,
    PDDLSyntaxError,
    SExpr,
    SList,
    Token,
    position,
    read_sexprs,
)
from .model import (
    OBJECT,
    ActionDef,
    Condition,
    Constant,
    Diagnostic,
    DomainFile,
    DomainHeader,
    Literal,
    Plan,
    PlanStep,
    PredicateDecl,
    ProblemFile,
    Term,
    TypeHierarchy,
    Variable,
)

SUPPORTED_REQUIREMENTS = ("strips", "typing")

# Constructs outside typed STRIPS that we reject with a clear message.
_UNSUPPORTED_FORMULAS = {"or", "imply", "exists", "forall", "when", "=", "increase", "decrease"}


def _fail(node: SExpr, message: str, expected: str | None = None) -> PDDLSyntaxError:
    line, col = position(node)
    return PDDLSyntaxError(message, line, col, expected)


def _expect_list(node: SExpr, what: str) -> SList:
    if not isinstance(node, SList):
        raise _fail(node, f"expected {what}, got {node.text!r}", expected="(")
    return node


def _expect_token(node: SExpr, kind: str, what: str) -> Token:
    if not isinstance(node, Token) or node.kind != kind:
        got = node.text if isinstance(node, Token) else "a list"
        raise _fail(node, f"expected {what}, got {got!r}", expected=what)
    return node


def _single_top(source: Union[str, bytes], what: str) -> SList:
    nodes = read_sexprs(source)
    if not nodes:
        raise PDDLSyntaxError(f"empty input, expected {what}", 1, 1, expected="(")
    if len(nodes) > 1:
        raise _fail(nodes[1], f"unexpected content after {what}")
    return _expect_list(nodes[0], what)


def _define_header(top: SList, kind: str) -> str:
    items = top.items
    if not items or not (isinstance(items[0], Token) and items[0].text == "define"):
        raise _fail(top, "expected (define ...)", expected="define")
    if len(items) < 2:
        raise _fail(top, f"missing ({kind} <name>)")
    decl = _expect_list(items[1], f"({kind} <name>)")
    if len(decl) != 2 or decl.head() is None or decl.items[0].text != kind:
        raise _fail(decl, f"expected ({kind} <name>)")
    return _expect_token(decl.items[1], NAME, f"{kind} name").text


def parse_typed_list(items: tuple, kind: str) -> list[tuple[str, str]]:
    """Expand ``a b - t c - u d`` into ``[(a,t), (b,t), (c,u), (d,object)]``.

    ``kind`` is ``NAME`` for types/objects or ``VARIABLE`` for parameters.
    """
    out: list[tuple[str, str]] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        node = items[i]
        if isinstance(node, Token) and node.kind == NAME and node.text == "-":
            if not pending:
                raise _fail(node, "type designator '-' without preceding names")
            if i + 1 >= len(items):
                raise _fail(node, "missing type after '-'", expected="type name")
            type_node = items[i + 1]
            if isinstance(type_node, SList):
                raise _fail(type_node, "compound types such as (either ...) are not supported")
            type_tok = _expect_token(type_node, NAME, "type name")
            out.extend((name, type_tok.text) for name in pending)
            pending = []
            i += 2
            continue
        what = "variable" if kind == VARIABLE else "name"
        tok = _expect_token(node, kind, what)
        pending.append(tok.text[1:] if kind == VARIABLE else tok.text)
        i += 1
    out.extend((name, OBJECT) for name in pending)
    return out


def _term_list(items: tuple, owner: SList) -> tuple[Term, ...]:
    args: list[Term] = []
    i = 0
    while i < len(items):
        node = items[i]
        if isinstance(node, SList):
            raise _fail(node, "predicate argument must be atomic, not a nested formula")
        if node.kind == VARIABLE:
            # A model sometimes writes ``(p ?x - t)``; keep the type for diagnostics.
            if (
                i + 2 < len(items)
                and isinstance(items[i + 1], Token)
                and items[i + 1].text == "-"
            ):
                type_node = items[i + 2]
                if not (isinstance(type_node, Token) and type_node.kind == NAME):
                    raise _fail(items[i + 1], "missing type after '-'", expected="type name")
                args.append(Variable(node.text[1:], type_node.text))
                i += 3
                continue
            args.append(Variable(node.text[1:]))
        elif node.kind == NAME and node.text != "-":
            args.append(Constant(node.text))
        else:
            raise _fail(node, f"unexpected {node.text!r} in predicate arguments")
        i += 1
    return tuple(args)


def _atomic(node: SList, positive: bool = True) -> Literal:
    head = node.head()
    if head is None:
        if not node.items:
            raise _fail(node, "empty formula where an atom was expected")
        raise _fail(node, "predicate name must be a symbol")
    if head.kind != NAME or head.text == "-":
        raise _fail(head, f"expected predicate name, got {head.text!r}")
    if head.text in _UNSUPPORTED_FORMULAS:
        raise _fail(head, f"unsupported construct {head.text!r}")
    if head.text in ("and", "not"):
        raise _fail(head, f"{head.text!r} is not allowed here")
    return Literal(head.text, _term_list(node.items[1:], node), positive)


def _condition_literals(node: SExpr) -> list[Literal]:
    node = _expect_list(node, "a condition")
    if not node.items:
        return []
    head = node.head()
    if head is not None and head.text == "and":
        out: list[Literal] = []
        for child in node.items[1:]:
            out.extend(_condition_literals(child))
        return out
    if head is not None and head.text == "not":
        if len(node) != 2:
            raise _fail(node, "(not ...) takes exactly one atom")
        inner = _expect_list(node.items[1], "an atom inside (not ...)")
        return [_atomic(inner, positive=False)]
    return [_atomic(node)]


def parse_condition(node: SExpr) -> Condition:
    return Condition(tuple(_condition_literals(node)))


def _keyword_args(items: tuple, allowed: tuple[str, ...], owner: str) -> dict[str, SExpr]:
    out: dict[str, SExpr] = {}
    i = 0
    while i < len(items):
        key = _expect_token(items[i], KEYWORD, f"a keyword of {owner}")
        name = key.text[1:]
        if name not in allowed:
            raise _fail(key, f"unsupported keyword {key.text!r} in {owner}")
        if name in out:
            raise _fail(key, f"duplicate {key.text!r} in {owner}")
        if i + 1 >= len(items):
            raise _fail(key, f"missing value after {key.text!r}")
        value = items[i + 1]
        if isinstance(value, Token) and value.kind == KEYWORD:
            raise _fail(value, f"missing value after {key.text!r}")
        out[name] = value
        i += 2
    return out


def parse_action(node: SExpr) -> tuple[ActionDef, list[Diagnostic]]:
    """Parse one ``(:action ...)`` block."""
    node = _expect_list(node, "(:action ...)")
    head = node.head()
    if head is None or head.text != ":action":
        raise _fail(node, "expected (:action ...)", expected=":action")
    if len(node) < 2:
        raise _fail(node, "missing action name")
    name = _expect_token(node.items[1], NAME, "action name").text
    fields = _keyword_args(node.items[2:], ("parameters", "precondition", "effect"), f"action {name}")
    notes: list[Diagnostic] = []
    params: list[tuple[str, str]] = []
    if "parameters" in fields:
        plist = _expect_list(fields["parameters"], "a parameter list")
        params = parse_typed_list(plist.items, VARIABLE)
    conds = {}
    for part in ("precondition", "effect"):
        if part in fields:
            cond = parse_condition(fields[part])
        else:
            cond = Condition()
        if not cond.literals:
            how = "missing" if part not in fields else "empty"
            notes.append(
                Diagnostic(
                    "empty_condition",
                    f"{how} :{part} treated as the empty conjunction",
                    "warning",
                    action=name,
                    line=node.open.line,
                )
            )
        conds[part] = cond
    action = ActionDef(name, tuple(params), conds["precondition"], conds["effect"])
    return action, notes


def _parse_types(section: SList) -> TypeHierarchy:
    pairs = parse_typed_list(section.items[1:], NAME)
    try:
        return TypeHierarchy(tuple(pairs))
    except ValueError as exc:
        raise _fail(section, str(exc)) from None


def _parse_predicates(section: SList) -> list[PredicateDecl]:
    out = []
    for item in section.items[1:]:
        item = _expect_list(item, "a predicate declaration")
        head = item.head()
        if head is None or head.kind != NAME:
            raise _fail(item, "predicate declaration must start with a name")
        params = parse_typed_list(item.items[1:], VARIABLE)
        out.append(PredicateDecl(head.text, tuple(params)))
    return out


def parse_domain(source: Union[str, bytes]) -> DomainFile:
    """Parse a complete domain file.

    Raises :class:`PDDLSyntaxError` (with line/column) on anything outside
    the supported grammar.
    """
    top = _single_top(source, "(define (domain ...) ...)")
    name = _define_header(top, "domain")
    notes: list[Diagnostic] = []
    requirements: list[str] = []
    types = TypeHierarchy()
    predicates: list[PredicateDecl] = []
    actions: list[ActionDef] = []
    seen_sections: set[str] = set()
    for section in top.items[2:]:
        section = _expect_list(section, "a domain section")
        head = section.head()
        if head is None or head.kind != KEYWORD:
            raise _fail(section, "domain section must start with a keyword")
        key = head.text
        if key != ":action":
            if key in seen_sections:
                raise _fail(head, f"duplicate section {key}")
            seen_sections.add(key)
        if key == ":requirements":
            for req in section.items[1:]:
                tok = _expect_token(req, KEYWORD, "a requirement flag")
                flag = tok.text[1:]
                requirements.append(flag)
                if flag not in SUPPORTED_REQUIREMENTS:
                    notes.append(
                        Diagnostic(
                            "unsupported_requirement",
                            f"requirement :{flag} is outside typed STRIPS and is ignored",
                            "warning",
                            line=tok.line,
                        )
                    )
        elif key == ":types":
            types = _parse_types(section)
        elif key == ":predicates":
            predicates = _parse_predicates(section)
        elif key == ":action":
            action, action_notes = parse_action(section)
            if any(a.name == action.name for a in actions):
                raise _fail(section, f"duplicate action {action.name!r}")
            actions.append(action)
            notes.extend(action_notes)
        else:
            raise _fail(head, f"unsupported domain section {key}")
    header = DomainHeader(
        name,
        tuple(requirements),
        types,
        tuple(predicates),
        tuple(a.name for a in actions),
    )
    return DomainFile(header, tuple(actions), tuple(notes))


def parse_problem(source: Union[str, bytes]) -> ProblemFile:
    top = _single_top(source, "(define (problem ...) ...)")
    name = _define_header(top, "problem")
    notes: list[Diagnostic] = []
    domain = None
    objects: list[tuple[str, str]] = []
    init: list[Literal] = []
    goal = None
    seen: set[str] = set()
    for section in top.items[2:]:
        section = _expect_list(section, "a problem section")
        head = section.head()
        if head is None or head.kind != KEYWORD:
            raise _fail(section, "problem section must start with a keyword")
        key = head.text
        if key in seen:
            raise _fail(head, f"duplicate section {key}")
        seen.add(key)
        if key == ":domain":
            if len(section) != 2:
                raise _fail(section, "expected (:domain <name>)")
            domain = _expect_token(section.items[1], NAME, "domain name").text
        elif key == ":requirements":
            for req in section.items[1:]:
                _expect_token(req, KEYWORD, "a requirement flag")
        elif key == ":objects":
            objects = parse_typed_list(section.items[1:], NAME)
        elif key == ":init":
            for item in section.items[1:]:
                item = _expect_list(item, "an init atom")
                lits = _condition_literals(item)
                for lit in lits:
                    if any(isinstance(a, Variable) for a in lit.args):
                        raise _fail(item, "init atoms must be ground")
                    if not lit.positive:
                        notes.append(
                            Diagnostic(
                                "negative_init",
                                f"negative init literal (not ({lit.predicate} ...)) dropped; "
                                "the initial state is closed-world",
                                "warning",
                                line=item.open.line,
                            )
                        )
                        continue
                    init.append(lit)
        elif key == ":goal":
            if len(section) != 2:
                raise _fail(section, "expected (:goal <condition>)")
            goal = parse_condition(section.items[1])
        else:
            raise _fail(head, f"unsupported problem section {key}")
    if domain is None:
        raise _fail(top, "missing (:domain <name>)", expected=":domain")
    if goal is None:
        notes.append(Diagnostic("missing_goal", "no :goal section; goal is empty", "warning"))
        goal = Condition()
    return ProblemFile(name, domain, tuple(objects), tuple(init), goal, tuple(notes))


def parse_plan(source: Union[str, bytes]) -> Plan:
    """Parse ``(action arg ...)`` steps; arity is not checked here."""
    steps = []
    for node in read_sexprs(source):
        node = _expect_list(node, "a plan step")
        if not node.items:
            raise _fail(node, "empty plan step")
        action = _expect_token(node.items[0], NAME, "action name").text
        args = tuple(_expect_token(a, NAME, "object name").text for a in node.items[1:])
        steps.append(PlanStep(action, args))
    return Plan(tuple(steps))
