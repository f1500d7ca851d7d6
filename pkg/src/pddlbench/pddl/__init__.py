from .extract import BlockError, scan_action_blocks, splice_actions, split_header
from .lexer import IllegalCharacter, PDDLSyntaxError, Token, tokenize
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
from .parser import parse_action, parse_domain, parse_plan, parse_problem
from .printer import format_action, print_domain, print_problem
from .validate import validate_domain

__all__ = [
    "OBJECT",
    "ActionDef",
    "BlockError",
    "Condition",
    "Constant",
    "Diagnostic",
    "DomainFile",
    "DomainHeader",
    "IllegalCharacter",
    "Literal",
    "PDDLSyntaxError",
    "Plan",
    "PlanStep",
    "PredicateDecl",
    "ProblemFile",
    "Term",
    "Token",
    "TypeHierarchy",
    "Variable",
    "format_action",
    "parse_action",
    "parse_domain",
    "parse_plan",
    "parse_problem",
    "print_domain",
    "print_problem",
    "scan_action_blocks",
    "splice_actions",
    "split_header",
    "tokenize",
    "validate_domain",
]
