"""Header/action splitting and recovery of action blocks from model output."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .lexer import PDDLSyntaxError, read_sexprs
from .model import ActionDef, Diagnostic, DomainFile, DomainHeader
from .parser import parse_action

_ACTION_START = re.compile(r"\(\s*:action\b", re.IGNORECASE)
_ACTION_NAME = re.compile(r"\(\s*:action\s+([A-Za-z0-9_\-]+)", re.IGNORECASE)


def split_header(df: DomainFile) -> tuple[DomainHeader, list[ActionDef]]:
    return df.header, list(df.actions)


def splice_actions(header: DomainHeader, actions: Iterable[ActionDef]) -> DomainFile:
    """Build a domain from a header and (possibly predicted) actions.

    Actions come out in header order, followed by any extras. Missing, extra
    and duplicate actions are recorded in ``notes``; none of them is fatal.
    """
    by_name: dict[str, ActionDef] = {}
    notes: list[Diagnostic] = []
    extras: list[ActionDef] = []
    for action in actions:
        if action.name in by_name or any(e.name == action.name for e in extras):
            notes.append(
                Diagnostic(
                    "duplicate_action",
                    f"action {action.name!r} given more than once; first kept",
                    "warning",
                    action=action.name,
                )
            )
            continue
        if action.name in header.action_names:
            by_name[action.name] = action
        else:
            extras.append(action)
    ordered = []
    for name in header.action_names:
        if name in by_name:
            ordered.append(by_name[name])
        else:
            notes.append(
                Diagnostic("missing_action", f"no definition for action {name!r}", "warning", action=name)
            )
    for action in extras:
        notes.append(
            Diagnostic(
                "extra_action",
                f"action {action.name!r} is not in the header",
                "warning",
                action=action.name,
            )
        )
    return DomainFile(header, tuple(ordered + extras), tuple(notes))


@dataclass(frozen=True)
class BlockError:
    """An ``(:action`` block that could not be parsed."""

    offset: int
    line: int
    message: str
    action: Optional[str] = None

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic("syntax_error", self.message, "error", action=self.action, line=self.line)


def _block_end(raw: str, start: int) -> tuple[int, bool]:
    """End offset of the block opening at ``start`` and whether it closed.

    A fresh ``(:action`` met before the block closes ends it early, so one
    unbalanced block cannot swallow the next.
    """
    depth = 0
    i = start
    n = len(raw)
    while i < n:
        c = raw[i]
        if c == ";":
            nl = raw.find("\n", i)
            i = n if nl < 0 else nl
            continue
        if c == "(":
            if depth > 0 and _ACTION_START.match(raw, i):
                return i, False
            depth += 1
        elif c == ")":
            depth -= 1
            if depth == 0:
                return i + 1, True
        i += 1
    return n, False


def scan_action_blocks(raw: str) -> tuple[list[ActionDef], list[BlockError]]:
    """Find every balanced ``(:action ...)`` span in free text and parse it.

    Returns the parsed actions in order of appearance plus one
    :class:`BlockError` per block that failed to parse.
    """
    actions: list[ActionDef] = []
    errors: list[BlockError] = []
    pos = 0
    while True:
        m = _ACTION_START.search(raw, pos)
        if m is None:
            break
        start = m.start()
        end, closed = _block_end(raw, start)
        line = raw.count("\n", 0, start) + 1
        name_match = _ACTION_NAME.match(raw, start)
        guess = name_match.group(1).lower() if name_match else None
        if not closed:
            errors.append(BlockError(start, line, "unterminated (:action block", guess))
        else:
            block = raw[start:end]
            try:
                nodes = read_sexprs(block)
                action, _ = parse_action(nodes[0])
                actions.append(action)
            except PDDLSyntaxError as exc:
                err_line = line + exc.line - 1 if exc.line else line
                errors.append(BlockError(start, err_line, exc.message, guess))
        pos = end
    return actions, errors
