"""Prompt construction and prediction assembly.

Templates live in ``templates/`` as frozen text assets with ``<insert_*>``
placeholders. ``plain.txt`` and ``zpd.txt`` are the published instructions;
``cot.txt`` is our reconstruction (the plain instruction plus one
step-by-step line), since no chain-of-thought wording was published.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..dataset import ExampleRecord
from ..pddl import BlockError, Diagnostic, DomainFile, DomainHeader, scan_action_blocks, splice_actions
from ..pddl.printer import format_predicate, format_types


class TextCondition(enum.Enum):
    NONE = "none"
    SUM = "sum"
    MAP = "map"
    REL = "rel"
    ALL = "all"


class Style(enum.Enum):
    PLAIN = "plain"
    COT = "cot"
    ZPD = "zpd"


@dataclass(frozen=True)
class InstructionStyle:
    style: Style = Style.PLAIN
    shots: int = 0

    def __post_init__(self):
        if self.shots < 0:
            raise ValueError("shots must be >= 0")
        if self.shots > len(few_shot_examples()):
            raise ValueError(f"only {len(few_shot_examples())} few-shot examples are available")


@dataclass(frozen=True)
class PromptRequest:
    example_id: str
    style: InstructionStyle
    condition: TextCondition
    header: DomainHeader
    goal: str

    def __post_init__(self):
        if not self.header.action_names:
            raise ValueError("header must name at least one action")


class MissingAnnotation(Exception):
    def __init__(self, condition: TextCondition, example_id: str):
        self.condition = condition
        super().__init__(f"example {example_id!r} lacks the annotation needed for text={condition.value}")


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    return (resources.files(__package__) / "templates" / f"{name}.txt").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def few_shot_examples() -> tuple[str, ...]:
    bank = load_template("fewshot")
    parts = re.split(r"(?m)^(?=Example \d+:)", bank)
    return tuple(p for p in parts if p.strip())


def _step(n: int, paragraph: str) -> str:
    return f"Step {n}. {paragraph}"


def render_text_portion(example: ExampleRecord, cond: TextCondition) -> str:
    if cond is TextCondition.NONE:
        return ""
    if cond is TextCondition.ALL:
        return "\n\n".join(_step(i, p) for i, p in enumerate(example.text, 1))
    if cond is TextCondition.SUM:
        if not example.summaries:
            raise MissingAnnotation(cond, example.id)
        return "\n".join(
            f"{name}; {example.summaries[name]}" for name in example.action_names if name in example.summaries
        )
    if not example.mapping:
        raise MissingAnnotation(cond, example.id)
    if cond is TextCondition.REL:
        steps = sorted({n for nums in example.mapping.values() for n in nums})
        return "\n\n".join(_step(n, example.text[n - 1]) for n in steps)
    blocks = []
    for name in example.action_names:
        nums = example.mapping.get(name)
        if nums:
            body = " ".join(_step(n, example.text[n - 1]) for n in nums)
            blocks.append(f"{name}: {body}")
    return "\n\n".join(blocks)


def _fill(template: str, values: dict[str, str]) -> str:
    return re.sub(r"<insert_(\w+)>", lambda m: values[m.group(1)], template)


def build_prompt(req: PromptRequest, example: ExampleRecord) -> str:
    template = load_template(req.style.style.value)
    text = render_text_portion(example, req.condition)
    if req.condition is TextCondition.NONE:
        # Without text there is nothing to introduce; drop that section.
        template = re.sub(r"\n*here are the texts containing steps to <insert_goal>:\n<insert_text>\n", "\n", template)
    h = req.header
    body = _fill(
        template,
        {
            "action_names": "\n".join(h.action_names),
            "types": "\n".join(format_types(h)),
            "predicates": "\n".join(format_predicate(p) for p in h.predicates),
            "goal": req.goal,
            "text": text,
        },
    )
    if req.style.shots:
        shots = "".join(few_shot_examples()[: req.style.shots]).rstrip("\n")
        body = shots + "\n\n" + body
    return body


def request_for(example: ExampleRecord, style: InstructionStyle, condition: TextCondition) -> PromptRequest:
    return PromptRequest(example.id, style, condition, example.domain.header, example.title)


def assemble_prediction(header: DomainHeader, raw: str) -> tuple[DomainFile, list[Diagnostic]]:
    """Scan a completion for action blocks and splice them under ``header``."""
    actions, errors = scan_action_blocks(raw)
    df = splice_actions(header, actions)
    diags = [e.to_diagnostic() for e in errors]
    broken = {e.action for e in errors}
    # An action whose only block failed to parse is reported by the syntax error.
    diags.extend(d for d in df.notes if not (d.code == "missing_action" and d.action in broken))
    return df, diags


__all__ = [
    "BlockError",
    "InstructionStyle",
    "MissingAnnotation",
    "PromptRequest",
    "Style",
    "TextCondition",
    "assemble_prediction",
    "build_prompt",
    "few_shot_examples",
    "load_template",
    "render_text_portion",
    "request_for",
]
