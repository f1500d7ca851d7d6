"""Loading and sanity-checking example tuples from disk.

Layout of one example directory::

    <id>/text.txt        optional title line, then numbered paragraphs
    <id>/domain.pddl
    <id>/problems/*.pddl
    <id>/plans/*.plan    one per problem, matched by file stem
    <id>/summaries.tsv   action<TAB>one-line summary       (optional)
    <id>/mapping.tsv     action<TAB>1,3,4                  (optional)

The corpus root holds a ``manifest`` file listing example ids, one per line.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from statistics import fmean
from typing import Optional, Union

from .pddl import DomainFile, Plan, ProblemFile, PDDLSyntaxError, parse_domain, parse_plan, parse_problem
from .planner import DEFAULT_TIMEOUT, Solved, bfs_solve, validate_plan

log = logging.getLogger(__name__)

_STEP_RE = re.compile(r"^\s*(\d+)\.\s*(.*)$", re.DOTALL)


class DatasetError(Exception):
    pass


class MissingFile(DatasetError):
    def __init__(self, path: Path):
        self.path = path
        super().__init__(f"missing file: {path}")


class ParseFailure(DatasetError):
    def __init__(self, path: Path, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"cannot parse {path}: {cause}")


class DanglingReference(DatasetError):
    pass


@dataclass(frozen=True)
class ProblemEntry:
    name: str
    problem: ProblemFile
    plan: Plan


@dataclass(frozen=True)
class ExampleRecord:
    id: str
    title: str
    text: tuple[str, ...]  # paragraph bodies; index 0 is step 1
    domain: DomainFile
    problems: tuple[ProblemEntry, ...]
    summaries: dict = field(default_factory=dict, hash=False)
    mapping: dict = field(default_factory=dict, hash=False)  # action -> tuple of 1-based steps

    @property
    def action_names(self) -> tuple[str, ...]:
        return self.domain.header.action_names


@dataclass(frozen=True)
class CorpusStats:
    examples: int
    problems: int
    mean_actions: Optional[float]
    mean_plan_length: Optional[float]

    @property
    def defined(self) -> bool:
        return self.mean_actions is not None

    def to_dict(self) -> dict:
        return {
            "examples": self.examples,
            "problems": self.problems,
            "mean_actions_per_domain": self.mean_actions,
            "mean_gold_plan_length": self.mean_plan_length,
        }


def bundled_corpus() -> Path:
    """Path to the corpus shipped inside the package (one example)."""
    return Path(str(resources.files("pddlbench") / "data" / "corpus"))


def _read(path: Path) -> str:
    if not path.is_file():
        raise MissingFile(path)
    return path.read_text(encoding="utf-8")


def parse_text(raw: str) -> tuple[Optional[str], list[str]]:
    """Split ``text.txt`` into an optional title and numbered paragraphs."""
    blocks = [b.strip() for b in re.split(r"\n\s*\n", raw) if b.strip()]
    title = None
    paragraphs: list[str] = []
    for i, block in enumerate(blocks):
        m = _STEP_RE.match(block)
        if m is None:
            if i == 0:
                title = block
                continue
            if not paragraphs:
                raise DatasetError(f"unnumbered paragraph: {block[:40]!r}")
            # Continuation of the previous step.
            paragraphs[-1] += "\n\n" + block
            continue
        number = int(m.group(1))
        if number != len(paragraphs) + 1:
            raise DatasetError(f"step {number} out of sequence")
        paragraphs.append(m.group(2).strip())
    return title, paragraphs


def _read_tsv(path: Path) -> list[tuple[str, str]]:
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            raise DatasetError(f"{path}:{lineno}: expected a TAB-separated pair")
        key, value = line.split("\t", 1)
        rows.append((key.strip().lower(), value.strip()))
    return rows


def load_example(path: Union[str, Path]) -> ExampleRecord:
    path = Path(path)
    title, paragraphs = parse_text(_read(path / "text.txt"))
    try:
        domain = parse_domain(_read(path / "domain.pddl"))
    except PDDLSyntaxError as exc:
        raise ParseFailure(path / "domain.pddl", exc) from None
    names = set(domain.header.action_names)

    problems = []
    for pfile in sorted((path / "problems").glob("*.pddl")):
        plan_path = path / "plans" / f"{pfile.stem}.plan"
        try:
            problem = parse_problem(pfile.read_text(encoding="utf-8"))
        except PDDLSyntaxError as exc:
            raise ParseFailure(pfile, exc) from None
        try:
            plan = parse_plan(_read(plan_path))
        except PDDLSyntaxError as exc:
            raise ParseFailure(plan_path, exc) from None
        problems.append(ProblemEntry(pfile.stem, problem, plan))

    summaries: dict[str, str] = {}
    if (path / "summaries.tsv").is_file():
        for action, summary in _read_tsv(path / "summaries.tsv"):
            if action not in names:
                raise DanglingReference(f"summaries.tsv names unknown action {action!r}")
            summaries[action] = summary
    mapping: dict[str, tuple[int, ...]] = {}
    if (path / "mapping.tsv").is_file():
        for action, steps in _read_tsv(path / "mapping.tsv"):
            if action not in names:
                raise DanglingReference(f"mapping.tsv names unknown action {action!r}")
            try:
                nums = tuple(int(s) for s in steps.split(",") if s.strip())
            except ValueError:
                raise DatasetError(f"mapping.tsv: bad step list for {action!r}: {steps!r}") from None
            for n in nums:
                if not 1 <= n <= len(paragraphs):
                    raise DanglingReference(
                        f"mapping.tsv: {action!r} references step {n} of a {len(paragraphs)}-step text"
                    )
            mapping[action] = nums
    return ExampleRecord(
        id=path.name,
        title=title or path.name.replace("_", " "),
        text=tuple(paragraphs),
        domain=domain,
        problems=tuple(problems),
        summaries=summaries,
        mapping=mapping,
    )


def corpus_stats(examples: list[ExampleRecord]) -> CorpusStats:
    plans = [len(p.plan) for ex in examples for p in ex.problems]
    return CorpusStats(
        examples=len(examples),
        problems=len(plans),
        mean_actions=fmean(len(ex.domain.actions) for ex in examples) if examples else None,
        mean_plan_length=fmean(plans) if plans else None,
    )


def read_manifest(root: Path) -> list[str]:
    manifest = root / "manifest"
    if not manifest.is_file():
        return sorted(p.name for p in root.iterdir() if p.is_dir()) if root.is_dir() else []
    ids = []
    for line in manifest.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            ids.append(line)
    return ids


@dataclass
class CorpusLoad:
    examples: list[ExampleRecord]
    stats: CorpusStats
    errors: dict[str, str] = field(default_factory=dict)


def load_corpus(root: Union[str, Path], ids: Optional[list[str]] = None) -> CorpusLoad:
    """Load every example in manifest order; failures are collected, not raised."""
    root = Path(root)
    examples = []
    errors = {}
    for ex_id in read_manifest(root):
        if ids is not None and ex_id not in ids:
            continue
        try:
            examples.append(load_example(root / ex_id))
        except DatasetError as exc:
            log.warning("skipping %s: %s", ex_id, exc)
            errors[ex_id] = str(exc)
    return CorpusLoad(examples, corpus_stats(examples), errors)


@dataclass(frozen=True)
class GoldCheck:
    problem: str
    plan_valid: bool
    plan_error: Optional[str]
    solved: bool
    outcome: str
    elapsed: float

    @property
    def ok(self) -> bool:
        return self.plan_valid and self.solved


@dataclass(frozen=True)
class GoldReport:
    example: str
    checks: tuple[GoldCheck, ...]
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def check_gold(example: ExampleRecord, timeout: float = DEFAULT_TIMEOUT) -> GoldReport:
    """Validate every gold plan and solve every problem with the gold domain."""
    checks = []
    for entry in example.problems:
        trace = validate_plan(example.domain, entry.problem, entry.plan)
        outcome = bfs_solve(example.domain, entry.problem, timeout=timeout)
        checks.append(
            GoldCheck(
                problem=entry.name,
                plan_valid=trace.valid,
                plan_error=None if trace.valid else str(trace.error),
                solved=isinstance(outcome, Solved),
                outcome=outcome.kind,
                elapsed=getattr(outcome, "elapsed", 0.0),
            )
        )
    warnings = () if example.problems else ("example has no problems",)
    return GoldReport(example.id, tuple(checks), warnings)
