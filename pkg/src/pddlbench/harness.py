"""End-to-end evaluation: prompt, complete, assemble, score, solve, classify."""

from __future__ import annotations

import enum
import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .dataset import ExampleRecord, load_corpus
from .equivalence import IntrinsicReport, greedy_disagreements, intrinsic_report
from .llm_client import LLMClient, Mode, ModelConfig
from .pddl import Diagnostic, DomainFile, Plan, format_action, validate_domain
from .planner import DEFAULT_TIMEOUT, SolveOutcome, Solved, SolverError, bfs_solve
from .prompts import InstructionStyle, TextCondition, assemble_prediction, build_prompt, request_for

log = logging.getLogger(__name__)

REPORT_FORMAT = "pddlbench-report/1"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    corpus: Path
    model: ModelConfig
    style: InstructionStyle = InstructionStyle()
    condition: TextCondition = TextCondition.NONE
    examples: Optional[tuple[str, ...]] = None
    timeout: float = DEFAULT_TIMEOUT
    out_dir: Optional[Path] = None
    mode: Mode = Mode.REPLAY_ONLY
    cache_dir: Optional[Path] = None
    jobs: int = 1
    oracle: bool = False  # score the gold actions instead of a model completion

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def describe(self) -> dict:
        """Fields that determine results (paths and parallelism excluded)."""
        return {
            "model": self.model.model,
            "sampling": self.model.sampling,
            "style": self.style.style.value,
            "shots": self.style.shots,
            "text": self.condition.value,
            "examples": list(self.examples) if self.examples is not None else None,
            "timeout_secs": self.timeout,
            "oracle": self.oracle,
        }

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.describe(), sort_keys=True).encode()).hexdigest()


class LabelKind(enum.Enum):
    SYNTACTIC_ERROR = "unsolved/syntactic_error"
    BAD_ACTION = "unsolved/bad_action"
    GOOD_ACTION = "unsolved/good_action"
    MATCHES_GOLD = "solved/matches_gold"
    NEEDS_REVIEW = "solved/needs_review"


@dataclass(frozen=True)
class TaxonomyLabel:
    kind: LabelKind
    action: Optional[str] = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        if self.action is not None:
            out["action"] = self.action
        return out


def classify(
    diagnostics: list[Diagnostic],
    intrinsic: IntrinsicReport,
    outcome: SolveOutcome,
    gold_plan: Plan,
) -> TaxonomyLabel:
    """Assign one failure-taxonomy label to a (prediction, problem) pair.

    Unsolved problems are blamed on the first gold-plan action whose
    prediction differs from gold; if none differs the label is
    ``GOOD_ACTION``. Solved problems match gold only on an identical step
    sequence; anything else goes to manual review.
    """
    if isinstance(outcome, SolverError) or (
        not isinstance(outcome, Solved) and any(d.code == "syntax_error" for d in diagnostics)
    ):
        return TaxonomyLabel(LabelKind.SYNTACTIC_ERROR)
    if isinstance(outcome, Solved):
        if outcome.plan.steps == gold_plan.steps:
            return TaxonomyLabel(LabelKind.MATCHES_GOLD)
        return TaxonomyLabel(LabelKind.NEEDS_REVIEW)
    for step in gold_plan:
        score = intrinsic.score(step.action)
        if score is None or not score.correct:
            return TaxonomyLabel(LabelKind.BAD_ACTION, step.action)
    return TaxonomyLabel(LabelKind.GOOD_ACTION)


def _outcome_record(outcome: SolveOutcome) -> dict:
    # Wall-clock time is left out so replayed reports stay byte-identical.
    rec: dict = {"outcome": outcome.kind}
    if isinstance(outcome, Solved):
        rec["plan"] = [str(s) for s in outcome.plan]
        rec["nodes_expanded"] = outcome.nodes_expanded
    elif isinstance(outcome, SolverError):
        rec["diagnostic"] = outcome.diagnostic
    else:
        rec["nodes_expanded"] = outcome.nodes_expanded
        note = getattr(outcome, "note", "")
        if note:
            rec["note"] = note
    return rec


def _pct(num: int, den: int) -> Optional[float]:
    return None if den == 0 else num / den


def aggregate(examples: list[dict]) -> dict:
    """Micro-averaged metrics over all gold actions and all problems."""
    counts = {
        "actions": 0,
        "actions_correct": 0,
        "params_correct": 0,
        "preconditions_correct": 0,
        "effects_correct": 0,
        "problems": 0,
        "problems_solved": 0,
    }
    taxonomy = {k.value: 0 for k in LabelKind}
    for ex in examples:
        for a in ex["actions"]:
            counts["actions"] += 1
            d = a["distance"]
            counts["actions_correct"] += bool(a["correct"])
            if d is not None:
                counts["params_correct"] += d["params"]["distance"] == 0
                counts["preconditions_correct"] += d["precondition"]["distance"] == 0
                counts["effects_correct"] += d["effect"]["distance"] == 0
        for p in ex["problems"]:
            counts["problems"] += 1
            counts["problems_solved"] += p["outcome"] == "solved"
            taxonomy[p["label"]["kind"]] += 1
    metrics = {
        "action_accuracy": _pct(counts["actions_correct"], counts["actions"]),
        "parameter_accuracy": _pct(counts["params_correct"], counts["actions"]),
        "precondition_accuracy": _pct(counts["preconditions_correct"], counts["actions"]),
        "effect_accuracy": _pct(counts["effects_correct"], counts["actions"]),
        "problem_solve_rate": _pct(counts["problems_solved"], counts["problems"]),
    }
    return {"counts": counts, "metrics": metrics, "taxonomy": taxonomy, "defined": counts["actions"] > 0}


@dataclass
class EvalReport:
    config: dict
    config_digest: str
    examples: list[dict] = field(default_factory=list)
    errors: dict = field(default_factory=dict)

    @property
    def aggregates(self) -> dict:
        return aggregate(self.examples)

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "config": self.config,
            "config_digest": self.config_digest,
            "examples": self.examples,
            "corpus_errors": dict(sorted(self.errors.items())),
            "aggregates": self.aggregates,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def gold_completion(example: ExampleRecord) -> str:
    return "\n\n".join(format_action(a, indent="") for a in example.domain.actions) + "\n"


@dataclass
class _Prediction:
    example: ExampleRecord
    domain: DomainFile
    diagnostics: list[Diagnostic]
    intrinsic: IntrinsicReport
    cache_key: Optional[str]


def _predict(example: ExampleRecord, config: RunConfig, client: Optional[LLMClient]) -> _Prediction:
    header = example.domain.header
    if config.oracle:
        raw, key = gold_completion(example), None
    else:
        prompt = build_prompt(request_for(example, config.style, config.condition), example)
        completion = client.complete(config.model, prompt, config.mode)
        raw, key = completion.text, completion.key
    df, diags = assemble_prediction(header, raw)
    return _Prediction(example, df, diags, intrinsic_report(df, example.domain), key)


def _solve(pred: _Prediction, problem, timeout: float) -> SolveOutcome:
    syntax = [d for d in pred.diagnostics if d.code == "syntax_error"]
    if syntax:
        # A real planner rejects the whole file, so no search is attempted.
        return SolverError(f"syntax error in predicted domain: {syntax[0].message}")
    return bfs_solve(pred.domain, problem, timeout=timeout)


def run(config: RunConfig, client: Optional[LLMClient] = None) -> EvalReport:
    """Evaluate every selected example; per-item failures land in the report."""
    if not Path(config.corpus).is_dir():
        raise ConfigError(f"corpus root {config.corpus} is not a directory")
    if config.out_dir is not None:
        out = Path(config.out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {out}: {exc}") from None
        if not os.access(out, os.W_OK):
            raise ConfigError(f"output directory {out} is not writable")
    if not config.oracle and client is None:
        if config.cache_dir is None:
            raise ConfigError("a cache directory is required unless running the gold oracle")
        client = LLMClient(config.cache_dir, config.mode)
    ids = list(config.examples) if config.examples is not None else None
    corpus = load_corpus(config.corpus, ids)
    report = EvalReport(config.describe(), config.digest(), errors=dict(corpus.errors))

    predictions: list[Optional[_Prediction]] = []
    for example in corpus.examples:
        try:
            predictions.append(_predict(example, config, client))
        except Exception as exc:  # recorded per item; only config errors abort
            log.warning("prediction failed for %s: %s", example.id, exc)
            report.errors[example.id] = f"{type(exc).__name__}: {exc}"
            predictions.append(None)

    tasks = [
        (i, j, pred, entry)
        for i, pred in enumerate(predictions)
        if pred is not None
        for j, entry in enumerate(pred.example.problems)
    ]
    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        outcomes = list(pool.map(lambda t: _solve(t[2], t[3].problem, config.timeout), tasks))
    by_example: dict[int, list] = {}
    for (i, j, pred, entry), outcome in zip(tasks, outcomes):
        by_example.setdefault(i, []).append((entry, outcome))

    for i, pred in enumerate(predictions):
        if pred is None:
            continue
        problems = []
        for entry, outcome in by_example.get(i, []):
            label = classify(pred.diagnostics, pred.intrinsic, outcome, entry.plan)
            rec = {"name": entry.name, **_outcome_record(outcome), "label": label.to_dict()}
            rec["gold_plan"] = [str(s) for s in entry.plan]
            problems.append(rec)
        intrinsic = pred.intrinsic
        report.examples.append(
            {
                "id": pred.example.id,
                "cache_key": pred.cache_key,
                "prediction_diagnostics": [d.to_dict() for d in pred.diagnostics],
                "validation": [d.to_dict() for d in validate_domain(pred.domain) if d.severity != "info"],
                "greedy_order_disagreements": greedy_disagreements(pred.domain, pred.example.domain),
                "actions": [s.to_dict() for s in intrinsic.scores],
                "problems": problems,
            }
        )
    return report
