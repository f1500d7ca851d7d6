"""Rendering of evaluation reports to disk."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Optional

from .harness import EvalReport, LabelKind


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{100 * value:.1f}"


def row_label(config: dict) -> str:
    if config.get("oracle"):
        return "gold"
    label = config["model"]
    if config["style"] != "plain":
        label += " + " + {"cot": "CoT", "zpd": "ZPD"}[config["style"]]
    if config["shots"]:
        label += f", {config['shots']} shot"
    return f"{label} (T={config['text']})"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    lines.extend("| " + " | ".join(r) + " |" for r in rows)
    return "\n".join(lines)


def render_tables(report: EvalReport) -> str:
    """Intrinsic/extrinsic summary, per-component accuracy and failure taxonomy."""
    agg = report.aggregates
    m = agg["metrics"]
    has_rows = agg["counts"]["actions"] > 0 or agg["counts"]["problems"] > 0
    label = row_label(report.config)
    t2 = _table(
        ["Model %", "action acc. (intrinsic)", "PF solve (extrinsic)"],
        [[label, _fmt(m["action_accuracy"]), _fmt(m["problem_solve_rate"])]] if has_rows else [],
    )
    t3 = _table(
        ["Model %", "Parameter", "Precondition", "Effect"],
        [[label, _fmt(m["parameter_accuracy"]), _fmt(m["precondition_accuracy"]), _fmt(m["effect_accuracy"])]]
        if has_rows
        else [],
    )
    tax = agg["taxonomy"]
    t4 = _table(
        [
            "Model",
            "Unsolved: Syntactic Error",
            "Unsolved: Bad Action",
            "Unsolved: Good Action",
            "Solved: Needs Review",
            "Solved: Matches Gold",
        ],
        [
            [
                label,
                *(
                    str(tax[k.value])
                    for k in (
                        LabelKind.SYNTACTIC_ERROR,
                        LabelKind.BAD_ACTION,
                        LabelKind.GOOD_ACTION,
                        LabelKind.NEEDS_REVIEW,
                        LabelKind.MATCHES_GOLD,
                    )
                ),
            ]
        ]
        if has_rows
        else [],
    )
    return (
        "## Intrinsic and extrinsic results\n\n"
        + t2
        + "\n\n## Component accuracy\n\n"
        + t3
        + "\n\n## Failure taxonomy\n\n"
        + t4
        + "\n"
    )


def review_queue(report: EvalReport) -> list[dict]:
    """Solved problems whose plan differs from gold, for manual good/bad-plan triage."""
    out = []
    for ex in report.examples:
        for p in ex["problems"]:
            if p["label"]["kind"] == LabelKind.NEEDS_REVIEW.value:
                out.append({"example": ex["id"], "problem": p["name"], "plan": p["plan"], "gold_plan": p["gold_plan"]})
    return out


def emit_report(report: EvalReport, out_dir, formats: Iterable[str] = ("json", "tables", "review")) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    formats = set(formats)
    if "json" in formats:
        path = out / "report.json"
        path.write_text(report.to_json(), encoding="utf-8", newline="\n")
        written.append(path)
    if "tables" in formats:
        path = out / "tables.md"
        path.write_text(render_tables(report), encoding="utf-8", newline="\n")
        written.append(path)
    if "review" in formats:
        path = out / "review_queue.jsonl"
        lines = [json.dumps(item, sort_keys=True) for item in review_queue(report)]
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8", newline="\n")
        written.append(path)
    if "plot" in formats:
        written.append(_plot(report, out / "solve_rate.png"))
    return written


def _plot(report: EvalReport, path: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    m = report.aggregates["metrics"]
    names = ["action acc.", "PF solve"]
    values = [100 * (m["action_accuracy"] or 0), 100 * (m["problem_solve_rate"] or 0)]
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.bar(names, values, color=["tab:blue", "tab:orange"])
    ax.set_ylim(0, 100)
    ax.set_ylabel("%")
    ax.set_title(row_label(report.config))
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
