"""Command-line entry point: ``pddlbench <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .dataset import DatasetError
from .pddl import PDDLSyntaxError, parse_domain, scan_action_blocks, splice_actions

EXIT_CODES = {"solved": 0, "no_plan": 10, "timeout": 11, "error": 12}
EXIT_CONFIG = 2


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_solve(args) -> int:
    from .planner import Solved, bfs_solve

    outcome = bfs_solve(_read(args.domain), _read(args.problem), timeout=args.timeout_secs)
    if isinstance(outcome, Solved):
        text = outcome.plan.to_text()
        if args.plan_out:
            Path(args.plan_out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        print(f"; solved: {len(outcome.plan)} steps, {outcome.nodes_expanded} nodes, {outcome.elapsed:.3f}s",
              file=sys.stderr)
    elif outcome.kind == "error":
        print(f"error: {outcome.diagnostic}", file=sys.stderr)
    else:
        note = getattr(outcome, "note", "")
        print(f"; {outcome.kind} after {outcome.elapsed:.3f}s, {outcome.nodes_expanded} nodes {note}".rstrip(),
              file=sys.stderr)
    return EXIT_CODES[outcome.kind]


def load_predicted(raw: str, gold):
    """A full domain if it parses, else its action blocks under the gold header."""
    try:
        return parse_domain(raw), []
    except PDDLSyntaxError:
        actions, errors = scan_action_blocks(raw)
        return splice_actions(gold.header, actions), [e.to_diagnostic() for e in errors]


def cmd_diff(args) -> int:
    from .equivalence import intrinsic_report

    gold = parse_domain(_read(args.gold))
    pred, diags = load_predicted(_read(args.predicted), gold)
    report = intrinsic_report(pred, gold)
    record = {
        "actions": [s.to_dict() for s in report.scores],
        "action_accuracy": report.action_accuracy,
        "parameter_accuracy": report.param_accuracy,
        "precondition_accuracy": report.precondition_accuracy,
        "effect_accuracy": report.effect_accuracy,
        "diagnostics": [d.to_dict() for d in diags],
    }
    text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for s in report.scores:
        d = "missing" if s.distance is None else "params=%d pre=%d eff=%d" % s.distance.as_tuple()
        print(f"{s.name:30s} {d}", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    from .dataset import load_corpus

    loaded = load_corpus(args.root)
    for ex_id, err in loaded.errors.items():
        print(f"error: {ex_id}: {err}", file=sys.stderr)
    stats = loaded.stats.to_dict()
    width = max(len(k) for k in stats)
    for k, v in stats.items():
        shown = "undefined" if v is None else (f"{v:.2f}" if isinstance(v, float) else str(v))
        print(f"{k:{width}s}  {shown}")
    print(json.dumps(stats, sort_keys=True))
    return 1 if loaded.errors else 0


def cmd_check_gold(args) -> int:
    from .dataset import check_gold, load_corpus

    loaded = load_corpus(args.root)
    bad = len(loaded.errors)
    for ex in loaded.examples:
        rep = check_gold(ex, timeout=args.timeout_secs)
        for c in rep.checks:
            status = "ok" if c.ok else "FAIL"
            print(f"{status} {ex.id}/{c.problem} outcome={c.outcome} plan_valid={c.plan_valid} {c.elapsed:.2f}s")
            bad += not c.ok
    return 1 if bad else 0


def _style(args):
    from .prompts import InstructionStyle, Style, TextCondition

    return InstructionStyle(Style(args.style), args.shots), TextCondition(args.text)


def cmd_prompt(args) -> int:
    from .dataset import load_example
    from .prompts import build_prompt, request_for

    example = load_example(Path(args.corpus) / args.example)
    style, cond = _style(args)
    sys.stdout.write(build_prompt(request_for(example, style, cond), example))
    sys.stdout.write("\n")
    return 0


def cmd_eval(args) -> int:
    from .harness import ConfigError, RunConfig, run
    from .llm_client import Mode, ModelConfig
    from .report import emit_report

    try:
        style, cond = _style(args)
        config = RunConfig(
            corpus=Path(args.corpus),
            model=ModelConfig(args.model, max_tokens=args.max_tokens, temperature=args.temperature),
            style=style,
            condition=cond,
            examples=tuple(args.examples) if args.examples else None,
            timeout=args.timeout_secs,
            out_dir=Path(args.out),
            mode=Mode.REPLAY_ONLY if args.replay_only else Mode.LIVE,
            cache_dir=Path(args.cache_dir) if args.cache_dir else None,
            jobs=args.jobs,
            oracle=args.oracle,
        )
        report = run(config)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    formats = ["json", "tables", "review"] + (["plot"] if args.plot else [])
    for path in emit_report(report, args.out, formats):
        print(path)
    if report.errors:
        for k, v in sorted(report.errors.items()):
            print(f"warning: {k}: {v}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pddlbench", description="PDDL action-modeling benchmark tools")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="breadth-first search for a plan")
    s.add_argument("domain")
    s.add_argument("problem")
    s.add_argument("--timeout-secs", type=float, default=30.0)
    s.add_argument("--plan-out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("diff", help="per-action distance between a predicted and a gold domain")
    s.add_argument("predicted")
    s.add_argument("gold")
    s.add_argument("--report", help="write the JSON record here instead of stdout")
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("stats", help="corpus statistics")
    s.add_argument("root")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("check-gold", help="validate gold plans and solve every problem with the gold domain")
    s.add_argument("root")
    s.add_argument("--timeout-secs", type=float, default=30.0)
    s.set_defaults(func=cmd_check_gold)

    def style_args(s):
        s.add_argument("--style", choices=["plain", "cot", "zpd"], default="plain")
        s.add_argument("--shots", type=int, default=0)
        s.add_argument("--text", choices=["none", "sum", "map", "rel", "all"], default="none")

    s = sub.add_parser("prompt", help="print the prompt built for one example")
    s.add_argument("--corpus", required=True)
    s.add_argument("--example", required=True)
    style_args(s)
    s.set_defaults(func=cmd_prompt)

    s = sub.add_parser("eval", help="run the evaluation harness")
    s.add_argument("--corpus", required=True)
    style_args(s)
    s.add_argument("--model", default="gpt-4")
    s.add_argument("--max-tokens", type=int, default=10_000)
    s.add_argument("--temperature", type=float, default=None)
    s.add_argument("--examples", nargs="*", help="restrict to these example ids")
    s.add_argument("--timeout-secs", type=float, default=30.0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--replay-only", action="store_true", help="fail on cache misses instead of calling the API")
    s.add_argument("--cache-dir")
    s.add_argument("--out", required=True)
    s.add_argument("--oracle", action="store_true", help="score gold actions instead of model output")
    s.add_argument("--plot", action="store_true", help="also write a solve-rate bar chart (needs matplotlib)")
    s.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, PDDLSyntaxError, DatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 12 if args.command == "solve" else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
