"""Rebuild the replay cache under tests/fixtures/replay/ from hand-written completions.

Each run in runs.json pairs a prompt configuration over the bundled jungle
example with a completion file. The prompt is built exactly as the harness
builds it, so the cache key matches what a ReplayOnly run will look up.

    python3 scripts/build_fixture_cache.py [--freeze]

--freeze also re-runs the harness and rewrites expected.json. Only do that
after checking the new numbers by hand.
"""

import argparse
import hashlib
import json
import shutil
from pathlib import Path

from pddlbench.dataset import bundled_corpus, load_example
from pddlbench.harness import RunConfig, run
from pddlbench.llm_client import CachedCompletion, CompletionCache, ModelConfig, cache_key, sha256_text
from pddlbench.prompts import InstructionStyle, Style, TextCondition, build_prompt, request_for

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
REPLAY = FIXTURES / "replay"
MODEL = ModelConfig("fixture-model")


def run_config(spec: dict, cache_dir: Path) -> RunConfig:
    return RunConfig(
        corpus=bundled_corpus(),
        model=MODEL,
        style=InstructionStyle(Style(spec["style"]), spec["shots"]),
        condition=TextCondition(spec["text"]),
        cache_dir=cache_dir,
    )


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--freeze", action="store_true")
    args = ap.parse_args()

    runs = json.loads((REPLAY / "runs.json").read_text())
    cache_dir = REPLAY / "cache"
    shutil.rmtree(cache_dir, ignore_errors=True)
    cache = CompletionCache(cache_dir)
    example = load_example(bundled_corpus() / "jungle")
    for spec in runs:
        cfg = run_config(spec, cache_dir)
        prompt = build_prompt(request_for(example, cfg.style, cfg.condition), example)
        text = (FIXTURES / "completions" / spec["completion"]).read_text(encoding="utf-8")
        key = cache_key(MODEL, prompt)
        cache.put(CachedCompletion(key, sha256_text(prompt), text, MODEL.model, MODEL.sampling, {"source": "fixture"}))
        print(spec["name"], key)

    if args.freeze:
        expected = {}
        for spec in runs:
            report = run(run_config(spec, cache_dir))
            expected[spec["name"]] = {
                "aggregates": report.aggregates,
                "report_sha256": hashlib.sha256(report.to_json().encode("utf-8")).hexdigest(),
            }
        (REPLAY / "expected.json").write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n")
        print(json.dumps(expected, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
