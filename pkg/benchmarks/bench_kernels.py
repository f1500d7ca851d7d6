"""Compare the numba and numpy successor kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the bare ``expand`` call on random bit arrays and a full deterministic
search on two planning tasks. Results are printed as a small table.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from pddlbench.dataset import bundled_corpus, load_example  # noqa: E402
from pddlbench.planner import bfs_solve, kernels  # noqa: E402
from taskgen import flips_task  # noqa: E402


def random_arrays(rng, n_states, n_actions, words):
    def bits(shape, density):
        raw = rng.random(shape + (words * 64,)) < density
        return np.packbits(raw, axis=-1, bitorder="little").view(np.uint64).reshape(shape + (words,))

    return (
        bits((n_states,), 0.5),
        bits((n_actions,), 0.02),
        bits((n_actions,), 0.02),
        bits((n_actions,), 0.05),
        bits((n_actions,), 0.05),
        bits((), 0.01).reshape(words),
        np.zeros(words, dtype=np.uint64),
    )


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    kernels.warmup()
    rng = np.random.default_rng(0)
    cases = []
    for n_states, n_actions, words in [(64, 256, 2), (512, 1024, 4), (2048, 576, 1)]:
        arrs = random_arrays(rng, n_states, n_actions, words)
        cases.append((
            f"expand {n_states}x{n_actions}x{words}w",
            lambda k, a=arrs: k(*a),
        ))

    jungle = load_example(bundled_corpus() / "jungle")
    dom, prob = jungle.domain, jungle.problems[0].problem
    cases.append(("bfs jungle/escape", lambda k: bfs_solve(dom, prob, timeout=None, kernel=k)))
    fdom, fprob = flips_task(10)
    cases.append(("bfs flips-10 (full space)", lambda k: bfs_solve(fdom, fprob, timeout=None, kernel=k)))

    print(f"{'case':32s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, fn in cases:
        if name.startswith("expand"):
            t_np = best_of(lambda: fn(kernels.expand_numpy), args.repeat)
            t_nb = best_of(lambda: fn(kernels.expand_numba), args.repeat)
        else:
            t_np = best_of(lambda: fn("numpy"), args.repeat)
            t_nb = best_of(lambda: fn("numba"), args.repeat)
        print(f"{name:32s} {1e3 * t_np:10.2f} {1e3 * t_nb:10.2f} {t_np / t_nb:8.2f}")


if __name__ == "__main__":
    main()
