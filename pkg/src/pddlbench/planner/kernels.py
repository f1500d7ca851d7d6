"""Bitset successor kernels.

States are rows of ``uint64`` words, one bit per ground atom. Each ground
action carries four masks (positive/negative precondition, add, delete).
Both kernels return successors ordered by (frontier row, action index).

Set ``PDDLBENCH_NUMBA=0`` to force the pure-numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


def _env_enabled() -> bool:
    return os.environ.get("PDDLBENCH_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def expand_numpy(states, pre_pos, pre_neg, add, delete, goal_pos, goal_neg):
    """Return ``(parent_row, action, child, is_goal)`` for all applicable pairs."""
    s = states[:, None, :]
    ok = np.all((s & pre_pos[None, :, :]) == pre_pos[None, :, :], axis=2)
    ok &= np.all((s & pre_neg[None, :, :]) == 0, axis=2)
    parent, action = np.nonzero(ok)
    children = (states[parent] & ~delete[action]) | add[action]
    goal = np.all((children & goal_pos) == goal_pos, axis=1) & np.all((children & goal_neg) == 0, axis=1)
    return parent.astype(np.int64), action.astype(np.int64), children, goal


def _expand_loops(states, pre_pos, pre_neg, add, delete, goal_pos, goal_neg):
    n_states, n_words = states.shape
    n_actions = pre_pos.shape[0]
    ok = np.zeros((n_states, n_actions), dtype=np.bool_)
    count = 0
    for i in range(n_states):
        for a in range(n_actions):
            good = True
            for w in range(n_words):
                v = states[i, w]
                if (v & pre_pos[a, w]) != pre_pos[a, w] or (v & pre_neg[a, w]) != 0:
                    good = False
                    break
            if good:
                ok[i, a] = True
                count += 1
    parent = np.empty(count, dtype=np.int64)
    action = np.empty(count, dtype=np.int64)
    children = np.empty((count, n_words), dtype=np.uint64)
    goal = np.empty(count, dtype=np.bool_)
    k = 0
    for i in range(n_states):
        for a in range(n_actions):
            if ok[i, a]:
                parent[k] = i
                action[k] = a
                hit = True
                for w in range(n_words):
                    c = (states[i, w] & ~delete[a, w]) | add[a, w]
                    children[k, w] = c
                    if (c & goal_pos[w]) != goal_pos[w] or (c & goal_neg[w]) != 0:
                        hit = False
                goal[k] = hit
                k += 1
    return parent, action, children, goal


if numba is not None:
    expand_numba = numba.njit(cache=True, nogil=True)(_expand_loops)
else:  # pragma: no cover
    expand_numba = None

USE_NUMBA = numba is not None and _env_enabled()


def get_kernel(name: str | None = None):
    """``"numba"``, ``"numpy"`` or ``None`` for the environment default."""
    if name is None:
        name = "numba" if USE_NUMBA else "numpy"
    if name == "numba":
        if expand_numba is None:
            raise RuntimeError("numba is not installed")
        return expand_numba
    if name == "numpy":
        return expand_numpy
    raise ValueError(f"unknown kernel {name!r}")


_warm = False


def warmup() -> None:
    """Compile the numba kernel outside any timed region."""
    global _warm
    if _warm or expand_numba is None:
        return
    z = np.zeros((1, 1), dtype=np.uint64)
    expand_numba(z, z, z, z, z, z[0], z[0])
    _warm = True


def pack(indices, n_words: int) -> np.ndarray:
    row = np.zeros(n_words, dtype=np.uint64)
    for i in indices:
        row[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
    return row
