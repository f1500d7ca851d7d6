"""Breadth-first planning and plan validation."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..pddl.lexer import PDDLSyntaxError
from ..pddl.model import DomainFile, Plan, PlanStep, ProblemFile
from ..pddl.parser import parse_domain, parse_problem
from . import kernels
from .grounding import (
    DeadlineExceeded,
    GroundAction,
    NotApplicable,
    UnresolvableConstant,
    apply,
    goal_atoms,
    ground,
    initial_state,
    instantiate,
    objects_by_type,
    resolve_objects,
)

DEFAULT_TIMEOUT = 30.0
DEFAULT_NODE_CAP = 5_000_000
# Upper bound on frontier-rows x actions handed to one kernel call; keeps the
# gap between deadline checks short.
_CHUNK_CELLS = 1 << 16


@dataclass(frozen=True)
class Solved:
    plan: Plan
    nodes_expanded: int
    elapsed: float = field(compare=False)
    kind = "solved"


@dataclass(frozen=True)
class NoPlan:
    nodes_expanded: int
    elapsed: float = field(default=0.0, compare=False)
    kind = "no_plan"


@dataclass(frozen=True)
class Timeout:
    elapsed: float = field(compare=False)
    nodes_expanded: int = 0
    note: str = ""
    kind = "timeout"


@dataclass(frozen=True)
class SolverError:
    diagnostic: str
    kind = "error"


SolveOutcome = Union[Solved, NoPlan, Timeout, SolverError]


def _coerce(df, pf):
    if isinstance(df, (str, bytes)):
        df = parse_domain(df)
    if isinstance(pf, (str, bytes)):
        pf = parse_problem(pf)
    return df, pf


class _Encoding:
    """Atom indexing and bit masks for a grounded task."""

    def __init__(self, actions: list[GroundAction], init, goal_pos, goal_neg):
        index: dict = {}
        for atom in sorted(init):
            index.setdefault(atom, len(index))
        for atom in sorted(goal_pos | goal_neg):
            index.setdefault(atom, len(index))
        for a in actions:
            for group in (a.pre_pos, a.pre_neg, a.add, a.delete):
                for atom in sorted(group):
                    index.setdefault(atom, len(index))
        self.index = index
        self.n_words = max(1, (len(index) + 63) // 64)
        w = self.n_words
        g = len(actions)
        self.pre_pos = np.zeros((g, w), dtype=np.uint64)
        self.pre_neg = np.zeros((g, w), dtype=np.uint64)
        self.add = np.zeros((g, w), dtype=np.uint64)
        self.delete = np.zeros((g, w), dtype=np.uint64)
        for i, a in enumerate(actions):
            self.pre_pos[i] = self.pack(a.pre_pos)
            self.pre_neg[i] = self.pack(a.pre_neg)
            self.add[i] = self.pack(a.add)
            self.delete[i] = self.pack(a.delete)
        self.init = self.pack(init)
        self.goal_pos = self.pack(goal_pos)
        self.goal_neg = self.pack(goal_neg)

    def pack(self, atoms) -> np.ndarray:
        return kernels.pack((self.index[a] for a in atoms), self.n_words)


def bfs_solve(
    df: Union[DomainFile, str],
    pf: Union[ProblemFile, str],
    timeout: Optional[float] = DEFAULT_TIMEOUT,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    kernel: Optional[str] = None,
) -> SolveOutcome:
    """Shortest plan by breadth-first search.

    The time budget covers parsing, grounding and search. ``timeout=None``
    disables the clock (deterministic mode). Successors are generated in
    action declaration order, then lexicographic binding order, and the
    queue is FIFO, so the returned plan is reproducible.
    """
    expand = kernels.get_kernel(kernel)
    if expand is kernels.expand_numba:
        kernels.warmup()
    start = time.perf_counter()
    deadline = None if timeout is None else start + timeout

    def elapsed() -> float:
        return time.perf_counter() - start

    try:
        df, pf = _coerce(df, pf)
        actions = ground(df, pf, prune_static=True, deadline=deadline)
    except PDDLSyntaxError as exc:
        return SolverError(f"syntax error: {exc}")
    except UnresolvableConstant as exc:
        return SolverError(str(exc))
    except DeadlineExceeded:
        return Timeout(elapsed(), 0, "deadline reached while grounding")

    init = initial_state(pf)
    gpos, gneg = goal_atoms(pf)
    if gpos <= init and not (gneg & init):
        return Solved(Plan(), 0, elapsed())
    if not actions:
        return NoPlan(0, elapsed())

    enc = _Encoding(actions, init, gpos, gneg)
    chunk = max(1, _CHUNK_CELLS // len(actions))

    parents: list[int] = [-1]
    via: list[int] = [-1]
    visited = {enc.init.tobytes()}
    frontier = enc.init[None, :]
    frontier_ids = np.zeros(1, dtype=np.int64)
    expanded = 0

    def plan_to(node: int) -> Plan:
        steps = []
        while parents[node] >= 0:
            a = actions[via[node]]
            steps.append(PlanStep(a.name, a.binding))
            node = parents[node]
        return Plan(tuple(reversed(steps)))

    while len(frontier):
        next_rows: list[np.ndarray] = []
        next_ids: list[int] = []
        for lo in range(0, len(frontier), chunk):
            if deadline is not None and time.perf_counter() >= deadline:
                return Timeout(elapsed(), expanded)
            if expanded >= node_cap:
                return Timeout(elapsed(), expanded, f"node cap {node_cap} reached")
            block = np.ascontiguousarray(frontier[lo : lo + chunk])
            ids = frontier_ids[lo : lo + chunk]
            p, a, children, goal = expand(
                block, enc.pre_pos, enc.pre_neg, enc.add, enc.delete, enc.goal_pos, enc.goal_neg
            )
            expanded += len(block)
            for k in range(len(a)):
                row = children[k]
                key = row.tobytes()
                if key in visited:
                    continue
                visited.add(key)
                node = len(parents)
                parents.append(int(ids[p[k]]))
                via.append(int(a[k]))
                if goal[k]:
                    return Solved(plan_to(node), expanded, elapsed())
                next_rows.append(row)
                next_ids.append(node)
        if not next_rows:
            break
        frontier = np.stack(next_rows)
        frontier_ids = np.asarray(next_ids, dtype=np.int64)
    return NoPlan(expanded, elapsed())


@dataclass(frozen=True)
class StepResult:
    index: int
    step: PlanStep
    applicable: bool
    reason: str = ""


@dataclass(frozen=True)
class StepNotApplicable:
    index: int
    reason: str


@dataclass(frozen=True)
class GoalNotSatisfied:
    unmet: tuple[str, ...]


@dataclass(frozen=True)
class PlanTrace:
    steps: tuple[StepResult, ...]
    goal_satisfied: bool
    error: Union[StepNotApplicable, GoalNotSatisfied, None]

    @property
    def valid(self) -> bool:
        return self.error is None


def validate_plan(df: DomainFile, pf: ProblemFile, plan: Plan) -> PlanTrace:
    """Simulate ``plan`` from the initial state and check the goal.

    Stops at the first step that is unknown, ill-typed or not applicable.
    """
    objects, _ = resolve_objects(df, pf)
    pools = objects_by_type(df, objects)
    state = initial_state(pf)
    results: list[StepResult] = []
    for i, step in enumerate(plan):
        action = df.action(step.action)
        reason = ""
        if action is None:
            reason = f"unknown action {step.action!r}"
        elif len(step.args) != len(action.params):
            reason = f"{step.action} takes {len(action.params)} arguments, got {len(step.args)}"
        else:
            for arg, (var, typ) in zip(step.args, action.params):
                if arg not in objects:
                    reason = f"unknown object {arg!r}"
                    break
                if arg not in pools.get(typ, ()):
                    reason = f"{arg} is not of type {typ} (?{var})"
                    break
        if not reason:
            try:
                state = apply(state, instantiate(action, step.args))
            except NotApplicable as exc:
                reason = str(exc)
        if reason:
            results.append(StepResult(i, step, False, reason))
            return PlanTrace(tuple(results), False, StepNotApplicable(i, reason))
        results.append(StepResult(i, step, True))
    gpos, gneg = goal_atoms(pf)
    unmet = sorted(str(a) for a in gpos - state) + sorted(f"(not {a})" for a in gneg & state)
    if unmet:
        return PlanTrace(tuple(results), False, GoalNotSatisfied(tuple(unmet)))
    return PlanTrace(tuple(results), True, None)
