from .grounding import (
    GroundAction,
    GroundAtom,
    NotApplicable,
    UnresolvableConstant,
    apply,
    ground,
    initial_state,
    resolve_objects,
)
from .search import (
    DEFAULT_TIMEOUT,
    GoalNotSatisfied,
    NoPlan,
    PlanTrace,
    SolveOutcome,
    Solved,
    SolverError,
    StepNotApplicable,
    Timeout,
    bfs_solve,
    validate_plan,
)

__all__ = [
    "DEFAULT_TIMEOUT",
    "GoalNotSatisfied",
    "GroundAction",
    "GroundAtom",
    "NoPlan",
    "NotApplicable",
    "PlanTrace",
    "SolveOutcome",
    "Solved",
    "SolverError",
    "StepNotApplicable",
    "Timeout",
    "UnresolvableConstant",
    "apply",
    "bfs_solve",
    "ground",
    "initial_state",
    "resolve_objects",
    "validate_plan",
]
