"""Distance between a predicted and a gold action definition.

Parameters are matched greedily by type. Literals are then matched greedily
in order: arguments pair up only if they are identical constants, or
parameters of the same recorded type that either both lack an entity index
(and are given a shared one) or already share one. Entity indexes persist
from the precondition into the effect of the same action pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .pddl.model import ActionDef, Condition, DomainFile, Literal, Variable


@dataclass
class ParamCorrespondence:
    p1: dict[str, str] = field(default_factory=dict)
    p2: dict[str, str] = field(default_factory=dict)
    # Entity index per side; equal indexes mean "same parameter entity".
    index1: dict[str, int] = field(default_factory=dict)
    index2: dict[str, int] = field(default_factory=dict)
    next_index: int = 0
    # Greedy type-level pairing from parameter matching. Literal matching does
    # not rely on it: two same-typed parameters may be listed in either order.
    pairs: list[tuple[str, str]] = field(default_factory=list)

    @property
    def index_pairs(self) -> list[tuple[str, str]]:
        by_index = {i: v for v, i in self.index2.items()}
        return [(v, by_index[i]) for v, i in sorted(self.index1.items(), key=lambda kv: kv[1])]

    def copy(self) -> "ParamCorrespondence":
        return ParamCorrespondence(
            dict(self.p1), dict(self.p2), dict(self.index1), dict(self.index2), self.next_index, list(self.pairs)
        )


@dataclass(frozen=True)
class ComponentDistance:
    matched: int
    size1: int
    size2: int

    @property
    def distance(self) -> int:
        return abs(self.size1 - self.matched) + abs(self.size2 - self.matched)

    def to_dict(self) -> dict:
        return {"matched": self.matched, "size1": self.size1, "size2": self.size2, "distance": self.distance}


@dataclass(frozen=True)
class ActionDistance:
    params: ComponentDistance
    precondition: ComponentDistance
    effect: ComponentDistance

    @property
    def total(self) -> int:
        return self.params.distance + self.precondition.distance + self.effect.distance

    @property
    def exact(self) -> bool:
        return self.total == 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.params.distance, self.precondition.distance, self.effect.distance)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "precondition": self.precondition.to_dict(),
            "effect": self.effect.to_dict(),
            "total": self.total,
        }


def param_distance(a1: ActionDef, a2: ActionDef) -> tuple[ComponentDistance, ParamCorrespondence]:
    corr = ParamCorrespondence()
    remaining = list(a2.params)
    n = 0
    for v1, t1 in a1.params:
        for j, (v2, t2) in enumerate(remaining):
            if t1 == t2:
                corr.p1[v1] = t1
                corr.p2[v2] = t2
                corr.pairs.append((v1, v2))
                n += 1
                del remaining[j]
                break
    return ComponentDistance(n, len(a1.params), len(a2.params)), corr


def _key(term) -> tuple[bool, str]:
    return (isinstance(term, Variable), term.name)


def _match_literal(l1: Literal, l2: Literal, corr: ParamCorrespondence) -> Optional[list]:
    """Index assignments needed for ``l1`` to match ``l2``, or ``None``.

    Assignments are returned rather than applied so a failed candidate leaves
    the correspondence untouched.
    """
    if l1.predicate != l2.predicate or l1.positive != l2.positive or len(l1.args) != len(l2.args):
        return None
    new1: dict[str, int] = {}
    new2: dict[str, int] = {}
    fresh = corr.next_index
    for x, y in zip(l1.args, l2.args):
        xv = isinstance(x, Variable) and x.name in corr.p1
        yv = isinstance(y, Variable) and y.name in corr.p2
        if not xv and not yv:
            if _key(x) != _key(y):
                return None
            continue
        if xv != yv or corr.p1[x.name] != corr.p2[y.name]:
            return None
        i1 = new1.get(x.name, corr.index1.get(x.name))
        i2 = new2.get(y.name, corr.index2.get(y.name))
        if i1 is None and i2 is None:
            new1[x.name] = fresh
            new2[y.name] = fresh
            fresh += 1
        elif i1 is not None and i2 is not None:
            if i1 != i2:
                return None
        else:
            return None
    return [new1, new2, fresh]


def _commit(corr: ParamCorrespondence, update) -> None:
    new1, new2, fresh = update
    corr.index1.update(new1)
    corr.index2.update(new2)
    corr.next_index = fresh


def condition_distance(c1: Condition, c2: Condition, corr: ParamCorrespondence) -> ComponentDistance:
    """Greedy first-match; mutates ``corr`` with the indexes it assigns."""
    unused = list(c2.literals)
    n = 0
    for l1 in c1:
        for j, l2 in enumerate(unused):
            update = _match_literal(l1, l2, corr)
            if update is not None:
                _commit(corr, update)
                n += 1
                del unused[j]
                break
    return ComponentDistance(n, len(c1), len(c2))


def action_distance(pred: ActionDef, gold: ActionDef) -> ActionDistance:
    params, corr = param_distance(pred, gold)
    pre = condition_distance(pred.precondition, gold.precondition, corr)
    eff = condition_distance(pred.effect, gold.effect, corr)
    return ActionDistance(params, pre, eff)


EXACT_LIMIT = 8


def _best_matching(c1, c2, corr: ParamCorrespondence):
    """Maximum matched count over every injective literal assignment."""
    best = (-1, None)

    def rec(i: int, used: frozenset, corr: ParamCorrespondence, n: int):
        nonlocal best
        if n + (len(c1) - i) <= best[0]:
            return
        if i == len(c1):
            if n > best[0]:
                best = (n, corr)
            return
        for j, l2 in enumerate(c2):
            if j in used:
                continue
            update = _match_literal(c1[i], l2, corr)
            if update is not None:
                nxt = corr.copy()
                _commit(nxt, update)
                rec(i + 1, used | {j}, nxt, n + 1)
        rec(i + 1, used, corr, n)

    rec(0, frozenset(), corr, 0)
    return best


def exact_action_distance(pred: ActionDef, gold: ActionDef) -> ActionDistance:
    """Order-independent variant searching all literal assignments.

    Used to detect cases where the greedy matcher's result depends on literal
    order. Only feasible for small conjunctions.
    """
    for a in (pred, gold):
        if max(len(a.precondition), len(a.effect)) > EXACT_LIMIT:
            raise ValueError(f"exact matcher limited to {EXACT_LIMIT} literals per condition")
    params, corr = param_distance(pred, gold)
    c1p, c2p = pred.precondition.literals, gold.precondition.literals
    c1e, c2e = pred.effect.literals, gold.effect.literals
    best = None
    # Joint search: each precondition outcome seeds the effect search.
    outcomes = []

    def rec_pre(i, used, corr, n):
        if i == len(c1p):
            outcomes.append((n, corr))
            return
        for j, l2 in enumerate(c2p):
            if j in used:
                continue
            update = _match_literal(c1p[i], l2, corr)
            if update is not None:
                nxt = corr.copy()
                _commit(nxt, update)
                rec_pre(i + 1, used | {j}, nxt, n + 1)
        rec_pre(i + 1, used, corr, n)

    rec_pre(0, frozenset(), corr, 0)
    for n_pre, corr_pre in outcomes:
        n_eff, _ = _best_matching(c1e, c2e, corr_pre)
        if best is None or n_pre + n_eff > best[0] + best[1]:
            best = (n_pre, n_eff)
    n_pre, n_eff = best
    return ActionDistance(
        params,
        ComponentDistance(n_pre, len(c1p), len(c2p)),
        ComponentDistance(n_eff, len(c1e), len(c2e)),
    )


@dataclass(frozen=True)
class ActionScore:
    name: str
    distance: Optional[ActionDistance]  # None when the prediction lacks the action

    @property
    def correct(self) -> bool:
        return self.distance is not None and self.distance.exact

    def component_ok(self, part: str) -> bool:
        return self.distance is not None and getattr(self.distance, part).distance == 0

    def to_dict(self) -> dict:
        return {
            "action": self.name,
            "present": self.distance is not None,
            "distance": None if self.distance is None else self.distance.to_dict(),
            "correct": self.correct,
        }


@dataclass(frozen=True)
class IntrinsicReport:
    scores: tuple[ActionScore, ...]

    def _frac(self, pred) -> Optional[float]:
        if not self.scores:
            return None
        return sum(1 for s in self.scores if pred(s)) / len(self.scores)

    @property
    def action_accuracy(self) -> Optional[float]:
        return self._frac(lambda s: s.correct)

    @property
    def param_accuracy(self) -> Optional[float]:
        return self._frac(lambda s: s.component_ok("params"))

    @property
    def precondition_accuracy(self) -> Optional[float]:
        return self._frac(lambda s: s.component_ok("precondition"))

    @property
    def effect_accuracy(self) -> Optional[float]:
        return self._frac(lambda s: s.component_ok("effect"))

    def score(self, name: str) -> Optional[ActionScore]:
        for s in self.scores:
            if s.name == name:
                return s
        return None


def intrinsic_report(predicted: DomainFile, gold: DomainFile) -> IntrinsicReport:
    """Score every gold action; a missing prediction counts as wrong everywhere."""
    scores = []
    for g in gold.actions:
        p = predicted.action(g.name)
        scores.append(ActionScore(g.name, None if p is None else action_distance(p, g)))
    return IntrinsicReport(tuple(scores))


def greedy_disagreements(predicted: DomainFile, gold: DomainFile) -> list[str]:
    """Actions whose greedy distance exceeds the exact one."""
    out = []
    for g in gold.actions:
        p = predicted.action(g.name)
        if p is None:
            continue
        try:
            exact = exact_action_distance(p, g)
        except ValueError:
            continue
        if action_distance(p, g).total != exact.total:
            out.append(g.name)
    return out


__all__ = [
    "ActionDistance",
    "ActionScore",
    "ComponentDistance",
    "IntrinsicReport",
    "ParamCorrespondence",
    "action_distance",
    "condition_distance",
    "exact_action_distance",
    "greedy_disagreements",
    "intrinsic_report",
    "param_distance",
]
