"""Random small STRIPS tasks and a brute-force reference solver.

The reference works directly on the generator's Python structures (not on
parsed PDDL) so it shares no code with the package's grounding or search.
"""

import itertools
import random
from dataclasses import dataclass

import networkx as nx

TYPES = ("ta", "tb")


@dataclass
class Task:
    objects: dict          # name -> type
    predicates: dict       # name -> tuple of param types
    actions: list          # (name, params[(var, type)], pre[(pos, pred, vars)], add[(pred, vars)], dele[(pred, vars)])
    init: set              # {(pred, objs)}
    goal: list             # [(pos, pred, objs)]

    def domain_text(self) -> str:
        preds = "\n".join(
            f"    ({p} {' '.join(f'?a{i} - {t}' for i, t in enumerate(ts))})" for p, ts in self.predicates.items()
        )
        acts = []
        for name, params, pre, add, dele in self.actions:
            ps = " ".join(f"?{v} - {t}" for v, t in params)
            lits = [_lit(p, vs, pos) for pos, p, vs in pre]
            effs = [_lit(p, vs, True) for p, vs in add] + [_lit(p, vs, False) for p, vs in dele]
            acts.append(
                f"  (:action {name}\n    :parameters ({ps})\n"
                f"    :precondition (and {' '.join(lits)})\n    :effect (and {' '.join(effs)}))"
            )
        return (
            "(define (domain rnd)\n  (:requirements :strips :typing)\n"
            f"  (:types {' '.join(TYPES)})\n  (:predicates\n{preds})\n" + "\n".join(acts) + ")\n"
        )

    def problem_text(self) -> str:
        objs = " ".join(f"{o} - {t}" for o, t in self.objects.items())
        init = " ".join(_ground(p, os_) for p, os_ in sorted(self.init))
        goal = " ".join(
            _ground(p, os_) if pos else f"(not {_ground(p, os_)})" for pos, p, os_ in self.goal
        )
        return (
            f"(define (problem rp) (:domain rnd)\n  (:objects {objs})\n"
            f"  (:init {init})\n  (:goal (and {goal})))\n"
        )


def _lit(p, vs, pos):
    atom = f"({p}{''.join(' ?' + v for v in vs)})"
    return atom if pos else f"(not {atom})"


def _ground(p, os_):
    return f"({p}{''.join(' ' + o for o in os_)})"


def random_task(rng: random.Random, max_objects=3, max_predicates=3, max_actions=4) -> Task:
    objects = {f"o{i}": rng.choice(TYPES) for i in range(rng.randint(1, max_objects))}
    predicates = {
        f"p{i}": tuple(rng.choice(TYPES) for _ in range(rng.randint(0, 2)))
        for i in range(rng.randint(1, max_predicates))
    }
    actions = []
    for k in range(rng.randint(1, max_actions)):
        params = [(f"v{j}", rng.choice(TYPES)) for j in range(rng.randint(0, 2))]

        def literal():
            p = rng.choice(list(predicates))
            vs = []
            for t in predicates[p]:
                fits = [v for v, vt in params if vt == t]
                if not fits:
                    return None
                vs.append(rng.choice(fits))
            return p, tuple(vs)

        pre, add, dele = [], [], []
        for _ in range(rng.randint(0, 2)):
            lit = literal()
            if lit:
                pre.append((rng.random() < 0.7, *lit))
        for _ in range(rng.randint(1, 3)):
            lit = literal()
            if lit:
                (add if rng.random() < 0.6 else dele).append(lit)
        if not add and not dele:
            continue
        actions.append((f"act{k}", params, pre, add, dele))
    if not actions:
        return random_task(rng, max_objects, max_predicates, max_actions)

    atoms = all_atoms(objects, predicates)
    init = {a for a in atoms if rng.random() < 0.3}
    goal = []
    for a in rng.sample(atoms, k=min(len(atoms), rng.randint(1, 2))):
        goal.append((rng.random() < 0.75, *a))
    return Task(objects, predicates, actions, init, goal)


def all_atoms(objects, predicates):
    out = []
    for p, ts in predicates.items():
        choices = [[o for o, ot in objects.items() if ot == t] for t in ts]
        for combo in itertools.product(*choices):
            out.append((p, combo))
    return out


def ground_actions(task: Task):
    for name, params, pre, add, dele in task.actions:
        choices = [[o for o, ot in task.objects.items() if ot == t] for _, t in params]
        for combo in itertools.product(*choices):
            env = {v: o for (v, _), o in zip(params, combo)}
            sub = lambda vs: tuple(env[v] for v in vs)  # noqa: E731
            yield (
                (name, combo),
                {(p, sub(vs)) for pos, p, vs in pre if pos},
                {(p, sub(vs)) for pos, p, vs in pre if not pos},
                {(p, sub(vs)) for p, vs in add},
                {(p, sub(vs)) for p, vs in dele},
            )


def is_goal(task: Task, state) -> bool:
    return all(((p, os_) in state) == pos for pos, p, os_ in task.goal)


def reference_solve(task: Task):
    """Shortest plan length via the full reachable state graph, or None."""
    acts = list(ground_actions(task))
    start = frozenset(task.init)
    graph = nx.DiGraph()
    graph.add_node(start)
    todo = [start]
    while todo:
        s = todo.pop()
        for label, pp, pn, add, dele in acts:
            if pp <= s and not (pn & s):
                t = frozenset((s - dele) | add)
                if t not in graph:
                    graph.add_node(t)
                    todo.append(t)
                graph.add_edge(s, t, label=label)
    dist = nx.single_source_shortest_path_length(graph, start)
    lengths = [d for s, d in dist.items() if is_goal(task, s)]
    return min(lengths) if lengths else None


def simulate(task: Task, steps) -> bool:
    """Apply ``(name, args)`` steps; True iff all applicable and goal reached."""
    table = {label: rest for label, *rest in ground_actions(task)}
    state = set(task.init)
    for step in steps:
        if step not in table:
            return False
        pp, pn, add, dele = table[step]
        if not (pp <= state) or (pn & state):
            return False
        state = (state - dele) | add
    return is_goal(task, state)


def flips_task(n: int = 24) -> tuple[str, str]:
    """A task with 2**n reachable states and an unreachable goal.

    Every state has n*n applicable ground actions, so search keeps running
    until the deadline rather than exhausting the space or the node cap.
    """
    dom = """(define (domain flips)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (on ?x - cell) (linked ?x - cell ?y - cell) (done))
  (:action flip-on
    :parameters (?x - cell ?y - cell)
    :precondition (and (not (on ?x)) (linked ?x ?y))
    :effect (on ?x))
  (:action flip-off
    :parameters (?x - cell ?y - cell)
    :precondition (and (on ?x) (linked ?x ?y))
    :effect (not (on ?x))))
"""
    objs = " ".join(f"c{i}" for i in range(n))
    links = " ".join(f"(linked c{i} c{j})" for i in range(n) for j in range(n))
    prob = f"(define (problem flips-{n}) (:domain flips)\n  (:objects {objs} - cell)\n  (:init {links})\n  (:goal (done)))\n"
    return dom, prob
