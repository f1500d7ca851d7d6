import random
from dataclasses import replace

from hypothesis import given, settings
from hypothesis import strategies as st

from pddlbench.equivalence import (
    ComponentDistance,
    action_distance,
    condition_distance,
    exact_action_distance,
    greedy_disagreements,
    intrinsic_report,
    param_distance,
)
from pddlbench.pddl import Condition, Constant, Literal, Variable, splice_actions
from pddlbench.pddl.lexer import read_sexprs
from pddlbench.pddl.parser import parse_action


def _action(text):
    return parse_action(read_sexprs(text)[0])[0]


def rename(action, rng):
    """Consistently rename parameters and shuffle params and conjunctions."""
    names = [v for v, _ in action.params]
    fresh = [f"r{i}_{rng.randrange(1000)}" for i in range(len(names))]
    mapping = dict(zip(names, fresh))

    def term(t):
        return Variable(mapping.get(t.name, t.name), t.type) if isinstance(t, Variable) else t

    def cond(c):
        lits = [Literal(lit.predicate, tuple(term(t) for t in lit.args), lit.positive) for lit in c]
        rng.shuffle(lits)
        return Condition(tuple(lits))

    params = [(mapping[v], t) for v, t in action.params]
    rng.shuffle(params)
    return replace(action, params=tuple(params), precondition=cond(action.precondition), effect=cond(action.effect))


def test_param_examples():
    a = _action("(:action a :parameters (?p - player ?loc - location) :effect (and))")
    b = _action("(:action a :parameters (?x - player ?y - location) :effect (and))")
    d, corr = param_distance(a, b)
    assert (d.matched, d.distance) == (2, 0)
    assert corr.pairs == [("p", "x"), ("loc", "y")]
    c = _action("(:action a :parameters (?p - player) :effect (and))")
    w = _action("(:action a :parameters (?p - player ?w - water) :effect (and))")
    d, _ = param_distance(c, w)
    assert (d.matched, d.distance) == (1, 1)


def _brute_params(a1, a2):
    # Try every injective assignment of a1's params into a2's (or None).
    t2 = [t for _, t in a2.params]
    best = 0

    def rec(i, used, n):
        nonlocal best
        if i == len(a1.params):
            best = max(best, n)
            return
        rec(i + 1, used, n)
        for j, t in enumerate(t2):
            if j not in used and t == a1.params[i][1]:
                rec(i + 1, used | {j}, n + 1)

    rec(0, frozenset(), 0)
    return best


@settings(max_examples=200)
@given(
    st.lists(st.sampled_from("abc"), max_size=5),
    st.lists(st.sampled_from("abc"), max_size=5),
)
def test_param_matching_is_maximum(t1, t2):
    # Greedy first-same-type consumption equals the best assignment when
    # only types matter.
    mk = lambda ts: _action(  # noqa: E731
        "(:action a :parameters (" + " ".join(f"?v{i} - {t}" for i, t in enumerate(ts)) + ") :effect (and))"
    )
    a1, a2 = mk(t1), mk(t2)
    d, corr = param_distance(a1, a2)
    assert d.matched == _brute_params(a1, a2)
    assert d.distance == len(t1) + len(t2) - 2 * d.matched
    assert all(corr.p1[x] == corr.p2[y] for x, y in corr.pairs)
    assert len({x for x, _ in corr.pairs}) == len({y for _, y in corr.pairs}) == len(corr.pairs)


def test_component_distance_formula():
    assert ComponentDistance(2, 2, 2).distance == 0
    assert ComponentDistance(1, 2, 3).distance == 3
    assert ComponentDistance(0, 1, 1).distance == 2


def test_self_distance_zero(gold):
    for a in gold.actions:
        assert action_distance(a, a).as_tuple() == (0, 0, 0)
        assert exact_action_distance(a, a).as_tuple() == (0, 0, 0)


def test_drink_water_renamed(gold):
    a = gold.action("drink_water")
    renamed = _action(
        "(:action drink_water :parameters (?x - player)"
        " :precondition (and (inventory ?x water) (treated water)) :effect (and (not (is dehydrated ?x))))"
    )
    assert action_distance(renamed, a).as_tuple() == (0, 0, 0)


def test_unseen_constants_must_be_identical(gold):
    a = gold.action("treat_water")
    juice = replace(a, effect=Condition((Literal("treated", (Constant("juice"),)),)))
    d = action_distance(juice, a)
    assert (d.effect.matched, d.effect.distance) == (0, 2)


def test_eat_fruit_deleted_effect(gold):
    a = gold.action("eat_fruit")
    cut = replace(a, effect=Condition(a.effect.literals[1:]))
    assert action_distance(cut, a).as_tuple() == (0, 0, 1)


def test_go_polarity_flip(gold):
    a = gold.action("go")
    lits = list(a.precondition.literals)
    lits[2] = lits[2].negate()
    flipped = replace(a, precondition=Condition(tuple(lits)))
    assert action_distance(flipped, a).as_tuple() == (0, 2, 0)
    assert exact_action_distance(flipped, a).as_tuple() == (0, 2, 0)


def test_type_mismatch_blocks_literal():
    a = _action("(:action m :parameters (?a - t ?b - u) :precondition (p ?a ?b) :effect (and))")
    b = _action("(:action m :parameters (?a - u ?b - t) :precondition (p ?a ?b) :effect (and))")
    # Params match as a multiset, but argument types differ positionally.
    d = action_distance(a, b)
    assert d.params.distance == 0 and d.precondition.distance == 2


def test_index_consistency_across_pre_and_effect():
    gold = _action("(:action m :parameters (?a ?b - loc) :precondition (at ?a) :effect (at ?b))")
    same = _action("(:action m :parameters (?x ?y - loc) :precondition (at ?x) :effect (at ?y))")
    wrong = _action("(:action m :parameters (?x ?y - loc) :precondition (at ?x) :effect (at ?x))")
    assert action_distance(same, gold).total == 0
    assert action_distance(wrong, gold).effect.distance == 2


def test_failed_candidate_leaves_no_indexes():
    # The first candidate matches on ?a but fails on the second argument; its
    # tentative index must not block the real match that follows.
    c1 = Condition((Literal("r", (Variable("a"), Variable("b"))),))
    c2 = Condition((Literal("r", (Variable("x"), Constant("k"))), Literal("r", (Variable("x"), Variable("y")))))
    a1 = _action("(:action m :parameters (?a ?b - t) :effect (and))")
    a2 = _action("(:action m :parameters (?x ?y - t) :effect (and))")
    _, corr = param_distance(a1, a2)
    d = condition_distance(c1, c2, corr)
    assert d.matched == 1
    assert corr.index_pairs == [("a", "x"), ("b", "y")]


def test_intrinsic_report_gold_is_perfect(gold):
    r = intrinsic_report(gold, gold)
    assert (r.action_accuracy, r.param_accuracy, r.precondition_accuracy, r.effect_accuracy) == (1, 1, 1, 1)


def test_intrinsic_report_corruptions(gold):
    acts = list(gold.actions)
    for i in (0, 4, 9):
        a = acts[i]
        acts[i] = replace(a, effect=Condition(a.effect.literals[1:]))
    r = intrinsic_report(splice_actions(gold.header, acts), gold)
    assert r.action_accuracy == 9 / 12
    assert r.effect_accuracy == 9 / 12 and r.precondition_accuracy == 1


def test_missing_action_wrong_everywhere(gold):
    pred = splice_actions(gold.header, gold.actions[1:])
    r = intrinsic_report(pred, gold)
    s = r.score("go")
    assert s.distance is None and not s.correct
    assert r.param_accuracy == r.precondition_accuracy == r.effect_accuracy == 11 / 12


def test_greedy_order_artifact_is_detected():
    # Greedy pairs (p ?a ?c) with the first same-typed candidate and then
    # cannot match (q ?c); the exact matcher finds the consistent pairing.
    gold = _action("(:action m :parameters (?x ?y ?z - t) :precondition (and (p ?x ?y) (p ?x ?z) (q ?z)) :effect (and))")
    pred = _action("(:action m :parameters (?a ?b ?c - t) :precondition (and (p ?a ?c) (q ?c) (p ?a ?b)) :effect (and))")
    g = action_distance(pred, gold)
    e = exact_action_distance(pred, gold)
    assert e.total == 0 and g.total > 0
    dp = splice_actions(_header_for(pred), [pred])
    dg = splice_actions(_header_for(gold), [gold])
    assert greedy_disagreements(dp, dg) == ["m"]


def _header_for(action):
    from pddlbench.pddl import DomainHeader, TypeHierarchy

    return DomainHeader("d", ("strips", "typing"), TypeHierarchy((("t", "object"),)), (), (action.name,))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_renaming_and_permutation_invariance(gold, seed):
    rng = random.Random(seed)
    for a in gold.actions:
        assert exact_action_distance(rename(a, rng), a).total == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["precondition", "effect"]))
def test_single_deletion_costs_one(gold, seed, part):
    rng = random.Random(seed)
    a = gold.action(rng.choice([x.name for x in gold.actions]))
    lits = list(getattr(a, part).literals)
    if not lits:
        return
    del lits[rng.randrange(len(lits))]
    cut = replace(a, **{part: Condition(tuple(lits))})
    d = action_distance(cut, a)
    assert getattr(d, part).distance == 1
    assert d.total == 1
