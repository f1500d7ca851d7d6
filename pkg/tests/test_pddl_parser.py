import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pddlbench.pddl import (
    Constant,
    IllegalCharacter,
    Literal,
    PDDLSyntaxError,
    Variable,
    parse_domain,
    parse_plan,
    parse_problem,
    print_domain,
    print_problem,
    tokenize,
)
from pddlbench.pddl.lexer import read_sexprs
from pddlbench.pddl.parser import VARIABLE, NAME, parse_typed_list
from pddlbench.pddl.printer import format_typed_list

from taskgen import random_task


def test_tokenizer_lowercases_and_tracks_position():
    toks = list(tokenize("(Define\n  (:Domain X) ?Var)"))
    assert [t.text for t in toks] == ["(", "define", "(", ":domain", "x", ")", "?var", ")"]
    dom = toks[3]
    assert (dom.line, dom.col) == (2, 4)


def test_comments_are_ignored():
    assert [t.text for t in tokenize("(a ; (b c\n d)")] == ["(", "a", "d", ")"]


def test_illegal_character_is_positioned():
    with pytest.raises(IllegalCharacter) as err:
        list(tokenize("(a\n  b # c)"))
    assert (err.value.line, err.value.col) == (2, 5)


def test_unbalanced_parens():
    with pytest.raises(PDDLSyntaxError, match="unclosed"):
        read_sexprs("(a (b)")
    with pytest.raises(PDDLSyntaxError):
        read_sexprs("(a))")


def _typed(text, kind):
    return parse_typed_list(tuple(read_sexprs(f"({text})")[0].items), kind)


def test_typed_list_expansion():
    assert _typed("a b - t c - u d", NAME) == [("a", "t"), ("b", "t"), ("c", "u"), ("d", "object")]
    assert _typed("?l1 ?l2 - location", VARIABLE) == [("l1", "location"), ("l2", "location")]
    assert _typed("", NAME) == []


def test_typed_list_errors():
    with pytest.raises(PDDLSyntaxError, match="without preceding"):
        _typed("- t", NAME)
    with pytest.raises(PDDLSyntaxError, match="missing type"):
        _typed("a -", NAME)
    with pytest.raises(PDDLSyntaxError, match="either"):
        _typed("a - (either t u)", NAME)


@given(st.lists(st.tuples(st.sampled_from("abcdefg"), st.sampled_from(["object", "t", "u"])), max_size=8))
def test_typed_list_print_parse_roundtrip(pairs):
    text = format_typed_list(pairs)
    assert _typed(text, NAME) == pairs


def test_jungle_domain(gold):
    h = gold.header
    assert gold.name == "survive_in_the_jungle"
    assert h.requirements == ("strips", "typing")
    assert len(gold.actions) == 12
    assert len(h.predicates) == 9
    assert h.types.parent("stone") == "item"
    assert h.types.parent("basecamp") == "location"
    assert h.types.is_subtype("basecamp", "object")
    assert h.predicate("inventory").params == (("player", "object"), ("item", "object"))
    go = gold.action("go")
    assert go.params == (("dir", "direction"), ("p", "player"), ("l1", "location"), ("l2", "location"))
    blocked = go.precondition.literals[2]
    assert not blocked.positive and blocked.predicate == "blocked"
    bamboo = gold.action("get_bamboo_container")
    assert bamboo.effect.literals == (Literal("inventory", (Variable("p"), Constant("bamboo_container"))),)


def test_jungle_problem(escape):
    pf = escape.problem
    assert pf.name == "escape" and pf.domain == "survive_in_the_jungle"
    assert pf.objects[:2] == (("npc", "player"), ("jungle", "location"))
    assert len(pf.goal) == 3 and all(not lit.positive for lit in pf.goal)


def test_roundtrip_jungle(gold, escape):
    assert parse_domain(print_domain(gold)) == gold
    assert parse_problem(print_problem(escape.problem)) == escape.problem
    # Printing is a fixed point after one pass.
    assert print_domain(parse_domain(print_domain(gold))) == print_domain(gold)


def test_comment_insensitive(jungle):
    from pddlbench.dataset import bundled_corpus

    raw = (bundled_corpus() / "jungle" / "domain.pddl").read_text()
    stripped = re.sub(r";[^\n]*", "", raw)
    assert parse_domain(stripped) == parse_domain(raw)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_roundtrip_random_domains(seed):
    task = random_task(random.Random(seed))
    df = parse_domain(task.domain_text())
    assert parse_domain(print_domain(df)) == df
    pf = parse_problem(task.problem_text())
    assert parse_problem(print_problem(pf)) == pf


FRAGMENTS = ["(", ")", "define", "domain", "(:action", ":parameters", ":precondition", ":effect",
             "and", "not", "or", "?x", "- t", "a", ":types", ":predicates", "(:requirements", ":strips",
             "#", "\n", ";c\n", "problem", ":objects", ":init", ":goal", "(:domain d)"]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(FRAGMENTS), max_size=30))
def test_parser_totality(parts):
    # Any input either parses or raises PDDLSyntaxError; nothing else escapes.
    text = " ".join(parts)
    for fn in (parse_domain, parse_problem, parse_plan):
        try:
            fn(text)
        except PDDLSyntaxError:
            pass


@settings(max_examples=100, deadline=None)
@given(st.binary(max_size=200))
def test_parser_totality_bytes(data):
    try:
        parse_domain(data)
    except PDDLSyntaxError:
        pass


def test_unsupported_constructs_rejected():
    base = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition {} :effect (p ?x)))"
    for cond in ["(or (p ?x) (p ?x))", "(forall (?y) (p ?y))", "(exists (?y) (p ?y))", "(= ?x ?x)"]:
        with pytest.raises(PDDLSyntaxError):
            parse_domain(base.format(cond))
    with pytest.raises(PDDLSyntaxError, match="atomic"):
        parse_domain(base.format("(p (q ?x))"))


def test_unsupported_requirement_is_a_note():
    df = parse_domain("(define (domain d) (:requirements :strips :adl) (:predicates (p)))")
    assert [n.code for n in df.notes] == ["unsupported_requirement"]


def test_duplicate_action_rejected():
    text = "(define (domain d) (:predicates (p)) (:action a :parameters () :effect (p)) (:action a :parameters () :effect (p)))"
    with pytest.raises(PDDLSyntaxError, match="duplicate"):
        parse_domain(text)


def test_missing_precondition_is_empty():
    df = parse_domain("(define (domain d) (:predicates (p)) (:action a :parameters () :effect (p)))")
    assert len(df.action("a").precondition) == 0
    assert any(n.code == "empty_condition" for n in df.notes)


def test_negative_init_dropped_with_warning():
    pf = parse_problem("(define (problem p) (:domain d) (:objects a) (:init (q a) (not (q a))) (:goal (q a)))")
    assert len(pf.init) == 1
    assert [n.code for n in pf.notes] == ["negative_init"]


def test_parse_plan():
    plan = parse_plan("; plan\n(go west npc basecamp bamboo_forrest)\n(escape npc)\n; cost = 2\n")
    assert [str(s) for s in plan] == ["(go west npc basecamp bamboo_forrest)", "(escape npc)"]
    assert parse_plan(plan.to_text()) == plan
