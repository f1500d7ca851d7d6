from dataclasses import replace

import pytest

from pddlbench.harness import gold_completion
from pddlbench.prompts import (
    InstructionStyle,
    MissingAnnotation,
    PromptRequest,
    Style,
    TextCondition,
    assemble_prediction,
    build_prompt,
    few_shot_examples,
    load_template,
    render_text_portion,
    request_for,
)

ALL_CONDITIONS = list(TextCondition)


def prompt(example, style=Style.PLAIN, shots=0, cond=TextCondition.NONE):
    return build_prompt(request_for(example, InstructionStyle(style, shots), cond), example)


def test_sum_line(jungle):
    header = replace(jungle.domain.header, action_names=("clean_water",))
    ex = replace(jungle, domain=replace(jungle.domain, header=header), summaries={"clean_water": "boil water to clean it"})
    assert render_text_portion(ex, TextCondition.SUM) == "clean_water; boil water to clean it"


def test_none_is_empty(jungle):
    assert render_text_portion(jungle, TextCondition.NONE) == ""


def test_rel_subset_of_all(jungle):
    rel = render_text_portion(jungle, TextCondition.REL).split("\n\n")
    full = render_text_portion(jungle, TextCondition.ALL).split("\n\n")
    assert set(rel) <= set(full)


def test_map_blocks(jungle):
    text = render_text_portion(jungle, TextCondition.MAP)
    assert text.split("\n\n")[0].startswith("get_bamboo_container: Step 1. ")
    assert "collect_rain_water: Step 1. " in text and " Step 3. " in text


def test_missing_annotation(jungle):
    bare = replace(jungle, summaries={}, mapping={})
    for cond in (TextCondition.SUM, TextCondition.MAP, TextCondition.REL):
        with pytest.raises(MissingAnnotation):
            render_text_portion(bare, cond)
    assert render_text_portion(bare, TextCondition.ALL)


def test_zpd_and_plain_text(jungle):
    zpd = prompt(jungle, Style.ZPD, cond=TextCondition.SUM)
    assert "First, summarize the action in a few sentences based on the text" in zpd
    assert "get_bamboo_container; " in zpd
    plain = prompt(jungle)
    assert plain.startswith("Could you fill out the below PDDL actions")
    assert "here are the texts containing steps" not in plain
    cot = prompt(jungle, Style.COT, cond=TextCondition.ALL)
    assert "step by step" in cot and "here are the texts containing steps to survive in the jungle:" in cot


def test_placeholders_filled(jungle):
    for style in Style:
        for cond in ALL_CONDITIONS:
            p = prompt(jungle, style, 3, cond)
            assert "<insert_" not in p
    p = prompt(jungle)
    assert "\ngo\nget\nget_bamboo_container\n" in p
    assert "(inventory ?player ?item)" in p
    assert "stone wood bamboo_container water fire sos_sign fruit - item" in p


def test_few_shot_order(jungle):
    assert len(few_shot_examples()) == 3
    p = prompt(jungle, Style.ZPD, 3, TextCondition.SUM)
    idx = [p.index(name) for name in ("slide_straw_over_skewer", "mix_sand_with_color", "melt_wax")]
    assert idx == sorted(idx)
    assert p.index("melt_wax") < p.index("Could you fill out")
    one = prompt(jungle, Style.ZPD, 1, TextCondition.SUM)
    assert "slide_straw_over_skewer" in one and "melt_wax" not in one


def test_shots_bounds():
    with pytest.raises(ValueError):
        InstructionStyle(Style.PLAIN, -1)
    with pytest.raises(ValueError):
        InstructionStyle(Style.PLAIN, 4)


def test_empty_header_rejected(jungle):
    header = replace(jungle.domain.header, action_names=())
    with pytest.raises(ValueError):
        PromptRequest("x", InstructionStyle(), TextCondition.NONE, header, "goal")


def test_prompts_are_frozen(jungle):
    for style in Style:
        assert prompt(jungle, style, 3, TextCondition.MAP) == prompt(jungle, style, 3, TextCondition.MAP)
    assert load_template("plain") == load_template("plain")


def test_condition_length_ordering(jungle):
    n = {c: len(render_text_portion(jungle, c)) for c in TextCondition}
    assert n[TextCondition.NONE] <= n[TextCondition.SUM] <= n[TextCondition.REL] <= n[TextCondition.ALL]
    # Map repeats the relevant paragraphs with action labels, so it is not
    # shorter than Rel.
    assert n[TextCondition.REL] <= n[TextCondition.MAP]


def test_assemble_gold_identity(jungle):
    df, diags = assemble_prediction(jungle.domain.header, gold_completion(jungle))
    assert df == jungle.domain and diags == []
