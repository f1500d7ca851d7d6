import shutil

import pytest

from pddlbench.dataset import (
    DanglingReference,
    DatasetError,
    MissingFile,
    ParseFailure,
    bundled_corpus,
    check_gold,
    corpus_stats,
    load_corpus,
    load_example,
    parse_text,
)


@pytest.fixture
def corpus(tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(bundled_corpus(), root)
    return root


def test_jungle_record(jungle):
    assert jungle.id == "jungle"
    assert jungle.title == "survive in the jungle"
    assert len(jungle.domain.actions) == 12 and len(jungle.problems) == 1
    assert len(jungle.text) == 3
    assert jungle.mapping["collect_rain_water"] == (1, 3)
    assert set(jungle.summaries) == set(jungle.action_names)


def test_load_is_pure(jungle):
    assert load_example(bundled_corpus() / "jungle") == jungle


def test_missing_domain(corpus):
    (corpus / "jungle" / "domain.pddl").unlink()
    with pytest.raises(MissingFile):
        load_example(corpus / "jungle")


def test_missing_plan(corpus):
    (corpus / "jungle" / "plans" / "p01.plan").unlink()
    with pytest.raises(MissingFile):
        load_example(corpus / "jungle")


def test_parse_failure_names_file(corpus):
    path = corpus / "jungle" / "problems" / "p01.pddl"
    path.write_text(path.read_text()[:-20])
    with pytest.raises(ParseFailure) as err:
        load_example(corpus / "jungle")
    assert err.value.path == path


def test_dangling_step(corpus):
    with open(corpus / "jungle" / "mapping.tsv", "a") as fh:
        fh.write("escape\t99\n")
    with pytest.raises(DanglingReference, match="step 99"):
        load_example(corpus / "jungle")


def test_dangling_action(corpus):
    with open(corpus / "jungle" / "summaries.tsv", "a") as fh:
        fh.write("clean_water\tboil water to clean it\n")
    with pytest.raises(DanglingReference, match="clean_water"):
        load_example(corpus / "jungle")


def test_parse_text():
    title, paras = parse_text("How to X\n\n1. First.\n\nMore of first.\n\n2. Second.")
    assert title == "How to X" and paras == ["First.\n\nMore of first.", "Second."]
    with pytest.raises(DatasetError):
        parse_text("1. a\n\n3. c")


def test_single_example_stats(jungle):
    stats = corpus_stats([jungle])
    assert stats.examples == 1 and stats.problems == 1
    assert stats.mean_actions == 12 and stats.mean_plan_length == 16
    assert stats.defined


def test_empty_root(tmp_path):
    loaded = load_corpus(tmp_path)
    assert loaded.examples == [] and not loaded.stats.defined
    assert loaded.stats.to_dict()["mean_actions_per_domain"] is None


def test_partial_corpus(corpus):
    (corpus / "manifest").write_text("jungle\nghost\n")
    loaded = load_corpus(corpus)
    assert [e.id for e in loaded.examples] == ["jungle"]
    assert "ghost" in loaded.errors


def test_filter(corpus):
    assert load_corpus(corpus, ids=[]).examples == []
    assert len(load_corpus(corpus, ids=["jungle"]).examples) == 1


def test_check_gold(jungle):
    rep = check_gold(jungle)
    assert rep.ok and rep.checks[0].plan_valid and rep.checks[0].solved


def test_check_gold_corrupted_effect(corpus):
    path = corpus / "jungle" / "domain.pddl"
    # escape no longer takes the player away from basecamp
    path.write_text(path.read_text().replace(":effect (not (at ?p basecamp))", ":effect (at sos_sign basecamp)"))
    rep = check_gold(load_example(corpus / "jungle"))
    assert not rep.ok
    assert not rep.checks[0].solved and rep.checks[0].outcome == "no_plan"
    assert not rep.checks[0].plan_valid


def test_check_gold_no_problems(corpus):
    shutil.rmtree(corpus / "jungle" / "problems")
    rep = check_gold(load_example(corpus / "jungle"))
    assert rep.ok and rep.warnings
