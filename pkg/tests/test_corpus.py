"""The bundled corpus: loading, listing, and the golden suite."""

import pytest

from hornalg import corpus
from hornalg.errors import ParseError
from hornalg.syntax import Program


def test_program_name_normalization():
    direct = corpus.program("nat")
    assert corpus.program("corpus:nat") == direct
    assert corpus.program("nat.lp") == direct
    assert corpus.program("programs/nat.lp") == direct


def test_program_loads_are_cached():
    assert corpus.program("nat") is corpus.program("corpus:nat")


def test_missing_entry_raises_parse_error():
    with pytest.raises(ParseError):
        corpus.program("no_such_program")


def test_core_programs_present():
    names = set(corpus.names("programs"))
    assert {
        "nat", "list", "tree",
        "plus", "pluslist", "pluslist_prime", "plus_list_inst",
        "q1", "q1rev", "q2", "q1_alt", "q2_alt",
        "member", "member_q", "member_s",
        "length", "list_as_length", "nat_as_length",
        "even", "reverse", "even_reverse", "times_nat",
    } <= names


def test_forms_and_problems_present():
    assert "standard" in corpus.names("forms")
    assert {"ex43_joint", "ex43_disjoint", "nat_plus_list",
            "even_reverse", "one_plus_one"} <= set(corpus.names("proportions"))


def test_standard_forms_cover_the_named_family():
    table = corpus.forms_table()
    assert {"Id", "Plus", "Even", "G1", "G2", "G", "Times"} <= set(table)


def test_entries_carry_kind_and_path():
    entries = corpus.corpus_entries()
    by_name = {e.name: e for e in entries}
    assert by_name["nat"].kind == "program"
    assert by_name["nat"].path == "programs/nat.lp"
    assert by_name["standard"].kind == "form"
    assert by_name["ex43_joint"].kind == "proportion"


def test_eval_form_helper_coerces_programs():
    out = corpus.eval_form("Plus", corpus.program("nat"))
    assert isinstance(out, Program)
    assert out == corpus.program("plus")


def test_golden_case_inputs_name_their_sources():
    cases = {c.name: c for c in corpus.golden_cases()}
    names = [e.name for e in cases["bridge_q1_pluslist"].inputs]
    assert names == ["q1", "pluslist"]


def test_golden_cases_have_unique_names():
    names = [c.name for c in corpus.golden_cases()]
    assert len(names) == len(set(names))
    assert len(names) >= 20


def test_every_golden_case_passes_quickly():
    results = corpus.run_golden_suite()
    failing = [r for r in results if not r.ok]
    assert not failing, [(r.name, r.detail) for r in failing]
    slow = [r for r in results if r.seconds >= 1.0]
    assert not slow, [(r.name, r.seconds) for r in slow]


def test_golden_suite_filter():
    results = corpus.run_golden_suite(only="form_plus_nat")
    assert [r.name for r in results] == ["form_plus_nat"]


def test_documented_mismatches_are_marked():
    cases = {c.name: c for c in corpus.golden_cases()}
    assert cases["bridge_q1_structured"].pinned_actual is not None
    assert cases["bridge_q2_forward"].pinned_actual is not None
    results = {r.name: r for r in corpus.run_golden_suite()}
    assert results["bridge_q1_structured"].documented_mismatch
    assert results["bridge_q2_forward"].documented_mismatch


def test_data_text_round_trip():
    text = corpus.data_text("programs/nat.lp")
    assert "nat(0)." in text
