"""The form DSL: parsing, binding, evaluation, and the bundled form tables."""

import pytest

from hornalg import corpus
from hornalg.errors import FormEvalError, ParseError
from hornalg.forms import (
    Binding,
    ComposeOf,
    ConcatOf,
    Evaluator,
    FactsOf,
    FormCall,
    Lit,
    ProperOf,
    RenamePred,
    UnionOf,
    VarRef,
    body_program,
    eval_form,
    form_to_text,
    is_nonconstant,
    make_binding,
    parse_forms,
    refresh_body_vars,
)
from hornalg.parser import parse_program
from hornalg.syntax import Var, render_program


def pg(text):
    return parse_program(text)


def table(text):
    return parse_forms(text)


# ---------------------------------------------------------------------------
# parsing


def test_union_binds_loosest():
    t = table("form T(X) = X | X o X . X;")
    body = t["T"].body
    assert isinstance(body, UnionOf)
    assert isinstance(body.right, ComposeOf)
    assert isinstance(body.right.right, ConcatOf)


def test_parentheses_override():
    t = table("form T(X) = (X | X) o X;")
    assert isinstance(t["T"].body, ComposeOf)
    assert isinstance(t["T"].body.left, UnionOf)


def test_postfix_rename_and_literals():
    t = table("form T(X) = X[q/plus] . {plus(Y,Y).};")
    body = t["T"].body
    assert isinstance(body, ConcatOf)
    assert isinstance(body.left, RenamePred)
    assert isinstance(body.right, Lit)
    assert body.right.program == pg("plus(Y,Y).")


def test_builtin_wrappers_parse():
    t = table("form T(X) = facts(X) | (proper(X) o proper(X));")
    body = t["T"].body
    assert isinstance(body.left, FactsOf)
    assert isinstance(body.right.left, ProperOf)


def test_form_calls_must_be_defined():
    with pytest.raises(ParseError):
        table("form T(X) = Missing(X);")


def test_calls_resolve_to_earlier_forms():
    t = table("form A(X) = X; form B(X) = A(X) | A(X);")
    assert isinstance(t["B"].body.left, FormCall)


def test_param_placeholders():
    t = table("form T(X[q](Xs)) = X;")
    (p,) = t["T"].params
    assert p.name == "X"
    assert p.pred_placeholder == "q"


def test_form_to_text_round_trips():
    src = "form T(X[q]) = facts(X)[q/plus] . ({plus.} | refresh(proper(X)));"
    t = table(src)
    text = form_to_text(t["T"].body)
    t2 = table(f"form T(X[q]) = {text};")
    assert form_to_text(t2["T"].body) == text


def test_parse_error_reports_location():
    with pytest.raises(ParseError):
        table("form T(X) = X |;")


# ---------------------------------------------------------------------------
# bindings


def test_binding_tuple_is_positional():
    tree = pg("tree(void). tree(t(U,X,Y)) :- tree(X), tree(Y).")
    b = make_binding(tree, var_tuple=(Var("U"), Var("X"), Var("X")))
    assert b.program == pg("tree(void). tree(t(U,X,X)) :- tree(X), tree(X).")
    assert b.main_pred == "tree"


def test_binding_tuple_length_must_match():
    with pytest.raises(FormEvalError):
        make_binding(pg("p(X,Y)."), var_tuple=(Var("A"),))


def test_binding_infers_unique_head_pred():
    assert make_binding(pg("nat(0). nat(s(X)) :- nat(X).")).main_pred == "nat"
    assert make_binding(pg("p(a). q(b).")).main_pred is None
    assert make_binding(pg("p(a). q(b)."), main_pred="q").main_pred == "q"


# ---------------------------------------------------------------------------
# helpers


def test_body_program_lists_proper_bodies_as_facts():
    p = pg("p(a). q(X) :- r(X), s(X).")
    assert body_program(p) == pg("r(X). s(X).")


def test_refresh_renames_body_variables_program_wide():
    p = pg("plus([U|X],Y,[V|Z]) :- plus(X,Y,Z).")
    out = refresh_body_vars(p)
    # X, Y, Z occur in the body; U and V occur in the head only
    assert out == pg("plus([U|Z1],Z2,[V|Z3]) :- plus(Z1,Z2,Z3).")
    assert out.strict_equals(pg("plus([U|Z1],Z2,[V|Z3]) :- plus(Z1,Z2,Z3)."))


def test_refresh_leaves_facts_alone():
    p = pg("plus(Y,Y).")
    assert refresh_body_vars(p).strict_equals(p)


def test_refresh_skips_taken_names():
    p = pg("p(Z1) :- q(X).")
    out = refresh_body_vars(p)
    assert out.strict_equals(pg("p(Z1) :- q(Z2)."))


# ---------------------------------------------------------------------------
# evaluation


def test_eval_union_compose_concat():
    t = table("form T(X) = X | (proper(X) o proper(X));")
    nat = make_binding(pg("nat(0). nat(s(X)) :- nat(X)."))
    out = eval_form(t, "T", {"X": nat})
    assert out == pg("nat(0). nat(s(X)) :- nat(X). nat(s(s(X))) :- nat(X).")


def test_undeclared_variables_rejected_at_parse_time():
    with pytest.raises(ParseError):
        table("form T(X) = X | Y;")


def test_eval_unbound_parameter():
    with pytest.raises(FormEvalError):
        Evaluator().eval(VarRef("X"))


def test_eval_rename_uses_binding_main_pred():
    t = table("form T(X[q]) = X[q/plus];")
    nat = make_binding(pg("nat(0). nat(s(X)) :- nat(X)."))
    assert eval_form(t, "T", {"X": nat}) == pg("plus(0). plus(s(X)) :- plus(X).")


def test_eval_undefined_form_name():
    with pytest.raises(FormEvalError):
        eval_form(table("form T(X) = X;"), "U", {"X": make_binding(pg("a."))})


def test_memo_distinguishes_variant_literals():
    # both literals are variants of each other, but concatenation joins
    # variables by name, so the evaluator must not collapse them
    ev = Evaluator()
    a = Lit(pg("p(A) :- p(A)."))
    b = Lit(pg("p(B) :- p(B)."))
    same = ev.eval(ConcatOf(a, Lit(pg("p(A) :- p(A)."))))
    diff = ev.eval(ConcatOf(a, b))
    assert same == pg("p(A,A) :- p(A,A).")
    assert diff == pg("p(A,B) :- p(A,B).")
    assert same != diff


def test_memo_reuses_results_for_identical_bindings():
    ev = Evaluator(table=table("form T(X) = proper(X) o proper(X);"))
    nat = make_binding(pg("nat(0). nat(s(X)) :- nat(X)."))
    first = ev.eval(ev.table["T"].body, {"X": nat})
    second = ev.eval(ev.table["T"].body, {"X": nat})
    assert first is second


# ---------------------------------------------------------------------------
# the bundled tables


def test_standard_table_widens_counting_to_addition():
    out = corpus.eval_form("Plus", corpus.program("nat"))
    assert out == corpus.program("plus")


def test_standard_table_on_lists():
    out = corpus.eval_form("Plus", corpus.program("list"))
    assert out == pg(
        "plus([],Y,Y). plus([U|X],Y,[U|Z]) :- plus(X,Y,Z)."
    )


def test_even_form_squares_the_step():
    even_src = corpus.program("nat").rename_predicate("nat", "even")
    assert corpus.eval_form("Even", even_src) == corpus.program("even")


def test_single_sum_form():
    listp = corpus.program("list")
    b = make_binding(listp, var_tuple=(Var("U"), Var("X")))
    assert corpus.eval_form("G", b) == pg("plus([U],[U],[U,U]).")


def test_times_form_on_nat():
    assert corpus.eval_form("Times", corpus.program("nat")) == corpus.program("times_nat")


def test_forms_table_lookup():
    t = corpus.forms_table("standard")
    assert {"Id", "Plus", "Even", "G", "Times"} <= set(t)
    assert corpus.forms_table("ex43")["AddFactB"].body == UnionOf(VarRef("X"), Lit(pg("b.")))


# ---------------------------------------------------------------------------
# non-constancy probe


def test_identity_form_is_nonconstant():
    t = table("form T(X) = X;")
    assert is_nonconstant(t["T"].body, table=t)


def test_constant_form_is_detected():
    t = table("form T(X) = {c.};")
    assert not is_nonconstant(t["T"].body, table=t)


def test_erasing_form_is_detected():
    # proper rules composed against an alien fact yield nothing, for every probe
    t = table("form T(X) = proper(X) o {z.};")
    assert not is_nonconstant(t["T"].body, table=t)
