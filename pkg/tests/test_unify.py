from __future__ import annotations

from hornalg.parser import parse_atom, parse_program, parse_rule
from hornalg.syntax import Var, render_atom, render_term, vars_of
from hornalg.unify import (
    FreshNames,
    Subst,
    apply,
    fresh_variant,
    is_variant,
    iter_atom_set_unifiers,
    match_atom,
    mgu_atom_sets,
    mgu_atoms,
    mgu_terms,
    standardize_apart,
)


def t(text):
    return parse_atom(f"w({text})").args[0]


def test_mgu_binds_var_to_term():
    s = mgu_terms(Var("X"), t("f(a)"))
    assert s is not None
    assert apply(s, Var("X")) == t("f(a)")


def test_mgu_symmetric_on_success():
    s1 = mgu_terms(t("f(X,b)"), t("f(a,Y)"))
    s2 = mgu_terms(t("f(a,Y)"), t("f(X,b)"))
    assert s1 is not None and s2 is not None
    assert apply(s1, t("f(X,b)")) == apply(s2, t("f(a,Y)")) == t("f(a,b)")


def test_mgu_clash_returns_none():
    assert mgu_terms(t("f(a)"), t("g(a)")) is None
    assert mgu_terms(t("f(a)"), t("f(a,b)")) is None
    assert mgu_terms(t("a"), t("b")) is None


def test_occurs_check():
    assert mgu_terms(Var("X"), t("f(X)")) is None
    assert mgu_terms(t("f(X,X)"), t("f(Y,g(Y))")) is None


def test_mgu_is_idempotent():
    s = mgu_terms(t("f(X,g(Y))"), t("f(g(Z),Z)"))
    assert s is not None
    once = apply(s, t("f(X,g(Y))"))
    assert apply(s, once) == once


def test_chained_bindings_resolve():
    s = mgu_terms(t("p(X,Y,Z)"), t("p(Y,Z,a)"))
    assert s is not None
    assert apply(s, Var("X")) == t("a")


def test_mgu_atoms_respects_predicate_and_arity():
    assert mgu_atoms(parse_atom("p(X)"), parse_atom("q(X)")) is None
    assert mgu_atoms(parse_atom("p(X)"), parse_atom("p(X,Y)")) is None
    s = mgu_atoms(parse_atom("p(X,b)"), parse_atom("p(a,Y)"))
    assert apply(s, parse_atom("p(X,b)")) == parse_atom("p(a,b)")


def test_apply_walks_rules_and_programs():
    s = Subst({Var("X"): t("a")})
    r = parse_rule("p(X) :- q(X).")
    assert apply(s, r) == parse_rule("p(a) :- q(a).")
    p = parse_program("p(X) :- q(X). r(X).")
    assert apply(s, p) == parse_program("p(a) :- q(a). r(a).")


def test_match_is_one_way():
    s = match_atom(parse_atom("p(X,b)"), parse_atom("p(a,b)"))
    assert s is not None and apply(s, Var("X")) == t("a")
    # the target's variables are constants to the matcher
    assert match_atom(parse_atom("p(a)"), parse_atom("p(X)")) is None


def test_match_with_seed():
    seed = match_atom(parse_atom("p(X)"), parse_atom("p(a)"))
    assert match_atom(parse_atom("q(X)"), parse_atom("q(b)"), seed) is None
    assert match_atom(parse_atom("q(X)"), parse_atom("q(a)"), seed) is not None


def test_subst_compose_order():
    s1 = Subst({Var("X"): Var("Y")})
    s2 = Subst({Var("Y"): t("a")})
    composed = s1.compose(s2)
    assert apply(composed, Var("X")) == t("a")
    assert apply(composed, Var("Y")) == t("a")


def test_subst_restrict():
    s = Subst({Var("X"): t("a"), Var("Y"): t("b")})
    kept = s.restrict([Var("X")])
    assert kept.domain() == frozenset({Var("X")})


def test_renaming_detection():
    assert Subst({Var("X"): Var("Y"), Var("Z"): Var("W")}).is_renaming()
    assert not Subst({Var("X"): Var("Y"), Var("Z"): Var("Y")}).is_renaming()
    assert not Subst({Var("X"): t("a")}).is_renaming()


def test_atom_set_unifier_exists():
    goals = [parse_atom("p(X)"), parse_atom("q(X)")]
    heads = [parse_atom("p(a)"), parse_atom("q(a)")]
    s = mgu_atom_sets(goals, heads)
    assert s is not None
    assert apply(s, Var("X")) == t("a")


def test_atom_set_unifier_tries_bijections():
    # pairing by sorted order alone fails here; a permutation succeeds
    goals = [parse_atom("p(a,Y)"), parse_atom("p(X,c)")]
    heads = [parse_atom("p(Z,b)"), parse_atom("p(d,W)")]
    s = mgu_atom_sets(goals, heads)
    assert s is not None
    got = {render_atom(apply(s, a)) for a in goals}
    assert got == {render_atom(apply(s, a)) for a in heads} == {"p(a,b)", "p(d,c)"}


def test_atom_set_unifier_needs_matching_counts():
    goals = [parse_atom("p(a,Y)")]
    heads = [parse_atom("p(X,b)"), parse_atom("p(a,b)")]
    assert mgu_atom_sets(goals, heads) is None


def test_atom_set_unifier_failure():
    assert mgu_atom_sets([parse_atom("p(a)")], [parse_atom("p(b)")]) is None
    assert mgu_atom_sets([parse_atom("p(a)")], []) is None
    assert mgu_atom_sets([], []) is not None


def test_iter_atom_set_unifiers_yields_alternatives():
    goals = [parse_atom("p(X)")]
    heads = [parse_atom("p(a)")]
    subs = list(iter_atom_set_unifiers(goals, heads))
    assert len(subs) >= 1
    assert all(apply(s, goals[0]) == parse_atom("p(a)") for s in subs)


def test_standardize_apart_avoids_collisions():
    p = parse_program("p(X) :- q(X).")
    fresh = standardize_apart(p, avoid=["X"])
    assert fresh == p  # still a variant
    assert "X" not in {v.name for v in vars_of(fresh.rules[0])}


def test_fresh_variant_renames_consistently():
    names = FreshNames()
    r = parse_rule("plus(s(X),Y,s(Z)) :- plus(X,Y,Z).")
    v1 = fresh_variant(r, names)
    v2 = fresh_variant(r, names)
    assert is_variant(v1, r) and is_variant(v2, r)
    assert vars_of(v1).isdisjoint(vars_of(v2))


def test_is_variant_on_rules_and_programs():
    assert is_variant(parse_rule("p(X,Y) :- q(X)."), parse_rule("p(A,B) :- q(A)."))
    assert not is_variant(parse_rule("p(X,Y) :- q(X)."), parse_rule("p(A,B) :- q(B)."))
    assert is_variant(parse_program("p(X,X)."), parse_program("p(Y,Y)."))
    assert not is_variant(parse_program("p(X,X)."), parse_program("p(X,Y)."))


def test_render_term_after_subst():
    s = mgu_terms(t("[U|X]"), t("[a,b]"))
    assert s is not None
    assert render_term(apply(s, t("[U|X]"))) == "[a,b]"
