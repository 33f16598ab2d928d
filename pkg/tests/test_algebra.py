"""Program composition, closures, concatenation, and representation search."""

import pytest

from hornalg import corpus
from hornalg.algebra import (
    DecompositionWitness,
    SearchBudget,
    check_representation,
    compose,
    concat_atoms,
    concat_rules,
    concatenate,
    identity_program,
    omega,
    plus_closure,
    power,
    search_representation,
    star,
)
from hornalg.errors import CompositionOverflowError, FixpointBudgetError
from hornalg.parser import parse_atom, parse_program, parse_rule
from hornalg.syntax import Program, render_program


def pg(text):
    return parse_program(text)


NAT = pg("nat(0). nat(s(X)) :- nat(X).")


def test_compose_resolves_bodies_against_heads():
    assert compose(NAT.proper(), NAT.proper()) == pg("nat(s(s(X))) :- nat(X).")


def test_compose_facts_pass_through():
    assert compose(NAT, Program()) == pg("nat(0).")
    assert compose(NAT, NAT) == pg("nat(0). nat(s(0)). nat(s(s(X))) :- nat(X).")


def test_compose_empty_left_is_empty():
    assert compose(Program(), NAT) == Program()


def test_compose_with_identity():
    ident = identity_program(NAT)
    assert compose(NAT, ident) == NAT
    assert compose(ident, NAT) == NAT


def test_identity_covers_body_only_predicates():
    p = pg("p(X) :- q(X,Y).")
    ident = identity_program(p)
    assert ident == pg("p(X) :- p(X). q(X,Y) :- q(X,Y).")


def test_compose_tries_every_rule_per_goal():
    p = pg("r(X) :- q(X).")
    q = pg("q(a). q(f(Y)) :- q(Y).")
    assert compose(p, q) == pg("r(a). r(f(Y)) :- q(Y).")


def test_compose_multi_atom_bodies_mix_assignments():
    p = pg("r(X,Y) :- q(X), q(Y).")
    q = pg("q(a). q(b).")
    assert compose(p, q) == pg("r(a,a). r(a,b). r(b,a). r(b,b).")


def test_compose_bridge_recovers_list_addition():
    q1 = corpus.program("q1")
    pluslist = corpus.program("pluslist")
    assert compose(q1, pluslist) == corpus.program("plus")
    assert compose(q1.reverse(), corpus.program("plus")) == pluslist


def test_compose_overflow_raises():
    p = pg("r(X,Y) :- q(X), q(Y).")
    q = pg("q(a). q(b).")
    with pytest.raises(CompositionOverflowError):
        compose(p, q, cap=3)


def test_power_zero_is_identity():
    assert power(NAT, 0) == identity_program(NAT)
    assert power(NAT, 1) == NAT
    assert power(NAT, 2) == compose(NAT, NAT)
    with pytest.raises(ValueError):
        power(NAT, -1)


def test_star_stabilises_on_idempotent_program():
    p = pg("a :- a.")
    assert star(p) == p
    assert plus_closure(p) == p


def test_star_of_empty_program_is_empty():
    assert star(Program()) == Program()


def test_star_budget_error_carries_partial():
    with pytest.raises(FixpointBudgetError) as info:
        star(NAT, cap=3)
    partial = info.value.partial
    assert pg("nat(0). nat(s(0)). nat(s(s(0))).").issubset(partial)


def test_omega_diverges_with_star():
    # this closure never stabilises, so omega inherits star's budget error
    p = pg("p(a). p(f(X)) :- p(X). p(g(X)) :- q(X).")
    with pytest.raises(FixpointBudgetError):
        omega(p, cap=4)


def test_omega_on_finite_program():
    p = pg("e(a,b). e(b,c). path(X,Y) :- e(X,Y). path(X,Z) :- e(X,Y), path(Y,Z).")
    om = omega(p)
    assert pg("e(a,b). e(b,c). path(a,b). path(b,c). path(a,c).").issubset(om)
    assert parse_rule("path(c,a).") not in om


def test_concat_atoms_appends_arguments():
    a = parse_atom("plus(0)")
    b = parse_atom("plus(s(0),s(0))")
    assert concat_atoms(a, b) == parse_atom("plus(0,s(0),s(0))")
    with pytest.raises(ValueError):
        concat_atoms(parse_atom("plus(0)"), parse_atom("times(0)"))


def test_concat_rules_requires_same_predicate_shape():
    r1 = parse_rule("length([]).")
    r2 = parse_rule("length(0).")
    assert concat_rules(r1, r2) == parse_rule("length([],0).")
    # head predicates differ -> no result
    assert concat_rules(parse_rule("length([])."), parse_rule("nat(0).")) is None
    # body predicate sets differ -> no result
    assert concat_rules(parse_rule("p(a) :- q(a)."), parse_rule("p(b) :- r(b).")) is None


def test_concat_shares_variable_names():
    r1 = parse_rule("plus([U|X]) :- plus(X).")
    r2 = parse_rule("plus([U|Z]) :- plus(Z).")
    joined = concat_rules(r1, r2)
    assert joined == parse_rule("plus([U|X],[U|Z]) :- plus(X,Z).")
    # the shared U is one variable in the result, not two
    assert len({v.name for v in joined.head.args[0].args} | set()) >= 1
    assert render_program(Program([joined])) == render_program(
        pg("plus([A|B],[A|C]) :- plus(B,C).")
    )


def test_concatenate_builds_length_from_factors():
    lists = corpus.program("list_as_length")
    nats = corpus.program("nat_as_length")
    assert concatenate(lists, nats) == corpus.program("length")


def test_concatenate_ground_triples():
    p0 = pg("plus(0).")
    ps = pg("plus(s(0)).")
    assert concatenate(concatenate(p0, ps), ps) == pg("plus(0,s(0),s(0)).")


def test_concatenate_pairs_all_matching_rules():
    p = pg("p(a). p(b).")
    q = pg("p(c).")
    assert concatenate(p, q) == pg("p(a,c). p(b,c).")


def test_concatenate_skips_mismatched_rules():
    p = pg("p(a). q(a).")
    r = pg("p(b).")
    assert concatenate(p, r) == pg("p(a,b).")


def test_zero_arity_concat_is_idempotent():
    p = pg("a :- b.")
    assert concatenate(p, p) == p


def test_check_representation_member_chain():
    member = corpus.program("member")
    pluslist = corpus.program("pluslist")
    w = DecompositionWitness(corpus.program("member_q"), corpus.program("member_s"))
    assert check_representation(member, pluslist, w)
    bad = DecompositionWitness(corpus.program("member_q"), Program())
    assert not check_representation(member, pluslist, bad)


def test_search_representation_finds_self():
    p = pg("p(a). p(f(X)) :- p(X).")
    w = search_representation(p, p)
    assert w is not None
    assert check_representation(p, p, w)


def test_search_representation_respects_budget():
    p = pg("p(a).")
    r = pg("q(b).")
    w = search_representation(p, r, budget=SearchBudget(max_candidates=8))
    assert w is None or check_representation(p, r, w)


def test_compose_is_deterministic():
    q1 = corpus.program("q1")
    pluslist = corpus.program("pluslist")
    a = render_program(compose(q1, pluslist))
    b = render_program(compose(q1, pluslist))
    assert a == b
