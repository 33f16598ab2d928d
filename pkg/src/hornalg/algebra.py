"""The program algebra: sequential composition, powers and closures,
concatenation, and syntactic representation (decomposition) search.

Composition `compose(p, r)` resolves every body atom of every rule of p
against a standardized-apart copy of some rule of r, in all possible
ways; facts of p pass through untouched.  Concatenation `concatenate`
zips same-predicate rules by appending argument lists; it deliberately
performs NO renaming, so rules sharing a variable name link up — that
sharing is the operation's expressive point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Optional

from .errors import CompositionOverflowError, FixpointBudgetError
from .syntax import (
    Atom,
    Compound,
    Program,
    Rule,
    Var,
    pred_of,
    render_atom,
    vars_of,
)
from .unify import (
    FreshNames,
    Subst,
    _resolve,
    _unify_atoms,
    apply,
    fresh_variant,
)

DEFAULT_COMPOSE_CAP = 100_000
DEFAULT_CLOSURE_CAP = 32


# ---------------------------------------------------------------------------
# Sequential composition


def compose(p: Program, r: Program, cap: int = DEFAULT_COMPOSE_CAP) -> Program:
    """All rules head(ρϑ) ← body(Sϑ) where ρ ∈ p and S assigns to every
    body atom of ρ a fresh copy of a rule of r unifying with it.

    Facts of p have no body atoms, so they pass through unchanged.  Raises
    CompositionOverflowError when more than `cap` rules are generated.
    """
    fresh = FreshNames(prefix="_C")
    fresh.reserve(v.name for v in vars_of(p))
    fresh.reserve(v.name for v in vars_of(r))
    out: list[Rule] = []
    r_rules = r.rules

    # Ground rules need no standardizing apart, and a ground head can only
    # resolve a goal of the same predicate and arity (an equal goal, when the
    # goal itself is ground).  Index them so hopeless candidates are never
    # visited; rules with variables are always tried, as their head may
    # unify under the threaded substitution.
    ground_by_head: dict[Atom, list[int]] = {}
    ground_by_sig: dict[tuple, list[int]] = {}
    var_indices: list[int] = []
    for idx, cand in enumerate(r_rules):
        if vars_of(cand):
            var_indices.append(idx)
        else:
            ground_by_head.setdefault(cand.head, []).append(idx)
            sig = (cand.head.pred, len(cand.head.args))
            ground_by_sig.setdefault(sig, []).append(idx)
    var_set = frozenset(var_indices)

    def candidates(goal: Atom) -> list[int]:
        if not vars_of(goal):
            ground = ground_by_head.get(goal, ())
        else:
            ground = ground_by_sig.get((goal.pred, len(goal.args)), ())
        return sorted([*ground, *var_indices])

    for rho in p:
        if rho.is_fact:
            out.append(rho)
            if len(out) > cap:
                raise CompositionOverflowError(cap)
            continue
        goals = sorted(rho.body, key=render_atom)
        goal_cands = [candidates(g) for g in goals]

        # Depth-first over assignments of rules to body atoms, threading a
        # triangular substitution.  Each chosen rule is copied apart first.
        def assign(i: int, s: dict, bodies: tuple):
            if i == len(goals):
                theta = Subst(_resolve(s))
                head = apply(theta, rho.head)
                new_body = frozenset(apply(theta, a) for b in bodies for a in b)
                out.append(Rule(head, new_body))
                if len(out) > cap:
                    raise CompositionOverflowError(cap)
                return
            for idx in goal_cands[i]:
                cand = r_rules[idx]
                copy = cand if idx not in var_set else fresh_variant(cand, fresh)
                s2 = _unify_atoms(goals[i], copy.head, dict(s))
                if s2 is not None:
                    assign(i + 1, s2, bodies + (copy.body,))

        assign(0, {}, ())
    return Program(out)


def identity_program(p: Program) -> Program:
    """The neutral program for composition over p's predicate/arity signature:
    one rule q(X1..Xn) ← q(X1..Xn) per (q, n) occurring anywhere in p."""
    rules = []
    for pred, arity in sorted(p.pred_signature()):
        args = tuple(Var(f"X{i + 1}") for i in range(arity))
        a = Atom(pred, args)
        rules.append(Rule(a, frozenset([a])))
    return Program(rules)


def power(p: Program, n: int, cap: int = DEFAULT_COMPOSE_CAP) -> Program:
    """n-fold composition of p with itself; power 0 is the identity program."""
    if n < 0:
        raise ValueError("power requires n >= 0")
    acc = identity_program(p)
    for _ in range(n):
        acc = compose(p, acc, cap=cap)
    return acc


def star(p: Program, cap: int = DEFAULT_CLOSURE_CAP, compose_cap: int = DEFAULT_COMPOSE_CAP) -> Program:
    """Union of all powers of p, stopping when the accumulated union
    stabilises; raises FixpointBudgetError (carrying the partial result)
    when no fixpoint is reached within `cap` rounds."""
    pw = identity_program(p)
    total = pw
    for _ in range(cap):
        pw = compose(p, pw, cap=compose_cap)
        new_total = total | pw
        if new_total == total:
            return total
        total = new_total
    raise FixpointBudgetError(cap, total)


def plus_closure(p: Program, cap: int = DEFAULT_CLOSURE_CAP, compose_cap: int = DEFAULT_COMPOSE_CAP) -> Program:
    """Union of all positive powers: star(p) composed with p."""
    return compose(star(p, cap=cap, compose_cap=compose_cap), p, cap=compose_cap)


def omega(p: Program, cap: int = DEFAULT_CLOSURE_CAP, compose_cap: int = DEFAULT_COMPOSE_CAP) -> Program:
    """The facts derivable by iterated composition: plus_closure(p) ∘ ∅."""
    return compose(plus_closure(p, cap=cap, compose_cap=compose_cap), Program(), cap=compose_cap)


# ---------------------------------------------------------------------------
# Concatenation


def concat_atoms(a: Atom, b: Atom) -> Atom:
    """Append the argument lists of two same-predicate atoms."""
    if a.pred != b.pred:
        raise ValueError(f"cannot concatenate atoms of different predicates {a.pred}/{b.pred}")
    return Atom(a.pred, a.args + b.args)


def concat_rules(r1: Rule, r2: Rule) -> Optional[Rule]:
    """Concatenate two rules with matching predicate signatures, or None.

    Heads are concatenated; the new body holds the concatenation of every
    same-predicate pair of body atoms.  No variables are renamed.
    """
    if pred_of(r1) != pred_of(r2):
        return None
    head = concat_atoms(r1.head, r2.head)
    body = frozenset(
        concat_atoms(b1, b2) for b1 in r1.body for b2 in r2.body if b1.pred == b2.pred
    )
    return Rule(head, body)


def concatenate(p: Program, r: Program) -> Program:
    out = []
    for r1 in p:
        for r2 in r:
            joined = concat_rules(r1, r2)
            if joined is not None:
                out.append(joined)
    return Program(out)


# ---------------------------------------------------------------------------
# Syntactic representation: P = Q ∘ R ∘ S


@dataclass(frozen=True, slots=True)
class DecompositionWitness:
    """Left and right transfer programs witnessing a representation."""

    left: Program
    right: Program


def check_representation(p: Program, r: Program, w: DecompositionWitness,
                         cap: int = DEFAULT_COMPOSE_CAP) -> bool:
    """True iff p equals (w.left ∘ r) ∘ w.right."""
    return compose(compose(w.left, r, cap=cap), w.right, cap=cap) == p


@dataclass(frozen=True, slots=True)
class SearchBudget:
    """Bounds for representation search: candidate transfer programs have at
    most max_rules rules, bodies of at most max_body atoms, argument terms
    of depth at most max_term_depth built over the alphabet of the inputs,
    and at most max_vars distinct variables.  At most max_candidates
    candidate programs are enumerated per side."""

    max_rules: int = 2
    max_body: int = 2
    max_term_depth: int = 0
    max_vars: int = 0
    max_candidates: int = 4096


def _term_pool(functor_arities: dict, max_depth: int, max_vars: int) -> list:
    by_depth: list[list] = [[Var(f"X{i + 1}") for i in range(max_vars)]]
    by_depth[0].extend(Compound(f) for f, ns in sorted(functor_arities.items()) if 0 in ns)
    for d in range(1, max_depth + 1):
        level = []
        smaller = [t for lvl in by_depth for t in lvl]
        for f, ns in sorted(functor_arities.items()):
            for n in sorted(ns):
                if n == 0:
                    continue
                for args in product(smaller, repeat=n):
                    level.append(Compound(f, args))
        by_depth.append(level)
    seen = dict.fromkeys(t for lvl in by_depth for t in lvl)
    return list(seen)


def _candidate_programs(alphabet_preds: Iterable, functor_arities: dict,
                        budget: SearchBudget) -> Iterator[Program]:
    terms = _term_pool(functor_arities, budget.max_term_depth, budget.max_vars)
    atoms = []
    for pred, arity in sorted(alphabet_preds):
        for args in product(terms, repeat=arity):
            atoms.append(Atom(pred, args))
    atoms.sort(key=render_atom)
    rules = []
    for head in atoms:
        for k in range(budget.max_body + 1):
            for body in combinations(atoms, k):
                rules.append(Rule(head, frozenset(body)))
    emitted = 0
    for k in range(budget.max_rules + 1):
        for chosen in combinations(rules, k):
            yield Program(chosen)
            emitted += 1
            if emitted >= budget.max_candidates:
                return


def search_representation(p: Program, r: Program,
                          budget: SearchBudget = SearchBudget(),
                          cap: int = DEFAULT_COMPOSE_CAP) -> Optional[DecompositionWitness]:
    """Bounded search for transfer programs Q, S with p = Q ∘ r ∘ S.

    Candidates are built over the predicate and functor alphabet of p and r
    only.  Returns a checked witness, or None when the budget is exhausted —
    which does NOT establish that no representation exists.
    """
    ident = identity_program(p | r)
    fast = [
        DecompositionWitness(ident, ident),
        DecompositionWitness(Program(), Program()),
        DecompositionWitness(ident, Program()),
        DecompositionWitness(p, Program()),
    ]
    for w in fast:
        if check_representation(p, r, w, cap=cap):
            return w

    alphabet_preds = (p | r).pred_signature()
    functor_arities: dict = {}
    combined = p | r

    def collect(t):
        if isinstance(t, Compound):
            functor_arities.setdefault(t.functor, set()).add(len(t.args))
            for a in t.args:
                collect(a)

    for atom in combined.all_atoms():
        for t in atom.args:
            collect(t)

    lefts = list(_candidate_programs(alphabet_preds, functor_arities, budget))
    mids = []
    for q in lefts:
        try:
            mids.append(compose(q, r, cap=cap))
        except CompositionOverflowError:
            mids.append(None)
    rights = lefts
    for qi, q in enumerate(lefts):
        mid = mids[qi]
        if mid is None:
            continue
        for s in rights:
            try:
                if compose(mid, s, cap=cap) == p:
                    return DecompositionWitness(q, s)
            except CompositionOverflowError:
                continue
    return None
