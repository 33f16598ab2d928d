"""Substitutions, unification, matching, and renaming utilities.

Substitutions are kept idempotent: after construction no bound variable
occurs in any binding's range.  `mgu_*` functions return None on failure
(failure is a value, not a fault).  Unification of atoms requires equal
predicate name and equal arity; the occurs check is always on.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterable, Iterator, Optional

from .syntax import (
    Atom,
    Compound,
    Program,
    Rule,
    Term,
    Var,
    render_atom,
    rule_vars,
    vars_of,
)


class Subst:
    """An immutable, idempotent substitution (finite map Var -> Term)."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Optional[dict] = None):
        m = {}
        if mapping:
            for v, t in mapping.items():
                if v != t:
                    m[v] = t
        self._map = m

    def __bool__(self) -> bool:
        return bool(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, v: Var) -> bool:
        return v in self._map

    def __getitem__(self, v: Var) -> Term:
        return self._map[v]

    def get(self, v: Var, default=None):
        return self._map.get(v, default)

    def items(self):
        return self._map.items()

    def domain(self) -> frozenset:
        return frozenset(self._map)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subst):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        from .syntax import render_term

        inner = ", ".join(
            f"{v.name}={render_term(t)}" for v, t in sorted(self._map.items(), key=lambda p: p[0].name)
        )
        return "{" + inner + "}"

    def is_renaming(self) -> bool:
        """True iff this maps variables injectively to variables."""
        values = list(self._map.values())
        return all(isinstance(t, Var) for t in values) and len(set(values)) == len(values)

    def restrict(self, keep: Iterable[Var]) -> "Subst":
        keep = set(keep)
        return Subst({v: t for v, t in self._map.items() if v in keep})

    def compose(self, later: "Subst") -> "Subst":
        """The substitution equivalent to applying self first, then `later`."""
        out = {v: apply(later, t) for v, t in self._map.items()}
        for v, t in later.items():
            if v not in out:
                out[v] = t
        return Subst(_resolve(out))


EMPTY_SUBST = Subst()


def apply(s: Subst, obj):
    """Apply a substitution to a Term, Atom, Rule, Program, or tuple thereof."""
    if isinstance(obj, Var):
        return s.get(obj, obj)
    if isinstance(obj, Compound):
        if not obj.args:
            return obj
        return Compound(obj.functor, tuple(apply(s, a) for a in obj.args))
    if isinstance(obj, Atom):
        if not obj.args:
            return obj
        return Atom(obj.pred, tuple(apply(s, t) for t in obj.args))
    if isinstance(obj, Rule):
        return Rule(apply(s, obj.head), frozenset(apply(s, a) for a in obj.body))
    if isinstance(obj, Program):
        return Program(apply(s, r) for r in obj)
    if isinstance(obj, tuple):
        return tuple(apply(s, x) for x in obj)
    if isinstance(obj, frozenset):
        return frozenset(apply(s, x) for x in obj)
    raise TypeError(f"cannot apply substitution to {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Unification (triangular form internally, resolved to idempotent on exit)


def _walk(t: Term, s: dict) -> Term:
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def _occurs(v: Var, t: Term, s: dict) -> bool:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t == v
    return any(_occurs(v, a, s) for a in t.args)


def _unify(t1: Term, t2: Term, s: Optional[dict]) -> Optional[dict]:
    if s is None:
        return None
    t1 = _walk(t1, s)
    t2 = _walk(t2, s)
    if isinstance(t1, Var):
        if t1 == t2:
            return s
        if _occurs(t1, t2, s):
            return None
        s2 = dict(s)
        s2[t1] = t2
        return s2
    if isinstance(t2, Var):
        if _occurs(t2, t1, s):
            return None
        s2 = dict(s)
        s2[t2] = t1
        return s2
    if t1.functor != t2.functor or len(t1.args) != len(t2.args):
        return None
    for a, b in zip(t1.args, t2.args):
        s = _unify(a, b, s)
        if s is None:
            return None
    return s


def _deep_walk(t: Term, s: dict) -> Term:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t
    if not t.args:
        return t
    return Compound(t.functor, tuple(_deep_walk(a, s) for a in t.args))


def _resolve(s: dict) -> dict:
    return {v: _deep_walk(t, s) for v, t in s.items()}


def mgu_terms(t1: Term, t2: Term) -> Optional[Subst]:
    s = _unify(t1, t2, {})
    return None if s is None else Subst(_resolve(s))


def _unify_atoms(a: Atom, b: Atom, s: Optional[dict]) -> Optional[dict]:
    if s is None:
        return None
    if a.pred != b.pred or a.arity != b.arity:
        return None
    for t1, t2 in zip(a.args, b.args):
        s = _unify(t1, t2, s)
        if s is None:
            return None
    return s


def mgu_atoms(a: Atom, b: Atom) -> Optional[Subst]:
    s = _unify_atoms(a, b, {})
    return None if s is None else Subst(_resolve(s))


# ---------------------------------------------------------------------------
# One-way matching (pattern variables bind; target is left untouched)


def _match_term(pat: Term, tgt: Term, s: Optional[dict]) -> Optional[dict]:
    if s is None:
        return None
    if isinstance(pat, Var):
        bound = s.get(pat)
        if bound is None:
            s2 = dict(s)
            s2[pat] = tgt
            return s2
        return s if bound == tgt else None
    if isinstance(tgt, Var):
        return None
    if pat.functor != tgt.functor or len(pat.args) != len(tgt.args):
        return None
    for a, b in zip(pat.args, tgt.args):
        s = _match_term(a, b, s)
        if s is None:
            return None
    return s


def match_atom(pattern: Atom, target: Atom, seed: Optional[Subst] = None) -> Optional[Subst]:
    """Match `pattern` onto `target` one-way; extends `seed` if given."""
    if pattern.pred != target.pred or pattern.arity != target.arity:
        return None
    s: Optional[dict] = dict(seed.items()) if seed else {}
    for p, t in zip(pattern.args, target.args):
        s = _match_term(p, t, s)
        if s is None:
            return None
    return Subst(s)


# ---------------------------------------------------------------------------
# Set unification: bijections between two atom sets, unified pairwise


def iter_atom_set_unifiers(goals: Iterable[Atom], heads: Iterable[Atom]) -> Iterator[Subst]:
    """All substitutions unifying the two atom sets under some bijection.

    Atoms are bucketed by (predicate, arity); a bijection exists only when
    the bucket sizes agree.  Goals are kept in a deterministic (rendered)
    order so the first yielded unifier is stable.
    """
    goals = sorted(goals, key=render_atom)
    heads = sorted(heads, key=render_atom)
    if len(goals) != len(heads):
        return
    buckets_g: dict = {}
    for a in goals:
        buckets_g.setdefault((a.pred, a.arity), []).append(a)
    buckets_h: dict = {}
    for a in heads:
        buckets_h.setdefault((a.pred, a.arity), []).append(a)
    if set(buckets_g) != set(buckets_h):
        return
    keys = sorted(buckets_g)
    for key in keys:
        if len(buckets_g[key]) != len(buckets_h[key]):
            return
    per_bucket = [
        [list(zip(buckets_g[k], perm)) for perm in permutations(buckets_h[k])] for k in keys
    ]
    for combo in product(*per_bucket):
        s: Optional[dict] = {}
        for pairs in combo:
            for g, h in pairs:
                s = _unify_atoms(g, h, s)
                if s is None:
                    break
            if s is None:
                break
        if s is not None:
            yield Subst(_resolve(s))


def mgu_atom_sets(goals: Iterable[Atom], heads: Iterable[Atom]) -> Optional[Subst]:
    """First unifier of the two atom sets under canonical ordering, or None."""
    for s in iter_atom_set_unifiers(goals, heads):
        return s
    return None


# ---------------------------------------------------------------------------
# Fresh names, variants, standardize-apart


class FreshNames:
    """Generates variable names not occurring in a given avoid set."""

    __slots__ = ("_avoid", "_counter", "_prefix")

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "_G"):
        self._avoid = set(avoid)
        self._counter = 0
        self._prefix = prefix

    def reserve(self, names: Iterable[str]) -> None:
        self._avoid.update(names)

    def fresh(self) -> Var:
        while True:
            self._counter += 1
            name = f"{self._prefix}{self._counter}"
            if name not in self._avoid:
                self._avoid.add(name)
                return Var(name)


def fresh_variant(rule: Rule, fresh: FreshNames) -> Rule:
    """A copy of the rule with every variable replaced by a fresh one."""
    mapping = {v: fresh.fresh() for v in dict.fromkeys(rule_vars(rule))}
    return apply(Subst(mapping), rule)


def standardize_apart(p: Program, avoid: Iterable[str] = (), prefix: str = "_G") -> Program:
    """A variant of p (one program-wide renaming) with variables fresh w.r.t. avoid.

    The renaming is applied consistently across rules, so variables shared
    between rules stay shared.
    """
    fresh = FreshNames(avoid, prefix=prefix)
    fresh.reserve(v.name for v in vars_of(p))
    mapping = {}
    for r in p:
        for v in rule_vars(r):
            if v not in mapping:
                mapping[v] = fresh.fresh()
    s = Subst(mapping)
    return Program(apply(s, r) for r in p)


def is_variant(a, b) -> bool:
    """Variant check for rules (canonical-form equality) or programs
    (per-rule variant correspondence, which is Program equality)."""
    from .syntax import canonical_key

    if isinstance(a, Rule) and isinstance(b, Rule):
        return canonical_key(a) == canonical_key(b)
    if isinstance(a, Program) and isinstance(b, Program):
        return a == b
    raise TypeError("is_variant expects two Rules or two Programs")
