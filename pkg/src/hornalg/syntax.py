"""Core syntax: terms, atoms, rules, and programs.

A program is a set of Horn rules.  Two rules that differ only by a
renaming of variables count as the same set element, so `Program`
deduplicates under per-rule canonical renaming and `Program.__eq__` is
variant equality.  The concrete variable names of the stored rules are
preserved, because the concatenation operation is sensitive to them.

Predicate and function symbols are *unranked*: identity is by name only,
and the same name may occur at several arities within one program.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Iterable, Iterator, Union


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, slots=True)
class Var:
    """A first-order variable."""

    name: str

    def __repr__(self) -> str:
        return f"Var({self.name})"


@dataclass(frozen=True, slots=True)
class Compound:
    """A function symbol applied to arguments; a constant when args is empty."""

    functor: str
    args: tuple = ()

    def __repr__(self) -> str:
        return f"Compound({render_term(self)})"


Term = Union[Var, Compound]

NIL = Compound("nil", ())


def const(name: str) -> Compound:
    return Compound(name, ())


def cons(head: Term, tail: Term) -> Compound:
    return Compound("cons", (head, tail))


def make_list(items: Iterable[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(tuple(items)):
        out = cons(item, out)
    return out


# ---------------------------------------------------------------------------
# Atoms and rules


@dataclass(frozen=True, slots=True)
class Atom:
    """A predicate symbol applied to argument terms (possibly none)."""

    pred: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __repr__(self) -> str:
        return f"Atom({render_atom(self)})"


@dataclass(frozen=True, slots=True)
class Rule:
    """A Horn rule: one head atom and a (possibly empty) set of body atoms.

    A rule with an empty body is a fact.  Bodies are duplicate-free sets.
    """

    head: Atom
    body: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.body, frozenset):
            object.__setattr__(self, "body", frozenset(self.body))

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __repr__(self) -> str:
        return f"Rule({render_rule(self)})"


@dataclass(frozen=True, slots=True)
class PredSignature:
    """The head predicate of a rule paired with the set of its body predicates.

    Arities are deliberately ignored (unranked convention).
    """

    head: str
    body: frozenset


def pred_of(rule: Rule) -> PredSignature:
    return PredSignature(rule.head.pred, frozenset(a.pred for a in rule.body))


# ---------------------------------------------------------------------------
# Variable collection


def term_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from term_vars(a)


def atom_vars(a: Atom) -> Iterator[Var]:
    for t in a.args:
        yield from term_vars(t)


def rule_vars(r: Rule) -> Iterator[Var]:
    yield from atom_vars(r.head)
    for a in sorted(r.body, key=render_atom):
        yield from atom_vars(a)


def vars_of(obj) -> frozenset:
    """All variables occurring in a term, atom, rule, or program."""
    if isinstance(obj, (Var, Compound)):
        return frozenset(term_vars(obj))
    if isinstance(obj, Atom):
        return frozenset(atom_vars(obj))
    if isinstance(obj, Rule):
        return frozenset(rule_vars(obj))
    if isinstance(obj, Program):
        out = set()
        for r in obj:
            out.update(rule_vars(r))
        return frozenset(out)
    raise TypeError(f"cannot collect variables from {type(obj).__name__}")


def is_ground(obj) -> bool:
    return not vars_of(obj)


# ---------------------------------------------------------------------------
# Rendering

_LIST_FUNCTOR = "cons"
_NIL_FUNCTOR = "nil"


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t.functor == _NIL_FUNCTOR and not t.args:
        return "[]"
    if t.functor == _LIST_FUNCTOR and len(t.args) == 2:
        items = []
        cur: Term = t
        while isinstance(cur, Compound) and cur.functor == _LIST_FUNCTOR and len(cur.args) == 2:
            items.append(render_term(cur.args[0]))
            cur = cur.args[1]
        if isinstance(cur, Compound) and cur.functor == _NIL_FUNCTOR and not cur.args:
            return "[" + ",".join(items) + "]"
        return "[" + ",".join(items) + "|" + render_term(cur) + "]"
    if not t.args:
        return t.functor
    return t.functor + "(" + ",".join(render_term(a) for a in t.args) + ")"


def render_atom(a: Atom) -> str:
    if not a.args:
        return a.pred
    return a.pred + "(" + ",".join(render_term(t) for t in a.args) + ")"


def render_rule(r: Rule) -> str:
    """Render a rule with its variable names as-is; body in a fixed order."""
    if r.is_fact:
        return render_atom(r.head) + "."
    body = ", ".join(sorted(render_atom(a) for a in r.body))
    return render_atom(r.head) + " :- " + body + "."


# ---------------------------------------------------------------------------
# Canonical renaming
#
# canonical_rule maps every rule to a unique representative of its variant
# class: body atoms are put in a deterministic order and variables renamed
# A, B, C, ... in order of first occurrence.  Ties between body atoms whose
# shape is identical are broken by trying the (few) possible orders and
# keeping the lexicographically least rendering.

_TIE_CAP = 5040  # give up on perfect tie-breaking past 7! candidate orders


def _canon_name(i: int) -> str:
    if i < 26:
        return string.ascii_uppercase[i]
    return f"V{i}"


def _term_text(t: Term, var_key) -> str:
    if isinstance(t, Var):
        return var_key(t)
    if t.functor == _NIL_FUNCTOR and not t.args:
        return "[]"
    if not t.args:
        return t.functor
    return t.functor + "(" + ",".join(_term_text(a, var_key) for a in t.args) + ")"


def _atom_skeleton(a: Atom) -> str:
    return a.pred + "(" + ",".join(_term_text(t, lambda v: "_") for t in a.args) + ")"


def _atom_local_pattern(a: Atom) -> str:
    seen: dict = {}

    def key(v: Var) -> str:
        if v not in seen:
            seen[v] = f"#{len(seen)}"
        return seen[v]

    return a.pred + "(" + ",".join(_term_text(t, key) for t in a.args) + ")"


def _rename_term(t: Term, mapping: dict) -> Term:
    if isinstance(t, Var):
        if t not in mapping:
            mapping[t] = Var(_canon_name(len(mapping)))
        return mapping[t]
    if not t.args:
        return t
    return Compound(t.functor, tuple(_rename_term(a, mapping) for a in t.args))


def _rename_atom(a: Atom, mapping: dict) -> Atom:
    if not a.args:
        return a
    return Atom(a.pred, tuple(_rename_term(t, mapping) for t in a.args))


@lru_cache(maxsize=65536)
def _canonicalize(rule: Rule) -> tuple:
    body = sorted(rule.body, key=lambda a: (_atom_skeleton(a), _atom_local_pattern(a)))
    groups: list[list[Atom]] = []
    last_key = None
    for a in body:
        k = (_atom_skeleton(a), _atom_local_pattern(a))
        if k == last_key:
            groups[-1].append(a)
        else:
            groups.append([a])
            last_key = k
    n_orders = 1
    for g in groups:
        n_orders *= factorial(len(g))
    if n_orders > _TIE_CAP:
        orders: Iterable[tuple] = [tuple(body)]
    else:
        orders = (
            tuple(a for g in combo for a in g)
            for combo in product(*(permutations(g) for g in groups))
        )

    best_text = None
    best_rule = None
    for order in orders:
        mapping: dict = {}
        head = _rename_atom(rule.head, mapping)
        atoms = [_rename_atom(a, mapping) for a in order]
        if atoms:
            text = render_atom(head) + " :- " + ", ".join(render_atom(a) for a in atoms) + "."
        else:
            text = render_atom(head) + "."
        if best_text is None or text < best_text:
            best_text = text
            best_rule = Rule(head, frozenset(atoms))
    return best_rule, best_text


def canonical_rule(rule: Rule) -> Rule:
    """The canonical representative of the rule's variant class."""
    return _canonicalize(rule)[0]


def canonical_key(rule: Rule) -> str:
    """Canonical rendering of the rule; equal strings iff the rules are variants."""
    return _canonicalize(rule)[1]


def _rule_sort_key(rule: Rule) -> tuple:
    return (rule.head.pred, rule.head.arity, 0 if rule.is_fact else 1, canonical_key(rule))


# ---------------------------------------------------------------------------
# Programs


class Program:
    """An immutable set of rules with variant-based equality.

    Rules are deduplicated under canonical renaming; the first
    representative of each variant class is kept with its original
    variable names (concatenation depends on them).  Iteration order is
    deterministic: sorted by head predicate, head arity, facts first,
    then canonical rendering.
    """

    __slots__ = ("_rules", "_keyset", "_hash", "_namekey")

    def __init__(self, rules: Iterable[Rule] = ()):
        seen: dict[str, Rule] = {}
        for r in rules:
            if not isinstance(r, Rule):
                raise TypeError(f"Program expects Rule elements, got {type(r).__name__}")
            k = canonical_key(r)
            if k not in seen:
                seen[k] = r
        self._rules = tuple(sorted(seen.values(), key=_rule_sort_key))
        self._keyset = frozenset(seen)
        self._hash = hash(self._keyset)
        self._namekey: tuple | None = None

    def name_key(self) -> tuple:
        """Sorted rule renderings: distinguishes variant-equal programs
        that differ only in variable names (equality does not)."""
        if self._namekey is None:
            self._namekey = tuple(sorted(render_rule(r) for r in self._rules))
        return self._namekey

    # -- set behaviour ------------------------------------------------------

    @property
    def rules(self) -> tuple:
        return self._rules

    def __iter__(self) -> Iterator[Rule]:
        return iter(self._rules)

    def __len__(self) -> int:
        return len(self._rules)

    def __bool__(self) -> bool:
        return bool(self._rules)

    def __contains__(self, rule: Rule) -> bool:
        return canonical_key(rule) in self._keyset

    def __eq__(self, other) -> bool:
        if not isinstance(other, Program):
            return NotImplemented
        return self._keyset == other._keyset

    def __hash__(self) -> int:
        return self._hash

    def __or__(self, other: "Program") -> "Program":
        if not isinstance(other, Program):
            return NotImplemented
        return Program(self._rules + other._rules)

    def __repr__(self) -> str:
        text = " ".join(canonical_key(r) for r in self._rules)
        if len(text) > 200:
            text = text[:197] + "..."
        return f"Program<{text}>"

    def issubset(self, other: "Program") -> bool:
        return self._keyset <= other._keyset

    def strict_equals(self, other: "Program") -> bool:
        """Equality of the stored rules themselves, variable names included."""
        return set(self._rules) == set(other._rules)

    # -- structural queries -------------------------------------------------

    def facts(self) -> "Program":
        return Program(r for r in self._rules if r.is_fact)

    def proper(self) -> "Program":
        return Program(r for r in self._rules if not r.is_fact)

    def head_atoms(self) -> tuple:
        return tuple(r.head for r in self._rules)

    def body_atoms(self) -> tuple:
        out = []
        for r in self._rules:
            out.extend(sorted(r.body, key=render_atom))
        return tuple(out)

    def all_atoms(self) -> tuple:
        out = []
        for r in self._rules:
            out.append(r.head)
            out.extend(sorted(r.body, key=render_atom))
        return tuple(out)

    def predicates(self) -> frozenset:
        """Predicate names (unranked) occurring anywhere in the program."""
        return frozenset(a.pred for a in self.all_atoms())

    def pred_signature(self) -> frozenset:
        """(name, arity) pairs of all atom occurrences."""
        return frozenset((a.pred, a.arity) for a in self.all_atoms())

    def functors(self) -> frozenset:
        """Function symbol names (unranked) occurring anywhere in the program."""
        out = set()

        def walk(t: Term):
            if isinstance(t, Compound):
                out.add(t.functor)
                for a in t.args:
                    walk(a)

        for a in self.all_atoms():
            for t in a.args:
                walk(t)
        return frozenset(out)

    # -- elementary operations ----------------------------------------------

    def rename_predicate(self, old: str, new: str) -> "Program":
        """Rewrite every occurrence of predicate `old` (any arity) to `new`."""
        if old == new:
            return self

        def ren_atom(a: Atom) -> Atom:
            return Atom(new, a.args) if a.pred == old else a

        return Program(
            Rule(ren_atom(r.head), frozenset(ren_atom(a) for a in r.body)) for r in self._rules
        )

    def reverse(self) -> "Program":
        """Keep facts; flip each proper rule into one rule per body atom."""
        out: list[Rule] = []
        for r in self._rules:
            if r.is_fact:
                out.append(r)
            else:
                for a in sorted(r.body, key=render_atom):
                    out.append(Rule(a, frozenset([r.head])))
        return Program(out)

    def render(self) -> str:
        return render_program(self)


def render_program(p: Program) -> str:
    """Deterministic canonical rendering: one rule per line, no trailing newline."""
    return "\n".join(canonical_key(r) for r in p.rules)


def program_vars_ordered(p: Program) -> tuple:
    """Variables of the stored rules in first-occurrence order over canonical iteration."""
    seen: dict = {}
    for r in p:
        for v in rule_vars(r):
            if v not in seen:
                seen[v] = None
    return tuple(seen)
