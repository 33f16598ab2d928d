"""Program forms: a small expression language over programs.

A form is an expression built from program variables, inline program
literals, references to named programs, and the algebra's operations.
Binding each variable to a program and evaluating yields a program, so a
form denotes a program transformation.

Text syntax (`.lpf` files), one definition per `form NAME(params) = expr;`:

    expr     :=  union
    union    :=  comp ("|" comp)*            union of programs
    comp     :=  concat ("o" concat)*        sequential composition
    concat   :=  postfix ("." postfix)*      concatenation
    postfix  :=  primary tail*
    tail     :=  "^" INT                     power
              |  "[" IDENT "/" IDENT "]"     predicate rename (old/new)
              |  "[" VAR ":=" term "]"       variable substitution
    primary  :=  "{" rules "}"               inline program literal
              |  "@" IDENT                   named program reference
              |  VAR                         form parameter
              |  fn "(" expr ")"             fn ∈ facts proper rev gnd body refresh
              |  NAME "(" VAR ("," VAR)* ")" call of an earlier form
              |  "(" expr ")"

A parameter may declare a main-predicate placeholder and a variable-tuple
placeholder: `form Plus(X[q](Xs)) = ...`.  Within that form's body, the
identifier `q` in a rename stands for the main predicate of whatever
program gets bound to X.  The caller's binding may substitute the bound
program's variables via a call-site tuple first (which permits identifying
two variables by repeating a name).

`refresh(E)` renames every variable that occurs in a proper-rule body of
E's value to fresh Z1, Z2, ... consistently across the whole program;
variables occurring only in heads (or only in facts) are left alone.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import algebra, semantics
from .errors import BudgetError, FormEvalError, ParseError
from .parser import parse_program
from .syntax import (
    Compound,
    NIL,
    Program,
    Rule,
    Term,
    Var,
    cons,
    program_vars_ordered,
    render_atom,
    render_program,
    render_term,
    term_vars,
    vars_of,
)
from .unify import Subst, apply

# ---------------------------------------------------------------------------
# Expression nodes


@dataclass(frozen=True, slots=True)
class VarRef:
    name: str


@dataclass(frozen=True, slots=True)
class Lit:
    program: Program


@dataclass(frozen=True, slots=True)
class ProgramRef:
    name: str


@dataclass(frozen=True, slots=True)
class UnionOf:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class ComposeOf:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class ConcatOf:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class PowerOf:
    expr: object
    n: int


@dataclass(frozen=True, slots=True)
class FactsOf:
    expr: object


@dataclass(frozen=True, slots=True)
class ProperOf:
    expr: object


@dataclass(frozen=True, slots=True)
class ReverseOf:
    expr: object


@dataclass(frozen=True, slots=True)
class BodyOf:
    expr: object


@dataclass(frozen=True, slots=True)
class GroundOf:
    expr: object


@dataclass(frozen=True, slots=True)
class FreshenVars:
    expr: object


@dataclass(frozen=True, slots=True)
class RenamePred:
    expr: object
    old: str
    new: str


@dataclass(frozen=True, slots=True)
class SubstIn:
    expr: object
    var: str
    term: Term


@dataclass(frozen=True, slots=True)
class FormCall:
    name: str
    args: tuple  # parameter names of the calling context


@dataclass(frozen=True, slots=True)
class ParamSpec:
    name: str
    pred_placeholder: Optional[str] = None
    tuple_placeholder: tuple = ()


@dataclass(frozen=True, slots=True)
class FormDef:
    name: str
    params: tuple  # of ParamSpec
    body: object


# ---------------------------------------------------------------------------
# Bindings


@dataclass(frozen=True, slots=True)
class Binding:
    """A program bound to a form parameter, with its main predicate and the
    call-site variable tuple already applied to the program."""

    program: Program
    main_pred: Optional[str] = None
    var_tuple: tuple = ()
    source: str = ""


def make_binding(program: Program, main_pred: Optional[str] = None,
                 var_tuple: tuple = (), source: str = "") -> Binding:
    """Bind a program, applying the call-site variable tuple first.

    The tuple positions correspond to the program's variables in first-
    occurrence order; repeating a name identifies variables.  When no main
    predicate is given, the unique head predicate (if any) is used.
    """
    if var_tuple:
        ordered = program_vars_ordered(program)
        if len(var_tuple) != len(ordered):
            raise FormEvalError(
                f"binding tuple has {len(var_tuple)} entries, program has "
                f"{len(ordered)} variables"
            )
        program = apply(Subst(dict(zip(ordered, var_tuple))), program)
    if main_pred is None:
        heads = {r.head.pred for r in program}
        if len(heads) == 1:
            main_pred = next(iter(heads))
    return Binding(program, main_pred, tuple(var_tuple), source)


# ---------------------------------------------------------------------------
# Helpers used by evaluation


def body_program(p: Program) -> Program:
    """The body atoms of the proper rules, as facts."""
    return Program(
        Rule(b) for r in p if not r.is_fact for b in sorted(r.body, key=render_atom)
    )


def refresh_body_vars(p: Program) -> Program:
    """Rename every variable occurring in some proper-rule body to a fresh
    Z1, Z2, ... (program-wide, in first-occurrence order)."""
    ordered: dict = {}
    for r in p:
        if r.is_fact:
            continue
        for a in sorted(r.body, key=render_atom):
            for t in a.args:
                for v in term_vars(t):
                    ordered.setdefault(v)
    if not ordered:
        return p
    kept_names = {v.name for v in vars_of(p) if v not in ordered}
    mapping = {}
    i = 0
    for v in ordered:
        i += 1
        while f"Z{i}" in kept_names:
            i += 1
        mapping[v] = Var(f"Z{i}")
    return apply(Subst(mapping), p)


def free_vars(expr) -> frozenset:
    """The parameter names a form expression depends on."""
    if isinstance(expr, VarRef):
        return frozenset([expr.name])
    if isinstance(expr, (Lit, ProgramRef)):
        return frozenset()
    if isinstance(expr, (UnionOf, ComposeOf, ConcatOf)):
        return free_vars(expr.left) | free_vars(expr.right)
    if isinstance(expr, (PowerOf, FactsOf, ProperOf, ReverseOf, BodyOf, GroundOf,
                         FreshenVars, RenamePred, SubstIn)):
        return free_vars(expr.expr)
    if isinstance(expr, FormCall):
        return frozenset(expr.args)
    raise TypeError(f"not a form expression: {type(expr).__name__}")


def _program_key(p: Program) -> tuple:
    """A name-sensitive identity for a program.  Program equality is variant
    equality, but concatenation captures variables by name, so memoization
    must distinguish programs that differ only in variable names."""
    return p.name_key()


def _binding_key(b: Binding) -> tuple:
    return (_program_key(b.program), b.main_pred,
            tuple(v.name for v in b.var_tuple))


def expr_key(expr) -> tuple:
    """A hashable, name-sensitive identity for a form expression."""
    if isinstance(expr, VarRef):
        return ("var", expr.name)
    if isinstance(expr, Lit):
        return ("lit", _program_key(expr.program))
    if isinstance(expr, ProgramRef):
        return ("ref", expr.name)
    if isinstance(expr, (UnionOf, ComposeOf, ConcatOf)):
        return (type(expr).__name__, expr_key(expr.left), expr_key(expr.right))
    if isinstance(expr, PowerOf):
        return ("power", expr_key(expr.expr), expr.n)
    if isinstance(expr, RenamePred):
        return ("rename", expr_key(expr.expr), expr.old, expr.new)
    if isinstance(expr, SubstIn):
        return ("subst", expr_key(expr.expr), expr.var, render_term(expr.term))
    if isinstance(expr, (FactsOf, ProperOf, ReverseOf, BodyOf, GroundOf,
                         FreshenVars)):
        return (type(expr).__name__, expr_key(expr.expr))
    if isinstance(expr, FormCall):
        return ("call", expr.name, expr.args)
    raise TypeError(f"not a form expression: {type(expr).__name__}")


def literal_requirements(expr, table: Optional[dict] = None,
                         programs: Optional[dict] = None) -> tuple:
    """All fixed material a form forces into its outputs: the inline/named
    program literals, the predicates introduced by renames, and the functors
    introduced by substitutions.  Walks into called forms."""
    lits: list = []
    preds: set = set()
    functors: set = set()

    def walk(e):
        if isinstance(e, Lit):
            lits.append(e.program)
        elif isinstance(e, ProgramRef):
            if programs is None or e.name not in programs:
                raise FormEvalError(f"unknown program reference @{e.name}")
            lits.append(programs[e.name])
        elif isinstance(e, (UnionOf, ComposeOf, ConcatOf)):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, (PowerOf, FactsOf, ProperOf, ReverseOf, BodyOf,
                            GroundOf, FreshenVars)):
            walk(e.expr)
        elif isinstance(e, RenamePred):
            preds.add(e.new)
            walk(e.expr)
        elif isinstance(e, SubstIn):
            stack = [e.term]
            while stack:
                cur = stack.pop()
                if isinstance(cur, Compound):
                    functors.add(cur.functor)
                    stack.extend(cur.args)
            walk(e.expr)
        elif isinstance(e, FormCall):
            if table is None or e.name not in table:
                raise FormEvalError(f"call of unknown form {e.name}")
            walk(table[e.name].body)
        elif isinstance(e, VarRef):
            pass
        else:
            raise TypeError(f"not a form expression: {type(e).__name__}")

    walk(expr)
    return tuple(lits), frozenset(preds), frozenset(functors)


# ---------------------------------------------------------------------------
# Evaluation


class Evaluator:
    """Evaluates form expressions against bindings, memoizing results.

    One evaluator may be shared across many evaluations; the memo key is
    the expression plus the bindings its free variables see (other
    bindings in the environment cannot influence the result).
    """

    def __init__(self, table: Optional[dict] = None, programs: Optional[dict] = None):
        self.table = table or {}
        self.programs = programs or {}
        self._memo: dict = {}
        # expr_key and free_vars are recursive; cache them per expression
        # object.  Keeping the expression in the value pins it, so its id
        # cannot be reused.
        self._keys: dict = {}
        self._fvars: dict = {}
        self._probes: dict = {}

    def _expr_key(self, expr) -> tuple:
        hit = self._keys.get(id(expr))
        if hit is not None:
            return hit[1]
        key = expr_key(expr)
        self._keys[id(expr)] = (expr, key)
        return key

    def _free_vars(self, expr) -> frozenset:
        hit = self._fvars.get(id(expr))
        if hit is not None:
            return hit[1]
        fv = free_vars(expr)
        self._fvars[id(expr)] = (expr, fv)
        return fv

    def eval(self, expr, env: Optional[dict] = None, placeholders: Optional[dict] = None) -> Program:
        env = env or {}
        placeholders = placeholders or {}
        key = (
            self._expr_key(expr),
            tuple(sorted(
                (n, _binding_key(env[n])) for n in self._free_vars(expr) if n in env
            )),
            tuple(sorted(placeholders.items())),
        )
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._eval(expr, env, placeholders)
        self._memo[key] = out
        return out

    def _eval(self, expr, env: dict, placeholders: dict) -> Program:
        if isinstance(expr, VarRef):
            b = env.get(expr.name)
            if b is None:
                raise FormEvalError(f"unbound form variable {expr.name}")
            return b.program
        if isinstance(expr, Lit):
            return expr.program
        if isinstance(expr, ProgramRef):
            p = self.programs.get(expr.name)
            if p is None:
                raise FormEvalError(f"unknown program reference @{expr.name}")
            return p
        if isinstance(expr, UnionOf):
            return self.eval(expr.left, env, placeholders) | self.eval(expr.right, env, placeholders)
        if isinstance(expr, ComposeOf):
            return algebra.compose(
                self.eval(expr.left, env, placeholders),
                self.eval(expr.right, env, placeholders),
            )
        if isinstance(expr, ConcatOf):
            return algebra.concatenate(
                self.eval(expr.left, env, placeholders),
                self.eval(expr.right, env, placeholders),
            )
        if isinstance(expr, PowerOf):
            return algebra.power(self.eval(expr.expr, env, placeholders), expr.n)
        if isinstance(expr, FactsOf):
            return self.eval(expr.expr, env, placeholders).facts()
        if isinstance(expr, ProperOf):
            return self.eval(expr.expr, env, placeholders).proper()
        if isinstance(expr, ReverseOf):
            return self.eval(expr.expr, env, placeholders).reverse()
        if isinstance(expr, BodyOf):
            return body_program(self.eval(expr.expr, env, placeholders))
        if isinstance(expr, GroundOf):
            return semantics.ground(self.eval(expr.expr, env, placeholders))
        if isinstance(expr, FreshenVars):
            return refresh_body_vars(self.eval(expr.expr, env, placeholders))
        if isinstance(expr, RenamePred):
            old = expr.old
            if old in placeholders:
                b = env.get(placeholders[old])
                if b is None or b.main_pred is None:
                    raise FormEvalError(
                        f"placeholder {old} has no main predicate to resolve against"
                    )
                old = b.main_pred
            return self.eval(expr.expr, env, placeholders).rename_predicate(old, expr.new)
        if isinstance(expr, SubstIn):
            return apply(
                Subst({Var(expr.var): expr.term}), self.eval(expr.expr, env, placeholders)
            )
        if isinstance(expr, FormCall):
            fd = self.table.get(expr.name)
            if fd is None:
                raise FormEvalError(f"call of unknown form {expr.name}")
            if len(expr.args) != len(fd.params):
                raise FormEvalError(
                    f"form {expr.name} takes {len(fd.params)} arguments, got {len(expr.args)}"
                )
            inner_env = {}
            for spec, arg in zip(fd.params, expr.args):
                b = env.get(arg)
                if b is None:
                    raise FormEvalError(f"unbound form variable {arg}")
                inner_env[spec.name] = b
            inner_ph = {
                spec.pred_placeholder: spec.name
                for spec in fd.params
                if spec.pred_placeholder
            }
            return self.eval(fd.body, inner_env, inner_ph)
        raise TypeError(f"not a form expression: {type(expr).__name__}")


def eval_form(table: dict, name: str, bindings: dict,
              programs: Optional[dict] = None,
              evaluator: Optional[Evaluator] = None) -> Program:
    """Evaluate the named form with bindings keyed by its parameter names."""
    fd = table.get(name)
    if fd is None:
        raise FormEvalError(f"unknown form {name}")
    ev = evaluator or Evaluator(table, programs)
    call = FormCall(fd.name, tuple(s.name for s in fd.params))
    missing = [s.name for s in fd.params if s.name not in bindings]
    if missing:
        raise FormEvalError(f"missing bindings for {', '.join(missing)}")
    return ev.eval(call, dict(bindings), {})


# ---------------------------------------------------------------------------
# Non-constancy


@dataclass(frozen=True, slots=True)
class NonConstancyProbe:
    """Structurally distinct programs used to witness that a form actually
    depends on its arguments."""

    programs: tuple


DEFAULT_PROBE = NonConstancyProbe((
    parse_program("p(c)."),
    parse_program("p(c). p(f(X)) :- p(X)."),
    parse_program("p."),
    parse_program("p(c). p(d)."),
))


def is_nonconstant(expr, probe: NonConstancyProbe = DEFAULT_PROBE,
                   evaluator: Optional[Evaluator] = None,
                   table: Optional[dict] = None) -> bool:
    """True when the expression yields at least two distinct programs as all
    its variables range together over the probe programs.  True proves
    non-constancy; False is only probe-relative."""
    ev = evaluator or Evaluator(table or {})
    memo_key = (ev._expr_key(expr), id(probe))
    hit = ev._probes.get(memo_key)
    if hit is not None:
        return hit[1]
    names = sorted(ev._free_vars(expr))
    result = False
    if names:
        seen = set()
        for prog in probe.programs:
            b = make_binding(prog)
            try:
                seen.add(ev.eval(expr, {n: b for n in names}, {}))
            except (FormEvalError, BudgetError):
                continue
            if len(seen) >= 2:
                result = True
                break
    ev._probes[memo_key] = (probe, result)
    return result


# ---------------------------------------------------------------------------
# Parsing `.lpf` files

_BUILTINS = {
    "facts": FactsOf,
    "proper": ProperOf,
    "rev": ReverseOf,
    "gnd": GroundOf,
    "body": BodyOf,
    "refresh": FreshenVars,
}

_LPF_TOKEN_RE = re.compile(
    r"""
      (?P<WS>\s+)
    | (?P<COMMENT>%[^\n]*)
    | (?P<ASSIGN>:=)
    | (?P<VAR>[A-Z_][A-Za-z0-9_]*)
    | (?P<IDENT>[a-z][A-Za-z0-9_]*)
    | (?P<INT>[0-9]+)
    | (?P<LBRACE>\{)
    | (?P<LPAREN>\()
    | (?P<RPAREN>\))
    | (?P<LBRACKET>\[)
    | (?P<RBRACKET>\])
    | (?P<BAR>\|)
    | (?P<CARET>\^)
    | (?P<SLASH>/)
    | (?P<COMMA>,)
    | (?P<SEMI>;)
    | (?P<EQUALS>=)
    | (?P<AT>@)
    | (?P<DOT>\.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lpf_tokenize(text: str, source: str) -> list:
    toks: list = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        if text[pos] == "{":
            end = text.find("}", pos + 1)
            if end < 0:
                raise ParseError("unterminated { program literal", source=source, line=line, col=col)
            raw = text[pos + 1 : end]
            toks.append(_Tok("BLOCK", raw, line, col))
            consumed = text[pos : end + 1]
            newlines = consumed.count("\n")
            if newlines:
                line += newlines
                col = len(consumed) - consumed.rfind("\n")
            else:
                col += len(consumed)
            pos = end + 1
            continue
        m = _LPF_TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", source=source, line=line, col=col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("WS", "COMMENT"):
            toks.append(_Tok(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    return toks


class _LpfParser:
    def __init__(self, tokens: list, source: str, table: dict):
        self.tokens = tokens
        self.source = source
        self.table = table
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        if tok is None:
            return ParseError(message + " (at end of input)", source=self.source, line=0, col=0)
        return ParseError(f"{message} (got {tok.text!r})", source=self.source, line=tok.line, col=tok.col)

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (text is None or tok.text == text)

    def take(self, kind: str, what: str) -> _Tok:
        if not self.at(kind):
            raise self.error(f"expected {what}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse_file(self) -> dict:
        while self.peek() is not None:
            self.form_def()
        return self.table

    def form_def(self):
        kw = self.take("IDENT", "'form'")
        if kw.text != "form":
            raise ParseError("expected 'form'", source=self.source, line=kw.line, col=kw.col)
        name = self.take("VAR", "a form name (capitalized)").text
        if name in self.table:
            raise ParseError(f"form {name} defined twice", source=self.source, line=kw.line, col=kw.col)
        self.take("LPAREN", "'('")
        params = [self.param()]
        while self.at("COMMA"):
            self.i += 1
            params.append(self.param())
        self.take("RPAREN", "')'")
        self.take("EQUALS", "'='")
        body = self.expr()
        self.take("SEMI", "';'")
        fv = free_vars(body)
        unknown = fv - {s.name for s in params}
        if unknown:
            raise ParseError(
                f"form {name} uses undeclared variables {', '.join(sorted(unknown))}",
                source=self.source, line=kw.line, col=kw.col,
            )
        self.table[name] = FormDef(name, tuple(params), body)

    def param(self) -> ParamSpec:
        name = self.take("VAR", "a parameter name").text
        pred = None
        tup: tuple = ()
        if self.at("LBRACKET"):
            self.i += 1
            pred = self.take("IDENT", "a predicate placeholder").text
            self.take("RBRACKET", "']'")
        if self.at("LPAREN"):
            self.i += 1
            names = [self.take("VAR", "a tuple placeholder").text]
            while self.at("COMMA"):
                self.i += 1
                names.append(self.take("VAR", "a tuple placeholder").text)
            self.take("RPAREN", "')'")
            tup = tuple(names)
        return ParamSpec(name, pred, tup)

    # -- expressions ----------------------------------------------------

    def expr(self):
        node = self.comp()
        while self.at("BAR"):
            self.i += 1
            node = UnionOf(node, self.comp())
        return node

    def comp(self):
        node = self.concat()
        while self.at("IDENT", "o"):
            self.i += 1
            node = ComposeOf(node, self.concat())
        return node

    def concat(self):
        node = self.postfix()
        while self.at("DOT"):
            self.i += 1
            node = ConcatOf(node, self.postfix())
        return node

    def postfix(self):
        node = self.primary()
        while True:
            if self.at("CARET"):
                self.i += 1
                n = int(self.take("INT", "a power").text)
                node = PowerOf(node, n)
            elif self.at("LBRACKET"):
                self.i += 1
                if self.at("IDENT"):
                    old = self.take("IDENT", "a predicate name").text
                    self.take("SLASH", "'/'")
                    new = self.take("IDENT", "a predicate name").text
                    node = RenamePred(node, old, new)
                else:
                    var = self.take("VAR", "a variable").text
                    self.take("ASSIGN", "':='")
                    term = self.term()
                    node = SubstIn(node, var, term)
                self.take("RBRACKET", "']'")
            else:
                return node

    def primary(self):
        tok = self.peek()
        if tok is None:
            raise self.error("expected a form expression")
        if tok.kind == "BLOCK":
            self.i += 1
            return Lit(parse_program(tok.text, source=f"{self.source}:{tok.line}"))
        if tok.kind == "AT":
            self.i += 1
            name = self.take("IDENT", "a program name").text
            return ProgramRef(name)
        if tok.kind == "LPAREN":
            self.i += 1
            node = self.expr()
            self.take("RPAREN", "')'")
            return node
        if tok.kind == "IDENT":
            self.i += 1
            ctor = _BUILTINS.get(tok.text)
            if ctor is None:
                raise ParseError(
                    f"unknown function {tok.text!r}", source=self.source, line=tok.line, col=tok.col
                )
            self.take("LPAREN", "'('")
            inner = self.expr()
            self.take("RPAREN", "')'")
            return ctor(inner)
        if tok.kind == "VAR":
            self.i += 1
            if self.at("LPAREN"):
                if tok.text not in self.table:
                    raise ParseError(
                        f"call of undefined form {tok.text}",
                        source=self.source, line=tok.line, col=tok.col,
                    )
                self.i += 1
                args = [self.take("VAR", "a parameter reference").text]
                while self.at("COMMA"):
                    self.i += 1
                    args.append(self.take("VAR", "a parameter reference").text)
                self.take("RPAREN", "')'")
                return FormCall(tok.text, tuple(args))
            if tok.text in self.table:
                raise ParseError(
                    f"form {tok.text} used without arguments",
                    source=self.source, line=tok.line, col=tok.col,
                )
            return VarRef(tok.text)
        raise self.error("expected a form expression")

    # -- terms inside [X := t] -------------------------------------------

    def term(self) -> Term:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a term")
        if tok.kind == "VAR":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "INT":
            self.i += 1
            return Compound(tok.text, ())
        if tok.kind == "IDENT":
            self.i += 1
            if self.at("LPAREN"):
                self.i += 1
                args = [self.term()]
                while self.at("COMMA"):
                    self.i += 1
                    args.append(self.term())
                self.take("RPAREN", "')'")
                return Compound(tok.text, tuple(args))
            return Compound(tok.text, ())
        if tok.kind == "LBRACKET":
            self.i += 1
            if self.at("RBRACKET"):
                self.i += 1
                return NIL
            items = [self.term()]
            while self.at("COMMA"):
                self.i += 1
                items.append(self.term())
            tail: Term = NIL
            if self.at("BAR"):
                self.i += 1
                tail = self.term()
            self.take("RBRACKET", "']'")
            out = tail
            for item in reversed(items):
                out = cons(item, out)
            return out
        raise self.error("expected a term")


def parse_forms(text: str, source: str = "<string>", table: Optional[dict] = None) -> dict:
    """Parse form definitions, appending to (and returning) the table.
    Forms may only call forms defined earlier."""
    return _LpfParser(_lpf_tokenize(text, source), source, dict(table) if table else {}).parse_file()


# ---------------------------------------------------------------------------
# Rendering forms back to text


def form_to_text(expr) -> str:
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, Lit):
        inner = " ".join(render_program(expr.program).splitlines())
        return "{" + inner + "}"
    if isinstance(expr, ProgramRef):
        return "@" + expr.name
    if isinstance(expr, UnionOf):
        return f"({form_to_text(expr.left)} | {form_to_text(expr.right)})"
    if isinstance(expr, ComposeOf):
        return f"({form_to_text(expr.left)} o {form_to_text(expr.right)})"
    if isinstance(expr, ConcatOf):
        return f"({form_to_text(expr.left)} . {form_to_text(expr.right)})"
    if isinstance(expr, PowerOf):
        return f"{form_to_text(expr.expr)}^{expr.n}"
    if isinstance(expr, FactsOf):
        return f"facts({form_to_text(expr.expr)})"
    if isinstance(expr, ProperOf):
        return f"proper({form_to_text(expr.expr)})"
    if isinstance(expr, ReverseOf):
        return f"rev({form_to_text(expr.expr)})"
    if isinstance(expr, BodyOf):
        return f"body({form_to_text(expr.expr)})"
    if isinstance(expr, GroundOf):
        return f"gnd({form_to_text(expr.expr)})"
    if isinstance(expr, FreshenVars):
        return f"refresh({form_to_text(expr.expr)})"
    if isinstance(expr, RenamePred):
        return f"{form_to_text(expr.expr)}[{expr.old}/{expr.new}]"
    if isinstance(expr, SubstIn):
        return f"{form_to_text(expr.expr)}[{expr.var} := {render_term(expr.term)}]"
    if isinstance(expr, FormCall):
        return f"{expr.name}({', '.join(expr.args)})"
    raise TypeError(f"not a form expression: {type(expr).__name__}")
