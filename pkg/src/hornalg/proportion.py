"""Analogical proportions between logic programs.

A proportion problem asks whether four programs stand in the relation
"P is to Q as R is to S", with P, Q drawn from a source domain and R, S
from a target domain.  A witness explains the relation by two program
forms F and G, applied to vectors of auxiliary programs, in one of three
line patterns:

    fgfg:  P = F(Pvec)   Q = G(Pvec)   R = F(Rvec)   S = G(Rvec)
    fggf:  P = F(Pvec)   Q = G(Pvec)   R = G(Rvec)   S = F(Rvec)
    ffgg:  P = F(Pvec)   Q = F(Rvec)   R = G(Pvec)   S = G(Rvec)

`check_proportion` verifies a witness item by item (fixed material inside
the forms must lie in both domains, the forms must not be constant, the
vectors must respect the domains, and the line identities must hold).
`derived_proportions` builds the three standard rearrangements of a
verified proportion together with witnesses for them.  `solve_proportion`
searches bounded form and vector spaces for all verified candidates S.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

from .errors import BudgetError, FormEvalError, ProportionError
from .forms import (
    DEFAULT_PROBE,
    Binding,
    BodyOf,
    ComposeOf,
    ConcatOf,
    Evaluator,
    FactsOf,
    FormCall,
    Lit,
    NonConstancyProbe,
    ProperOf,
    ReverseOf,
    UnionOf,
    VarRef,
    form_to_text,
    free_vars,
    is_nonconstant,
    literal_requirements,
    make_binding,
)
from .syntax import Program, Rule, Var, render_atom, render_program

# ---------------------------------------------------------------------------
# Domains


@dataclass(frozen=True, slots=True)
class DomainSig:
    """A domain of programs, named and delimited by the predicate and
    functor names its programs may use (names only; arities are free)."""

    name: str
    preds: frozenset
    functors: frozenset

    def __post_init__(self):
        object.__setattr__(self, "preds", frozenset(self.preds))
        object.__setattr__(self, "functors", frozenset(self.functors))

    def union(self, other: "DomainSig") -> "DomainSig":
        return DomainSig(
            f"{self.name}+{other.name}",
            self.preds | other.preds,
            self.functors | other.functors,
        )

    def intersection(self, other: "DomainSig") -> "DomainSig":
        return DomainSig(
            f"{self.name}^{other.name}",
            self.preds & other.preds,
            self.functors & other.functors,
        )


def in_domain(p: Program, sig: DomainSig) -> bool:
    return p.predicates() <= sig.preds and p.functors() <= sig.functors


def alien_symbols(p: Program, sig: DomainSig) -> list:
    """Symbol names used by `p` that `sig` does not allow."""
    return sorted(p.predicates() - sig.preds) + sorted(p.functors() - sig.functors)


# ---------------------------------------------------------------------------
# Problems and witnesses

_LINES = ("fgfg", "fggf", "ffgg")

# Each line maps to equations (program, form, vector): program = form(vector).
_LINE_EQUATIONS = {
    "fgfg": (("p", "f", "p"), ("q", "g", "p"), ("r", "f", "r"), ("s", "g", "r")),
    "fggf": (("p", "f", "p"), ("q", "g", "p"), ("r", "g", "r"), ("s", "f", "r")),
    "ffgg": (("p", "f", "p"), ("q", "f", "r"), ("r", "g", "p"), ("s", "g", "r")),
}


@dataclass(frozen=True, slots=True)
class ProportionProblem:
    """P : Q :: R : ?, with P, Q in the source domain and R in the target.
    `s` is the known fourth program when verifying, None when solving."""

    p: Program
    q: Program
    r: Program
    source: DomainSig
    target: DomainSig
    s: Optional[Program] = None

    def __post_init__(self):
        for label, prog, sig in (
            ("first", self.p, self.source),
            ("second", self.q, self.source),
            ("third", self.r, self.target),
        ):
            if not in_domain(prog, sig):
                bad = ", ".join(alien_symbols(prog, sig))
                raise ProportionError(
                    f"{label} program uses symbols outside domain {sig.name}: {bad}"
                )


def _var_names(arity: int) -> frozenset:
    return frozenset(f"X{i + 1}" for i in range(arity))


@dataclass(frozen=True, slots=True)
class ProportionWitness:
    """Two forms, two binding vectors, and the line pattern relating them.
    Form variables are positional: X1 ... Xn against the vectors."""

    f: object
    g: object
    pvec: tuple  # of Binding
    rvec: tuple  # of Binding
    line: str
    probe: NonConstancyProbe = DEFAULT_PROBE

    def __post_init__(self):
        object.__setattr__(self, "line", self.line.lower())
        if self.line not in _LINES:
            raise ProportionError(f"unknown line pattern {self.line!r}")
        if not self.pvec or len(self.pvec) != len(self.rvec):
            raise ProportionError(
                f"vector arity mismatch: {len(self.pvec)} source vs {len(self.rvec)} target"
            )
        allowed = _var_names(len(self.pvec))
        stray = (free_vars(self.f) | free_vars(self.g)) - allowed
        if stray:
            raise ProportionError(
                "witness forms mention variables beyond the vector arity: "
                + ", ".join(sorted(stray))
            )

    @property
    def arity(self) -> int:
        return len(self.pvec)


def make_witness(f, g, pvec, rvec, line: str,
                 probe: NonConstancyProbe = DEFAULT_PROBE) -> ProportionWitness:
    """Build a witness, wrapping raw programs in default bindings."""
    def coerce(vec):
        return tuple(b if isinstance(b, Binding) else make_binding(b) for b in vec)
    return ProportionWitness(f, g, coerce(pvec), coerce(rvec), line, probe)


def _vec_env(vec: tuple) -> dict:
    return {f"X{i + 1}": b for i, b in enumerate(vec)}


# ---------------------------------------------------------------------------
# Checking


@dataclass(frozen=True, slots=True)
class CheckItem:
    code: str
    ok: bool
    detail: str


@dataclass(frozen=True, slots=True)
class CheckReport:
    line: str
    items: tuple  # of CheckItem

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def format_lines(self) -> list:
        out = []
        for item in self.items:
            mark = "ok  " if item.ok else "FAIL"
            out.append(f"{mark} {item.code}: {item.detail}")
        out.append("verified" if self.ok else "not verified")
        return out


def _short(p: Program) -> str:
    text = " ".join(render_program(p).splitlines())
    return "{" + text + "}"


def check_proportion(problem: ProportionProblem, witness: ProportionWitness,
                     s: Optional[Program] = None, *, strict: bool = False,
                     evaluator: Optional[Evaluator] = None) -> CheckReport:
    """Verify a witness for P : Q :: R : S, item by item."""
    s_prog = s if s is not None else problem.s
    if s_prog is None:
        raise ProportionError("no candidate for the fourth program")
    ev = evaluator or Evaluator()
    source, target = problem.source, problem.target
    inter = source.intersection(target)
    items: list = []

    # Fixed material inside the forms must lie in both domains, otherwise it
    # smuggles symbols across that no program of one side may use.
    try:
        lits_f, preds_f, fun_f = literal_requirements(witness.f, ev.table, ev.programs)
        lits_g, preds_g, fun_g = literal_requirements(witness.g, ev.table, ev.programs)
    except FormEvalError as e:
        raise ProportionError(str(e)) from e
    offenders = []
    for lit in lits_f + lits_g:
        bad = alien_symbols(lit, inter)
        if bad:
            offenders.append(f"literal {_short(lit)} uses {', '.join(bad)}")
    for name in sorted((preds_f | preds_g) - inter.preds):
        offenders.append(f"rename target {name} is not shared")
    for name in sorted((fun_f | fun_g) - inter.functors):
        offenders.append(f"substituted functor {name} is not shared")
    items.append(CheckItem(
        "alien_literal",
        not offenders,
        "; ".join(offenders) if offenders else "all fixed material lies in both domains",
    ))

    for code, form in (("f_nonconstant", witness.f), ("g_nonconstant", witness.g)):
        ok = is_nonconstant(form, witness.probe, ev)
        items.append(CheckItem(
            code,
            ok,
            f"{form_to_text(form)} {'varies' if ok else 'is constant'} on the probe programs",
        ))

    def domain_item(code: str, vec: tuple, sig: DomainSig) -> CheckItem:
        bad = []
        for i, b in enumerate(vec):
            names = alien_symbols(b.program, sig)
            if names:
                bad.append(f"entry {i + 1} uses {', '.join(names)}")
        return CheckItem(
            code,
            not bad,
            "; ".join(bad) if bad else f"all entries lie in {sig.name}",
        )

    if witness.line == "ffgg":
        items.append(domain_item("pvec_in_domain", witness.pvec, inter))
        items.append(domain_item("rvec_in_domain", witness.rvec, inter))
        cross_bad = []
        for label, prog in (("P", problem.p), ("Q", problem.q),
                            ("R", problem.r), ("S", s_prog)):
            names = alien_symbols(prog, inter)
            if names:
                cross_bad.append(f"{label} uses {', '.join(names)}")
        items.append(CheckItem(
            "ffgg_intersection",
            not cross_bad,
            "; ".join(cross_bad) if cross_bad else
            f"all four programs lie in {inter.name}",
        ))
    else:
        items.append(domain_item("pvec_in_domain", witness.pvec, source))
        items.append(domain_item("rvec_in_domain", witness.rvec, target))

    s_bad = alien_symbols(s_prog, target)
    items.append(CheckItem(
        "s_in_target",
        not s_bad,
        f"S uses {', '.join(s_bad)}" if s_bad else f"S lies in {target.name}",
    ))

    progs = {"p": problem.p, "q": problem.q, "r": problem.r, "s": s_prog}
    envs = {"p": _vec_env(witness.pvec), "r": _vec_env(witness.rvec)}
    side = {"p": "source", "r": "target"}
    forms = {"f": witness.f, "g": witness.g}
    for prog_key, form_key, vec_key in _LINE_EQUATIONS[witness.line]:
        code = f"{prog_key}_identity"
        label = f"{form_key.upper()} on the {side[vec_key]} vector"
        try:
            got = ev.eval(forms[form_key], envs[vec_key], {})
        except (FormEvalError, BudgetError) as e:
            items.append(CheckItem(code, False, f"{label} failed to evaluate: {e}"))
            continue
        expected = progs[prog_key]
        equal = got.strict_equals(expected) if strict else got == expected
        items.append(CheckItem(
            code,
            equal,
            f"{label} yields {prog_key.upper()}" if equal else
            f"{label} differs from {prog_key.upper()}: got {_short(got)}",
        ))

    return CheckReport(witness.line, tuple(items))


# ---------------------------------------------------------------------------
# Derived rearrangements

_XVAR_RE = re.compile(r"^X([0-9]+)$")


def _shift_expr(expr, offset: int):
    """Rename every variable X{i} in a form expression to X{i+offset}."""
    def shift_name(name: str) -> str:
        m = _XVAR_RE.match(name)
        if m is None:
            raise ProportionError(f"cannot shift non-positional variable {name}")
        return f"X{int(m.group(1)) + offset}"

    if isinstance(expr, VarRef):
        return VarRef(shift_name(expr.name))
    if isinstance(expr, FormCall):
        return FormCall(expr.name, tuple(shift_name(a) for a in expr.args))
    if isinstance(expr, (UnionOf, ComposeOf, ConcatOf)):
        return type(expr)(_shift_expr(expr.left, offset), _shift_expr(expr.right, offset))
    if hasattr(expr, "expr"):
        fields = {
            name: getattr(expr, name)
            for name in expr.__dataclass_fields__
        }
        fields["expr"] = _shift_expr(expr.expr, offset)
        return type(expr)(**fields)
    return expr


def derived_proportions(problem: ProportionProblem, witness: ProportionWitness,
                        s: Optional[Program] = None) -> list:
    """The three standard rearrangements of a proportion, each as
    (name, problem, witness).  A witness that verifies the original
    verifies each derived one."""
    s_prog = s if s is not None else problem.s
    if s_prog is None:
        raise ProportionError("derived proportions need the fourth program")
    P, Q, R = problem.p, problem.q, problem.r
    S = s_prog
    f, g = witness.f, witness.g
    pv, rv = witness.pvec, witness.rvec
    line = witness.line
    src, tgt = problem.source, problem.target
    probe = witness.probe
    out = []

    # Q : P :: S : R
    if line == "fgfg":
        w1 = ProportionWitness(g, f, pv, rv, "fgfg", probe)
    elif line == "fggf":
        w1 = ProportionWitness(g, f, pv, rv, "fggf", probe)
    else:
        w1 = ProportionWitness(f, g, rv, pv, "ffgg", probe)
    out.append(("q:p::s:r", ProportionProblem(Q, P, S, src, tgt, R), w1))

    # R : S :: P : Q  (domains change sides)
    if line == "fgfg":
        w2 = ProportionWitness(f, g, rv, pv, "fgfg", probe)
    elif line == "fggf":
        w2 = ProportionWitness(g, f, rv, pv, "fggf", probe)
    else:
        w2 = ProportionWitness(g, f, pv, rv, "ffgg", probe)
    out.append(("r:s::p:q", ProportionProblem(R, S, P, tgt, src, Q), w2))

    # P : R :: Q : S  (both sides range over the united domain)
    u = src.union(tgt)
    if line == "fgfg":
        w3 = ProportionWitness(f, g, pv, rv, "ffgg", probe)
    elif line == "ffgg":
        w3 = ProportionWitness(f, g, pv, rv, "fgfg", probe)
    else:
        n = witness.arity
        w3 = ProportionWitness(f, _shift_expr(g, n), pv + rv, rv + pv, "fggf", probe)
    out.append(("p:r::q:s", ProportionProblem(P, R, Q, u, u, S), w3))

    return out


# ---------------------------------------------------------------------------
# Solving

_UNARY_OPS = (FactsOf, ProperOf, ReverseOf, BodyOf)
_BINARY_OPS = (UnionOf, ComposeOf, ConcatOf)


@dataclass(frozen=True, slots=True)
class SolveBudget:
    """Bounds for the proportion solver's search space."""

    max_form_depth: int = 2
    max_vector_rules: int = 2
    max_forms: int = 20000
    max_solutions: int = 64
    witnesses_per_s: int = 4
    lines: tuple = _LINES


@dataclass(frozen=True, slots=True)
class ProportionSolution:
    s: Program
    witness: ProportionWitness


def form_pool(problem: ProportionProblem, budget: SolveBudget) -> list:
    """Candidate forms over one variable X1: atoms of the problem that both
    domains allow (as single-fact literals), closed under the unary
    operations and — with a primary left operand — the binary ones, up to
    the depth budget."""
    inter = problem.source.intersection(problem.target)
    atoms = {}
    for prog in (problem.p, problem.q, problem.r):
        for a in prog.all_atoms():
            lit = Program([Rule(a)])
            if in_domain(lit, inter):
                atoms.setdefault(render_atom(a), Lit(lit))
    primaries: list = [VarRef("X1")] + [atoms[k] for k in sorted(atoms)]
    levels = [primaries]
    for depth in range(1, budget.max_form_depth + 1):
        level: list = []
        for op in _UNARY_OPS:
            level.extend(op(e) for e in levels[depth - 1])
        for op in _BINARY_OPS:
            if depth == 1:
                level.extend(op(l, r) for l in primaries for r in primaries)
            else:
                level.extend(op(l, r) for l in primaries for r in levels[depth - 1])
        levels.append(level)
    pool: list = []
    for level in levels:
        for e in level:
            if len(pool) >= budget.max_forms:
                return pool
            pool.append(e)
    return pool


def vector_pool(rules: tuple, budget: SolveBudget) -> list:
    """Programs formed from subsets of the given rules, smallest first."""
    out: list = []
    seen = set()
    for size in range(0, min(budget.max_vector_rules, len(rules)) + 1):
        for combo in combinations(rules, size):
            prog = Program(combo)
            if prog not in seen:
                seen.add(prog)
                out.append(prog)
    return out


def solve_proportion(problem: ProportionProblem, budget: Optional[SolveBudget] = None,
                     evaluator: Optional[Evaluator] = None) -> list:
    """All verified candidates for the fourth program within the budget,
    with witnesses.  Per (line, F, G) only vector pairs not pointwise
    enlargeable to another verified pair are kept; results are in a
    canonical order and capped at `budget.max_solutions`."""
    budget = budget or SolveBudget()
    ev = evaluator or Evaluator()
    forms = form_pool(problem, budget)
    source_rules = (problem.p | problem.q).rules
    target_rules = problem.r.rules
    svecs = vector_pool(source_rules, budget)
    tvecs = vector_pool(target_rules, budget)

    value_maps: dict = {}

    def value_map(prog: Program):
        cached = value_maps.get(prog)
        if cached is not None:
            return cached
        env = {"X1": make_binding(prog)}
        by_value: dict = {}
        values: dict = {}
        for fm in forms:
            try:
                v = ev.eval(fm, env, {})
            except (FormEvalError, BudgetError):
                continue
            values[fm] = v
            by_value.setdefault(v, []).append(fm)
        value_maps[prog] = (values, by_value)
        return values, by_value

    P, Q, R = problem.p, problem.q, problem.r
    candidates: list = []
    for line in budget.lines:
        for sv in svecs:
            sval, sby = value_map(sv)
            for tv in tvecs:
                tval, tby = value_map(tv)
                if line == "fgfg":
                    fs = [fm for fm in sby.get(P, ()) if tval.get(fm) == R]
                    gs = sby.get(Q, ())
                    for fm in fs:
                        for gm in gs:
                            s_out = tval.get(gm)
                            if s_out is not None:
                                candidates.append((line, fm, gm, sv, tv, s_out))
                elif line == "fggf":
                    fs = sby.get(P, ())
                    gs = [gm for gm in sby.get(Q, ()) if tval.get(gm) == R]
                    for fm in fs:
                        s_out = tval.get(fm)
                        if s_out is None:
                            continue
                        for gm in gs:
                            candidates.append((line, fm, gm, sv, tv, s_out))
                else:  # ffgg
                    fs = [fm for fm in sby.get(P, ()) if tval.get(fm) == Q]
                    gs = sby.get(R, ())
                    for fm in fs:
                        for gm in gs:
                            s_out = tval.get(gm)
                            if s_out is not None:
                                candidates.append((line, fm, gm, sv, tv, s_out))

    verified: list = []
    seen = set()
    for line, fm, gm, sv, tv, s_out in candidates:
        key = (line, fm, gm, sv, tv)
        if key in seen:
            continue
        seen.add(key)
        witness = ProportionWitness(fm, gm, (make_binding(sv),), (make_binding(tv),), line)
        report = check_proportion(problem, witness, s=s_out, evaluator=ev)
        if report.ok:
            verified.append(ProportionSolution(s_out, witness))

    groups: dict = {}
    for sol in verified:
        w = sol.witness
        groups.setdefault((w.line, w.f, w.g), []).append(sol)
    kept: list = []
    for group in groups.values():
        for sol in group:
            sv, tv = sol.witness.pvec[0].program, sol.witness.rvec[0].program
            dominated = False
            for other in group:
                osv = other.witness.pvec[0].program
                otv = other.witness.rvec[0].program
                if (osv, otv) != (sv, tv) and osv.issubset(sv) and otv.issubset(tv):
                    dominated = True
                    break
            if not dominated:
                kept.append(sol)

    def witness_key(sol: ProportionSolution):
        w = sol.witness
        f_text, g_text = form_to_text(w.f), form_to_text(w.g)
        return (
            len(f_text) + len(g_text),
            w.line,
            f_text,
            g_text,
            render_program(w.pvec[0].program),
            render_program(w.rvec[0].program),
        )

    # Group by the fourth program so one heavily-witnessed candidate cannot
    # crowd every other candidate out of the solution cap; within a group,
    # prefer syntactically small witnesses.
    by_s: dict = {}
    for sol in kept:
        by_s.setdefault(render_program(sol.s), []).append(sol)
    out: list = []
    for s_text in sorted(by_s):
        group = sorted(by_s[s_text], key=witness_key)
        out.extend(group[: budget.witnesses_per_s])
    return out[: budget.max_solutions]


# ---------------------------------------------------------------------------
# Problem files

_BINDING_RE = re.compile(
    r"^\s*(?P<path>[^\[\()]+?)\s*(?:\[(?P<bracket>[^\]]*)\])?\s*(?:\((?P<tuple>[^\)]*)\))?\s*$"
)


def parse_binding_spec(text: str, load: Callable[[str], Program]) -> Binding:
    """Parse `path`, `path[mainpred]`, `path[old/new]`, optionally followed
    by a call-site variable tuple `(V1,...,Vk)`."""
    m = _BINDING_RE.match(text)
    if m is None or not m.group("path"):
        raise ProportionError(f"cannot parse binding spec {text!r}")
    program = load(m.group("path").strip())
    main_pred = None
    bracket = m.group("bracket")
    if bracket is not None:
        bracket = bracket.strip()
        if "/" in bracket:
            old, new = (part.strip() for part in bracket.split("/", 1))
            program = program.rename_predicate(old, new)
        elif bracket:
            main_pred = bracket
    var_tuple: tuple = ()
    tup = m.group("tuple")
    if tup is not None:
        names = [part.strip() for part in tup.split(",") if part.strip()]
        for name in names:
            if not re.fullmatch(r"[A-Z_][A-Za-z0-9_]*", name):
                raise ProportionError(f"binding tuple entry {name!r} is not a variable")
        var_tuple = tuple(Var(name) for name in names)
    return make_binding(program, main_pred, var_tuple, source=text.strip())


@dataclass(slots=True)
class ProblemSpec:
    problem: ProportionProblem
    witness: Optional[ProportionWitness]
    table: dict


def parse_proportion_file(text: str, load_program: Callable[[str], Program],
                          load_forms: Callable[[str], dict],
                          source: str = "<string>") -> ProblemSpec:
    """Parse a proportion problem file.

    Line-based keys: `p:`, `q:`, `r:`, `s:` name program files (binding-spec
    syntax; `s: ?` leaves the fourth program unknown); `source-name`,
    `source-preds`, `source-functors` and the `target-*` triple give the
    domains; optional `forms:` names form files, and `line:`, `form-f:`,
    `form-g:` with repeated `pvec:`/`rvec:` entries give a witness.
    """
    single: dict = {}
    multi: dict = {"pvec": [], "rvec": [], "forms": []}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ProportionError(f"{source}:{lineno}: expected `key: value`")
        key, value = (part.strip() for part in line.split(":", 1))
        key = key.lower()
        if key in multi:
            if key == "forms":
                multi[key].extend(value.split())
            else:
                multi[key].append(value)
        elif key in single:
            raise ProportionError(f"{source}:{lineno}: duplicate key {key}")
        else:
            single[key] = value

    for required in ("p", "q", "r"):
        if required not in single:
            raise ProportionError(f"{source}: missing key {required}")

    def domain(which: str) -> DomainSig:
        name = single.get(f"{which}-name", which.upper()[0])
        preds = frozenset(single.get(f"{which}-preds", "").split())
        functors = frozenset(single.get(f"{which}-functors", "").split())
        return DomainSig(name, preds, functors)

    p = parse_binding_spec(single["p"], load_program).program
    q = parse_binding_spec(single["q"], load_program).program
    r = parse_binding_spec(single["r"], load_program).program
    s = None
    if single.get("s", "?").strip() != "?":
        s = parse_binding_spec(single["s"], load_program).program
    problem = ProportionProblem(p, q, r, domain("source"), domain("target"), s)

    table: dict = {}
    for path in multi["forms"]:
        table.update(load_forms(path))

    witness = None
    if "line" in single or "form-f" in single or "form-g" in single:
        for required in ("line", "form-f", "form-g"):
            if required not in single:
                raise ProportionError(f"{source}: witness needs key {required}")
        pvec = tuple(parse_binding_spec(spec, load_program) for spec in multi["pvec"])
        rvec = tuple(parse_binding_spec(spec, load_program) for spec in multi["rvec"])

        def resolve(name: str):
            fd = table.get(name)
            if fd is None:
                raise ProportionError(f"{source}: unknown form {name}")
            if len(fd.params) > len(pvec):
                raise ProportionError(
                    f"{source}: form {name} needs {len(fd.params)} arguments, "
                    f"vectors have {len(pvec)}"
                )
            return FormCall(name, tuple(f"X{i + 1}" for i in range(len(fd.params))))

        witness = ProportionWitness(
            resolve(single["form-f"]),
            resolve(single["form-g"]),
            pvec,
            rvec,
            single["line"],
        )

    return ProblemSpec(problem, witness, table)
