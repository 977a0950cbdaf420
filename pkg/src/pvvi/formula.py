"""First-order formulas describing solution sets, and their exports.

The solution sets handled by this package are definable by quantified
polynomial sign conditions.  This module builds those formulas as explicit
ASTs: the membership formula of the constraint set, the quantified
descriptions of the weak / Pareto / proper solution sets, and the graph of
the weight-to-solutions map.  The ASTs can be evaluated (quantifier-free
part), normalized to primitive relations, and exported for external
quantifier-elimination or SMT tools.

Within one built formula every atom shares a single joint variable tuple
(weight variables t1.., then x1.., then y1..), which keeps the text dialect
round-trippable from a single variable declaration.

Text dialect grammar (one formula per export, '#' lines are headers):

    form  := '⊤' | '⊥' | atom | '¬' form | quant | '(' form (op form)+ ')'
           | '(' op form ')'                  -- one-child conjunction et al.
    op    := '∧' | '∨'                        -- not mixed within one group
    quant := ('∀' | '∃') block '.' form
    block := NAME '(' var (',' var)* ')'
    atom  := '[' polynomial rel '0' ']'       -- rel ∈ <=, >=, =, <, >

Polynomials use the package's canonical polynomial syntax.  The `# vars:`
header lists the joint variable tuple used by every atom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .model import ConstraintSet, VopProblem, VviProblem, derive_vvi
from .poly import Polynomial, default_names, format_poly, parse_poly

RELATIONS = (">", ">=", "=", "<", "<=")


class UnboundVariableError(KeyError):
    """An atom referenced a variable absent from the assignment."""


@dataclass(frozen=True)
class VarBlock:
    """A named group of quantified variables, e.g. Y = (y1, y2)."""

    name: str
    variables: tuple[str, ...]


@dataclass(frozen=True)
class Atom:
    """Polynomial sign condition ``poly rel 0`` over named variables."""

    poly: Polynomial
    names: tuple[str, ...]
    relation: str

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.poly.nvars != len(self.names):
            raise ValueError("atom name tuple must match the polynomial arity")


@dataclass(frozen=True)
class And:
    children: tuple["FormulaAst", ...] = ()


@dataclass(frozen=True)
class Or:
    children: tuple["FormulaAst", ...] = ()


@dataclass(frozen=True)
class Not:
    child: "FormulaAst"


@dataclass(frozen=True)
class ForAll:
    block: VarBlock
    child: "FormulaAst"


@dataclass(frozen=True)
class Exists:
    block: VarBlock
    child: "FormulaAst"


FormulaAst = Union[Atom, And, Or, Not, ForAll, Exists]

TRUTH = And(())
FALSITY = Or(())


# -- generic walks ---------------------------------------------------------

def collect_atoms(ast: FormulaAst) -> list[Atom]:
    out: list[Atom] = []

    def walk(node):
        if isinstance(node, Atom):
            out.append(node)
        elif isinstance(node, (And, Or)):
            for c in node.children:
                walk(c)
        elif isinstance(node, Not):
            walk(node.child)
        elif isinstance(node, (ForAll, Exists)):
            walk(node.child)
        else:
            raise TypeError(f"not a formula node: {node!r}")

    walk(ast)
    return out


def strip_quantifiers(ast: FormulaAst) -> FormulaAst:
    """Drop every quantifier, keeping its body (the formula's matrix)."""
    if isinstance(ast, Atom):
        return ast
    if isinstance(ast, And):
        return And(tuple(strip_quantifiers(c) for c in ast.children))
    if isinstance(ast, Or):
        return Or(tuple(strip_quantifiers(c) for c in ast.children))
    if isinstance(ast, Not):
        return Not(strip_quantifiers(ast.child))
    return strip_quantifiers(ast.child)


def is_quantifier_free(ast: FormulaAst) -> bool:
    if isinstance(ast, Atom):
        return True
    if isinstance(ast, (And, Or)):
        return all(is_quantifier_free(c) for c in ast.children)
    if isinstance(ast, Not):
        return is_quantifier_free(ast.child)
    return False


def joint_names(ast: FormulaAst) -> tuple[str, ...]:
    """The shared variable tuple of the formula's atoms (empty if none)."""
    names: tuple[str, ...] | None = None
    for atom in collect_atoms(ast):
        if names is None:
            names = atom.names
        elif names != atom.names:
            raise ValueError("formula atoms use inconsistent variable tuples")
    return names or ()


def free_variables(ast: FormulaAst) -> tuple[str, ...]:
    """Variables appearing in atoms and not bound by any quantifier,
    in joint-tuple order."""
    bound: set[str] = set()
    free: set[str] = set()

    def walk(node, bound_now: frozenset[str]):
        if isinstance(node, Atom):
            for name, used in zip(node.names, _used_mask(node.poly)):
                if used and name not in bound_now:
                    free.add(name)
        elif isinstance(node, (And, Or)):
            for c in node.children:
                walk(c, bound_now)
        elif isinstance(node, Not):
            walk(node.child, bound_now)
        else:
            walk(node.child, bound_now | frozenset(node.block.variables))

    walk(ast, frozenset(bound))
    return tuple(n for n in joint_names(ast) if n in free)


def _used_mask(p: Polynomial) -> list[bool]:
    used = [False] * p.nvars
    for exps, _ in p.terms:
        for i, e in enumerate(exps):
            if e:
                used[i] = True
    return used


# -- evaluation ------------------------------------------------------------

_REL_TEST = {
    ">": lambda v: v > 0.0,
    ">=": lambda v: v >= 0.0,
    "=": lambda v: v == 0.0,
    "<": lambda v: v < 0.0,
    "<=": lambda v: v <= 0.0,
}


def eval_qf(ast: FormulaAst, assignment: Mapping[str, float]) -> bool:
    """Evaluate a quantifier-free formula with exact float comparisons.

    Callers wanting tolerances perturb the atoms instead; the semantics
    here stay exact.
    """
    if isinstance(ast, Atom):
        try:
            point = [assignment[name] for name in ast.names]
        except KeyError as exc:
            raise UnboundVariableError(exc.args[0]) from None
        return _REL_TEST[ast.relation](ast.poly.evaluate(point))
    if isinstance(ast, And):
        return all(eval_qf(c, assignment) for c in ast.children)
    if isinstance(ast, Or):
        return any(eval_qf(c, assignment) for c in ast.children)
    if isinstance(ast, Not):
        return not eval_qf(ast.child, assignment)
    raise ValueError("formula is not quantifier-free")


def normalize(ast: FormulaAst) -> FormulaAst:
    """Rewrite atoms to the primitive relations (>, =):
    p >= 0 becomes ¬(−p > 0), p <= 0 becomes ¬(p > 0), p < 0 becomes −p > 0.
    """
    if isinstance(ast, Atom):
        if ast.relation == ">=":
            return Not(Atom(-ast.poly, ast.names, ">"))
        if ast.relation == "<=":
            return Not(Atom(ast.poly, ast.names, ">"))
        if ast.relation == "<":
            return Atom(-ast.poly, ast.names, ">")
        return ast
    if isinstance(ast, And):
        return And(tuple(normalize(c) for c in ast.children))
    if isinstance(ast, Or):
        return Or(tuple(normalize(c) for c in ast.children))
    if isinstance(ast, Not):
        return Not(normalize(ast.child))
    if isinstance(ast, ForAll):
        return ForAll(ast.block, normalize(ast.child))
    return Exists(ast.block, normalize(ast.child))


# -- builders --------------------------------------------------------------

def _and(parts: Iterable[FormulaAst]) -> FormulaAst:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def _or(parts: Iterable[FormulaAst]) -> FormulaAst:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


def qf_of_K(K: ConstraintSet) -> FormulaAst:
    """Quantifier-free membership formula: all g_i <= 0 and h_j = 0.
    A single constraint collapses to its atom; no constraints give truth."""
    names = default_names(K.n, "x")
    parts: list[FormulaAst] = [Atom(g, names, "<=") for g in K.inequalities]
    parts += [Atom(h, names, "=") for h in K.equalities]
    if not parts:
        return TRUTH
    return _and(parts)


def _k_atoms(K: ConstraintSet, total: int, names: tuple[str, ...],
             offset: int) -> FormulaAst | None:
    """Membership formula embedded into a joint space at a variable offset;
    None when the set is the whole space."""
    mapping = [offset + i for i in range(K.n)]
    parts: list[FormulaAst] = [Atom(g.remap(total, mapping), names, "<=")
                               for g in K.inequalities]
    parts += [Atom(h.remap(total, mapping), names, "=") for h in K.equalities]
    if not parts:
        return None
    return _and(parts)


def _vi_products(problem: VviProblem, total: int,
                 x_off: int, y_off: int) -> list[Polynomial]:
    """The m polynomials <F_l(X), Y-X> in the joint space."""
    n = problem.n
    x_map = [x_off + k for k in range(n)]
    out = []
    for F in problem.operators:
        s = Polynomial.zero(total)
        for k in range(n):
            diff = (Polynomial.variable(total, y_off + k)
                    - Polynomial.variable(total, x_off + k))
            s = s + F[k].remap(total, x_map) * diff
        out.append(s)
    return out


def _guarded_matrix(qky: FormulaAst | None, qky_neg: FormulaAst | None,
                    condition: FormulaAst) -> FormulaAst:
    """(Q_K(Y) ∧ condition) ∨ ¬Q_K(Y); collapses to the condition when the
    feasible set is the whole space."""
    if qky is None:
        return condition
    return Or((And((qky, condition)), Not(qky_neg)))


def _joint_xy(n: int) -> tuple[int, tuple[str, ...]]:
    return 2 * n, default_names(n, "x") + default_names(n, "y")


def _outer(qkx: FormulaAst | None, quantified: FormulaAst) -> FormulaAst:
    return quantified if qkx is None else And((qkx, quantified))


def formula_weak(problem: VviProblem) -> FormulaAst:
    """X solves the inequality weakly: X feasible, and every feasible Y
    leaves some component product nonnegative."""
    n, K = problem.n, problem.constraints
    total, names = _joint_xy(n)
    qkx = _k_atoms(K, total, names, 0)
    qky = _k_atoms(K, total, names, n)
    qky_neg = _k_atoms(K, total, names, n)
    inner = _or(Atom(p, names, ">=")
                for p in _vi_products(problem, total, 0, n))
    matrix = _guarded_matrix(qky, qky_neg, inner)
    yblock = VarBlock("Y", default_names(n, "y"))
    return _outer(qkx, ForAll(yblock, matrix))


def formula_pareto(problem: VviProblem) -> FormulaAst:
    """As formula_weak but with the sharper disjunction A ∨ B: some product
    strictly positive, or all products zero.  The A ∨ B node is kept even
    when m = 1."""
    n, K = problem.n, problem.constraints
    total, names = _joint_xy(n)
    qkx = _k_atoms(K, total, names, 0)
    qky = _k_atoms(K, total, names, n)
    qky_neg = _k_atoms(K, total, names, n)
    products = _vi_products(problem, total, 0, n)
    a = _or(Atom(p, names, ">") for p in products)
    b = _and(Atom(p, names, "=") for p in products)
    matrix = _guarded_matrix(qky, qky_neg, Or((a, b)))
    yblock = VarBlock("Y", default_names(n, "y"))
    return _outer(qkx, ForAll(yblock, matrix))


def _combined_product(problem: VviProblem, total: int,
                      t_off: int, x_off: int, y_off: int,
                      names: tuple[str, ...]) -> Polynomial:
    """<sum_l t_l F_l(X), Y-X> in the joint (Θ, X, Y) space."""
    s = Polynomial.zero(total)
    for l, p in enumerate(_vi_products(problem, total, x_off, y_off)):
        s = s + Polynomial.variable(total, t_off + l) * p
    return s


def formula_proper(problem: VviProblem) -> FormulaAst:
    """X is a proper solution: some strictly interior weight makes the
    combined operator satisfy the inequality against every feasible Y.

    The existential weight block is scoped over the universal part, since
    the same weight must serve all Y.  For m = 1 the weight is identically
    one and is inlined.
    """
    n, m, K = problem.n, problem.m, problem.constraints
    if m == 1:
        total, names = _joint_xy(n)
        qkx = _k_atoms(K, total, names, 0)
        qky = _k_atoms(K, total, names, n)
        qky_neg = _k_atoms(K, total, names, n)
        atom = Atom(_vi_products(problem, total, 0, n)[0], names, ">=")
        matrix = _guarded_matrix(qky, qky_neg, atom)
        return _outer(qkx, ForAll(VarBlock("Y", default_names(n, "y")), matrix))
    total = m + 2 * n
    names = default_names(m, "t") + default_names(n, "x") + default_names(n, "y")
    qkx = _k_atoms(K, total, names, m)
    qky = _k_atoms(K, total, names, m + n)
    qky_neg = _k_atoms(K, total, names, m + n)
    interior = _and(
        [Atom(Polynomial.variable(total, l), names, ">") for l in range(m)]
        + [Atom(_simplex_sum(total, m), names, "=")])
    c_atom = Atom(_combined_product(problem, total, 0, m, m + n, names),
                  names, ">=")
    matrix = _guarded_matrix(qky, qky_neg, c_atom)
    inner = And((interior, ForAll(VarBlock("Y", default_names(n, "y")), matrix)))
    tblock = VarBlock("Theta", default_names(m, "t"))
    return _outer(qkx, Exists(tblock, inner))


def _simplex_sum(total: int, m: int) -> Polynomial:
    s = Polynomial.constant(total, -1.0)
    for l in range(m):
        s = s + Polynomial.variable(total, l)
    return s


def formula_graph(problem: VviProblem) -> FormulaAst:
    """Membership in the graph of the weight-to-solutions map: free
    variables (Θ, X), with Θ on the closed simplex."""
    n, m, K = problem.n, problem.m, problem.constraints
    total = m + 2 * n
    names = default_names(m, "t") + default_names(n, "x") + default_names(n, "y")
    qkx = _k_atoms(K, total, names, m)
    qky = _k_atoms(K, total, names, m + n)
    qky_neg = _k_atoms(K, total, names, m + n)
    simplex = _and(
        [Atom(Polynomial.variable(total, l), names, ">=") for l in range(m)]
        + [Atom(_simplex_sum(total, m), names, "=")])
    c_atom = Atom(_combined_product(problem, total, 0, m, m + n, names),
                  names, ">=")
    matrix = _guarded_matrix(qky, qky_neg, c_atom)
    quantified = ForAll(VarBlock("Y", default_names(n, "y")), matrix)
    if qkx is None:
        return And((simplex, quantified))
    return And((qkx, simplex, quantified))


def _objective_diffs(problem: VopProblem, total: int,
                     x_off: int, y_off: int) -> list[Polynomial]:
    x_map = [x_off + k for k in range(problem.n)]
    y_map = [y_off + k for k in range(problem.n)]
    return [f.remap(total, y_map) - f.remap(total, x_map)
            for f in problem.objectives]


def formula_vop_weak(problem: VopProblem) -> FormulaAst:
    """Weak Pareto membership for an optimization problem: every feasible Y
    fails to improve some objective, via atoms f_l(Y) - f_l(X) >= 0."""
    n, K = problem.n, problem.constraints
    total, names = _joint_xy(n)
    qkx = _k_atoms(K, total, names, 0)
    qky = _k_atoms(K, total, names, n)
    qky_neg = _k_atoms(K, total, names, n)
    inner = _or(Atom(p, names, ">=")
                for p in _objective_diffs(problem, total, 0, n))
    matrix = _guarded_matrix(qky, qky_neg, inner)
    return _outer(qkx, ForAll(VarBlock("Y", default_names(n, "y")), matrix))


def formula_vop_pareto(problem: VopProblem) -> FormulaAst:
    n, K = problem.n, problem.constraints
    total, names = _joint_xy(n)
    qkx = _k_atoms(K, total, names, 0)
    qky = _k_atoms(K, total, names, n)
    qky_neg = _k_atoms(K, total, names, n)
    diffs = _objective_diffs(problem, total, 0, n)
    a = _or(Atom(p, names, ">") for p in diffs)
    b = _and(Atom(p, names, "=") for p in diffs)
    matrix = _guarded_matrix(qky, qky_neg, Or((a, b)))
    return _outer(qkx, ForAll(VarBlock("Y", default_names(n, "y")), matrix))


FORMULA_TARGETS = ("weak", "pareto", "proper", "graph")


def build_formula(problem, target: str) -> FormulaAst:
    """Dispatch by problem kind and target name.  Optimization problems use
    their objective-difference forms for weak/pareto and the derived
    inequality problem for proper/graph."""
    if target not in FORMULA_TARGETS:
        raise ValueError(f"unknown target {target!r}, expected one of {FORMULA_TARGETS}")
    if isinstance(problem, VopProblem):
        if target == "weak":
            return formula_vop_weak(problem)
        if target == "pareto":
            return formula_vop_pareto(problem)
        problem = derive_vvi(problem)
    builders = {"weak": formula_weak, "pareto": formula_pareto,
                "proper": formula_proper, "graph": formula_graph}
    return builders[target](problem)


# -- text dialect ----------------------------------------------------------

def _has_scoped_exists(ast: FormulaAst) -> bool:
    if isinstance(ast, Exists):
        return not is_quantifier_free(ast.child) or _has_scoped_exists(ast.child)
    if isinstance(ast, (And, Or)):
        return any(_has_scoped_exists(c) for c in ast.children)
    if isinstance(ast, (Not, ForAll)):
        return _has_scoped_exists(ast.child)
    return False


_SCOPE_NOTE = ("the existential weight block is scoped over the universal "
               "part; the two bracketed conditions share its variables")


def _render_text(ast: FormulaAst, names: tuple[str, ...]) -> str:
    if isinstance(ast, Atom):
        return f"[{format_poly(ast.poly, names)} {ast.relation} 0]"
    if isinstance(ast, And):
        if not ast.children:
            return "⊤"
        parts = [_render_text(c, names) for c in ast.children]
        if len(parts) == 1:
            return f"(∧ {parts[0]})"
        return "(" + " ∧ ".join(parts) + ")"
    if isinstance(ast, Or):
        if not ast.children:
            return "⊥"
        parts = [_render_text(c, names) for c in ast.children]
        if len(parts) == 1:
            return f"(∨ {parts[0]})"
        return "(" + " ∨ ".join(parts) + ")"
    if isinstance(ast, Not):
        return "¬" + _render_text(ast.child, names)
    sym = "∀" if isinstance(ast, ForAll) else "∃"
    head = f"{sym} {ast.block.name}({', '.join(ast.block.variables)})"
    return f"{head}. {_render_text(ast.child, names)}"


def export_text(ast: FormulaAst) -> str:
    names = joint_names(ast)
    lines = [f"# vars: {', '.join(names)}"]
    if _has_scoped_exists(ast):
        lines.append(f"# note: {_SCOPE_NOTE}")
    lines.append(_render_text(ast, names))
    return "\n".join(lines) + "\n"


_TEXT_SYMBOLS = "⊤⊥¬∧∨∀∃().,"


def _tokenize_text(src: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "[":
            j = src.find("]", i)
            if j < 0:
                raise ValueError("unterminated atom bracket")
            tokens.append(("atom", src[i + 1:j]))
            i = j + 1
            continue
        if ch in _TEXT_SYMBOLS:
            tokens.append(("sym", ch))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j]))
            i = j
            continue
        raise ValueError(f"unexpected character {ch!r} in formula text")
    return tokens


_ATOM_RE = re.compile(r"^(.*?)(<=|>=|=|<|>)\s*0\s*$")


class _TextParser:
    def __init__(self, tokens: list[tuple[str, str]], names: tuple[str, ...]):
        self.tokens = tokens
        self.pos = 0
        self.names = names

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expect: str | None = None):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of formula text")
        if expect is not None and tok != ("sym", expect):
            raise ValueError(f"expected {expect!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self) -> FormulaAst:
        ast = self.form()
        if self.peek() is not None:
            raise ValueError(f"trailing tokens after formula: {self.peek()[1]!r}")
        return ast

    def form(self) -> FormulaAst:
        kind, value = self.take()
        if kind == "atom":
            match = _ATOM_RE.match(value.strip())
            if not match:
                raise ValueError(f"malformed atom {value!r}")
            poly = parse_poly(match.group(1), self.names)
            return Atom(poly, self.names, match.group(2))
        if (kind, value) == ("sym", "⊤"):
            return TRUTH
        if (kind, value) == ("sym", "⊥"):
            return FALSITY
        if (kind, value) == ("sym", "¬"):
            return Not(self.form())
        if kind == "sym" and value in "∀∃":
            block = self.block()
            self.take(".")
            child = self.form()
            return ForAll(block, child) if value == "∀" else Exists(block, child)
        if (kind, value) == ("sym", "("):
            nxt = self.peek()
            if nxt is not None and nxt[0] == "sym" and nxt[1] in "∧∨":
                self.take()
                child = self.form()
                self.take(")")
                return And((child,)) if nxt[1] == "∧" else Or((child,))
            parts = [self.form()]
            op = None
            while True:
                tok = self.take()
                if tok == ("sym", ")"):
                    break
                if tok[0] != "sym" or tok[1] not in "∧∨":
                    raise ValueError(f"expected a connective, got {tok[1]!r}")
                if op is None:
                    op = tok[1]
                elif op != tok[1]:
                    raise ValueError("mixed connectives need explicit parentheses")
                parts.append(self.form())
            if op is None:
                raise ValueError("parenthesized formula needs a connective")
            return And(tuple(parts)) if op == "∧" else Or(tuple(parts))
        raise ValueError(f"unexpected token {value!r}")

    def block(self) -> VarBlock:
        kind, name = self.take()
        if kind != "name":
            raise ValueError(f"expected a block name, got {name!r}")
        self.take("(")
        variables = []
        while True:
            k, v = self.take()
            if k != "name":
                raise ValueError(f"expected a variable name, got {v!r}")
            variables.append(v)
            tok = self.take()
            if tok == ("sym", ")"):
                break
            if tok != ("sym", ","):
                raise ValueError(f"expected ',' or ')', got {tok[1]!r}")
        return VarBlock(name, tuple(variables))


def parse_text(text: str) -> FormulaAst:
    """Inverse of export_text on its own output."""
    names: tuple[str, ...] = ()
    body_lines = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("# vars:"):
            listed = stripped[len("# vars:"):].strip()
            names = tuple(s.strip() for s in listed.split(",") if s.strip())
        elif stripped.startswith("#") or not stripped:
            continue
        else:
            body_lines.append(stripped)
    if not body_lines:
        raise ValueError("no formula line found")
    tokens = _tokenize_text(" ".join(body_lines))
    return _TextParser(tokens, names).parse()


# -- SMT-LIB dialect -------------------------------------------------------

def _smt_num(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        i = int(value)
        return str(i) if i >= 0 else f"(- {-i})"
    if value < 0:
        return f"(- {repr(-value)})"
    return repr(value)


def _smt_poly(p: Polynomial, names: tuple[str, ...]) -> str:
    if not p.terms:
        return "0"
    rendered = []
    for exps, c in p.terms:
        factors = []
        for i, e in enumerate(exps):
            factors.extend([names[i]] * e)
        if not factors:
            rendered.append(_smt_num(c))
        elif c == 1.0 and len(factors) == 1:
            rendered.append(factors[0])
        else:
            rendered.append("(* " + " ".join([_smt_num(c)] + factors) + ")")
    if len(rendered) == 1:
        return rendered[0]
    return "(+ " + " ".join(rendered) + ")"


_SMT_REL = {">": ">", ">=": ">=", "=": "=", "<": "<", "<=": "<="}


def _render_smt(ast: FormulaAst, names: tuple[str, ...]) -> str:
    if isinstance(ast, Atom):
        return f"({_SMT_REL[ast.relation]} {_smt_poly(ast.poly, names)} 0)"
    if isinstance(ast, And):
        if not ast.children:
            return "true"
        if len(ast.children) == 1:
            return _render_smt(ast.children[0], names)
        return "(and " + " ".join(_render_smt(c, names) for c in ast.children) + ")"
    if isinstance(ast, Or):
        if not ast.children:
            return "false"
        if len(ast.children) == 1:
            return _render_smt(ast.children[0], names)
        return "(or " + " ".join(_render_smt(c, names) for c in ast.children) + ")"
    if isinstance(ast, Not):
        return f"(not {_render_smt(ast.child, names)})"
    binder = "forall" if isinstance(ast, ForAll) else "exists"
    decls = " ".join(f"({v} Real)" for v in ast.block.variables)
    return f"({binder} ({decls}) {_render_smt(ast.child, names)})"


def export_smt(ast: FormulaAst, name: str = "phi") -> str:
    names = joint_names(ast)
    free = free_variables(ast)
    lines = ["; first-order solution-set formula (nonlinear real arithmetic)"]
    if _has_scoped_exists(ast):
        lines.append(f"; note: {_SCOPE_NOTE}")
    lines.append("(set-logic NRA)")
    for v in free:
        lines.append(f"(declare-const {v} Real)")
    lines.append(f"(define-fun {name} () Bool {_render_smt(ast, names)})")
    lines.append(f"(assert {name})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def export(ast: FormulaAst, dialect: str = "text", name: str = "phi") -> str:
    if dialect == "text":
        return export_text(ast)
    if dialect == "smt":
        return export_smt(ast, name=name)
    raise ValueError(f"unknown dialect {dialect!r}, expected 'text' or 'smt'")
