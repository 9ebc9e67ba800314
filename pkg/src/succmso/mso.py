"""MSO formulas: AST, concrete syntax, quantifier rank, brute-force evaluation.

Lowercase identifiers are point variables, uppercase identifiers are set
variables. Vertex sets are enumerated as bitmasks in increasing binary
order (bit i = vertex i).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, ScopeError, TooLargeForBruteForce
from .graph import Digraph

# -- AST -----------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Member:
    x: str
    xs: str


@dataclass(frozen=True)
class Not:
    sub: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Quant:
    """kind is 'ex' or 'all'; whether the variable ranges over sets is
    determined by its capitalization."""

    kind: str
    var: str
    sub: object


MsoFormula = object  # any of the node types above


def is_set_var(name: str) -> bool:
    return name[0].isupper()


# -- structural helpers --------------------------------------------------


def rank(formula) -> int:
    """Number of quantifiers (not alternations)."""
    if isinstance(formula, Quant):
        return 1 + rank(formula.sub)
    if isinstance(formula, Not):
        return rank(formula.sub)
    if isinstance(formula, (And, Or, Implies)):
        return rank(formula.left) + rank(formula.right)
    return 0


def free_vars(formula, bound=frozenset()):
    if isinstance(formula, Edge):
        return {formula.x, formula.y} - bound
    if isinstance(formula, Eq):
        return {formula.x, formula.y} - bound
    if isinstance(formula, Member):
        return {formula.x, formula.xs} - bound
    if isinstance(formula, Not):
        return free_vars(formula.sub, bound)
    if isinstance(formula, (And, Or, Implies)):
        return free_vars(formula.left, bound) | free_vars(formula.right, bound)
    if isinstance(formula, Quant):
        return free_vars(formula.sub, bound | {formula.var})
    raise TypeError(f"not an MSO formula node: {formula!r}")


def _has_set_quant(formula) -> bool:
    if isinstance(formula, Quant):
        return is_set_var(formula.var) or _has_set_quant(formula.sub)
    if isinstance(formula, Not):
        return _has_set_quant(formula.sub)
    if isinstance(formula, (And, Or, Implies)):
        return _has_set_quant(formula.left) or _has_set_quant(formula.right)
    return False


def _check_scopes(formula, bound):
    """Reject shadowing and ill-typed atoms."""
    if isinstance(formula, Quant):
        if formula.var in bound:
            raise ScopeError(f"variable {formula.var!r} is shadowed")
        _check_scopes(formula.sub, bound | {formula.var})
    elif isinstance(formula, Not):
        _check_scopes(formula.sub, bound)
    elif isinstance(formula, (And, Or, Implies)):
        _check_scopes(formula.left, bound)
        _check_scopes(formula.right, bound)
    elif isinstance(formula, (Edge, Eq)):
        for v in (formula.x, formula.y):
            if is_set_var(v):
                raise ScopeError(f"{v!r} is a set variable used as a point")
    elif isinstance(formula, Member):
        if is_set_var(formula.x) or not is_set_var(formula.xs):
            raise ScopeError("membership needs a point on the left, a set on the right")


# -- concrete syntax -----------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(->|[()=,.~&|]|[A-Za-z][a-z0-9]*)")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"cannot tokenize at position {pos}: {text[pos:pos + 10]!r}")
        tokens.append((m.group(1), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self):
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of formula")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, what):
        tok, pos = self.next()
        if tok != what:
            raise ParseError(f"expected {what!r} at position {pos}, got {tok!r}")
        return tok

    def ident(self):
        tok, pos = self.next()
        if not re.fullmatch(r"[A-Za-z][a-z0-9]*", tok) or tok in ("ex", "all", "in", "E"):
            raise ParseError(f"expected an identifier at position {pos}, got {tok!r}")
        return tok

    def formula(self):
        tok = self.peek()
        if tok == "~":
            self.next()
            return Not(self.formula())
        if tok in ("ex", "all"):
            self.next()
            var = self.ident()
            self.expect(".")
            return Quant(tok, var, self.formula())
        if tok == "E":
            self.next()
            self.expect("(")
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            return Edge(x, y)
        if tok == "(":
            self.next()
            left = self.formula()
            op, pos = self.next()
            right = self.formula()
            self.expect(")")
            if op == "&":
                return And(left, right)
            if op == "|":
                return Or(left, right)
            if op == "->":
                return Implies(left, right)
            raise ParseError(f"expected a connective at position {pos}, got {op!r}")
        # atom starting with a variable: v = v  or  v in V
        x = self.ident()
        op, pos = self.next()
        if op == "=":
            return Eq(x, self.ident())
        if op == "in":
            return Member(x, self.ident())
        raise ParseError(f"expected '=' or 'in' at position {pos}, got {op!r}")


def parse(text: str, allow_free=False):
    """Parse a formula; sentences only unless allow_free is set."""
    p = _Parser(text)
    formula = p.formula()
    if p.i != len(p.tokens):
        tok, pos = p.tokens[p.i]
        raise ParseError(f"trailing input at position {pos}: {tok!r}")
    _check_scopes(formula, frozenset())
    if not allow_free:
        free = free_vars(formula)
        if free:
            raise ScopeError(f"free variables in sentence: {sorted(free)}")
    return formula


def print_formula(formula) -> str:
    """Inverse of parse (round-trip stable)."""
    if isinstance(formula, Edge):
        return f"E({formula.x},{formula.y})"
    if isinstance(formula, Eq):
        return f"{formula.x}={formula.y}"
    if isinstance(formula, Member):
        return f"{formula.x} in {formula.xs}"
    if isinstance(formula, Not):
        return f"~{print_formula(formula.sub)}"
    if isinstance(formula, And):
        return f"({print_formula(formula.left)} & {print_formula(formula.right)})"
    if isinstance(formula, Or):
        return f"({print_formula(formula.left)} | {print_formula(formula.right)})"
    if isinstance(formula, Implies):
        return f"({print_formula(formula.left)} -> {print_formula(formula.right)})"
    if isinstance(formula, Quant):
        return f"{formula.kind} {formula.var}. {print_formula(formula.sub)}"
    raise TypeError(f"not an MSO formula node: {formula!r}")


# -- evaluation ----------------------------------------------------------


def _compile(formula, slots):
    """Compile to a closure fn(n, edges, env) for repeated evaluation.

    env holds vertex numbers for point variables and bitmasks for set
    variables, indexed by the slot table.
    """
    if isinstance(formula, Edge):
        i, j = slots[formula.x], slots[formula.y]
        return lambda n, E, env: (env[i], env[j]) in E
    if isinstance(formula, Eq):
        i, j = slots[formula.x], slots[formula.y]
        return lambda n, E, env: env[i] == env[j]
    if isinstance(formula, Member):
        i, j = slots[formula.x], slots[formula.xs]
        return lambda n, E, env: (env[j] >> env[i]) & 1 == 1
    if isinstance(formula, Not):
        sub = _compile(formula.sub, slots)
        return lambda n, E, env: not sub(n, E, env)
    if isinstance(formula, And):
        left, right = _compile(formula.left, slots), _compile(formula.right, slots)
        return lambda n, E, env: left(n, E, env) and right(n, E, env)
    if isinstance(formula, Or):
        left, right = _compile(formula.left, slots), _compile(formula.right, slots)
        return lambda n, E, env: left(n, E, env) or right(n, E, env)
    if isinstance(formula, Implies):
        left, right = _compile(formula.left, slots), _compile(formula.right, slots)
        return lambda n, E, env: (not left(n, E, env)) or right(n, E, env)
    if isinstance(formula, Quant):
        idx = slots[formula.var]
        sub = _compile(formula.sub, slots)
        over_sets = is_set_var(formula.var)
        exists = formula.kind == "ex"

        def fn(n, E, env):
            domain = range(1 << n) if over_sets else range(n)
            for value in domain:
                env[idx] = value
                if sub(n, E, env) == exists:
                    return exists
            return not exists

        return fn
    raise TypeError(f"not an MSO formula node: {formula!r}")


def _collect_vars(formula, out):
    if isinstance(formula, Quant):
        out.setdefault(formula.var, len(out))
        _collect_vars(formula.sub, out)
    elif isinstance(formula, Not):
        _collect_vars(formula.sub, out)
    elif isinstance(formula, (And, Or, Implies)):
        _collect_vars(formula.left, out)
        _collect_vars(formula.right, out)
    elif isinstance(formula, Edge) or isinstance(formula, Eq):
        out.setdefault(formula.x, len(out))
        out.setdefault(formula.y, len(out))
    elif isinstance(formula, Member):
        out.setdefault(formula.x, len(out))
        out.setdefault(formula.xs, len(out))


class CompiledFormula:
    """A formula compiled once, evaluable against many graphs."""

    def __init__(self, formula):
        _check_scopes(formula, frozenset())
        self.formula = formula
        self.slots = {}
        _collect_vars(formula, self.slots)
        self._fn = _compile(formula, self.slots)
        self._set_quant = _has_set_quant(formula)
        self.free = free_vars(formula)

    def eval(self, g: Digraph, valuation=None) -> bool:
        valuation = valuation or {}
        missing = self.free - set(valuation)
        if missing:
            raise ScopeError(f"unbound free variables: {sorted(missing)}")
        if self._set_quant and g.n > 24:
            raise TooLargeForBruteForce(
                f"{g.n} vertices with a set quantifier exceeds the guard (24)"
            )
        env = [0] * len(self.slots)
        for name, value in valuation.items():
            if name not in self.slots:
                continue
            if is_set_var(name):
                mask = 0
                for v in value:
                    if not 0 <= v < g.n:
                        raise ScopeError(f"valuation vertex {v} out of range")
                    mask |= 1 << v
                env[self.slots[name]] = mask
            else:
                if not 0 <= value < g.n:
                    raise ScopeError(f"valuation vertex {value} out of range")
                env[self.slots[name]] = value
        return bool(self._fn(g.n, g.edges, env))


def eval_formula(g: Digraph, formula, valuation=None) -> bool:
    """One-shot MSO satisfaction check; standard semantics."""
    return CompiledFormula(formula).eval(g, valuation)


def reach_macro(x: str, y: str, set_var: str = "R"):
    """The E*(x, y) macro: every set containing x and closed under E
    contains y. Leaves x and y free."""
    u, v = "u0", "v0"
    closed = Quant(
        "all", u, Quant("all", v, Implies(And(Member(u, set_var), Edge(u, v)), Member(v, set_var)))
    )
    return Quant("all", set_var, Implies(And(Member(x, set_var), closed), Member(y, set_var)))
