"""Presburger formulas: AST, parser, normalization and compilation to systems.

Concrete syntax::

    vars x y. exists t. x = 2*t + 1 /\\ (y >= 3 \\/ !(y = 0))
    vars x. x = 1 mod 2

Connectives ``/\\``, ``\\/``, ``!`` (also ``∧ ∨ ¬``), comparisons
``<= >= = < > !=`` (also ``≤ ≥ ≠``), constants ``true``/``false``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from seplab.diophantine import EqSystem


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + msg)


class FragmentError(ValueError):
    """Formula outside the existential / quantifier-free fragment."""


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Term:
    """sum(coeffs[v] * v) + const, stored as a sorted tuple of (var, coeff)."""

    coeffs: tuple = ()
    const: int = 0

    @staticmethod
    def of(coeffs: Mapping[str, int], const: int = 0) -> "Term":
        return Term(tuple(sorted((v, c) for v, c in coeffs.items() if c)), const)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __add__(self, other: "Term") -> "Term":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return Term.of(d, self.const + other.const)

    def __neg__(self) -> "Term":
        return Term(tuple((v, -c) for v, c in self.coeffs), -self.const)

    def __sub__(self, other: "Term") -> "Term":
        return self + (-other)

    def shift(self, k: int) -> "Term":
        return Term(self.coeffs, self.const + k)

    def vars(self) -> set:
        return {v for v, _ in self.coeffs}

    def rename(self, mapping: Mapping[str, str]) -> "Term":
        return Term.of({mapping.get(v, v): c for v, c in self.coeffs}, self.const)

    def value(self, env: Mapping[str, int]) -> int:
        return sum(c * env[v] for v, c in self.coeffs) + self.const

    def __str__(self) -> str:
        parts = []
        for v, c in self.coeffs:
            if c == 1:
                parts.append(f"+ {v}")
            elif c == -1:
                parts.append(f"- {v}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{v}")
        if self.const or not parts:
            parts.append(f"{'+' if self.const >= 0 else '-'} {abs(self.const)}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ---------------------------------------------------------------- nodes


@dataclass(frozen=True)
class Ge:
    """term >= 0"""
    term: Term


@dataclass(frozen=True)
class Eq:
    """term = 0"""
    term: Term


@dataclass(frozen=True)
class Mod:
    """term = residue (mod modulus), residue in [0, modulus)."""
    term: Term
    residue: int
    modulus: int


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: object


ATOMS = (Ge, Eq, Mod)
TRUE, FALSE = Const(True), Const(False)


@dataclass(frozen=True)
class Formula:
    """A formula body with its ordered free-variable header."""

    free: tuple
    body: object

    def __str__(self) -> str:
        return f"vars {' '.join(self.free)}. {node_str(self.body)}"


def node_str(node) -> str:
    if isinstance(node, Ge):
        return f"{node.term} >= 0"
    if isinstance(node, Eq):
        return f"{node.term} = 0"
    if isinstance(node, Mod):
        return f"{node.term} = {node.residue} mod {node.modulus}"
    if isinstance(node, Const):
        return "true" if node.value else "false"
    if isinstance(node, And):
        return "(" + " /\\ ".join(node_str(a) for a in node.args) + ")" if node.args else "true"
    if isinstance(node, Or):
        return "(" + " \\/ ".join(node_str(a) for a in node.args) + ")" if node.args else "false"
    if isinstance(node, Not):
        return f"!({node_str(node.arg)})"
    if isinstance(node, Exists):
        return f"(exists {' '.join(node.vars)}. {node_str(node.body)})"
    raise TypeError(f"not a formula node: {node!r}")


def make_mod(term: Term, residue: int, modulus: int):
    if modulus == 0:
        raise ValueError("zero modulus")
    modulus = abs(modulus)
    return Mod(term, residue % modulus, modulus)


# ---------------------------------------------------------------- parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>/\\|\\/|<=|>=|!=|[()<>=!.+\-*∧∨¬≤≥≠∃])
    """,
    re.VERBOSE,
)
_ALIASES = {"∧": "/\\", "∨": "\\/", "¬": "!", "≤": "<=", "≥": ">=", "≠": "!=", "∃": "exists"}
_KEYWORDS = {"vars", "exists", "mod", "true", "false"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "op":
                s = _ALIASES.get(s, s)
                if s == "exists":
                    kind = "kw"
            elif kind == "ident" and s in _KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        for i, ch in enumerate(s if kind != "ws" else m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, off: int = 0) -> _Tok:
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text or t.kind == "eof":
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.next()

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "eof":
            self.i += 1
            return True
        return False

    def idents(self) -> list:
        names = []
        while self.peek().kind == "ident":
            names.append(self.next())
        return names

    # file := "vars" ident* "." formula
    def file(self) -> Formula:
        self.expect("vars")
        names = self.idents()
        free = []
        for t in names:
            if t.text in free:
                self.error(f"variable {t.text!r} declared twice", t)
            free.append(t.text)
        self.expect(".")
        body = self.formula(set(free))
        if self.peek().kind != "eof":
            self.error(f"unexpected {self.peek().text!r}")
        return Formula(tuple(free), body)

    def formula(self, scope: set):
        if self.peek().text == "exists" and self.peek().kind == "kw":
            self.next()
            names = self.idents()
            if not names:
                self.error("exists needs at least one variable")
            bound = []
            for t in names:
                if t.text in scope or t.text in bound:
                    self.error(f"variable {t.text!r} is already bound", t)
                bound.append(t.text)
            self.expect(".")
            body = self.formula(scope | set(bound))
            return Exists(tuple(bound), body)
        return self.disj(scope)

    def disj(self, scope: set):
        args = [self.conj(scope)]
        while self.accept("\\/"):
            args.append(self.conj(scope))
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj(self, scope: set):
        args = [self.unit(scope)]
        while self.accept("/\\"):
            args.append(self.unit(scope))
        return args[0] if len(args) == 1 else And(tuple(args))

    def unit(self, scope: set):
        t = self.peek()
        if t.text == "(":
            self.next()
            f = self.formula(scope)
            self.expect(")")
            return f
        if t.text == "!":
            self.next()
            return Not(self.unit(scope))
        if t.kind == "kw" and t.text in ("true", "false"):
            self.next()
            return Const(t.text == "true")
        if t.kind == "kw" and t.text == "exists":
            return self.formula(scope)
        return self.atom(scope)

    def atom(self, scope: set):
        lhs = self.term(scope)
        op = self.peek()
        if op.text not in ("<=", ">=", "=", "<", ">", "!="):
            self.error(f"expected comparison, found {op.text or 'end of input'!r}")
        self.next()
        rhs = self.term(scope)
        if op.text == "=" and self.peek().text == "mod":
            self.next()
            mtok = self.peek()
            if mtok.kind != "num":
                self.error("expected modulus")
            self.next()
            if rhs.coeffs:
                self.error("residue of a mod atom must be a constant", op)
            if int(mtok.text) == 0:
                self.error("zero modulus", mtok)
            return make_mod(lhs, rhs.const, int(mtok.text))
        diff = lhs - rhs
        if op.text == ">=":
            return Ge(diff)
        if op.text == "<=":
            return Ge(-diff)
        if op.text == ">":
            return Ge(diff.shift(-1))
        if op.text == "<":
            return Ge((-diff).shift(-1))
        if op.text == "=":
            return Eq(diff)
        return Or((Ge(diff.shift(-1)), Ge((-diff).shift(-1))))

    def term(self, scope: set) -> Term:
        coeffs: dict = {}
        const = 0
        sign = 1
        first = True
        while True:
            if self.accept("-"):
                sign = -sign
                continue
            if self.accept("+"):
                continue
            t = self.peek()
            if t.kind == "num":
                self.next()
                k = int(t.text)
                if self.accept("*"):
                    v = self.var(scope)
                    coeffs[v] = coeffs.get(v, 0) + sign * k
                elif self.peek().kind == "ident":
                    v = self.var(scope)
                    coeffs[v] = coeffs.get(v, 0) + sign * k
                else:
                    const += sign * k
            elif t.kind == "ident":
                v = self.var(scope)
                k = 1
                if self.accept("*"):
                    nt = self.peek()
                    if nt.kind != "num":
                        self.error("expected number after '*'")
                    self.next()
                    k = int(nt.text)
                coeffs[v] = coeffs.get(v, 0) + sign * k
            else:
                if first:
                    self.error(f"expected term, found {t.text or 'end of input'!r}")
                self.error(f"expected summand after sign, found {t.text or 'end of input'!r}")
            first = False
            sign = 1
            if self.peek().text in ("+", "-"):
                if self.peek().text == "-":
                    sign = -1
                self.next()
                continue
            return Term.of(coeffs, const)

    def var(self, scope: set) -> str:
        t = self.next()
        if t.text not in scope:
            raise ParseError(f"unbound variable {t.text!r}", t.line, t.col)
        return t.text


def parse(text: str) -> Formula:
    return _Parser(text).file()


# ---------------------------------------------------------------- semantics


def holds(node, env: Mapping[str, int]) -> bool:
    """Evaluate a quantifier-free node at a variable assignment."""
    if isinstance(node, Formula):
        return holds(node.body, env)
    if isinstance(node, Ge):
        return node.term.value(env) >= 0
    if isinstance(node, Eq):
        return node.term.value(env) == 0
    if isinstance(node, Mod):
        return (node.term.value(env) - node.residue) % node.modulus == 0
    if isinstance(node, Const):
        return node.value
    if isinstance(node, And):
        return all(holds(a, env) for a in node.args)
    if isinstance(node, Or):
        return any(holds(a, env) for a in node.args)
    if isinstance(node, Not):
        return not holds(node.arg, env)
    if isinstance(node, Exists):
        raise FragmentError("cannot evaluate a quantified formula pointwise")
    raise TypeError(f"not a formula node: {node!r}")


def holds_at(f: Formula, point: Sequence[int]) -> bool:
    return holds(f.body, dict(zip(f.free, point)))


def is_quantifier_free(node) -> bool:
    if isinstance(node, Formula):
        return is_quantifier_free(node.body)
    if isinstance(node, Exists):
        return False
    if isinstance(node, (And, Or)):
        return all(is_quantifier_free(a) for a in node.args)
    if isinstance(node, Not):
        return is_quantifier_free(node.arg)
    return True


# ---------------------------------------------------------------- normalization


class _Fresh:
    def __init__(self, taken: set):
        self.taken = set(taken)
        self.n = 0

    def __call__(self, hint: str) -> str:
        while True:
            self.n += 1
            name = f"_{hint}{self.n}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _all_vars(node, acc: set) -> set:
    if isinstance(node, ATOMS):
        acc |= node.term.vars()
    elif isinstance(node, (And, Or)):
        for a in node.args:
            _all_vars(a, acc)
    elif isinstance(node, Not):
        _all_vars(node.arg, acc)
    elif isinstance(node, Exists):
        acc |= set(node.vars)
        _all_vars(node.body, acc)
    return acc


def _mk_and(args: list):
    flat = []
    for a in args:
        if a == FALSE:
            return FALSE
        if a == TRUE:
            continue
        flat.extend(a.args if isinstance(a, And) else (a,))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def _mk_or(args: list):
    flat = []
    for a in args:
        if a == TRUE:
            return TRUE
        if a == FALSE:
            continue
        flat.extend(a.args if isinstance(a, Or) else (a,))
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def _ge(term: Term):
    if not term.coeffs:
        return TRUE if term.const >= 0 else FALSE
    return Ge(term)


def _min_value(term: Term) -> Optional[int]:
    """Lower bound of the term over naturals, None when unbounded below."""
    if any(c < 0 for _, c in term.coeffs):
        return None
    return term.const


def _mod_positive(term: Term, residue: int, modulus: int, fresh: _Fresh, bound: list):
    if modulus == 1:
        return TRUE
    y = fresh("m")
    bound.append(y)
    ty = Term.of({y: modulus})
    base = term.shift(-residue)
    parts = [_eq_split(base - ty)]
    low = _min_value(base)
    if low is None or low <= -modulus:
        parts.append(_eq_split(base + ty))
    return _mk_or(parts)


def _eq_split(term: Term):
    return _mk_and([_ge(term), _ge(-term)])


def _nnf(node, positive: bool, fresh: _Fresh, bound: list, renaming: dict):
    if isinstance(node, Ge):
        t = node.term.rename(renaming)
        return _ge(t) if positive else _ge((-t).shift(-1))
    if isinstance(node, Eq):
        t = node.term.rename(renaming)
        if positive:
            return _eq_split(t)
        return _mk_or([_ge(t.shift(-1)), _ge((-t).shift(-1))])
    if isinstance(node, Mod):
        t = node.term.rename(renaming)
        if positive:
            return _mod_positive(t, node.residue, node.modulus, fresh, bound)
        others = [r for r in range(node.modulus) if r != node.residue]
        return _mk_or([_mod_positive(t, r, node.modulus, fresh, bound) for r in others])
    if isinstance(node, Const):
        return Const(node.value == positive)
    if isinstance(node, Not):
        return _nnf(node.arg, not positive, fresh, bound, renaming)
    if isinstance(node, (And, Or)):
        parts = [_nnf(a, positive, fresh, bound, renaming) for a in node.args]
        conj = isinstance(node, And) == positive
        return _mk_and(parts) if conj else _mk_or(parts)
    if isinstance(node, Exists):
        if not positive:
            raise FragmentError("negated existential quantifier (universal) is not supported")
        inner = dict(renaming)
        for v in node.vars:
            nv = fresh(v.lstrip("_") or "v")
            inner[v] = nv
            bound.append(nv)
        return _nnf(node.body, True, fresh, bound, inner)
    raise TypeError(f"not a formula node: {node!r}")


def normalize(f: Formula) -> Formula:
    """Negation-free existential prenex form over atoms ``t >= 0``.

    Result body is ``Exists(vars, matrix)`` (or just the matrix when no
    variable is bound); the matrix uses only And/Or over Ge plus Const.
    """
    fresh = _Fresh(set(f.free) | _all_vars(f.body, set()))
    bound: list = []
    matrix = _nnf(f.body, True, fresh, bound, {})
    used = _all_vars(matrix, set())
    bound = [v for v in bound if v in used]
    return Formula(f.free, Exists(tuple(bound), matrix) if bound else matrix)


def negate_qf(f: Formula) -> Formula:
    """The complement of a quantifier-free formula, negation pushed to atoms."""
    if not is_quantifier_free(f.body):
        raise FragmentError("negate_qf needs a quantifier-free formula")
    return Formula(f.free, _negate(f.body))


def _negate(node):
    if isinstance(node, Ge):
        return _ge((-node.term).shift(-1))
    if isinstance(node, Eq):
        t = node.term
        return _mk_or([_ge(t.shift(-1)), _ge((-t).shift(-1))])
    if isinstance(node, Mod):
        return _mk_or([Mod(node.term, r, node.modulus)
                       for r in range(node.modulus) if r != node.residue])
    if isinstance(node, Const):
        return Const(not node.value)
    if isinstance(node, Not):
        return node.arg
    if isinstance(node, And):
        return _mk_or([_negate(a) for a in node.args])
    if isinstance(node, Or):
        return _mk_and([_negate(a) for a in node.args])
    raise TypeError(f"not a quantifier-free node: {node!r}")


# ---------------------------------------------------------------- branches


@dataclass(frozen=True)
class Branch:
    """A conjunction of ``t >= 0`` atoms with its existential variables."""

    atoms: tuple
    exists: tuple


def _branches(node) -> Iterator[tuple]:
    if isinstance(node, Ge):
        yield (node,)
    elif isinstance(node, Const):
        if node.value:
            yield ()
    elif isinstance(node, Or):
        for a in node.args:
            yield from _branches(a)
    elif isinstance(node, And):
        yield from _and_branches(node.args, 0)
    else:
        raise FragmentError(f"unexpected node in normalized matrix: {node!r}")


def _and_branches(args: tuple, i: int) -> Iterator[tuple]:
    if i == len(args):
        yield ()
        return
    for head in _branches(args[i]):
        for rest in _and_branches(args, i + 1):
            yield head + rest


def dnf_branches(f: Formula) -> Iterator[Branch]:
    """Lazily enumerate the branches of a normalized formula, deduplicated by atom set."""
    body = f.body
    bound: tuple = ()
    if isinstance(body, Exists):
        bound, body = body.vars, body.body
    seen = set()
    for atoms in _branches(body):
        key = frozenset(atoms)
        if key in seen:
            continue
        seen.add(key)
        ordered = tuple(sorted(key, key=lambda a: (a.term.coeffs, a.term.const)))
        used = set()
        for a in ordered:
            used |= a.term.vars()
        yield Branch(ordered, tuple(v for v in bound if v in used))


def branch_to_system(b: Branch, free_vars: Sequence[str]) -> EqSystem:
    """Equations over (free vars, existential vars, slacks), projecting onto the free vars.

    A pair of atoms t >= 0 and -t >= 0 becomes the single equation t = 0.
    """
    order = list(free_vars) + [v for v in b.exists if v not in free_vars]
    index = {v: i for i, v in enumerate(order)}
    atoms = list(b.atoms)
    keys = {(a.term.coeffs, a.term.const) for a in atoms}
    eqs, ineqs, done = [], [], set()
    for a in atoms:
        k = (a.term.coeffs, a.term.const)
        nk = ((-a.term).coeffs, -a.term.const)
        if k in done:
            continue
        if nk in keys and a.term.coeffs:
            eqs.append(a.term)
            done.add(k)
            done.add(nk)
        else:
            ineqs.append(a.term)
            done.add(k)
    for t in eqs + ineqs:
        for v in t.vars():
            if v not in index:
                raise FragmentError(f"variable {v!r} is neither free nor bound")
    ncols = len(order) + len(ineqs)
    matrix, rhs = [], []
    for t in eqs:
        row = [0] * ncols
        for v, c in t.coeffs:
            row[index[v]] += c
        matrix.append(row)
        rhs.append(-t.const)
    for s, t in enumerate(ineqs):
        row = [0] * ncols
        for v, c in t.coeffs:
            row[index[v]] += c
        row[len(order) + s] = -1
        matrix.append(row)
        rhs.append(-t.const)
    return EqSystem(matrix, rhs, len(free_vars), ncols)


def formula_systems(f: Formula) -> Iterator[EqSystem]:
    """normalize, then one system per branch."""
    nf = normalize(f)
    for b in dnf_branches(nf):
        yield branch_to_system(b, f.free)
