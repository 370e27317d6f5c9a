"""Untyped first-order formulas with equality, their textual syntax, and the
type-relativizing translation from normal-form higher-order terms.

Textual syntax::

    all A. f     exists A. f     f & g     f | g     f -> g     ~f
    A = B        pred(a, b)      p

Identifiers bound by a quantifier are variables; every other identifier in
term position is a constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import hol
from .errors import SyntaxParseError, TranslationError


# --------------------------------------------------------------------------
# terms and formulas


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


FolTerm = Var | Const


class Formula:
    __slots__ = ()

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    pred: str
    args: tuple[FolTerm, ...] = ()

    def __repr__(self):
        return f"Atom({self.pred!r}, {self.args!r})"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: FolTerm
    right: FolTerm

    def __repr__(self):
        return f"Eq({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple[Formula, ...]

    def __repr__(self):
        return f"And{self.args!r}"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple[Formula, ...]

    def __repr__(self):
        return f"Or{self.args!r}"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Quant(Formula):
    kind: str  # "all" | "exists"
    var: str
    body: Formula

    def __post_init__(self):
        if self.kind not in ("all", "exists"):
            raise ValueError(f"bad quantifier kind {self.kind!r}")

    def __repr__(self):
        return f"Quant({self.kind!r}, {self.var!r}, {self.body!r})"


def Forall(var: str, body: Formula) -> Quant:
    return Quant("all", var, body)


def Exists(var: str, body: Formula) -> Quant:
    return Quant("exists", var, body)


def conj(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        flat.extend(a.args if isinstance(a, And) else (a,))
    if not flat:
        raise ValueError("empty conjunction")
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        flat.extend(a.args if isinstance(a, Or) else (a,))
    if not flat:
        raise ValueError("empty disjunction")
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def flatten(f: Formula) -> Formula:
    """Re-associate every nested conjunction/disjunction into flat lists."""
    if isinstance(f, And):
        return conj(*(flatten(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(flatten(a) for a in f.args))
    if isinstance(f, Not):
        return Not(flatten(f.arg))
    if isinstance(f, Implies):
        return Implies(flatten(f.left), flatten(f.right))
    if isinstance(f, Quant):
        return Quant(f.kind, f.var, flatten(f.body))
    return f


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {a.name for a in f.args if isinstance(a, Var)}
    if isinstance(f, Eq):
        return {a.name for a in (f.left, f.right) if isinstance(a, Var)}
    if isinstance(f, Not):
        return free_variables(f.arg)
    if isinstance(f, (And, Or)):
        return set().union(*(free_variables(a) for a in f.args))
    if isinstance(f, Implies):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, Quant):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def predicates(formulas: Iterable[Formula]) -> dict[str, int]:
    """Predicate name -> arity, in order of first occurrence.

    Raises ValueError when one name is used with two arities.
    """
    found: dict[str, int] = {}

    def walk(f):
        if isinstance(f, Atom):
            arity = found.setdefault(f.pred, len(f.args))
            if arity != len(f.args):
                raise ValueError(f"predicate {f.pred} used with arities {arity} and {len(f.args)}")
        elif isinstance(f, Not):
            walk(f.arg)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                walk(a)
        elif isinstance(f, Implies):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, Quant):
            walk(f.body)

    for f in formulas:
        walk(f)
    return found


def constants(formulas: Iterable[Formula]) -> list[str]:
    """Constant names in order of first occurrence."""
    found: dict[str, None] = {}

    def walk(f):
        if isinstance(f, Atom):
            for a in f.args:
                if isinstance(a, Const):
                    found.setdefault(a.name)
        elif isinstance(f, Eq):
            for a in (f.left, f.right):
                if isinstance(a, Const):
                    found.setdefault(a.name)
        elif isinstance(f, Not):
            walk(f.arg)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                walk(a)
        elif isinstance(f, Implies):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, Quant):
            walk(f.body)

    for f in formulas:
        walk(f)
    return list(found)


# --------------------------------------------------------------------------
# translation from higher-order normal forms


def translate(term: hol.Term, sig: Mapping[str, hol.SemType]) -> Formula:
    """Translate a closed, beta-normal, bool-typed term into first-order logic.

    ``forall x:t. p`` becomes ``all x. (t(x) -> p*)`` and ``exists x:t. p``
    becomes ``exists x. (t(x) & p*)``; everything else keeps its shape and
    loses its type annotations.
    """
    ty = hol.typecheck(term, sig)
    if ty != hol.BOOL:
        raise TranslationError(f"not first-order translatable: term has type {ty}, expected bool")
    return _translate(term)


def _translate(term: hol.Term) -> Formula:
    if isinstance(term, hol.Quant):
        if not isinstance(term.var_type, hol.BaseType) or term.var_type == hol.BOOL:
            raise TranslationError(
                f"not first-order translatable: quantification over {term.var_type} in `{term}`")
        guard = Atom(term.var_type.name, (Var(term.var),))
        body = _translate(term.body)
        if term.kind == "forall":
            return Forall(term.var, Implies(guard, body))
        return Exists(term.var, conj(guard, body))
    if isinstance(term, hol.And):
        return conj(*(_translate(a) for a in term.args))
    if isinstance(term, hol.Or):
        return disj(*(_translate(a) for a in term.args))
    if isinstance(term, hol.Implies):
        return Implies(_translate(term.left), _translate(term.right))
    if isinstance(term, hol.Not):
        return Not(_translate(term.arg))
    if isinstance(term, hol.Eq):
        return Eq(_individual(term.left, term), _individual(term.right, term))
    if isinstance(term, hol.Lam):
        raise TranslationError(f"not first-order translatable: residual abstraction `{term}`")
    head, args = hol.spine(term)
    if isinstance(head, hol.Const):
        return Atom(head.name, tuple(_individual(a, term) for a in args))
    raise TranslationError(f"not first-order translatable: `{term}`")


def _individual(term: hol.Term, context: hol.Term) -> FolTerm:
    if isinstance(term, (hol.Var, hol.Const)) and isinstance(term.type, hol.BaseType) and term.type != hol.BOOL:
        return Var(term.name) if isinstance(term, hol.Var) else Const(term.name)
    raise TranslationError(f"not first-order translatable: argument `{term}` in `{context}`")


# --------------------------------------------------------------------------
# textual syntax

_TOKEN_RE = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_]*)|([().,&|~=]))")
_KEYWORDS = {"all", "exists"}


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SyntaxParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} in {text!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, offset=0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise SyntaxParseError(f"expected {expected or 'a token'}, found {tok or 'end of input'} in {self.text!r}")
        self.pos += 1
        return tok

    def ident(self):
        tok = self.take()
        if not re.match(r"[A-Za-z_]", tok) or tok in _KEYWORDS:
            raise SyntaxParseError(f"expected identifier, found {tok!r} in {self.text!r}")
        return tok

    def parse(self):
        f = self.formula(frozenset())
        if self.peek() is not None:
            raise SyntaxParseError(f"trailing input at {self.peek()!r} in {self.text!r}")
        return f

    def formula(self, bound):
        if self.peek() in _KEYWORDS:
            return self.quant(bound)
        left = self.disjunction(bound)
        if self.peek() == "->":
            self.take("->")
            return Implies(left, self.formula(bound))
        return left

    def quant(self, bound):
        kind = self.take()
        var = self.ident()
        self.take(".")
        return Quant(kind, var, self.formula(bound | {var}))

    def disjunction(self, bound):
        args = [self.conjunction(bound)]
        while self.peek() == "|":
            self.take("|")
            args.append(self.conjunction(bound))
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self, bound):
        args = [self.unary(bound)]
        while self.peek() == "&":
            self.take("&")
            args.append(self.unary(bound))
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self, bound):
        tok = self.peek()
        if tok == "~":
            self.take("~")
            return Not(self.unary(bound))
        if tok in _KEYWORDS:
            return self.quant(bound)
        if tok == "(":
            self.take("(")
            f = self.formula(bound)
            self.take(")")
            return f
        name = self.ident()
        if self.peek() == "=":
            self.take("=")
            return Eq(self.term(name, bound), self.term(self.ident(), bound))
        if self.peek() == "(":
            self.take("(")
            args = [self.term(self.ident(), bound)]
            while self.peek() == ",":
                self.take(",")
                args.append(self.term(self.ident(), bound))
            self.take(")")
            return Atom(name, tuple(args))
        return Atom(name, ())

    @staticmethod
    def term(name, bound):
        return Var(name) if name in bound else Const(name)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


def _prec(f: Formula) -> int:
    if isinstance(f, Quant):
        return 0
    if isinstance(f, Implies):
        return 1
    if isinstance(f, Or):
        return 2
    if isinstance(f, And):
        return 3
    if isinstance(f, Not):
        return 4
    return 6


def _wrap(f: Formula, min_prec: int) -> str:
    s = print_formula(f)
    return s if _prec(f) >= min_prec else f"({s})"


def print_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({','.join(a.name for a in f.args)})"
    if isinstance(f, Eq):
        return f"{f.left.name} = {f.right.name}"
    if isinstance(f, Not):
        return f"~{_wrap(f.arg, 4)}"
    if isinstance(f, And):
        return " & ".join(_wrap(a, 4) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(a, 3) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.left, 2)} -> {_wrap(f.right, 1)}"
    if isinstance(f, Quant):
        return f"{f.kind} {f.var}. {print_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# formula files


def parse_formula_file(text: str) -> list[tuple[str | None, Formula]]:
    """Read one entry per line: ``axiom NAME. FORMULA`` or a bare formula.

    Blank lines and lines starting with ``#`` or ``%`` are ignored.
    """
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line[0] in "#%":
            continue
        m = re.match(r"axiom\s+([A-Za-z_][A-Za-z0-9_]*)\s*\.\s*(.*)$", line)
        try:
            if m:
                entries.append((m.group(1), parse_formula(m.group(2))))
            else:
                entries.append((None, parse_formula(line)))
        except SyntaxParseError as exc:
            raise SyntaxParseError(f"line {lineno}: {exc}") from None
    return entries


def format_axiom(name: str, f: Formula) -> str:
    return f"axiom {name}. {print_formula(f)}"
