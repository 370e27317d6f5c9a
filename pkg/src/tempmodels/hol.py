"""Simply typed higher-order terms over the base types entity, time, event,
kind and bool: representation, surface syntax, type checking and
normal-order beta reduction.

Conjunction and disjunction are n-ary.  The smart constructors ``conj`` and
``disj`` flatten nested occurrences, and ``beta_reduce`` rebuilds through
them, so normal forms carry flat connective lists.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import HolTypeError, SyntaxParseError

BASE_TYPE_NAMES = ("entity", "time", "event", "kind", "bool")


# --------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class BaseType:
    name: str

    def __post_init__(self):
        if self.name not in BASE_TYPE_NAMES:
            raise ValueError(f"unknown base type {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FunType:
    dom: "SemType"
    cod: "SemType"

    def __str__(self):
        left = f"({self.dom})" if isinstance(self.dom, FunType) else str(self.dom)
        return f"{left} -> {self.cod}"


SemType = BaseType | FunType

ENTITY = BaseType("entity")
TIME = BaseType("time")
EVENT = BaseType("event")
KIND = BaseType("kind")
BOOL = BaseType("bool")


def fun(*types: SemType) -> SemType:
    """Right-nested function type: ``fun(a, b, c)`` is ``a -> b -> c``."""
    if not types:
        raise ValueError("fun() needs at least one type")
    result = types[-1]
    for t in reversed(types[:-1]):
        result = FunType(t, result)
    return result


# --------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str
    type: SemType

    def __repr__(self):
        return f"Var({self.name!r}, {self.type})"


@dataclass(frozen=True, repr=False)
class Const(Term):
    name: str
    type: SemType

    def __repr__(self):
        return f"Const({self.name!r}, {self.type})"


@dataclass(frozen=True, repr=False)
class App(Term):
    fn: Term
    arg: Term

    def __repr__(self):
        return f"App({self.fn!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Lam(Term):
    var: str
    var_type: SemType
    body: Term

    def __repr__(self):
        return f"Lam({self.var!r}, {self.var_type}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Quant(Term):
    kind: str  # "forall" | "exists"
    var: str
    var_type: SemType
    body: Term

    def __post_init__(self):
        if self.kind not in ("forall", "exists"):
            raise ValueError(f"bad quantifier kind {self.kind!r}")

    def __repr__(self):
        return f"Quant({self.kind!r}, {self.var!r}, {self.var_type}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class And(Term):
    args: tuple[Term, ...]

    def __repr__(self):
        return f"And{self.args!r}"


@dataclass(frozen=True, repr=False)
class Or(Term):
    args: tuple[Term, ...]

    def __repr__(self):
        return f"Or{self.args!r}"


@dataclass(frozen=True, repr=False)
class Implies(Term):
    left: Term
    right: Term

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Not(Term):
    arg: Term

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Eq(Term):
    left: Term
    right: Term

    def __repr__(self):
        return f"Eq({self.left!r}, {self.right!r})"


def conj(*args: Term) -> Term:
    flat: list[Term] = []
    for a in args:
        flat.extend(a.args if isinstance(a, And) else (a,))
    if not flat:
        raise ValueError("empty conjunction")
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*args: Term) -> Term:
    flat: list[Term] = []
    for a in args:
        flat.extend(a.args if isinstance(a, Or) else (a,))
    if not flat:
        raise ValueError("empty disjunction")
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def apply(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(term: Term) -> tuple[Term, list[Term]]:
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fn
    args.reverse()
    return term, args


# --------------------------------------------------------------------------
# signatures


class Signature(Mapping[str, SemType]):
    """Constant name -> type.  Immutable once built; ``extend`` copies."""

    def __init__(self, entries: Mapping[str, SemType] | None = None):
        self._entries = dict(entries or {})

    def __getitem__(self, name):
        return self._entries[name]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def extend(self, entries: Mapping[str, SemType]) -> "Signature":
        merged = dict(self._entries)
        for name, t in entries.items():
            if name in merged and merged[name] != t:
                raise HolTypeError(f"constant {name!r} redeclared as {t} (was {merged[name]})")
            merged[name] = t
        return Signature(merged)

    def __repr__(self):
        return f"Signature({self._entries!r})"


def base_signature() -> Signature:
    """The temporal vocabulary every representation is built over."""
    return Signature({
        "now": TIME,
        "lt": fun(TIME, TIME, BOOL),
        "inception": fun(EVENT, TIME, BOOL),
        "conc": fun(EVENT, TIME, BOOL),
        "induration": fun(EVENT, TIME, BOOL),
        "ek": fun(EVENT, KIND, BOOL),
        "agent": fun(EVENT, ENTITY, BOOL),
        "patient": fun(EVENT, ENTITY, BOOL),
        "culm": fun(EVENT, EVENT, BOOL),
        "instantaneous": fun(EVENT, BOOL),
        "culminated": fun(EVENT, BOOL),
    })


# --------------------------------------------------------------------------
# type checking


def typecheck(term: Term, sig: Mapping[str, SemType], env: Mapping[str, SemType] | None = None) -> SemType:
    """Return the unique type of ``term``.

    Free variables are typed by their own annotation; bound occurrences must
    agree with the binder.
    """
    return _typecheck(term, sig, dict(env or {}))


def _typecheck(term, sig, env):
    if isinstance(term, Var):
        bound = env.get(term.name)
        if bound is not None and bound != term.type:
            raise HolTypeError(f"variable {term.name} annotated {term.type} but bound at {bound}", term)
        return term.type
    if isinstance(term, Const):
        if term.name not in sig:
            raise HolTypeError(f"undeclared constant {term.name!r}", term)
        if sig[term.name] != term.type:
            raise HolTypeError(f"constant {term.name} used at {term.type}, declared {sig[term.name]}", term)
        return term.type
    if isinstance(term, App):
        ft = _typecheck(term.fn, sig, env)
        if not isinstance(ft, FunType):
            raise HolTypeError(f"application of non-function of type {ft}", term)
        at = _typecheck(term.arg, sig, env)
        if at != ft.dom:
            raise HolTypeError(f"argument type mismatch: expected {ft.dom}, got {at}", term)
        return ft.cod
    if isinstance(term, Lam):
        body = _typecheck(term.body, sig, {**env, term.var: term.var_type})
        return FunType(term.var_type, body)
    if isinstance(term, Quant):
        body = _typecheck(term.body, sig, {**env, term.var: term.var_type})
        if body != BOOL:
            raise HolTypeError(f"quantifier body has type {body}, expected bool", term)
        return BOOL
    if isinstance(term, (And, Or)):
        if len(term.args) < 2:
            raise HolTypeError("connective needs at least two operands", term)
        for a in term.args:
            _expect_bool(a, sig, env, term)
        return BOOL
    if isinstance(term, Implies):
        _expect_bool(term.left, sig, env, term)
        _expect_bool(term.right, sig, env, term)
        return BOOL
    if isinstance(term, Not):
        _expect_bool(term.arg, sig, env, term)
        return BOOL
    if isinstance(term, Eq):
        lt = _typecheck(term.left, sig, env)
        rt = _typecheck(term.right, sig, env)
        if lt != rt:
            raise HolTypeError(f"equality between {lt} and {rt}", term)
        return BOOL
    raise TypeError(f"not a term: {term!r}")


def _expect_bool(sub, sig, env, parent):
    t = _typecheck(sub, sig, env)
    if t != BOOL:
        raise HolTypeError(f"operand `{sub}` has type {t}, expected bool", parent)


# --------------------------------------------------------------------------
# variables, substitution, reduction


def free_vars(term: Term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Const):
        return set()
    if isinstance(term, App):
        return free_vars(term.fn) | free_vars(term.arg)
    if isinstance(term, (Lam, Quant)):
        return free_vars(term.body) - {term.var}
    if isinstance(term, (And, Or)):
        return set().union(*(free_vars(a) for a in term.args))
    if isinstance(term, (Implies, Eq)):
        return free_vars(term.left) | free_vars(term.right)
    if isinstance(term, Not):
        return free_vars(term.arg)
    raise TypeError(f"not a term: {term!r}")


def _all_names(term: Term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Const):
        return set()
    if isinstance(term, App):
        return _all_names(term.fn) | _all_names(term.arg)
    if isinstance(term, (Lam, Quant)):
        return _all_names(term.body) | {term.var}
    if isinstance(term, (And, Or)):
        return set().union(*(_all_names(a) for a in term.args))
    if isinstance(term, (Implies, Eq)):
        return _all_names(term.left) | _all_names(term.right)
    return _all_names(term.arg)


def _fresh(base: str, avoid: set[str]) -> str:
    stem = base.rstrip("0123456789") or base
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand


def substitute(term: Term, name: str, value: Term) -> Term:
    """Capture-avoiding ``term[name := value]``."""
    return _subst(term, name, value, free_vars(value))


def _subst(term, name, value, value_fv):
    if isinstance(term, Var):
        return value if term.name == name else term
    if isinstance(term, Const):
        return term
    if isinstance(term, App):
        return App(_subst(term.fn, name, value, value_fv), _subst(term.arg, name, value, value_fv))
    if isinstance(term, (Lam, Quant)):
        if term.var == name or name not in free_vars(term.body):
            return term
        var, body = term.var, term.body
        if var in value_fv:
            new = _fresh(var, value_fv | _all_names(body) | {name})
            body = _subst(body, var, Var(new, term.var_type), {new})
            var = new
        body = _subst(body, name, value, value_fv)
        if isinstance(term, Lam):
            return Lam(var, term.var_type, body)
        return Quant(term.kind, var, term.var_type, body)
    if isinstance(term, And):
        return conj(*(_subst(a, name, value, value_fv) for a in term.args))
    if isinstance(term, Or):
        return disj(*(_subst(a, name, value, value_fv) for a in term.args))
    if isinstance(term, Implies):
        return Implies(_subst(term.left, name, value, value_fv), _subst(term.right, name, value, value_fv))
    if isinstance(term, Eq):
        return Eq(_subst(term.left, name, value, value_fv), _subst(term.right, name, value, value_fv))
    if isinstance(term, Not):
        return Not(_subst(term.arg, name, value, value_fv))
    raise TypeError(f"not a term: {term!r}")


def _whnf(term: Term) -> Term:
    if isinstance(term, App):
        fn = _whnf(term.fn)
        if isinstance(fn, Lam):
            return _whnf(substitute(fn.body, fn.var, term.arg))
        return App(fn, term.arg)
    return term


def beta_reduce(term: Term) -> Term:
    """Normal-order reduction to beta-normal form (leftmost-outermost first)."""
    if isinstance(term, App):
        fn = _whnf(term.fn)
        if isinstance(fn, Lam):
            return beta_reduce(substitute(fn.body, fn.var, term.arg))
        return App(beta_reduce(fn), beta_reduce(term.arg))
    if isinstance(term, (Var, Const)):
        return term
    if isinstance(term, Lam):
        return Lam(term.var, term.var_type, beta_reduce(term.body))
    if isinstance(term, Quant):
        return Quant(term.kind, term.var, term.var_type, beta_reduce(term.body))
    if isinstance(term, And):
        return conj(*(beta_reduce(a) for a in term.args))
    if isinstance(term, Or):
        return disj(*(beta_reduce(a) for a in term.args))
    if isinstance(term, Implies):
        return Implies(beta_reduce(term.left), beta_reduce(term.right))
    if isinstance(term, Eq):
        return Eq(beta_reduce(term.left), beta_reduce(term.right))
    if isinstance(term, Not):
        return Not(beta_reduce(term.arg))
    raise TypeError(f"not a term: {term!r}")


def redexes(term: Term) -> Iterator[Term]:
    """Yield every beta-redex ``(lam x. b) a`` occurring in ``term``."""
    if isinstance(term, App):
        if isinstance(term.fn, Lam):
            yield term
        yield from redexes(term.fn)
        yield from redexes(term.arg)
    elif isinstance(term, (Lam, Quant)):
        yield from redexes(term.body)
    elif isinstance(term, (And, Or)):
        for a in term.args:
            yield from redexes(a)
    elif isinstance(term, (Implies, Eq)):
        yield from redexes(term.left)
        yield from redexes(term.right)
    elif isinstance(term, Not):
        yield from redexes(term.arg)


def is_normal(term: Term) -> bool:
    return next(redexes(term), None) is None


def nameless(term: Term, _bound: tuple[str, ...] = ()):
    """De Bruijn form of ``term`` as nested tuples; equal iff alpha-equivalent."""
    if isinstance(term, Var):
        if term.name in _bound:
            return ("bv", _bound.index(term.name), term.type)
        return ("fv", term.name, term.type)
    if isinstance(term, Const):
        return ("c", term.name, term.type)
    if isinstance(term, App):
        return ("app", nameless(term.fn, _bound), nameless(term.arg, _bound))
    if isinstance(term, Lam):
        return ("lam", term.var_type, nameless(term.body, (term.var,) + _bound))
    if isinstance(term, Quant):
        return (term.kind, term.var_type, nameless(term.body, (term.var,) + _bound))
    if isinstance(term, And):
        return ("and",) + tuple(nameless(a, _bound) for a in term.args)
    if isinstance(term, Or):
        return ("or",) + tuple(nameless(a, _bound) for a in term.args)
    if isinstance(term, Implies):
        return ("imp", nameless(term.left, _bound), nameless(term.right, _bound))
    if isinstance(term, Eq):
        return ("eq", nameless(term.left, _bound), nameless(term.right, _bound))
    if isinstance(term, Not):
        return ("not", nameless(term.arg, _bound))
    raise TypeError(f"not a term: {term!r}")


def alpha_equal(a: Term, b: Term) -> bool:
    return nameless(a) == nameless(b)


# --------------------------------------------------------------------------
# surface syntax

_TOKEN_RE = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_']*)|([().,:&|~=]))")
_KEYWORDS = {"lam", "forall", "exists"}


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise SyntaxParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at offset {pos}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


class _TermParser:
    def __init__(self, text: str, sig: Mapping[str, SemType]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.sig = sig

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = expected or "a token"
            raise SyntaxParseError(f"expected {want}, found {tok or 'end of input'} in {self.text!r}")
        self.pos += 1
        return tok

    def ident(self):
        tok = self.take()
        if not re.match(r"[A-Za-z_]", tok) or tok in _KEYWORDS:
            raise SyntaxParseError(f"expected identifier, found {tok!r} in {self.text!r}")
        return tok

    def parse(self) -> Term:
        term = self.term({})
        if self.peek() is not None:
            raise SyntaxParseError(f"trailing input at {self.peek()!r} in {self.text!r}")
        return term

    # types
    def type_(self) -> SemType:
        if self.peek() == "(":
            self.take("(")
            left = self.type_()
            self.take(")")
        else:
            name = self.ident()
            if name not in BASE_TYPE_NAMES:
                raise SyntaxParseError(f"unknown type {name!r}")
            left = BaseType(name)
        if self.peek() == "->":
            self.take("->")
            return FunType(left, self.type_())
        return left

    # terms
    def term(self, env):
        if self.peek() in _KEYWORDS:
            return self.binder(env)
        left = self.disjunction(env)
        if self.peek() == "->":
            self.take("->")
            return Implies(left, self.term(env))
        return left

    def binder(self, env):
        kw = self.take()
        var = self.ident()
        self.take(":")
        vt = self.type_()
        self.take(".")
        body = self.term({**env, var: vt})
        if kw == "lam":
            return Lam(var, vt, body)
        return Quant(kw, var, vt, body)

    def disjunction(self, env):
        args = [self.conjunction(env)]
        while self.peek() == "|":
            self.take("|")
            args.append(self.conjunction(env))
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self, env):
        args = [self.unary(env)]
        while self.peek() == "&":
            self.take("&")
            args.append(self.unary(env))
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self, env):
        tok = self.peek()
        if tok == "~":
            self.take("~")
            return Not(self.unary(env))
        if tok in _KEYWORDS:
            return self.binder(env)
        left = self.application(env)
        if self.peek() == "=":
            self.take("=")
            return Eq(left, self.application(env))
        return left

    def application(self, env):
        fn = self.primary(env, allow_tuple=False)
        while True:
            tok = self.peek()
            if tok == "(":
                for arg in self.paren_list(env):
                    fn = App(fn, arg)
            elif tok is not None and re.match(r"[A-Za-z_]", tok) and tok not in _KEYWORDS:
                fn = App(fn, self.primary(env, allow_tuple=False))
            else:
                return fn

    def paren_list(self, env):
        self.take("(")
        items = [self.term(env)]
        while self.peek() == ",":
            self.take(",")
            items.append(self.term(env))
        self.take(")")
        return items

    def primary(self, env, allow_tuple):
        if self.peek() == "(":
            items = self.paren_list(env)
            if len(items) != 1:
                raise SyntaxParseError(f"argument list without a function in {self.text!r}")
            return items[0]
        name = self.ident()
        if name in env:
            return Var(name, env[name])
        if name not in self.sig:
            raise HolTypeError(f"undeclared constant {name!r}")
        return Const(name, self.sig[name])


def parse_type(text: str) -> SemType:
    p = _TermParser(text, {})
    t = p.type_()
    if p.peek() is not None:
        raise SyntaxParseError(f"trailing input in type {text!r}")
    return t


def parse_term(text: str, sig: Mapping[str, SemType]) -> Term:
    """Parse the surface syntax; unbound identifiers resolve against ``sig``."""
    return _TermParser(text, sig).parse()


# precedence: 0 binder, 1 implies, 2 or, 3 and, 4 not, 5 eq, 6 application/atom
def _prec(term: Term) -> int:
    if isinstance(term, (Lam, Quant)):
        return 0
    if isinstance(term, Implies):
        return 1
    if isinstance(term, Or):
        return 2
    if isinstance(term, And):
        return 3
    if isinstance(term, Not):
        return 4
    if isinstance(term, Eq):
        return 5
    return 6


def _wrap(term: Term, min_prec: int) -> str:
    s = print_term(term)
    return s if _prec(term) >= min_prec else f"({s})"


def print_term(term: Term) -> str:
    if isinstance(term, (Var, Const)):
        return term.name
    if isinstance(term, App):
        head, args = spine(term)
        head_s = head.name if isinstance(head, (Var, Const)) else f"({print_term(head)})"
        return f"{head_s}({', '.join(print_term(a) for a in args)})"
    if isinstance(term, Lam):
        return f"lam {term.var}:{term.var_type}. {print_term(term.body)}"
    if isinstance(term, Quant):
        return f"{term.kind} {term.var}:{term.var_type}. {print_term(term.body)}"
    if isinstance(term, Implies):
        return f"{_wrap(term.left, 2)} -> {_wrap(term.right, 1)}"
    if isinstance(term, Or):
        return " | ".join(_wrap(a, 3) for a in term.args)
    if isinstance(term, And):
        return " & ".join(_wrap(a, 4) for a in term.args)
    if isinstance(term, Not):
        return f"~{_wrap(term.arg, 4)}"
    if isinstance(term, Eq):
        return f"{_wrap(term.left, 6)} = {_wrap(term.right, 6)}"
    raise TypeError(f"not a term: {term!r}")
