"""Finite first-order structures, their textual format, model checking and
isomorphism testing.

The text format is the one model builders of the Paradox family print::

    D=[d1,d2,d3]
    f(0, piotr, d1)
    f(1, entity, [d1])
    f(2, agent, [(d3,d1)])

Several ``f(...)`` facts may share a line.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from . import fol
from .errors import EvaluationError, ModelFormatError

RelKey = tuple[str, int]


@dataclass(frozen=True)
class Model:
    domain: tuple[str, ...]
    constants: Mapping[str, str]
    relations: Mapping[RelKey, frozenset[tuple[str, ...]]]

    def __post_init__(self):
        domain = tuple(self.domain)
        elems = set(domain)
        if len(elems) != len(domain):
            raise ModelFormatError("duplicate domain elements")
        for name, value in self.constants.items():
            if value not in elems:
                raise ModelFormatError(f"constant {name} denotes {value}, which is not in the domain")
        rels = {}
        for (name, arity), tuples in self.relations.items():
            if arity not in (1, 2):
                raise ModelFormatError(f"relation {name} has unsupported arity {arity}")
            frozen = frozenset(tuple(t) for t in tuples)
            for t in frozen:
                if len(t) != arity:
                    raise ModelFormatError(f"relation {name}/{arity} holds tuple {t} of wrong length")
                for x in t:
                    if x not in elems:
                        raise ModelFormatError(f"relation {name} mentions {x}, which is not in the domain")
            rels[(name, arity)] = frozen
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "constants", dict(self.constants))
        object.__setattr__(self, "relations", rels)

    @property
    def size(self) -> int:
        return len(self.domain)

    def relation(self, name: str, arity: int) -> frozenset[tuple[str, ...]]:
        """Extension of ``name``/``arity``; missing relations are empty."""
        return self.relations.get((name, arity), frozenset())

    def extension(self, name: str) -> list[str]:
        """Members of a unary relation in domain order."""
        members = {t[0] for t in self.relation(name, 1)}
        return [d for d in self.domain if d in members]

    def __str__(self):
        return print_model(self)


# --------------------------------------------------------------------------
# text format

_FACT_RE = re.compile(r"f\(\s*(\d+)\s*,\s*([A-Za-z_][\w']*)\s*,\s*(\[[^\]]*\]|[A-Za-z_]\w*)\s*\)")
_DOMAIN_RE = re.compile(r"D\s*=\s*\[([^\]]*)\]")
_ID_RE = re.compile(r"[A-Za-z_]\w*")


def _ids(text: str, where: str) -> list[str]:
    items = [x.strip() for x in text.split(",")] if text.strip() else []
    for x in items:
        if not _ID_RE.fullmatch(x):
            raise ModelFormatError(f"malformed element {x!r} in {where}")
    return items


def parse_model(text: str) -> Model:
    domain = None
    constants: dict[str, str] = {}
    relations: dict[RelKey, set] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        rest = line
        m = _DOMAIN_RE.search(rest)
        if m:
            if domain is not None:
                raise ModelFormatError(f"line {lineno}: second domain declaration")
            domain = _ids(m.group(1), "D")
            rest = rest[:m.start()] + rest[m.end():]
        for fm in _FACT_RE.finditer(rest):
            arity, name, value = int(fm.group(1)), fm.group(2), fm.group(3)
            where = f"line {lineno}: f({arity}, {name}, ...)"
            if arity == 0:
                if value.startswith("["):
                    raise ModelFormatError(f"{where}: constant needs a single element")
                if name in constants:
                    raise ModelFormatError(f"{where}: constant defined twice")
                constants[name] = value
                continue
            if not value.startswith("["):
                raise ModelFormatError(f"{where}: expected a list")
            if (name, arity) in relations:
                raise ModelFormatError(f"{where}: relation defined twice")
            body = value[1:-1].strip()
            if arity == 1:
                tuples = {(x,) for x in _ids(body, where)}
            elif arity == 2:
                if body and not re.fullmatch(r"\(\s*\w+\s*,\s*\w+\s*\)(\s*,\s*\(\s*\w+\s*,\s*\w+\s*\))*", body):
                    raise ModelFormatError(f"{where}: malformed pair list")
                tuples = {(a, b) for a, b in re.findall(r"\(\s*(\w+)\s*,\s*(\w+)\s*\)", body)}
            else:
                raise ModelFormatError(f"{where}: unsupported arity")
            relations[(name, arity)] = tuples
        leftover = _FACT_RE.sub("", rest).strip()
        if leftover:
            raise ModelFormatError(f"line {lineno}: cannot read {leftover!r}")
    if domain is None:
        raise ModelFormatError("missing domain declaration D=[...]")
    return Model(tuple(domain), constants, relations)


def print_model(m: Model) -> str:
    index = {d: i for i, d in enumerate(m.domain)}
    lines = [f"D=[{','.join(m.domain)}]"]
    for name in sorted(m.constants):
        lines.append(f"f(0, {name}, {m.constants[name]})")
    for name, arity in sorted(m.relations, key=lambda k: (k[1], k[0])):
        tuples = sorted(m.relations[(name, arity)], key=lambda t: [index[x] for x in t])
        if arity == 1:
            body = ",".join(t[0] for t in tuples)
        else:
            body = ",".join(f"({a},{b})" for a, b in tuples)
        lines.append(f"f({arity}, {name}, [{body}])")
    return "\n".join(lines) + "\n"


def parse_models(text: str) -> list[Model]:
    """Split a multi-model text on ``D=`` headers and parse each block."""
    starts = [m.start() for m in re.finditer(r"^\s*D\s*=", text, re.MULTILINE)]
    blocks = [text[a:b] for a, b in zip(starts, starts[1:] + [len(text)])]
    return [parse_model(_strip_comments(b)) for b in blocks]


def _strip_comments(text: str) -> str:
    return "\n".join(line for line in text.splitlines() if not line.lstrip().startswith(("#", "%")))


# --------------------------------------------------------------------------
# model checking

Env = dict


def _term_getter(t: fol.FolTerm, m: Model) -> Callable[[Env], str]:
    if isinstance(t, fol.Var):
        name = t.name
        return lambda env: env[name]
    if t.name not in m.constants:
        raise EvaluationError(f"constant {t.name!r} is not interpreted in the model")
    value = m.constants[t.name]
    return lambda env: value


def _compile(f: fol.Formula, m: Model) -> Callable[[Env], bool]:
    if isinstance(f, fol.Atom):
        if not f.args:
            raise EvaluationError(f"propositional atom {f.pred} cannot be interpreted in the model")
        rel = m.relation(f.pred, len(f.args))
        getters = [_term_getter(a, m) for a in f.args]
        if len(getters) == 1:
            g0 = getters[0]
            return lambda env: (g0(env),) in rel
        if len(getters) == 2:
            g0, g1 = getters
            return lambda env: (g0(env), g1(env)) in rel
        return lambda env: tuple(g(env) for g in getters) in rel
    if isinstance(f, fol.Eq):
        g0, g1 = _term_getter(f.left, m), _term_getter(f.right, m)
        return lambda env: g0(env) == g1(env)
    if isinstance(f, fol.Not):
        inner = _compile(f.arg, m)
        return lambda env: not inner(env)
    if isinstance(f, fol.And):
        parts = [_compile(a, m) for a in f.args]
        return lambda env: all(p(env) for p in parts)
    if isinstance(f, fol.Or):
        parts = [_compile(a, m) for a in f.args]
        return lambda env: any(p(env) for p in parts)
    if isinstance(f, fol.Implies):
        left, right = _compile(f.left, m), _compile(f.right, m)
        return lambda env: (not left(env)) or right(env)
    if isinstance(f, fol.Quant):
        body, var, domain = _compile(f.body, m), f.var, m.domain
        universal = f.kind == "all"

        def quant(env):
            saved = env.get(var, _UNSET)
            try:
                for d in domain:
                    env[var] = d
                    if body(env) != universal:
                        return not universal
                return universal
            finally:
                if saved is _UNSET:
                    env.pop(var, None)
                else:
                    env[var] = saved

        return quant
    raise TypeError(f"not a formula: {f!r}")


_UNSET = object()


def check(m: Model, f: fol.Formula) -> bool:
    """Tarskian satisfaction of a closed formula; ``=`` is element identity."""
    free = fol.free_variables(f)
    if free:
        raise EvaluationError(f"formula has free variables {sorted(free)}: {f}")
    return _compile(f, m)({})


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failed: str | None = None

    def __bool__(self):
        return self.ok


def check_all(m: Model, formulas: Iterable) -> CheckResult:
    """Check every formula; report the name of the first failure.

    Items may be plain formulas (named by position) or objects with ``name``
    and ``formula`` attributes, such as theory axioms.
    """
    for i, item in enumerate(formulas):
        name, f = (item.name, item.formula) if hasattr(item, "formula") else (f"#{i}", item)
        if not check(m, f):
            return CheckResult(False, name)
    return CheckResult(True)


# --------------------------------------------------------------------------
# isomorphism


def _element_profiles(m: Model, keys: list[RelKey]) -> dict[str, tuple]:
    prof = {d: [] for d in m.domain}
    named = {}
    for c, d in m.constants.items():
        named.setdefault(d, []).append(c)
    for key in keys:
        rel = m.relation(*key)
        if key[1] == 1:
            members = {t[0] for t in rel}
            for d in m.domain:
                prof[d].append(d in members)
        else:
            out, inc, loop = Counter(), Counter(), set()
            for a, b in rel:
                out[a] += 1
                inc[b] += 1
                if a == b:
                    loop.add(a)
            for d in m.domain:
                prof[d].append((out[d], inc[d], d in loop))
    return {d: (tuple(sorted(named.get(d, ()))), tuple(p)) for d, p in prof.items()}


def find_isomorphism(m1: Model, m2: Model) -> dict[str, str] | None:
    """A bijection preserving constants and all relations, or None."""
    if m1.size != m2.size or set(m1.constants) != set(m2.constants):
        return None
    keys = sorted(set(m1.relations) | set(m2.relations))
    for key in keys:
        if len(m1.relation(*key)) != len(m2.relation(*key)):
            return None
    p1, p2 = _element_profiles(m1, keys), _element_profiles(m2, keys)
    if Counter(p1.values()) != Counter(p2.values()):
        return None

    mapping = {m1.constants[c]: m2.constants[c] for c in m1.constants}
    for a, b in mapping.items():
        if p1[a] != p2[b]:
            return None
    if len(set(mapping.values())) != len(mapping):
        return None

    binary = [(m1.relation(*k), m2.relation(*k)) for k in keys if k[1] == 2]
    for r1, r2 in binary:
        for a, b in r1:
            if a in mapping and b in mapping and (mapping[a], mapping[b]) not in r2:
                return None

    by_profile: dict[tuple, list[str]] = {}
    for d in m2.domain:
        by_profile.setdefault(p2[d], []).append(d)
    rarity = Counter(p1.values())
    todo = sorted((d for d in m1.domain if d not in mapping), key=lambda d: (rarity[p1[d]], m1.domain.index(d)))
    used = set(mapping.values())

    def consistent(x, y):
        for r1, r2 in binary:
            for u, v in mapping.items():
                if ((x, u) in r1) != ((y, v) in r2) or ((u, x) in r1) != ((v, y) in r2):
                    return False
        return True

    def extend(i):
        if i == len(todo):
            return True
        x = todo[i]
        for y in by_profile[p1[x]]:
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return dict(mapping) if extend(0) else None


def isomorphic(m1: Model, m2: Model) -> bool:
    return find_isomorphism(m1, m2) is not None


def rename(m: Model, mapping: Mapping[str, str]) -> Model:
    """Apply an element renaming (not necessarily injective) to every part of ``m``."""
    domain = []
    for d in m.domain:
        new = mapping.get(d, d)
        if new not in domain:
            domain.append(new)
    return Model(
        tuple(domain),
        {c: mapping.get(d, d) for c, d in m.constants.items()},
        {k: {tuple(mapping.get(x, x) for x in t) for t in v} for k, v in m.relations.items()},
    )
