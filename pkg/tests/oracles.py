"""Independent reference implementations and random generators for the tests.

Nothing here reuses the package's evaluation, reduction or search code; the
oracles only share the data types.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from tempmodels import fol, hol
from tempmodels.model import Model, check

FIXTURES = Path(__file__).parent / "fixtures"

BASE = (hol.ENTITY, hol.TIME, hol.EVENT, hol.KIND)
SENTENCES = ("Piotr pospaceruje", "Piotr pokochal Aline", "Piotr napisal list", "Piotr popisal list")
M0_FIXTURES = ("reference_m0.txt", "m0_pokochal.txt", "m0_napisal.txt", "m0_popisal.txt")


def fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


# --------------------------------------------------------------------------
# higher-order terms

def _constants_of(sig, ty):
    return [hol.Const(n, t) for n, t in sig.items() if t == ty]


def random_type(rng: random.Random, depth: int = 2) -> hol.SemType:
    if depth <= 0 or rng.random() < 0.6:
        return rng.choice(BASE + (hol.BOOL,))
    return hol.FunType(random_type(rng, depth - 1), random_type(rng, depth - 1))


class TermGen:
    """Random well-typed terms over a signature.

    With ``first_order`` set, quantifiers range over the four individual
    types only, so closed bool terms normalise into the translatable fragment.
    """

    NAMES = ("x", "y", "z", "e", "t", "p")

    def __init__(self, rng: random.Random, sig, first_order: bool = True):
        self.rng = rng
        # every individual type gets at least one constant to fall back on
        self.sig = sig.extend({f"c_{t}": t for t in BASE if not _constants_of(sig, t)})
        self.first_order = first_order

    def term(self, ty, depth, env=()):
        rng = self.rng
        options = []
        # later (inner) bindings shadow earlier ones
        vars_ = [hol.Var(n, t) for n, t in dict(env).items() if t == ty]
        consts = _constants_of(self.sig, ty)
        if vars_:
            # variables are weighted up: free variables in redex arguments are
            # what exposes capture
            options.extend([lambda: rng.choice(vars_)] * 3)
        if consts:
            options.append(lambda: rng.choice(consts))
        if depth > 0:
            options.append(lambda: self._redex(ty, depth, env))
            if isinstance(ty, hol.FunType):
                options.append(lambda: self._lam(ty, depth, env))
            if ty == hol.BOOL:
                options.extend([lambda: self._connective(depth, env)] * 3)
                options.extend([lambda: self._quant(depth, env)] * 2)
                options.append(lambda: self._atom(depth, env))
                options.append(lambda: self._eq(depth, env))
        elif ty == hol.BOOL and not options:
            options.append(lambda: self._atom(0, env))
        if not options:
            if isinstance(ty, hol.FunType):
                return self._lam(ty, max(depth, 1), env)
            return rng.choice(_constants_of(self.sig, ty))
        return rng.choice(options)()

    def _name(self, env):
        # reuse bound names now and then to exercise shadowing
        if env and self.rng.random() < 0.5:
            return self.rng.choice(env)[0]
        return self.rng.choice(self.NAMES)

    def _lam(self, ty, depth, env):
        name = self._name(env)
        body = self.term(ty.cod, depth - 1, env + ((name, ty.dom),))
        return hol.Lam(name, ty.dom, body)

    def _redex(self, ty, depth, env):
        name = self._name(env)
        scoped = [(n, t) for n, t in dict(env).items() if t in BASE]
        if ty == hol.BOOL and scoped and depth >= 3 and self.rng.random() < 0.5:
            return self._capture_redex(name, scoped, depth, env)
        arg_ty = self.rng.choice(BASE) if self.first_order and self.rng.random() < 0.7 else random_type(self.rng, 1)
        # the abstraction in function position costs a level of its own
        body = self.term(ty, max(depth - 2, 0), env + ((name, arg_ty),))
        return hol.App(hol.Lam(name, arg_ty, body), self.term(arg_ty, depth - 1, env))

    def _capture_redex(self, name, scoped, depth, env):
        """``(lam name. Q v. ... name ...)(v)``: the body rebinds the free
        variable of the argument, so a naive substitution would capture it."""
        free, arg_ty = self.rng.choice(scoped)
        if name == free:
            name = free + "0"
        qty = self.rng.choice(BASE) if self.first_order else random_type(self.rng, 1)
        inner_env = env + ((name, arg_ty), (free, qty))
        mention = hol.Eq(hol.Var(name, arg_ty), self.term(arg_ty, 0, inner_env))
        inner = mention
        if depth >= 6:
            inner = hol.And((mention, self.term(hol.BOOL, depth - 5, inner_env)))
        body = hol.Quant(self.rng.choice(["forall", "exists"]), free, qty, inner)
        return hol.App(hol.Lam(name, arg_ty, body), hol.Var(free, arg_ty))

    def _connective(self, depth, env):
        kind = self.rng.choice(["and", "or", "imp", "not"])
        sub = lambda: self.term(hol.BOOL, depth - 1, env)
        if kind == "not":
            return hol.Not(sub())
        if kind == "imp":
            return hol.Implies(sub(), sub())
        args = tuple(sub() for _ in range(self.rng.randint(2, 3)))
        return hol.And(args) if kind == "and" else hol.Or(args)

    def _quant(self, depth, env):
        ty = self.rng.choice(BASE) if self.first_order else random_type(self.rng, 1)
        name = self._name(env)
        body = self.term(hol.BOOL, depth - 1, env + ((name, ty),))
        return hol.Quant(self.rng.choice(["forall", "exists"]), name, ty, body)

    def _atom(self, depth, env):
        preds = [(n, t) for n, t in self.sig.items() if isinstance(t, hol.FunType)]
        name, ty = self.rng.choice(preds)
        term = hol.Const(name, ty)
        while isinstance(ty, hol.FunType):
            term = hol.App(term, self.term(ty.dom, max(depth - 1, 0), env))
            ty = ty.cod
        return term

    def _eq(self, depth, env):
        ty = self.rng.choice(BASE)
        return hol.Eq(self.term(ty, depth - 1, env), self.term(ty, depth - 1, env))


def term_depth(t) -> int:
    """Nesting depth, counting an application spine ``f(a, b)`` as one level."""
    if isinstance(t, hol.App):
        head, args = hol.spine(t)
        kids = ([head] if not isinstance(head, (hol.Var, hol.Const)) else []) + list(args)
    else:
        kids = _children(t)
    return 1 + max((term_depth(k) for k in kids), default=0)


def _children(t):
    if isinstance(t, hol.App):
        return [t.fn, t.arg]
    if isinstance(t, (hol.Lam, hol.Quant)):
        return [t.body]
    if isinstance(t, (hol.And, hol.Or)):
        return list(t.args)
    if isinstance(t, (hol.Implies, hol.Eq)):
        return [t.left, t.right]
    if isinstance(t, hol.Not):
        return [t.arg]
    return []


# --------------------------------------------------------------------------
# reference reduction: arbitrary redex choice, own substitution

_counter = itertools.count()


def _fv(t):
    if isinstance(t, hol.Var):
        return {t.name}
    if isinstance(t, (hol.Lam, hol.Quant)):
        return _fv(t.body) - {t.var}
    return set().union(set(), *(_fv(k) for k in _children(t)))


def _rebuild(t, kids):
    if isinstance(t, hol.App):
        return hol.App(*kids)
    if isinstance(t, hol.Lam):
        return hol.Lam(t.var, t.var_type, kids[0])
    if isinstance(t, hol.Quant):
        return hol.Quant(t.kind, t.var, t.var_type, kids[0])
    if isinstance(t, hol.And):
        return hol.And(tuple(kids))
    if isinstance(t, hol.Or):
        return hol.Or(tuple(kids))
    if isinstance(t, hol.Implies):
        return hol.Implies(*kids)
    if isinstance(t, hol.Eq):
        return hol.Eq(*kids)
    if isinstance(t, hol.Not):
        return hol.Not(kids[0])
    return t


def ref_subst(t, name, value):
    """Substitution that renames every binder it passes under (always safe)."""
    if isinstance(t, hol.Var):
        return value if t.name == name else t
    if isinstance(t, (hol.Lam, hol.Quant)):
        if t.var == name:
            return t
        fresh = f"_r{next(_counter)}"
        body = ref_subst(ref_subst(t.body, t.var, hol.Var(fresh, t.var_type)), name, value)
        if isinstance(t, hol.Lam):
            return hol.Lam(fresh, t.var_type, body)
        return hol.Quant(t.kind, fresh, t.var_type, body)
    kids = _children(t)
    return _rebuild(t, [ref_subst(k, name, value) for k in kids]) if kids else t


def _redex_paths(t, path=()):
    if isinstance(t, hol.App) and isinstance(t.fn, hol.Lam):
        yield path
    for i, k in enumerate(_children(t)):
        yield from _redex_paths(k, path + (i,))


def _contract_at(t, path):
    if not path:
        return ref_subst(t.fn.body, t.fn.var, t.arg)
    kids = list(_children(t))
    kids[path[0]] = _contract_at(kids[path[0]], path[1:])
    return _rebuild(t, kids)


def ref_normalize(t, rng: random.Random | None = None, innermost: bool = False, limit: int = 100000):
    """Reduce until normal, picking redexes at random or innermost-first."""
    for _ in range(limit):
        paths = list(_redex_paths(t))
        if not paths:
            return t
        if innermost:
            path = max(paths, key=len)
        else:
            path = rng.choice(paths)
        t = _contract_at(t, path)
    raise RuntimeError("reduction did not terminate")


def flat_nameless(t, bound=()):
    """De Bruijn form with nested conjunctions and disjunctions flattened."""
    if isinstance(t, hol.Var):
        return ("bv", bound.index(t.name)) if t.name in bound else ("fv", t.name)
    if isinstance(t, hol.Const):
        return ("c", t.name)
    if isinstance(t, hol.Lam):
        return ("lam", t.var_type, flat_nameless(t.body, (t.var,) + bound))
    if isinstance(t, hol.Quant):
        return (t.kind, t.var_type, flat_nameless(t.body, (t.var,) + bound))
    if isinstance(t, (hol.And, hol.Or)):
        tag = "and" if isinstance(t, hol.And) else "or"
        out = []
        for a in t.args:
            n = flat_nameless(a, bound)
            out.extend(n[1:] if n[0] == tag else [n])
        return (tag,) + tuple(out)
    return (type(t).__name__,) + tuple(flat_nameless(k, bound) for k in _children(t))


# --------------------------------------------------------------------------
# typed denotational semantics

def typed_eval(t, m: Model, env=None):
    """Denotation of a typed term in ``m``: quantifiers range over the
    extension of their type, functions denote Python callables."""
    env = env or {}
    if isinstance(t, hol.Var):
        return env[t.name]
    if isinstance(t, hol.Const):
        if isinstance(t.type, hol.BaseType):
            return m.constants[t.name]
        arity = 0
        ty = t.type
        while isinstance(ty, hol.FunType):
            arity += 1
            ty = ty.cod
        rel = m.relation(t.name, arity)

        def curry(args):
            if len(args) == arity:
                return tuple(args) in rel
            return lambda a: curry(args + [a])
        return curry([])
    if isinstance(t, hol.App):
        return typed_eval(t.fn, m, env)(typed_eval(t.arg, m, env))
    if isinstance(t, hol.Lam):
        return lambda a: typed_eval(t.body, m, {**env, t.var: a})
    if isinstance(t, hol.Quant):
        dom = m.extension(t.var_type.name)
        results = (typed_eval(t.body, m, {**env, t.var: d}) for d in dom)
        return all(results) if t.kind == "forall" else any(results)
    if isinstance(t, hol.And):
        return all(typed_eval(a, m, env) for a in t.args)
    if isinstance(t, hol.Or):
        return any(typed_eval(a, m, env) for a in t.args)
    if isinstance(t, hol.Implies):
        return (not typed_eval(t.left, m, env)) or typed_eval(t.right, m, env)
    if isinstance(t, hol.Not):
        return not typed_eval(t.arg, m, env)
    if isinstance(t, hol.Eq):
        return typed_eval(t.left, m, env) == typed_eval(t.right, m, env)
    raise TypeError(t)


def random_typed_model(rng: random.Random, sig, size: int) -> Model:
    """Random structure whose domain is partitioned by the four type predicates.

    Constants denote an element of their declared type when that type is
    inhabited; tiny domains cannot inhabit every type, and then any element
    is used (the translation leaves constants alone, so both readings agree).
    """
    domain = [f"d{i + 1}" for i in range(size)]
    types = {d: rng.choice(BASE).name for d in domain}
    relations = {(ty.name, 1): {(d,) for d in domain if types[d] == ty.name} for ty in BASE}
    constants = {}
    for name, ty in sig.items():
        arity = 0
        while isinstance(ty, hol.FunType):
            arity += 1
            ty = ty.cod
        if arity:
            relations[(name, arity)] = {t for t in itertools.product(domain, repeat=arity) if rng.random() < 0.35}
        else:
            typed = [d for d in domain if types[d] == ty.name]
            constants[name] = rng.choice(typed or domain)
    return Model(tuple(domain), constants, relations)


# --------------------------------------------------------------------------
# first-order formulas and a table-based evaluator

def random_model(rng: random.Random, preds: dict[str, int], consts: list[str], size: int) -> Model:
    domain = tuple(f"d{i + 1}" for i in range(size))
    relations = {(p, a): {t for t in itertools.product(domain, repeat=a) if rng.random() < 0.4}
                 for p, a in preds.items()}
    return Model(domain, {c: rng.choice(domain) for c in consts}, relations)


def random_formula(rng: random.Random, preds: dict[str, int], consts: list[str], qdepth: int,
                   size: int = 5, scope=()) -> fol.Formula:
    names = ("X", "Y", "Z")

    def term():
        pool = [fol.Var(v) for v in scope] + [fol.Const(c) for c in consts]
        return rng.choice(pool)

    choices = ["atom", "eq"] if size <= 1 else ["atom", "not", "and", "or", "imp", "quant", "quant"]
    if qdepth == 0 and "quant" in choices:
        choices = [c for c in choices if c != "quant"]
    kind = rng.choice(choices)
    if kind == "atom" or (kind == "eq" and not (scope or consts)):
        p = rng.choice(sorted(preds))
        return fol.Atom(p, tuple(term() for _ in range(preds[p])))
    if kind == "eq":
        return fol.Eq(term(), term())
    sub = lambda s: random_formula(rng, preds, consts, qdepth, s, scope)
    if kind == "not":
        return fol.Not(sub(size - 1))
    if kind == "and":
        return fol.And((sub(size // 2), sub(size // 2)))
    if kind == "or":
        return fol.Or((sub(size // 2), sub(size // 2)))
    if kind == "imp":
        return fol.Implies(sub(size // 2), sub(size // 2))
    v = rng.choice(names)
    body = random_formula(rng, preds, consts, qdepth - 1, size - 1, tuple(set(scope) | {v}))
    return fol.Quant(rng.choice(["all", "exists"]), v, body)


def close(rng: random.Random, f: fol.Formula) -> fol.Formula:
    for v in sorted(fol.free_variables(f)):
        f = fol.Quant(rng.choice(["all", "exists"]), v, f)
    return f


def _bound_names(f):
    if isinstance(f, fol.Quant):
        return {f.var} | _bound_names(f.body)
    if isinstance(f, (fol.And, fol.Or)):
        return set().union(*(_bound_names(a) for a in f.args))
    if isinstance(f, fol.Implies):
        return _bound_names(f.left) | _bound_names(f.right)
    if isinstance(f, fol.Not):
        return _bound_names(f.arg)
    return set()


def brute_force_eval(m: Model, f: fol.Formula) -> bool:
    """Truth of a closed formula via the full table of variable assignments.

    ``sat(g)`` is the set of total assignments (over every variable name in
    ``f``) satisfying ``g``; quantifiers are read off that table.
    """
    names = sorted(_bound_names(f))
    # with no variables the table holds the single empty assignment
    table = [dict(zip(names, values)) for values in itertools.product(m.domain, repeat=len(names))]
    key = lambda a: tuple(a[n] for n in names)
    everything = {key(a) for a in table}

    def val(t, a):
        return a[t.name] if isinstance(t, fol.Var) else m.constants[t.name]

    def sat(g) -> set:
        if isinstance(g, fol.Atom):
            rel = m.relation(g.pred, len(g.args))
            return {key(a) for a in table if tuple(val(x, a) for x in g.args) in rel}
        if isinstance(g, fol.Eq):
            return {key(a) for a in table if val(g.left, a) == val(g.right, a)}
        if isinstance(g, fol.Not):
            return everything - sat(g.arg)
        if isinstance(g, fol.And):
            return set.intersection(*(sat(x) for x in g.args))
        if isinstance(g, fol.Or):
            return set.union(*(sat(x) for x in g.args))
        if isinstance(g, fol.Implies):
            return (everything - sat(g.left)) | sat(g.right)
        inner = sat(g.body)
        i = names.index(g.var)
        out = set()
        for k in everything:
            variants = [k[:i] + (d,) + k[i + 1:] for d in m.domain]
            hits = [v in inner for v in variants]
            if (all(hits) if g.kind == "all" else any(hits)):
                out.add(k)
        return out

    # a closed formula holds under every assignment or under none
    return next(iter(everything)) in sat(f)


# --------------------------------------------------------------------------
# exhaustive model enumeration for tiny signatures

def all_models(preds: dict[str, int], consts: list[str], size: int):
    domain = tuple(f"d{i + 1}" for i in range(size))
    slots = [(p, t) for p, a in sorted(preds.items()) for t in itertools.product(domain, repeat=a)]
    for cvals in itertools.product(domain, repeat=len(consts)):
        constants = dict(zip(consts, cvals))
        for bits in itertools.product((False, True), repeat=len(slots)):
            relations = {(p, a): set() for p, a in preds.items()}
            for (p, t), b in zip(slots, bits):
                if b:
                    relations[(p, len(t))].add(t)
            yield Model(domain, constants, relations)


def has_model(formulas, size) -> bool:
    preds = fol.predicates(formulas)
    consts = fol.constants(formulas)
    # the checker itself is validated against brute_force_eval elsewhere
    return any(all(check(m, f) for f in formulas) for m in all_models(preds, consts, size))


# --------------------------------------------------------------------------
# perturbation by brute force

def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def merge(m: Model, blocks) -> tuple[Model, list[str]]:
    """Identify the members of each block with its earliest member."""
    pos = {d: i for i, d in enumerate(m.domain)}
    sub = {}
    reps = []
    for block in blocks:
        rep = min(block, key=pos.__getitem__)
        reps.append(rep)
        for d in block:
            sub[d] = rep
    f = lambda d: sub.get(d, d)
    domain = tuple(d for d in m.domain if f(d) == d)
    relations = {k: {tuple(f(x) for x in t) for t in ts} for k, ts in m.relations.items()}
    constants = {c: f(d) for c, d in m.constants.items()}
    return Model(domain, constants, relations), reps


def brute_force_orders(intermediate: Model, formulas):
    """Every merge of the time points followed by every total strict order
    of the merged points, filtered by the formulas."""
    points = intermediate.extension("time")
    out = []
    for blocks in set_partitions(points):
        merged, reps = merge(intermediate, blocks)
        for perm in itertools.permutations(reps):
            lt = {(perm[i], perm[j]) for i in range(len(perm)) for j in range(i + 1, len(perm))}
            rels = dict(merged.relations)
            rels[("lt", 2)] = lt
            cand = Model(merged.domain, merged.constants, rels)
            if all(check(cand, f) for f in formulas):
                out.append(cand)
    return out


def brute_force_lt(intermediate: Model, formulas, irreflexive_only: bool = False):
    """Every merge of the time points followed by every binary relation over
    the merged points as ``lt``, filtered by the formulas."""
    points = intermediate.extension("time")
    out = []
    for blocks in set_partitions(points):
        merged, reps = merge(intermediate, blocks)
        pairs = [(a, b) for a in reps for b in reps if not (irreflexive_only and a == b)]
        for bits in itertools.product((False, True), repeat=len(pairs)):
            rels = dict(merged.relations)
            rels[("lt", 2)] = {p for p, b in zip(pairs, bits) if b}
            cand = Model(merged.domain, merged.constants, rels)
            if all(check(cand, f) for f in formulas):
                out.append(cand)
    return out


def same_up_to_iso(xs, ys, iso) -> bool:
    def covered(a, b):
        return all(any(iso(x, y) for y in b) for x in a)
    return covered(xs, ys) and covered(ys, xs)
