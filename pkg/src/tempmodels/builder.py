"""Domain-minimal finite model building.

For each domain size n = 1, 2, ... the axioms and the goal are grounded over
``{0..n-1}``, converted to clauses, and searched.  Constants are encoded by
"constant c denotes element i" variables constrained so that constants
occupy elements in order of first occurrence (the usual symmetry breaking
for interchangeable domain elements).

Search order: constant variables first, then relation atoms with relations
in signature order (first occurrence in axioms, then goal) and tuples in
lexicographic order, absent before present.
"""

from __future__ import annotations

import itertools
import logging
from typing import Sequence

from . import fol
from .model import Model
from .sat import CNF, solve

log = logging.getLogger(__name__)

TRUE = ("true",)
FALSE = ("false",)


def _and(parts):
    out = []
    for p in parts:
        if p is FALSE:
            return FALSE
        if p is TRUE:
            continue
        if isinstance(p, tuple) and p[0] == "and":
            out.extend(p[1])
        else:
            out.append(p)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else ("and", out)


def _or(parts):
    out = []
    for p in parts:
        if p is TRUE:
            return TRUE
        if p is FALSE:
            continue
        if isinstance(p, tuple) and p[0] == "or":
            out.extend(p[1])
        else:
            out.append(p)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else ("or", out)


class GroundProblem:
    """Axioms and goal grounded over a fixed domain size."""

    def __init__(self, formulas: Sequence[fol.Formula], size: int):
        self.size = size
        self.formulas = list(formulas)
        self.preds = fol.predicates(self.formulas)
        for name, arity in self.preds.items():
            if arity not in (1, 2):
                raise ValueError(f"model builder supports unary and binary predicates only ({name}/{arity})")
        self.consts = fol.constants(self.formulas)
        self.cnf = CNF()

        self.const_var: dict[tuple[str, int], int] = {}
        for c in self.consts:
            for i in range(size):
                self.const_var[(c, i)] = self.cnf.new_var()
        self.atom_var: dict[tuple[str, tuple[int, ...]], int] = {}
        for name, arity in self.preds.items():
            for args in itertools.product(range(size), repeat=arity):
                self.atom_var[(name, args)] = self.cnf.new_var()
        self.base_vars = self.cnf.nvars
        self.order = list(range(1, self.base_vars + 1))
        self.prefer_true = frozenset(self.const_var.values())

        self._constant_constraints()
        for f in self.formulas:
            self._assert(self._ground(f, {}, True))

    # constants -----------------------------------------------------------

    def _constant_constraints(self):
        n = self.size
        for k, c in enumerate(self.consts):
            lits = [self.const_var[(c, i)] for i in range(n)]
            self.cnf.add(lits)
            for a, b in itertools.combinations(lits, 2):
                self.cnf.add([-a, -b])
            for j in range(n):
                if j > k:
                    self.cnf.add([-self.const_var[(c, j)]])
                elif j > 0:
                    # element j may be used only once element j-1 is
                    earlier = [self.const_var[(self.consts[i], j - 1)] for i in range(k)]
                    self.cnf.add([-self.const_var[(c, j)]] + earlier)

    # grounding -----------------------------------------------------------

    def _ground(self, f, env, positive):
        """Ground ``f`` into a negation-free and/or tree of literals."""
        if isinstance(f, fol.Atom):
            return self._ground_atom(f, env, positive)
        if isinstance(f, fol.Eq):
            return self._ground_eq(f, env, positive)
        if isinstance(f, fol.Not):
            return self._ground(f.arg, env, not positive)
        if isinstance(f, fol.And):
            parts = [self._ground(a, env, positive) for a in f.args]
            return _and(parts) if positive else _or(parts)
        if isinstance(f, fol.Or):
            parts = [self._ground(a, env, positive) for a in f.args]
            return _or(parts) if positive else _and(parts)
        if isinstance(f, fol.Implies):
            left = self._ground(f.left, env, not positive)
            right = self._ground(f.right, env, positive)
            return _or([left, right]) if positive else _and([left, right])
        if isinstance(f, fol.Quant):
            parts = []
            for d in range(self.size):
                parts.append(self._ground(f.body, {**env, f.var: d}, positive))
            conjunctive = (f.kind == "all") == positive
            return _and(parts) if conjunctive else _or(parts)
        raise TypeError(f"not a formula: {f!r}")

    def _resolve(self, t, env):
        if isinstance(t, fol.Var):
            if t.name not in env:
                raise ValueError(f"free variable {t.name} in builder input")
            return env[t.name]
        return t.name

    def _with_constants(self, terms, env, positive, leaf):
        """Expand constant arguments over the elements they may denote."""
        vals = [self._resolve(t, env) for t in terms]
        names = sorted({v for v in vals if isinstance(v, str)})
        if not names:
            return leaf(vals, positive)
        parts = []
        for choice in itertools.product(range(self.size), repeat=len(names)):
            binding = dict(zip(names, choice))
            concrete = [binding[v] if isinstance(v, str) else v for v in vals]
            guards = [self.const_var[(c, binding[c])] for c in names]
            inner = leaf(concrete, positive)
            if positive:
                parts.append(_and(guards + [inner]))
            else:
                parts.append(_or([-g for g in guards] + [inner]))
        return _or(parts) if positive else _and(parts)

    def _ground_atom(self, f, env, positive):
        def leaf(args, pos):
            v = self.atom_var[(f.pred, tuple(args))]
            return v if pos else -v
        return self._with_constants(f.args, env, positive, leaf)

    def _ground_eq(self, f, env, positive):
        def leaf(args, pos):
            return TRUE if (args[0] == args[1]) == pos else FALSE
        return self._with_constants((f.left, f.right), env, positive, leaf)

    # clause conversion (one-directional Tseitin) ----------------------------

    def _literal(self, node) -> int:
        if isinstance(node, int):
            return node
        aux = self.cnf.new_var()
        if node[0] == "and":
            for child in node[1]:
                self.cnf.add([-aux, self._literal(child)])
        else:
            self.cnf.add([-aux] + [self._literal(child) for child in node[1]])
        return aux

    def _assert(self, node):
        if node is TRUE:
            return
        if node is FALSE:
            self.cnf.add([])
        elif isinstance(node, int):
            self.cnf.add([node])
        elif node[0] == "and":
            for child in node[1]:
                self._assert(child)
        else:
            self.cnf.add([self._literal(child) for child in node[1]])

    # models --------------------------------------------------------------

    def solve(self, extra=()) -> dict[int, bool] | None:
        return solve(self.cnf, self.order, self.prefer_true, extra)

    def positive_atoms(self, assignment) -> list[int]:
        return [v for v in self.atom_var.values() if assignment[v]]

    def constant_lits(self, assignment) -> list[int]:
        return [v for v in self.const_var.values() if assignment[v]]

    def to_model(self, assignment) -> Model:
        names = [f"d{i + 1}" for i in range(self.size)]
        constants = {c: names[i] for (c, i), v in self.const_var.items() if assignment[v]}
        relations = {(name, arity): set() for name, arity in self.preds.items()}
        for (name, args), v in self.atom_var.items():
            if assignment[v]:
                relations[(name, len(args))].add(tuple(names[i] for i in args))
        return Model(tuple(names), constants, relations)

    def at_most(self, pred: str, k: int) -> "GroundProblem":
        lits = [v for (name, _), v in self.atom_var.items() if name == pred]
        self.cnf.at_most(lits, k)
        return self


def _check_size(max_size):
    if max_size < 1:
        raise ValueError("max_size must be at least 1")


def build_minimal(axioms: Sequence[fol.Formula], goal: fol.Formula, max_size: int = 8,
                  minimize: str | None = "instantaneous") -> Model | None:
    """Smallest-domain model of ``axioms`` and ``goal``, or None up to ``max_size``.

    Among models of the smallest size, one with the fewest ``minimize`` facts
    is returned; remaining ties go to the first model in search order.
    """
    _check_size(max_size)
    formulas = list(axioms) + [goal]
    for n in range(1, max_size + 1):
        problem = GroundProblem(formulas, n)
        assignment = problem.solve()
        if assignment is None:
            log.debug("no model of size %d", n)
            continue
        if minimize and minimize in problem.preds:
            best = sum(1 for (name, _), v in problem.atom_var.items() if name == minimize and assignment[v])
            for k in range(best):
                tighter = GroundProblem(formulas, n).at_most(minimize, k).solve()
                if tighter is not None:
                    assignment = tighter
                    break
        return problem.to_model(assignment)
    return None


def build_all_minimal(axioms: Sequence[fol.Formula], goal: fol.Formula, max_size: int = 8) -> list[Model]:
    """Every subset-minimal model at the smallest satisfiable size, up to isomorphism.

    Models are compared by their constant denotations and positive facts; a
    model is kept only when no model with the same constants has strictly
    fewer facts.
    """
    from .model import isomorphic

    _check_size(max_size)
    formulas = list(axioms) + [goal]
    for n in range(1, max_size + 1):
        problem = GroundProblem(formulas, n)
        blocking: list[list[int]] = []
        found: list[Model] = []
        while True:
            assignment = problem.solve(blocking)
            if assignment is None:
                break
            # the first model in search order is minimal among its non-blocked
            # supersets; block it and everything above it
            blocking.append([-v for v in problem.constant_lits(assignment) + problem.positive_atoms(assignment)])
            m = problem.to_model(assignment)
            if not any(isomorphic(m, other) for other in found):
                found.append(m)
        if found:
            return found
    return []
