"""Propositional search for the model builder.

DPLL with two-watched-literal unit propagation, a static decision order and
chronological backtracking.  With a fixed order and per-variable preferred
polarity the first model found is the lexicographically least one under
that order, which is what makes the builder's output reproducible.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class CNF:
    """Clause store with variable allocation."""

    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.unsat = False

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def add(self, clause: Iterable[int]):
        lits = []
        seen = set()
        for lit in clause:
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                lits.append(lit)
        if not lits:
            self.unsat = True
        self.clauses.append(lits)

    def at_most(self, lits: Sequence[int], k: int):
        """Sequential-counter encoding of ``sum(lits) <= k``."""
        n = len(lits)
        if k >= n:
            return
        if k == 0:
            for lit in lits:
                self.add([-lit])
            return
        # s[i][j]: at least j+1 of lits[0..i] are true
        s = [[self.new_var() for _ in range(k)] for _ in range(n)]
        for i, x in enumerate(lits):
            self.add([-x, s[i][0]])
            if i > 0:
                for j in range(k):
                    self.add([-s[i - 1][j], s[i][j]])
                for j in range(1, k):
                    self.add([-x, -s[i - 1][j - 1], s[i][j]])
                self.add([-x, -s[i - 1][k - 1]])


def solve(cnf: CNF, order: Sequence[int], prefer_true: set[int] | frozenset[int] = frozenset(),
          extra: Iterable[Sequence[int]] = ()) -> dict[int, bool] | None:
    """Return the first satisfying assignment in ``order`` or None.

    Variables missing from ``order`` are decided afterwards in index order.
    Variables are tried false first unless listed in ``prefer_true``.
    """
    if cnf.unsat:
        return None
    n = cnf.nvars
    clauses = [list(c) for c in cnf.clauses]
    for c in extra:
        if not c:
            return None
        clauses.append(list(dict.fromkeys(c)))

    seen = set(order)
    full_order = list(order) + [v for v in range(1, n + 1) if v not in seen]

    val = [0] * (n + 1)
    watches: list[list[int]] = [[] for _ in range(2 * n + 2)]

    def widx(lit):
        return 2 * lit if lit > 0 else -2 * lit + 1

    trail: list[int] = []
    units = []
    for ci, c in enumerate(clauses):
        if len(c) == 1:
            units.append(c[0])
        else:
            watches[widx(c[0])].append(ci)
            watches[widx(c[1])].append(ci)

    def value(lit):
        v = val[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def assign(lit):
        val[lit if lit > 0 else -lit] = 1 if lit > 0 else -1
        trail.append(lit)

    qhead = 0

    def propagate():
        nonlocal qhead
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            ws = watches[widx(false_lit)]
            i = 0
            while i < len(ws):
                ci = ws[i]
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if value(first) == 1:
                    i += 1
                    continue
                for k in range(2, len(c)):
                    if value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches[widx(c[1])].append(ci)
                        ws[i] = ws[-1]
                        ws.pop()
                        break
                else:
                    fv = value(first)
                    if fv == -1:
                        return False
                    if fv == 0:
                        assign(first)
                    i += 1
        return True

    for lit in units:
        v = value(lit)
        if v == -1:
            return None
        if v == 0:
            assign(lit)
    if not propagate():
        return None

    # decision stack: (trail length before decision, order position, literal, flipped)
    stack: list[tuple[int, int, int, bool]] = []
    pos = 0
    while True:
        while pos < len(full_order) and val[full_order[pos]] != 0:
            pos += 1
        if pos == len(full_order):
            return {v: val[v] == 1 for v in range(1, n + 1)}
        var = full_order[pos]
        lit = var if var in prefer_true else -var
        stack.append((len(trail), pos, lit, False))
        assign(lit)
        while not propagate():
            while stack and stack[-1][3]:
                stack.pop()
            if not stack:
                return None
            mark, p, lit, _ = stack.pop()
            for undone in trail[mark:]:
                val[abs(undone)] = 0
            del trail[mark:]
            qhead = mark
            pos = p
            stack.append((mark, p, -lit, True))
            assign(-lit)
