"""Temporal perturbation of a minimal model.

The non-temporal part of the initial model (its core) is kept fixed.  Every
significant moment gets its own point, and each weak order of those points
(a succession) yields one candidate model.  Candidates that satisfy the
theory and the goal are kept, up to isomorphism.
"""

from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import fol
from .errors import CapExceededError, DegenerateModelError, InconsistentInputError, PipelineError
from .model import Model, check_all, isomorphic, print_model, rename
from .theory import Axiom

TEMPORAL_RELATIONS = ("inception", "induration", "conc")
DEFAULT_CAP = 6


@dataclass(frozen=True)
class Succession:
    """A weak order: earlier blocks strictly precede later ones."""

    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        seen = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty block in succession")
            if seen & set(block):
                raise ValueError("blocks of a succession must be disjoint")
            seen |= set(block)

    @property
    def points(self) -> set[str]:
        return {p for block in self.blocks for p in block}

    def __str__(self):
        return " < ".join("=".join(block) for block in self.blocks)


def _renumbered_core_ids(m0: Model) -> dict[str, str]:
    times = set(m0.extension("time"))
    kept = [d for d in m0.domain if d not in times]
    return {old: f"d{i + 1}" for i, old in enumerate(kept)}


def extract_core(m0: Model) -> Model:
    """Drop the time points, ``now`` and every tuple that mentions a time point.

    Relations that lose all their tuples this way disappear; relations that
    were already empty stay.  Remaining elements are renumbered d1, d2, ...
    in their original order.
    """
    ids = _renumbered_core_ids(m0)
    constants = {c: ids[d] for c, d in m0.constants.items() if c != "now" and d in ids}
    relations = {}
    for key, tuples in m0.relations.items():
        kept = {tuple(ids[x] for x in t) for t in tuples if all(x in ids for x in t)}
        if kept or not tuples:
            relations[key] = kept
    return Model(tuple(ids.values()), constants, relations)


def extend_with_times(core: Model, m0: Model) -> Model:
    """Give ``now`` and every significant moment of each event its own point."""
    if not core.domain:
        raise DegenerateModelError("core model is empty: the initial model has no non-temporal elements")
    back = {new: old for old, new in _renumbered_core_ids(m0).items()}
    domain = list(core.domain)
    used = set(domain)
    counter = itertools.count(len(domain) + 1)

    def fresh():
        while True:
            name = f"d{next(counter)}"
            if name not in used:
                used.add(name)
                domain.append(name)
                return name

    added = {rel: set() for rel in ("time",) + TEMPORAL_RELATIONS}
    now = fresh()
    added["time"].add((now,))
    instantaneous = set(core.extension("instantaneous"))
    for e in core.extension("event"):
        if e in instantaneous:
            p = fresh()
            added["time"].add((p,))
            added["inception"].add((e, p))
            added["conc"].add((e, p))
            continue
        original = back[e]
        for rel in TEMPORAL_RELATIONS:
            if any(t[0] == original for t in m0.relation(rel, 2)):
                p = fresh()
                added["time"].add((p,))
                added[rel].add((e, p))

    relations = dict(core.relations)
    for rel, tuples in added.items():
        key = (rel, 1 if rel == "time" else 2)
        if tuples or key in relations:
            relations[key] = set(relations.get(key, ())) | tuples
    return Model(tuple(domain), {**core.constants, "now": now}, relations)


def enumerate_successions(points: Iterable[str]) -> list[Succession]:
    """All weak orders over ``points``, by number of blocks then lexicographically."""
    points = list(points)
    if not points:
        raise ValueError("cannot order an empty set of points")
    n = len(points)
    found = []
    for k in range(1, n + 1):
        for ranks in itertools.product(range(k), repeat=n):
            if len(set(ranks)) != k:
                continue
            blocks = tuple(tuple(i for i in range(n) if ranks[i] == r) for r in range(k))
            found.append(blocks)
    found.sort(key=lambda blocks: (len(blocks), blocks))
    return [Succession(tuple(tuple(points[i] for i in block) for block in blocks)) for blocks in found]


def ordered_bell(n: int) -> int:
    """Number of weak orders on n points (recurrence over the first block's size)."""
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]


def simplify(s: Succession, order: Sequence[str] | None = None) -> tuple[list[str], dict[str, str]]:
    """Collapse each block onto its first member (in ``order``, default the block's own order).

    Returns the representatives in chronological order and the substitution
    for the non-representatives; points absent from it map to themselves.
    """
    rank = {p: i for i, p in enumerate(order)} if order is not None else None
    reps, sub = [], {}
    for block in s.blocks:
        members = sorted(block, key=rank.__getitem__) if rank else list(block)
        rep = members[0]
        reps.append(rep)
        for p in members[1:]:
            sub[p] = rep
    return reps, sub


def apply_succession(intermediate: Model, s: Succession) -> Model:
    points = intermediate.extension("time")
    if set(points) != s.points:
        raise PipelineError(f"succession {s} does not range over the time points {points}")
    reps, sub = simplify(s, intermediate.domain)
    m = rename(intermediate, sub)
    relations = dict(m.relations)
    relations[("lt", 2)] = {(reps[i], reps[j]) for i in range(len(reps)) for j in range(i + 1, len(reps))}
    return Model(m.domain, m.constants, relations)


def candidates(m0: Model, cap: int = DEFAULT_CAP) -> Iterator[tuple[Succession, Model]]:
    """Every (succession, candidate model) pair, before filtering."""
    intermediate = extend_with_times(extract_core(m0), m0)
    points = intermediate.extension("time")
    if len(points) > cap:
        raise CapExceededError(
            f"{len(points)} time points give {ordered_bell(len(points))} successions; cap is {cap} points")
    for s in enumerate_successions(points):
        yield s, apply_succession(intermediate, s)


def perturb(m0: Model, axioms: Sequence, goal: fol.Formula, cap: int = DEFAULT_CAP) -> list[Model]:
    """All non-isomorphic temporal variants of ``m0`` satisfying ``axioms`` and ``goal``."""
    required = list(axioms) + [Axiom("goal", "goal", goal)]
    status = check_all(m0, required)
    if not status:
        raise InconsistentInputError(f"initial model fails {status.failed}")
    kept: list[Model] = []
    for _, cand in candidates(m0, cap):
        if check_all(cand, required) and not any(isomorphic(cand, k) for k in kept):
            kept.append(cand)
    kept.sort(key=lambda m: (m.size, print_model(m)))
    return kept
