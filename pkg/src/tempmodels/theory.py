"""Named first-order theory of time and events.

Axioms marked ``completed`` are reconstructions (obvious completions of a
printed family); the rest are transcribed as printed, with ``eq(A,B)``
rendered as built-in equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import fol
from .errors import PipelineError

GROUPS = ("type_partition", "typing", "time_structure", "time_event", "instantaneous", "culmination")
REQUIRED_GROUPS = frozenset({"type_partition", "typing"})


@dataclass(frozen=True)
class Axiom:
    name: str
    group: str
    formula: fol.Formula
    completed: bool = False

    def __str__(self):
        return fol.format_axiom(self.name, self.formula)


# (name, group, completed, formula text)
_CATALOG = [
    ("not_event_kind", "type_partition", True, "all A. ~(event(A) & kind(A))"),
    ("not_event_time", "type_partition", True, "all A. ~(event(A) & time(A))"),
    ("not_event_entity", "type_partition", False, "all A. ~(event(A) & entity(A))"),
    ("not_kind_time", "type_partition", True, "all A. ~(kind(A) & time(A))"),
    ("not_kind_entity", "type_partition", True, "all A. ~(kind(A) & entity(A))"),
    ("not_entity_time", "type_partition", False, "all A. ~(entity(A) & time(A))"),
    ("type_cover", "type_partition", True, "all A. (event(A) | kind(A) | time(A) | entity(A))"),

    ("now_type", "typing", False, "time(now)"),
    ("lt_type", "typing", False, "all A. all B. (lt(A,B) -> time(A) & time(B))"),
    ("agent_type", "typing", False, "all A. all B. (agent(A,B) -> event(A) & entity(B))"),
    ("patient_type", "typing", True, "all A. all B. (patient(A,B) -> event(A) & entity(B))"),
    ("conc_type", "typing", False, "all A. all B. (conc(A,B) -> event(A) & time(B))"),
    ("inception_type", "typing", False, "all A. all B. (inception(A,B) -> event(A) & time(B))"),
    ("induration_type", "typing", True, "all A. all B. (induration(A,B) -> event(A) & time(B))"),
    ("ek_type", "typing", False, "all A. all B. (ek(A,B) -> event(A) & kind(B))"),
    ("culm_type", "typing", True, "all A. all B. (culm(A,B) -> event(A) & event(B))"),
    ("instantaneous_type", "typing", True, "all A. (instantaneous(A) -> event(A))"),
    ("culminated_type", "typing", True, "all A. (culminated(A) -> event(A))"),

    ("lt_irreflexive", "time_structure", False, "all A. ~lt(A,A)"),
    ("lt_transitive", "time_structure", False, "all A. all B. all C. (lt(A,B) & lt(B,C) -> lt(A,C))"),
    ("lt_total", "time_structure", False, "all A. all B. (time(A) & time(B) -> lt(A,B) | A = B | lt(B,A))"),

    ("agent_unique", "time_event", False, "all A. all B. all C. (agent(A,B) & agent(A,C) -> B = C)"),
    ("event_has_inception", "time_event", False, "all A. (event(A) -> (exists B. inception(A,B)))"),
    ("inception_unique", "time_event", False, "all A. all B. all C. (inception(A,B) & inception(A,C) -> B = C)"),
    ("event_has_conc", "time_event", False, "all A. (event(A) -> (exists B. conc(A,B)))"),
    ("conc_unique", "time_event", False, "all A. all B. all C. (conc(A,B) & conc(A,C) -> B = C)"),
    ("inception_not_after_conc", "time_event", False,
     "all A. all B. all C. (inception(A,B) & conc(A,C) -> ~lt(C,B))"),
    ("duration_before_conc", "time_event", False,
     "all A. all B. all C. (induration(A,B) & conc(A,C) -> lt(B,C))"),
    ("duration_after_inception", "time_event", True,
     "all A. all B. all C. (induration(A,B) & inception(A,C) -> lt(C,B))"),
    ("not_inception_and_induration", "time_event", False, "all A. all B. ~(inception(A,B) & induration(A,B))"),
    ("not_induration_and_conc", "time_event", False, "all A. all B. ~(induration(A,B) & conc(A,B))"),

    ("instantaneous_definition_1", "instantaneous", False,
     "all A. (instantaneous(A) -> (exists B. inception(A,B) & conc(A,B)))"),
    ("instantaneous_definition_2", "instantaneous", False,
     "all A. all B. (event(A) -> (inception(A,B) & conc(A,B) -> instantaneous(A)))"),

    ("culm_unique", "culmination", False, "all A. all B. all C. (culm(A,B) & culm(A,C) -> B = C)"),
    ("culm_injective", "culmination", False, "all A. all B. all C. (culm(A,C) & culm(B,C) -> A = B)"),
    ("culm_no_fixpoint", "culmination", False, "all A. ~culm(A,A)"),
    ("culm_antisymmetric", "culmination", False, "all A. all B. (culm(A,B) -> ~culm(B,A))"),
    ("culm_preserves_agent", "culmination", False,
     "all A. all B. all C. (culm(A,B) & agent(A,C) -> agent(B,C))"),
    ("culm_preserves_patient", "culmination", False,
     "all A. all B. all C. (culm(A,B) & patient(A,C) -> patient(B,C))"),
    ("culm_preserves_kind", "culmination", False, "all A. all B. all C. (culm(A,B) & ek(A,C) -> ek(B,C))"),
    ("culm_inception", "culmination", False,
     "all A. all B. all C. (culm(A,B) & conc(A,C) -> inception(B,C))"),
    ("culm_imp_instantaneous", "culmination", False, "all A. all B. (culm(A,B) -> instantaneous(B))"),
    ("culminated_definition", "culmination", False,
     "all A. (culminated(A) -> (exists B. event(B) & culm(A,B)))"),
    ("culminated_imp_not_instantaneous", "culmination", False,
     "all A. (culminated(A) -> ~instantaneous(A))"),
]

CATALOG: tuple[Axiom, ...] = tuple(
    Axiom(name, group, fol.parse_formula(text), completed) for name, group, completed, text in _CATALOG
)


@dataclass(frozen=True)
class TheoryConfig:
    groups: frozenset[str] = frozenset(GROUPS)
    extra_files: tuple[str, ...] = ()

    def __post_init__(self):
        unknown = set(self.groups) - set(GROUPS)
        if unknown:
            raise ValueError(f"unknown axiom groups: {sorted(unknown)}")
        object.__setattr__(self, "groups", frozenset(self.groups) | REQUIRED_GROUPS)

    def without(self, *groups: str) -> "TheoryConfig":
        return TheoryConfig(self.groups - set(groups), self.extra_files)


def axioms(config: TheoryConfig | None = None) -> list[Axiom]:
    config = config or TheoryConfig()
    selected = [ax for ax in CATALOG if ax.group in config.groups]
    names = {ax.name for ax in selected}
    for path in config.extra_files:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise PipelineError(f"cannot read axiom file {path}: {exc}") from None
        stem = Path(path).stem
        for i, (name, formula) in enumerate(fol.parse_formula_file(text), 1):
            name = name or f"{stem}_{i}"
            if name in names:
                raise PipelineError(f"duplicate axiom name {name!r} in {path}")
            if fol.free_variables(formula):
                raise PipelineError(f"axiom {name} in {path} is not closed")
            names.add(name)
            selected.append(Axiom(name, "extra", formula))
    return selected


def formulas(config: TheoryConfig | None = None) -> list[fol.Formula]:
    return [ax.formula for ax in axioms(config)]


def dump(axiom_list: list[Axiom]) -> str:
    return "".join(f"{ax}\n" for ax in axiom_list)
