"""End-to-end wiring: sentence -> tree -> term -> formula -> model -> variants."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import builder, fol, grammar, hol, perturb, semantics, theory
from .errors import UnsatisfiableError
from .model import Model


@dataclass(frozen=True)
class PipelineConfig:
    lexicon_path: str | None = None
    theory: theory.TheoryConfig = field(default_factory=theory.TheoryConfig)
    max_size: int = 8
    cap_timepoints: int = perturb.DEFAULT_CAP
    output_format: str = "model"  # model | summary


class Pipeline:
    def __init__(self, config: PipelineConfig | None = None):
        self.config = config or PipelineConfig()

    @cached_property
    def lexicon(self) -> semantics.Lexicon:
        return semantics.load_lexicon(self.config.lexicon_path)

    @cached_property
    def axioms(self) -> list[theory.Axiom]:
        return theory.axioms(self.config.theory)

    def parse(self, sentence: str) -> grammar.ParseTree:
        return grammar.parse(grammar.tokenize(sentence), self.lexicon)

    def represent(self, sentence: str) -> hol.Term:
        return semantics.construct(self.parse(sentence), self.lexicon)

    def translate(self, sentence: str) -> fol.Formula:
        return fol.translate(self.represent(sentence), self.lexicon.signature)

    def background(self, sentence: str) -> list[fol.Formula]:
        """Theory axioms plus the verb-class facts of the sentence's lemmas."""
        facts = semantics.class_facts(self.parse(sentence), self.lexicon)
        return [ax.formula for ax in self.axioms] + facts

    def build(self, sentence: str) -> Model:
        return self.build_goal(self.translate(sentence), self.background(sentence))

    def build_goal(self, goal: fol.Formula, background: list[fol.Formula] | None = None) -> Model:
        if background is None:
            background = [ax.formula for ax in self.axioms]
        m = builder.build_minimal(background, goal, self.config.max_size)
        if m is None:
            raise UnsatisfiableError(f"no model with at most {self.config.max_size} elements")
        return m

    def build_all(self, goal: fol.Formula, background: list[fol.Formula]) -> list[Model]:
        models = builder.build_all_minimal(background, goal, self.config.max_size)
        if not models:
            raise UnsatisfiableError(f"no model with at most {self.config.max_size} elements")
        return models

    def perturb(self, m0: Model, goal: fol.Formula) -> list[Model]:
        return perturb.perturb(m0, self.axioms, goal, self.config.cap_timepoints)

    def run(self, sentence: str) -> list[Model]:
        goal = self.translate(sentence)
        m0 = self.build_goal(goal, self.background(sentence))
        return self.perturb(m0, goal)


def chronology(m: Model) -> str:
    """Time points of ``m`` in ``lt`` order, e.g. ``d5 < d4 < d6``."""
    times = m.extension("time")
    lt = m.relation("lt", 2)
    ordered = sorted(times, key=lambda t: sum(1 for s in times if (s, t) in lt))
    return " < ".join(ordered)


def summary(models: list[Model]) -> str:
    lines = []
    for i, m in enumerate(models, 1):
        now = m.constants.get("now", "-")
        lines.append(f"model {i}: {m.size} elements, now={now}, time: {chronology(m)}")
    return "\n".join(lines) + ("\n" if lines else "")
