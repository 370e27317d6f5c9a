"""Exception hierarchy.

Every error carries the pipeline stage it belongs to so the CLI can map it
onto an exit status without inspecting messages.
"""


class PipelineError(Exception):
    stage = "pipeline"
    exit_code = 1


class SyntaxParseError(PipelineError):
    """Malformed surface syntax (terms, formulas, lexicon, model text)."""

    stage = "syntax"
    exit_code = 2


class LexError(PipelineError):
    stage = "parse"
    exit_code = 2


class UnknownWordError(LexError):
    def __init__(self, token: str):
        super().__init__(f"unknown word: {token!r}")
        self.token = token


class NoParseError(LexError):
    def __init__(self, position: int, message: str):
        super().__init__(f"no parse at token {position}: {message}")
        self.position = position


class HolTypeError(PipelineError):
    """Type error in a higher-order term; ``term`` is the offending subterm."""

    stage = "type"
    exit_code = 3

    def __init__(self, message: str, term=None):
        if term is not None:
            message = f"{message} in `{term}`"
        super().__init__(message)
        self.term = term


class TranslationError(PipelineError):
    stage = "type"
    exit_code = 3


class ConstructionError(PipelineError):
    stage = "type"
    exit_code = 3


class ModelFormatError(PipelineError):
    stage = "model"
    exit_code = 2


class EvaluationError(PipelineError):
    stage = "check"
    exit_code = 1


class UnsatisfiableError(PipelineError):
    stage = "build"
    exit_code = 4


class DegenerateModelError(PipelineError):
    stage = "perturb"
    exit_code = 4


class InconsistentInputError(PipelineError):
    """The initial model does not satisfy its own theory and goal."""

    stage = "perturb"
    exit_code = 4


class CapExceededError(PipelineError):
    stage = "perturb"
    exit_code = 5
