"""Temporal representations of Polish sentences and their finite models.

A sentence is parsed, given a higher-order meaning, translated to
first-order logic, and handed to a model builder; the minimal model is then
perturbed over every ordering of its time points.
"""

from .errors import PipelineError
from .model import Model, check, check_all, isomorphic, parse_model, print_model
from .pipeline import Pipeline, PipelineConfig

__version__ = "0.1.0"

__all__ = [
    "Model",
    "Pipeline",
    "PipelineConfig",
    "PipelineError",
    "check",
    "check_all",
    "isomorphic",
    "parse_model",
    "print_model",
]
