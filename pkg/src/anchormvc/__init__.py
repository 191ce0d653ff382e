"""Scalable multi-view clustering with tensor-coupled anchor graphs."""
import logging

from ._errors import InvalidInputError, InvalidParameterError, LoadError
from .datasets import MultiViewDataset, SynthSpec, generate_synth, load_dataset
from .estimator import MultiViewAnchorClustering, check_views
from .metrics import evaluate
from .solver import SolveResult, SolverConfig, solve

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "InvalidInputError", "InvalidParameterError", "LoadError",
    "MultiViewDataset", "SynthSpec", "generate_synth", "load_dataset",
    "MultiViewAnchorClustering", "check_views", "evaluate",
    "SolveResult", "SolverConfig", "solve",
]
