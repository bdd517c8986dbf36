"""Exact upper and lower variance under finitely many probability measures."""

from .errors import (
    DuplicateLabel,
    EmptyInput,
    GroupTooSmall,
    IndexOutOfRange,
    InvariantViolation,
    KTooLargeForGrid,
    NegativeVariance,
    NonFiniteValue,
    ParseError,
    UvarError,
    ValidationError,
)
from .estimate import SampleTable, estimate_moments
from .exact import Pair, Single, VarianceReport, pair_candidate, upper_variance
from .model import (
    MeanInterval,
    MixtureWeights,
    MomentEntry,
    MomentSet,
    affine_transform,
    build_moment_set,
    mean_interval,
    moment_set_from_arrays,
)
from .oracle import OracleConfig, minimax_oracle, simplex_grid
from .qp import QpInstance, QpSolution, solve

__all__ = [
    "DuplicateLabel", "EmptyInput", "GroupTooSmall", "IndexOutOfRange", "InvariantViolation",
    "KTooLargeForGrid", "NegativeVariance", "NonFiniteValue", "ParseError", "UvarError",
    "ValidationError", "SampleTable", "estimate_moments", "Pair", "Single", "VarianceReport",
    "pair_candidate", "upper_variance", "MeanInterval", "MixtureWeights", "MomentEntry",
    "MomentSet", "affine_transform", "build_moment_set", "mean_interval",
    "moment_set_from_arrays", "OracleConfig", "minimax_oracle", "simplex_grid", "QpInstance",
    "QpSolution", "solve",
]
