"""Numerical verification of a generalized Holder inequality in weak Morrey spaces."""

__version__ = "0.1.0"

from .bounds import (
    ExponentPair,
    ExponentSystem,
    WeightedMeanInput,
    bound_comparison,
    bound_new,
    harmonic_conjugate,
    weighted_am_gm,
)
from .errors import (
    ConstraintViolationError,
    DegenerateFactorError,
    DegenerateFamilyError,
    InconsistencyError,
    InvalidExponentError,
    InvalidFunctionError,
    NoClosedFormError,
    NotInSpaceError,
    ParseError,
    UnsupportedFunctionError,
    WeakMorreyError,
)
from .functions import (
    BallIndicator,
    DistributionQuery,
    Product,
    RadialPower,
    RadialStep,
    dimension,
    distribution,
    distribution_mc,
    evaluate,
    parse_function,
    reduce,
    to_spec,
)
from .geometry import Ball, ball_measure, ball_overlap_measure, unit_ball_volume

__all__ = [name for name in dir() if not name.startswith("_")]
