"""Generators and parameter systems for invariants of 3x3 matrix tuples, with verification."""

from .errors import ParameterError, RewriteBudgetExceeded, SingularMatrixError, UsageError
from .fields import FieldSpec, get_field, parse_field
from .invariants import (
    GeneratorSet,
    InvariantExpr,
    ParamSet,
    TraceMonomial,
    build_generators,
    build_hsop,
    build_nullcone_set,
    count_msog,
    transcendence_degree,
)
from .report import RunConfig, VerificationReport
from .words import NilCombination, Word, canonicalize, enumerate_canonical, is_canonical, parse_word

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "get_field", "parse_field",
    "GeneratorSet", "InvariantExpr", "ParamSet", "TraceMonomial",
    "build_generators", "build_hsop", "build_nullcone_set", "count_msog", "transcendence_degree",
    "NilCombination", "Word", "canonicalize", "enumerate_canonical", "is_canonical", "parse_word",
    "RunConfig", "VerificationReport",
    "UsageError", "ParameterError", "SingularMatrixError", "RewriteBudgetExceeded",
]
