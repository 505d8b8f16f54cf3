"""Exact linear algebra over QQ and F_p for sparse integer matrices."""

from .field import DEFAULT_CONFIG, QQ, FieldSpec, LinalgConfig
from .rank import (
    EXACT_FP,
    EXACT_Q,
    MULTI_PRIME,
    CompositionNotZero,
    homology_dim,
    homology_with_certificate,
    rank,
    rank_with_certificate,
    weakest,
)
from .span import NotInSpan, SpanBasis, span_reduce
from .sparse import DimensionMismatch, SparseMatrix, hstack, kron, vstack

__all__ = [
    "DEFAULT_CONFIG",
    "EXACT_FP",
    "EXACT_Q",
    "MULTI_PRIME",
    "QQ",
    "CompositionNotZero",
    "DimensionMismatch",
    "FieldSpec",
    "LinalgConfig",
    "NotInSpan",
    "SpanBasis",
    "SparseMatrix",
    "homology_dim",
    "homology_with_certificate",
    "hstack",
    "kron",
    "rank",
    "rank_with_certificate",
    "span_reduce",
    "vstack",
    "weakest",
]
