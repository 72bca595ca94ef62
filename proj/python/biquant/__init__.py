from ._biquant import (
    MissingWeight,
    ParseError,
    StructuralError,
    exact_weight,
    family_counts,
    graph_count,
    numeric_weight,
    star,
    validate,
    verify,
)

__all__ = [
    "MissingWeight",
    "ParseError",
    "StructuralError",
    "exact_weight",
    "family_counts",
    "graph_count",
    "numeric_weight",
    "star",
    "validate",
    "verify",
]
