"""Faithful isometric lower-triangular realizations of metric solvable Lie algebras.

The heavy lifting lives in the compiled extension ``solvembed._core``; this
package re-exports its public surface.
"""

from ._core import (
    MetricLieAlgebra,
    SolvableSplit,
    SolvembedError,
    algebra_from_json,
    algebra_to_json,
    catalog_names,
    einstein_check,
    embed,
    embedding_to_json,
    example,
    random_two_step,
    rank_one_extension,
    ricci,
    soliton_data,
    soliton_extension,
    two_step_canonical_derivation,
    validate_algebra,
    validate_split,
    verify_embedding,
)

__version__ = "0.1.0"

__all__ = [
    "MetricLieAlgebra",
    "SolvableSplit",
    "SolvembedError",
    "algebra_from_json",
    "algebra_to_json",
    "catalog_names",
    "einstein_check",
    "embed",
    "embedding_to_json",
    "example",
    "random_two_step",
    "rank_one_extension",
    "ricci",
    "soliton_data",
    "soliton_extension",
    "two_step_canonical_derivation",
    "validate_algebra",
    "validate_split",
    "verify_embedding",
]
