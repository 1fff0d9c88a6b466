"""The default audit corpus: a spread of simple/non-simple, unital/non-unital,
idempotent/non-idempotent, exceptional/non-exceptional algebras over char 2
and odd primes, plus distinguished subspaces worth probing on each run."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebras import (
    Algebra,
    direct_sum,
    matrix_algebra,
    triangular_algebra,
    truncated_poly,
    zero_mult_algebra,
)
from .subspaces import Subspace, span


@dataclass(frozen=True)
class CorpusEntry:
    aid: str
    algebra: Algebra
    distinguished: dict = field(default_factory=dict)


def _swap_line_subspace(a: Algebra) -> Subspace:
    """span{1, E12 + E21} in a 2x2 matrix algebra (the symmetric-swap plane)."""
    return span(a, [a.element([1, 0, 0, 1]), a.element([0, 1, 1, 0])])


def default_corpus():
    m2f2 = matrix_algebra(2, 2, aid="m2_f2")
    entries = [
        CorpusEntry("m2_f2", m2f2, {"swap_plane": _swap_line_subspace(m2f2)}),
        CorpusEntry("m2_f3", matrix_algebra(2, 3, aid="m2_f3")),
        CorpusEntry("m2_f5", matrix_algebra(2, 5, aid="m2_f5")),
        CorpusEntry("m3_f2", matrix_algebra(3, 2, aid="m3_f2")),
        CorpusEntry("t2_f2", triangular_algebra(2, 2, aid="t2_f2")),
        CorpusEntry("t2_f3", triangular_algebra(2, 3, aid="t2_f3")),
        CorpusEntry("t3_f2", triangular_algebra(3, 2, aid="t3_f2")),
        CorpusEntry("trunc_f2_k2", truncated_poly(2, 2, aid="trunc_f2_k2")),
        CorpusEntry("trunc_f3_k2", truncated_poly(2, 3, aid="trunc_f3_k2")),
        CorpusEntry("trunc_f3_k3", truncated_poly(3, 3, aid="trunc_f3_k3")),
        CorpusEntry("trunc_f5_k2", truncated_poly(2, 5, aid="trunc_f5_k2")),
        CorpusEntry(
            "f2_plus_m2f2",
            direct_sum(truncated_poly(1, 2), matrix_algebra(2, 2), aid="f2_plus_m2f2"),
        ),
        CorpusEntry(
            "m2f3_plus_m2f3",
            direct_sum(matrix_algebra(2, 3), matrix_algebra(2, 3), aid="m2f3_plus_m2f3"),
        ),
        CorpusEntry("zero2_f3", zero_mult_algebra(2, 3, aid="zero2_f3")),
    ]
    return entries


def corpus_by_id():
    return {e.aid: e for e in default_corpus()}
